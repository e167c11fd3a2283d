#include "hkm/datagen.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hkm {

Rng derive_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (keys.size() + 1));
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master_seed);
    for (auto key : keys) push(key);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

void MixtureConfig::validate() const {
    if (k < 2) throw ContractViolation("k: must be >= 2");
    if (d < 1) throw ContractViolation("d: must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ContractViolation("sigma: must be a positive finite number");
    if (!(centroid_radius > 0.0) || !std::isfinite(centroid_radius)) {
        throw ContractViolation("centroid_radius: must be a positive finite number");
    }
    if (cluster_sizes.empty()) {
        if (points_per_cluster < 1) throw ContractViolation("points_per_cluster: must be >= 1");
    } else {
        if (cluster_sizes.size() != k) throw ContractViolation("cluster_sizes: must list exactly k sizes");
        for (auto n : cluster_sizes) {
            if (n < 1) throw ContractViolation("cluster_sizes: every size must be >= 1");
        }
    }
}

std::size_t MixtureConfig::size_of(std::size_t cluster) const {
    return cluster_sizes.empty() ? points_per_cluster : cluster_sizes.at(cluster);
}

std::size_t MixtureConfig::inlier_total() const {
    if (cluster_sizes.empty()) return k * points_per_cluster;
    return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
}

void OutlierConfig::validate(std::size_t d) const {
    if (!center.empty() && center.size() != d) {
        throw ContractViolation("center: dimension " + std::to_string(center.size()) +
                                " does not match d=" + std::to_string(d));
    }
    for (double c : center) {
        if (!std::isfinite(c)) throw ContractViolation("center: coordinates must be finite");
    }
    if (!(sigma_out > 0.0) || !std::isfinite(sigma_out)) {
        throw ContractViolation("sigma_out: must be a positive finite number");
    }
}

std::size_t Dataset::outlier_count() const {
    std::size_t n = 0;
    for (int z : truth) n += (z == kOutlier);
    return n;
}

Vector sample_sphere_surface(std::size_t d, double radius, Rng& rng) {
    if (d == 0) throw ContractViolation("sample_sphere_surface: d must be >= 1");
    if (!(radius > 0.0)) throw ContractViolation("sample_sphere_surface: radius must be > 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    double norm = 0.0;
    do {
        for (auto& x : v) x = gauss(rng);
        norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    } while (norm == 0.0);
    for (auto& x : v) x = x / norm * radius;
    return v;
}

std::vector<Vector> generate_centroids(std::size_t k, std::size_t d, double radius, Rng& rng) {
    if (k < 2) throw ContractViolation("generate_centroids: k must be >= 2");
    std::vector<Vector> out;
    out.reserve(k);
    for (std::size_t h = 0; h < k; ++h) out.push_back(sample_sphere_surface(d, radius, rng));
    return out;
}

Dataset generate_mixture(const MixtureConfig& config, Rng& rng) {
    config.validate();
    auto centroids = generate_centroids(config.k, config.d, config.centroid_radius, rng);
    return generate_mixture_around(config, std::move(centroids), rng);
}

Dataset generate_mixture_around(const MixtureConfig& config, std::vector<Vector> centroids, Rng& rng) {
    config.validate();
    if (centroids.size() != config.k) throw ContractViolation("centroids: expected k vectors");
    for (const auto& c : centroids) {
        if (c.size() != config.d) throw ContractViolation("centroids: dimension does not match d");
    }
    Dataset ds;
    ds.mixture = config;
    ds.true_centroids = std::move(centroids);
    ds.points.reserve(config.inlier_total());
    ds.truth.reserve(config.inlier_total());

    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t h = 0; h < config.k; ++h) {
        const Vector& theta = ds.true_centroids[h];
        for (std::size_t i = 0; i < config.size_of(h); ++i) {
            Vector y(config.d);
            for (std::size_t j = 0; j < config.d; ++j) y[j] = theta[j] + config.sigma * gauss(rng);
            ds.points.push_back(std::move(y));
            ds.truth.push_back(static_cast<int>(h));
        }
    }
    return ds;
}

Dataset inject_outliers(Dataset dataset, const OutlierConfig& config, Rng& rng) {
    const std::size_t d = dataset.dim();
    config.validate(d);
    if (dataset.outlier_count() != 0) throw ContractViolation("inject_outliers: dataset already has outliers");
    dataset.outliers = config;
    if (dataset.outliers.center.empty()) dataset.outliers.center.assign(d, 0.0);

    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < config.count; ++i) {
        Vector y(d);
        for (std::size_t j = 0; j < d; ++j) y[j] = dataset.outliers.center[j] + config.sigma_out * gauss(rng);
        dataset.points.push_back(std::move(y));
        dataset.truth.push_back(kOutlier);
    }
    return dataset;
}

Vector outlier_center_at_radius(std::size_t d, double norm, Rng& rng) {
    if (!(norm >= 0.0) || !std::isfinite(norm)) {
        throw ContractViolation("outlier_center_at_radius: norm must be finite and >= 0");
    }
    // The direction is drawn even for norm 0 so the stream stays aligned across sweep cells.
    Vector direction = sample_sphere_surface(d, 1.0, rng);
    if (norm == 0.0) return Vector(d, 0.0);
    for (auto& x : direction) x *= norm;
    return direction;
}

double min_separation(std::span<const Vector> centroids) {
    if (centroids.size() < 2) throw ContractViolation("min_separation: need at least 2 centroids");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < centroids.size(); ++g) {
        for (std::size_t h = g + 1; h < centroids.size(); ++h) {
            best = std::min(best, distance(centroids[g], centroids[h], Metric::L2));
        }
    }
    return best;
}

double snr(double delta, double sigma) {
    if (!(sigma > 0.0)) throw ContractViolation("snr: sigma must be > 0");
    if (delta < 0.0) throw ContractViolation("snr: delta must be >= 0");
    return delta / (2.0 * sigma);
}

}  // namespace hkm
