#include "hkm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace hkm {

ConfusionCounts confusion(std::span<const int> labels_hat, std::span<const int> truth, std::size_t k) {
    if (labels_hat.size() != truth.size()) throw ContractViolation("confusion: labels/truth length mismatch");
    if (k == 0) throw ContractViolation("confusion: k must be >= 1");
    ConfusionCounts c;
    c.n.assign(k, std::vector<std::size_t>(k, 0));
    c.true_sizes.assign(k, 0);
    c.estimated_sizes.assign(k, 0);
    c.outliers_per_cluster.assign(k, 0);
    for (std::size_t i = 0; i < labels_hat.size(); ++i) {
        const int h = labels_hat[i];
        if (h < 0 || static_cast<std::size_t>(h) >= k) {
            throw ContractViolation("confusion: label " + std::to_string(h) + " outside [0, k)");
        }
        const auto hu = static_cast<std::size_t>(h);
        const int g = truth[i];
        if (g == kOutlier) {
            ++c.outliers_per_cluster[hu];
            continue;
        }
        if (g < 0 || static_cast<std::size_t>(g) >= k) {
            throw ContractViolation("confusion: truth " + std::to_string(g) + " outside [0, k)");
        }
        const auto gu = static_cast<std::size_t>(g);
        ++c.n[gu][hu];
        ++c.true_sizes[gu];
        ++c.estimated_sizes[hu];
    }
    return c;
}

double mislabeling_raw(std::span<const int> labels_hat, std::span<const int> truth) {
    if (labels_hat.size() != truth.size()) throw ContractViolation("mislabeling_raw: labels/truth length mismatch");
    std::size_t total = 0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == kOutlier) continue;
        ++total;
        wrong += (labels_hat[i] != truth[i]);
    }
    if (total == 0) throw ContractViolation("mislabeling_raw: no non-outlier points");
    return static_cast<double>(wrong) / static_cast<double>(total);
}

AlignedMislabeling mislabeling_aligned(std::span<const int> labels_hat, std::span<const int> truth, std::size_t k) {
    if (k > kMaxMatchK) {
        throw Unsupported("mislabeling_aligned: k=" + std::to_string(k) + " exceeds brute-force limit " +
                          std::to_string(kMaxMatchK));
    }
    const auto counts = confusion(labels_hat, truth, k);
    const std::size_t total = std::accumulate(counts.true_sizes.begin(), counts.true_sizes.end(), std::size_t{0});
    if (total == 0) throw ContractViolation("mislabeling_aligned: no non-outlier points");

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    std::size_t best_correct = 0;
    bool first = true;
    do {
        std::size_t correct = 0;
        for (std::size_t h = 0; h < k; ++h) correct += counts.n[static_cast<std::size_t>(perm[h])][h];
        if (first || correct > best_correct) {
            best_correct = correct;
            best_perm = perm;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return {static_cast<double>(total - best_correct) / static_cast<double>(total), best_perm};
}

CentroidError centroid_error(std::span<const Vector> centroids_hat, std::span<const Vector> true_centroids,
                             double delta_sep) {
    const std::size_t k = true_centroids.size();
    if (centroids_hat.size() != k || k == 0) throw ContractViolation("centroid_error: centroid counts differ");
    if (k > kMaxMatchK) {
        throw Unsupported("centroid_error: k=" + std::to_string(k) + " exceeds brute-force limit " +
                          std::to_string(kMaxMatchK));
    }
    if (!(delta_sep > 0.0)) throw ContractViolation("centroid_error: delta_sep must be > 0");

    // dist[h][g] = ||hat_h - theta_g||_2
    std::vector<std::vector<double>> dist(k, std::vector<double>(k));
    for (std::size_t h = 0; h < k; ++h) {
        for (std::size_t g = 0; g < k; ++g) dist[h][g] = distance(centroids_hat[h], true_centroids[g], Metric::L2);
    }

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t h = 0; h < k; ++h) worst = std::max(worst, dist[h][static_cast<std::size_t>(perm[h])]);
        if (worst < best) {
            best = worst;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    CentroidError out;
    out.lambda = best / delta_sep;
    out.perm = best_perm;
    out.per_cluster_sq.assign(k, 0.0);
    for (std::size_t h = 0; h < k; ++h) {
        const auto g = static_cast<std::size_t>(best_perm[h]);
        out.per_cluster_sq[g] = distance(centroids_hat[h], true_centroids[g], Metric::L2Squared);
    }
    return out;
}

Diagnostics diagnostics(const ConfusionCounts& counts, const CentroidError& error, const Dataset& dataset) {
    const std::size_t k = counts.k();
    if (k == 0 || error.per_cluster_sq.size() != k) throw ContractViolation("diagnostics: inconsistent k");

    Diagnostics out;
    const std::size_t inliers = std::accumulate(counts.true_sizes.begin(), counts.true_sizes.end(), std::size_t{0});

    // An empty denominator has a zero numerator too; it is scored as the worst case on both sides.
    out.H = 1.0;
    out.G = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
        const double hh = static_cast<double>(counts.n[h][h]);
        const std::size_t assigned = counts.assigned(h);
        const std::size_t true_size = counts.true_sizes[h];

        const double recall = true_size ? hh / static_cast<double>(true_size) : 0.0;
        const double precision = assigned ? hh / static_cast<double>(assigned) : 0.0;
        out.H = std::min({out.H, recall, precision});

        std::size_t intruders = 0;  // other true clusters labeled h
        std::size_t escaped = 0;    // true h labeled elsewhere
        for (std::size_t g = 0; g < k; ++g) {
            if (g == h) continue;
            intruders += counts.n[g][h];
            escaped += counts.n[h][g];
        }
        const double contamination = assigned ? static_cast<double>(intruders) / static_cast<double>(assigned) : 1.0;
        const double loss = true_size ? static_cast<double>(escaped) / static_cast<double>(true_size) : 1.0;
        out.G = std::max({out.G, contamination, loss});
    }

    std::size_t smallest = inliers;
    for (auto n : counts.true_sizes) smallest = std::min(smallest, n);
    out.alpha = inliers ? static_cast<double>(smallest) / static_cast<double>(inliers) : 0.0;

    out.lambda = error.lambda;
    if (dataset.true_centroids.size() >= 2) {
        out.delta_sep = min_separation(dataset.true_centroids);
        if (dataset.mixture.sigma > 0.0) out.snr = snr(out.delta_sep, dataset.mixture.sigma);
    }
    return out;
}

ConfidenceInterval confidence_interval(std::span<const double> samples) {
    if (samples.size() < 2) throw ContractViolation("confidence_interval: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n), sd, samples.size()};
}

}  // namespace hkm
