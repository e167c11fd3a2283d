#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "hkm/core.hpp"

namespace hkm {

/// Every stochastic routine draws from this engine. Output is pinned per
/// (seed, build): the engine is fully specified by the standard, and
/// std::normal_distribution is fixed by the standard library we link.
using Rng = std::mt19937_64;

/// Independent, replayable stream keyed by a master seed plus any number of
/// coordinates (regime, sweep cell, repetition, ...).
Rng derive_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

/// Ground-truth marker carried by injected outliers.
inline constexpr int kOutlier = -1;

struct MixtureConfig {
    std::size_t k = 4;
    std::size_t d = 10;
    double sigma = 2.0;
    std::size_t points_per_cluster = 100;
    double centroid_radius = 5.0;
    /// Optional unequal cluster sizes; overrides points_per_cluster when non-empty.
    std::vector<std::size_t> cluster_sizes;

    /// Throws ContractViolation whose message starts with the offending field name.
    void validate() const;
    std::size_t size_of(std::size_t cluster) const;
    std::size_t inlier_total() const;
};

struct OutlierConfig {
    std::size_t count = 0;
    Vector center;  // empty means the origin
    double sigma_out = 1.0;

    void validate(std::size_t d) const;
};

struct Dataset {
    std::vector<Vector> points;
    std::vector<int> truth;  // cluster id in [0, k) or kOutlier
    std::vector<Vector> true_centroids;
    MixtureConfig mixture;
    OutlierConfig outliers;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? mixture.d : points.front().size(); }
    std::size_t k() const { return true_centroids.empty() ? mixture.k : true_centroids.size(); }
    std::size_t outlier_count() const;
    std::size_t inlier_count() const { return size() - outlier_count(); }
};

Vector sample_sphere_surface(std::size_t d, double radius, Rng& rng);
std::vector<Vector> generate_centroids(std::size_t k, std::size_t d, double radius, Rng& rng);

/// Centroids drawn on the sphere, then points_per_cluster draws of
/// theta_h + sigma * N(0, I) per cluster, clusters laid out contiguously.
Dataset generate_mixture(const MixtureConfig& config, Rng& rng);

/// Same as generate_mixture but around caller-fixed centroids.
Dataset generate_mixture_around(const MixtureConfig& config, std::vector<Vector> centroids, Rng& rng);

/// Appends config.count draws from N(center, sigma_out^2 I) marked kOutlier.
Dataset inject_outliers(Dataset dataset, const OutlierConfig& config, Rng& rng);

/// Uniformly random direction scaled to exactly `norm`.
Vector outlier_center_at_radius(std::size_t d, double norm, Rng& rng);

double min_separation(std::span<const Vector> centroids);
double snr(double delta, double sigma);

}  // namespace hkm
