#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hkm/core.hpp"
#include "hkm/datagen.hpp"

namespace hkm {

/// Largest k served by the exhaustive permutation matchers.
inline constexpr std::size_t kMaxMatchK = 10;

/// n[g][h] counts non-outlier points of true cluster g labeled h.
struct ConfusionCounts {
    std::vector<std::vector<std::size_t>> n;
    std::vector<std::size_t> true_sizes;       // row sums, n_g^*
    std::vector<std::size_t> estimated_sizes;  // column sums over true points only
    std::vector<std::size_t> outliers_per_cluster;

    std::size_t k() const { return n.size(); }
    /// All points (outliers included) carrying estimated label h.
    std::size_t assigned(std::size_t h) const { return estimated_sizes[h] + outliers_per_cluster[h]; }
};

ConfusionCounts confusion(std::span<const int> labels_hat, std::span<const int> truth, std::size_t k);

/// Fraction of non-outlier points whose label differs from truth.
double mislabeling_raw(std::span<const int> labels_hat, std::span<const int> truth);

struct AlignedMislabeling {
    double mp = 0.0;
    /// perm[h] is the true cluster matched to estimated label h.
    std::vector<int> perm;
};

/// Minimum mislabeling over all relabelings of labels_hat; lexicographically
/// smallest permutation wins ties. Throws Unsupported for k > kMaxMatchK.
AlignedMislabeling mislabeling_aligned(std::span<const int> labels_hat, std::span<const int> truth, std::size_t k);

struct CentroidError {
    double lambda = 0.0;
    /// Indexed by TRUE cluster: squared l2 error of its matched estimate.
    std::vector<double> per_cluster_sq;
    /// perm[h] is the true cluster matched to estimated centroid h.
    std::vector<int> perm;
};

/// Matching minimises the max normalised error (k <= kMaxMatchK).
CentroidError centroid_error(std::span<const Vector> centroids_hat, std::span<const Vector> true_centroids,
                             double delta_sep);

struct Diagnostics {
    double H = 0.0;
    double G = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    double delta_sep = 0.0;
    double snr = 0.0;
};

Diagnostics diagnostics(const ConfusionCounts& counts, const CentroidError& error, const Dataset& dataset);

struct ConfidenceInterval {
    double mean = 0.0;
    double half_width = 0.0;
    double sd = 0.0;
    std::size_t n = 0;

    double standard_error() const { return n ? sd / std::sqrt(static_cast<double>(n)) : 0.0; }
};

/// Normal-approximation 95% interval: mean +/- 1.96 sd / sqrt(n), sd with n-1.
ConfidenceInterval confidence_interval(std::span<const double> samples);

}  // namespace hkm
