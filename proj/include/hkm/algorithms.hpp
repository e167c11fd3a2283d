#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkm/core.hpp"
#include "hkm/datagen.hpp"

namespace hkm {

enum class Estimator { CoordMedian, CoordMean };

/// A clustering algorithm is fully described by how it labels and how it
/// re-estimates centroids.
struct AlgorithmSpec {
    Metric label_metric = Metric::L2;
    Estimator estimator = Estimator::CoordMedian;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

enum class Preset { KMeans, KMediansL1, KMediansHybrid };

inline constexpr Preset kAllPresets[] = {Preset::KMeans, Preset::KMediansL1, Preset::KMediansHybrid};

AlgorithmSpec spec_of(Preset preset);
/// CLI spelling: kmeans, kmedians-l1, hybrid.
std::string_view name_of(Preset preset);
std::optional<Preset> parse_preset(std::string_view name);

struct InitStrategy {
    enum class Kind { Random, Omniscient, Provided };

    Kind kind = Kind::Omniscient;
    std::vector<Vector> centroids;  // only for Provided

    static InitStrategy random() { return {Kind::Random, {}}; }
    static InitStrategy omniscient() { return {Kind::Omniscient, {}}; }
    static InitStrategy provided(std::vector<Vector> c) { return {Kind::Provided, std::move(c)}; }
};

std::string_view name_of(InitStrategy::Kind kind);
std::optional<InitStrategy::Kind> parse_init(std::string_view name);

struct IterationRecord {
    std::vector<Vector> centroids;
    double shift = 0.0;
    bool empty_cluster = false;
};

struct ClusteringResult {
    std::vector<Vector> centroids;
    std::vector<int> labels;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;
};

inline constexpr double kDefaultEps = 0.001;
inline constexpr std::size_t kDefaultMaxIter = 100;

/// Initial centroids for dataset.k() clusters. Random picks k distinct data
/// points (outliers included); Omniscient copies the true centroids.
std::vector<Vector> initialize(const Dataset& dataset, const InitStrategy& strategy, Rng& rng);

/// Nearest centroid under `metric`; ties go to the lowest cluster index.
std::vector<int> label_step(std::span<const Vector> points, std::span<const Vector> centroids, Metric metric);

struct EstimateOutcome {
    std::vector<Vector> centroids;
    bool empty_cluster = false;
};

/// Empty clusters keep their previous centroid and raise the flag.
EstimateOutcome estimate_step(std::span<const Vector> points, std::span<const int> labels, std::size_t k,
                              Estimator estimator, std::span<const Vector> prev_centroids);

/// (1/k) * sum_h ||new_h - old_h||_2^2
double centroid_shift(std::span<const Vector> old_centroids, std::span<const Vector> new_centroids);

/// Sum over points of distance(point, centroid[label], metric).
double objective(std::span<const Vector> points, std::span<const int> labels, std::span<const Vector> centroids,
                 Metric metric);

/// Alternate labeling and estimation from the given centroids until the mean
/// squared shift drops to eps or max_iter passes have run.
ClusteringResult run_from(std::span<const Vector> points, const AlgorithmSpec& spec, std::vector<Vector> initial,
                          double eps = kDefaultEps, std::size_t max_iter = kDefaultMaxIter);

ClusteringResult run(const Dataset& dataset, const AlgorithmSpec& spec, const InitStrategy& init,
                     double eps, std::size_t max_iter, Rng& rng);

}  // namespace hkm
