#include "hkm/algorithms.hpp"

#include <cmath>
#include <numeric>

namespace hkm {

AlgorithmSpec spec_of(Preset preset) {
    switch (preset) {
        case Preset::KMeans: return {Metric::L2Squared, Estimator::CoordMean};
        case Preset::KMediansL1: return {Metric::L1, Estimator::CoordMedian};
        case Preset::KMediansHybrid: return {Metric::L2, Estimator::CoordMedian};
    }
    throw ContractViolation("unknown preset");
}

std::string_view name_of(Preset preset) {
    switch (preset) {
        case Preset::KMeans: return "kmeans";
        case Preset::KMediansL1: return "kmedians-l1";
        case Preset::KMediansHybrid: return "hybrid";
    }
    return "?";
}

std::optional<Preset> parse_preset(std::string_view name) {
    for (auto p : kAllPresets) {
        if (name_of(p) == name) return p;
    }
    return std::nullopt;
}

std::string_view name_of(InitStrategy::Kind kind) {
    switch (kind) {
        case InitStrategy::Kind::Random: return "random";
        case InitStrategy::Kind::Omniscient: return "omniscient";
        case InitStrategy::Kind::Provided: return "provided";
    }
    return "?";
}

std::optional<InitStrategy::Kind> parse_init(std::string_view name) {
    if (name == "random") return InitStrategy::Kind::Random;
    if (name == "omniscient") return InitStrategy::Kind::Omniscient;
    if (name == "provided") return InitStrategy::Kind::Provided;
    return std::nullopt;
}

namespace {

void check_centroids(const std::vector<Vector>& centroids, std::size_t k, std::size_t d, const char* who) {
    if (centroids.size() != k) {
        throw ContractViolation(std::string(who) + ": expected " + std::to_string(k) + " centroids, got " +
                                std::to_string(centroids.size()));
    }
    for (const auto& c : centroids) {
        if (c.size() != d) throw ContractViolation(std::string(who) + ": centroid dimension mismatch");
    }
}

}  // namespace

std::vector<Vector> initialize(const Dataset& dataset, const InitStrategy& strategy, Rng& rng) {
    const std::size_t k = dataset.k();
    const std::size_t n = dataset.size();
    if (n < k) {
        throw ContractViolation("initialize: dataset has " + std::to_string(n) + " points, fewer than k=" +
                                std::to_string(k));
    }
    switch (strategy.kind) {
        case InitStrategy::Kind::Omniscient:
            if (dataset.true_centroids.empty()) throw ContractViolation("initialize: omniscient needs true centroids");
            check_centroids(dataset.true_centroids, k, dataset.dim(), "initialize");
            return dataset.true_centroids;
        case InitStrategy::Kind::Provided:
            check_centroids(strategy.centroids, k, dataset.dim(), "initialize");
            return strategy.centroids;
        case InitStrategy::Kind::Random: {
            // Partial Fisher-Yates: the first k slots end up a uniform k-subset in draw order.
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::vector<Vector> out;
            out.reserve(k);
            for (std::size_t h = 0; h < k; ++h) {
                std::uniform_int_distribution<std::size_t> pick(h, n - 1);
                std::swap(idx[h], idx[pick(rng)]);
                out.push_back(dataset.points[idx[h]]);
            }
            return out;
        }
    }
    throw ContractViolation("initialize: unknown strategy");
}

std::vector<int> label_step(std::span<const Vector> points, std::span<const Vector> centroids, Metric metric) {
    if (centroids.empty()) throw ContractViolation("label_step: no centroids");
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = 0;
        double best_dist = distance(points[i], centroids[0], metric);
        for (std::size_t h = 1; h < centroids.size(); ++h) {
            const double dist = distance(points[i], centroids[h], metric);
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(h);
            }
        }
        labels[i] = best;
    }
    return labels;
}

EstimateOutcome estimate_step(std::span<const Vector> points, std::span<const int> labels, std::size_t k,
                              Estimator estimator, std::span<const Vector> prev_centroids) {
    if (labels.size() != points.size()) throw ContractViolation("estimate_step: labels/points length mismatch");
    if (prev_centroids.size() != k) throw ContractViolation("estimate_step: prev_centroids must have k entries");

    std::vector<std::vector<Vector>> members(k);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int h = labels[i];
        if (h < 0 || static_cast<std::size_t>(h) >= k) {
            throw ContractViolation("estimate_step: label " + std::to_string(h) + " outside [0, k)");
        }
        members[static_cast<std::size_t>(h)].push_back(points[i]);
    }

    EstimateOutcome out;
    out.centroids.reserve(k);
    for (std::size_t h = 0; h < k; ++h) {
        if (members[h].empty()) {
            out.centroids.push_back(prev_centroids[h]);
            out.empty_cluster = true;
        } else if (estimator == Estimator::CoordMedian) {
            out.centroids.push_back(coordinatewise_median(members[h]));
        } else {
            out.centroids.push_back(coordinatewise_mean(members[h]));
        }
    }
    return out;
}

double centroid_shift(std::span<const Vector> old_centroids, std::span<const Vector> new_centroids) {
    if (old_centroids.size() != new_centroids.size() || old_centroids.empty()) {
        throw ContractViolation("centroid_shift: centroid lists differ in length or are empty");
    }
    double total = 0.0;
    for (std::size_t h = 0; h < old_centroids.size(); ++h) {
        total += distance(old_centroids[h], new_centroids[h], Metric::L2Squared);
    }
    return total / static_cast<double>(old_centroids.size());
}

double objective(std::span<const Vector> points, std::span<const int> labels, std::span<const Vector> centroids,
                 Metric metric) {
    if (labels.size() != points.size()) throw ContractViolation("objective: labels/points length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += distance(points[i], centroids[static_cast<std::size_t>(labels[i])], metric);
    }
    return total;
}

ClusteringResult run_from(std::span<const Vector> points, const AlgorithmSpec& spec, std::vector<Vector> initial,
                          double eps, std::size_t max_iter) {
    if (!(eps > 0.0)) throw ContractViolation("eps: must be > 0");
    if (max_iter < 1) throw ContractViolation("max_iter: must be >= 1");
    if (points.empty()) throw ContractViolation("run: no points");
    const std::size_t k = initial.size();
    check_centroids(initial, k, points.front().size(), "run");
    if (points.size() < k) throw ContractViolation("run: fewer points than clusters");

    ClusteringResult result;
    std::vector<Vector> current = std::move(initial);
    for (std::size_t s = 1;; ++s) {
        const auto labels = label_step(points, current, spec.label_metric);
        auto step = estimate_step(points, labels, k, spec.estimator, current);
        const double shift = centroid_shift(current, step.centroids);
        current = std::move(step.centroids);
        result.trace.push_back({current, shift, step.empty_cluster});
        result.iterations = s;
        if (shift <= eps) {
            result.converged = true;
            break;
        }
        if (s >= max_iter) break;
    }
    result.labels = label_step(points, current, spec.label_metric);
    result.centroids = std::move(current);
    return result;
}

ClusteringResult run(const Dataset& dataset, const AlgorithmSpec& spec, const InitStrategy& init, double eps,
                     std::size_t max_iter, Rng& rng) {
    return run_from(dataset.points, spec, initialize(dataset, init, rng), eps, max_iter);
}

}  // namespace hkm
