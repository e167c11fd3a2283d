#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hkm/algorithms.hpp"
#include "hkm/datagen.hpp"

using namespace hkm;

namespace {

Dataset small_mixture(std::uint64_t seed, double sigma = 1.0, std::size_t per = 30, std::size_t k = 3,
                      std::size_t d = 2) {
    MixtureConfig cfg;
    cfg.k = k;
    cfg.d = d;
    cfg.sigma = sigma;
    cfg.points_per_cluster = per;
    Rng rng(seed);
    return generate_mixture(cfg, rng);
}

std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> g(0.0, 3.0);
    std::vector<Vector> pts(n, Vector(d));
    for (auto& p : pts)
        for (auto& x : p) x = g(rng);
    return pts;
}

}  // namespace

TEST(Presets, MetricEstimatorPairs) {
    EXPECT_EQ(spec_of(Preset::KMeans), (AlgorithmSpec{Metric::L2Squared, Estimator::CoordMean}));
    EXPECT_EQ(spec_of(Preset::KMediansL1), (AlgorithmSpec{Metric::L1, Estimator::CoordMedian}));
    EXPECT_EQ(spec_of(Preset::KMediansHybrid), (AlgorithmSpec{Metric::L2, Estimator::CoordMedian}));
    for (auto p : kAllPresets) EXPECT_EQ(parse_preset(name_of(p)), p);
    EXPECT_FALSE(parse_preset("kmedoids"));
}

TEST(Initialize, Omniscient) {
    const auto ds = small_mixture(1);
    Rng rng(0);
    EXPECT_EQ(initialize(ds, InitStrategy::omniscient(), rng), ds.true_centroids);
}

TEST(Initialize, RandomWithKEqualsNTakesEveryPoint) {
    MixtureConfig cfg;
    cfg.k = 3;
    cfg.d = 2;
    cfg.points_per_cluster = 1;
    Rng gen(2);
    const auto ds = generate_mixture(cfg, gen);
    Rng rng(3);
    auto picked = initialize(ds, InitStrategy::random(), rng);
    auto all = ds.points;
    std::sort(picked.begin(), picked.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(picked, all);
}

TEST(Initialize, RandomIsDeterministicAndDistinct) {
    const auto ds = small_mixture(4);
    Rng a(5), b(5);
    const auto x = initialize(ds, InitStrategy::random(), a);
    EXPECT_EQ(x, initialize(ds, InitStrategy::random(), b));
    EXPECT_EQ(std::set<Vector>(x.begin(), x.end()).size(), 3u);
}

TEST(Initialize, Errors) {
    MixtureConfig cfg;
    cfg.k = 3;
    cfg.d = 2;
    cfg.points_per_cluster = 1;
    Rng gen(6);
    auto ds = generate_mixture(cfg, gen);
    ds.points.pop_back();
    ds.truth.pop_back();
    Rng rng(7);
    EXPECT_THROW(initialize(ds, InitStrategy::random(), rng), ContractViolation);

    const auto full = small_mixture(8);
    EXPECT_THROW(initialize(full, InitStrategy::provided({{0, 0}}), rng), ContractViolation);
    EXPECT_THROW(initialize(full, InitStrategy::provided({{0}, {1}, {2}}), rng), ContractViolation);
    const std::vector<Vector> ok{{0, 0}, {1, 1}, {2, 2}};
    EXPECT_EQ(initialize(full, InitStrategy::provided(ok), rng), ok);
}

TEST(LabelStep, Examples) {
    const std::vector<Vector> line{{0}, {10}};
    EXPECT_EQ(label_step(std::vector<Vector>{{1}}, line, Metric::L2), (std::vector<int>{0}));
    EXPECT_EQ(label_step(std::vector<Vector>{{5}}, line, Metric::L2), (std::vector<int>{0}));  // tie

    // (1,0): nearest to the origin either way. (3,0): l2 3 vs sqrt(5), l1 3 vs 3 (tie).
    const std::vector<Vector> c{{0, 0}, {4, 2}};
    const std::vector<Vector> pts{{1, 0}, {3, 0}};
    EXPECT_DOUBLE_EQ(distance(pts[1], c[0], Metric::L1), distance(pts[1], c[1], Metric::L1));
    EXPECT_LT(distance(pts[1], c[1], Metric::L2), distance(pts[1], c[0], Metric::L2));
    EXPECT_EQ(label_step(pts, c, Metric::L2), (std::vector<int>{0, 1}));
    EXPECT_EQ(label_step(pts, c, Metric::L1), (std::vector<int>{0, 0}));
}

TEST(LabelStep, NoPointCanImproveBySwitching) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_points(rng, 40, 3);
        const auto cents = random_points(rng, 4, 3);
        for (auto m : {Metric::L1, Metric::L2, Metric::L2Squared}) {
            const auto labels = label_step(pts, cents, m);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double mine = distance(pts[i], cents[static_cast<std::size_t>(labels[i])], m);
                for (const auto& c : cents) EXPECT_LE(mine, distance(pts[i], c, m));
            }
        }
    }
}

TEST(LabelStep, L2AndSquaredL2AgreeIncludingTies) {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> grid(-3, 3);  // integer grid produces exact ties
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Vector> pts(30, Vector(2)), cents(4, Vector(2));
        for (auto& p : pts)
            for (auto& x : p) x = grid(rng);
        for (auto& c : cents)
            for (auto& x : c) x = grid(rng);
        EXPECT_EQ(label_step(pts, cents, Metric::L2), label_step(pts, cents, Metric::L2Squared));
    }
}

TEST(EstimateStep, Examples) {
    const std::vector<Vector> pts{{0, 0}, {1, 2}, {2, 1}};
    const std::vector<int> one{0, 0, 0};
    const std::vector<Vector> prev{{9, 9}};
    auto med = estimate_step(pts, one, 1, Estimator::CoordMedian, prev);
    EXPECT_EQ(med.centroids, (std::vector<Vector>{{1, 1}}));
    EXPECT_FALSE(med.empty_cluster);

    const std::vector<Vector> two{{0, 0}, {2, 2}};
    auto mean = estimate_step(two, std::vector<int>{0, 0}, 1, Estimator::CoordMean, std::vector<Vector>{{7, 7}});
    EXPECT_EQ(mean.centroids.front(), (Vector{1, 1}));
}

TEST(EstimateStep, EmptyClusterCarriesForward) {
    const std::vector<Vector> pts{{0, 0}, {1, 1}};
    const std::vector<Vector> prev{{0, 0}, {9, 9}};
    const auto out = estimate_step(pts, std::vector<int>{0, 0}, 2, Estimator::CoordMedian, prev);
    EXPECT_EQ(out.centroids[1], (Vector{9, 9}));
    EXPECT_TRUE(out.empty_cluster);
}

TEST(EstimateStep, RejectsOutOfRangeLabels) {
    const std::vector<Vector> pts{{0, 0}};
    const std::vector<Vector> prev{{0, 0}};
    EXPECT_THROW(estimate_step(pts, std::vector<int>{1}, 1, Estimator::CoordMean, prev), ContractViolation);
    EXPECT_THROW(estimate_step(pts, std::vector<int>{-1}, 1, Estimator::CoordMean, prev), ContractViolation);
}

TEST(EstimateStep, NoPerturbationImprovesTheStepObjective) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_points(rng, 25, 3);
        const std::vector<Vector> prev(1, Vector(3, 0.0));
        const std::vector<int> labels(pts.size(), 0);
        for (auto [est, metric] : {std::pair{Estimator::CoordMedian, Metric::L1},
                                   std::pair{Estimator::CoordMean, Metric::L2Squared}}) {
            const auto c = estimate_step(pts, labels, 1, est, prev).centroids;
            const double base = objective(pts, labels, c, metric);
            for (int k = 0; k < 50; ++k) {
                auto cand = c;
                const double scale = std::pow(10.0, -(k % 6));
                for (auto& x : cand[0]) x += scale * g(rng);
                EXPECT_GE(objective(pts, labels, cand, metric), base * (1 - 1e-9));
            }
        }
    }
}

TEST(CentroidShift, Examples) {
    const std::vector<Vector> a{{1, 2}, {3, 4}};
    EXPECT_EQ(centroid_shift(a, a), 0.0);
    EXPECT_EQ(centroid_shift(std::vector<Vector>{{0, 0}}, std::vector<Vector>{{3, 4}}), 25.0);
    EXPECT_EQ(centroid_shift(std::vector<Vector>{{0, 0}, {1, 1}}, std::vector<Vector>{{3, 4}, {1, 1}}), 12.5);
    EXPECT_THROW(centroid_shift(a, std::vector<Vector>{{1, 2}}), ContractViolation);
}

TEST(Run, NoiselessOmniscientConvergesToTruth) {
    const auto ds = small_mixture(13, 1e-12, 20, 4, 5);
    for (auto p : kAllPresets) {
        Rng rng(0);
        const auto r = run(ds, spec_of(p), InitStrategy::omniscient(), kDefaultEps, kDefaultMaxIter, rng);
        EXPECT_TRUE(r.converged) << name_of(p);
        EXPECT_LE(r.iterations, 2u);
        EXPECT_EQ(r.labels, ds.truth);
        EXPECT_EQ(r.trace.size(), r.iterations);
    }
}

TEST(Run, IterationCap) {
    const auto ds = small_mixture(14, 4.0, 50, 3, 2);
    Rng rng(15);
    const auto r = run(ds, spec_of(Preset::KMeans), InitStrategy::random(), 1e-300, 1, rng);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.trace.size(), 1u);
    EXPECT_FALSE(r.converged);
}

TEST(Run, Preconditions) {
    const auto ds = small_mixture(16);
    Rng rng(0);
    EXPECT_THROW(run(ds, spec_of(Preset::KMeans), InitStrategy::omniscient(), 0.0, 10, rng), ContractViolation);
    EXPECT_THROW(run(ds, spec_of(Preset::KMeans), InitStrategy::omniscient(), 0.1, 0, rng), ContractViolation);
}

TEST(Run, OutputInvariants) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto ds = small_mixture(100 + seed, 2.0, 25, 3, 2);
        for (auto p : kAllPresets) {
            Rng rng(seed);
            const auto r = run(ds, spec_of(p), InitStrategy::random(), kDefaultEps, kDefaultMaxIter, rng);
            EXPECT_EQ(r.trace.size(), r.iterations);
            EXPECT_EQ(r.labels.size(), ds.size());
            for (int z : r.labels) {
                EXPECT_GE(z, 0);
                EXPECT_LT(z, 3);
            }
            // Output labels agree with output centroids.
            EXPECT_EQ(r.labels, label_step(ds.points, r.centroids, spec_of(p).label_metric));
            if (r.converged) EXPECT_LE(r.trace.back().shift, kDefaultEps);
        }
    }
}

TEST(Run, LloydObjectiveNeverIncreases) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto ds = small_mixture(200 + seed, 3.0, 30, 4, 3);
        Rng rng(seed);
        auto init = initialize(ds, InitStrategy::random(), rng);
        const auto r = run_from(ds.points, spec_of(Preset::KMeans), init, 1e-12, 100);
        double prev = objective(ds.points, label_step(ds.points, init, Metric::L2Squared), init, Metric::L2Squared);
        for (const auto& rec : r.trace) {
            const auto labels = label_step(ds.points, rec.centroids, Metric::L2Squared);
            const double cur = objective(ds.points, labels, rec.centroids, Metric::L2Squared);
            EXPECT_LE(cur, prev * (1 + 1e-9));
            prev = cur;
        }
    }
}

TEST(Run, PermutingPointsPermutesLabels) {
    std::mt19937_64 shuffler(17);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = small_mixture(300 + seed, 2.0, 20, 3, 2);
        std::vector<std::size_t> order(ds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), shuffler);
        std::vector<Vector> permuted;
        for (auto i : order) permuted.push_back(ds.points[i]);

        for (auto p : {Preset::KMediansHybrid, Preset::KMediansL1, Preset::KMeans}) {
            const auto a = run_from(ds.points, spec_of(p), ds.true_centroids);
            const auto b = run_from(permuted, spec_of(p), ds.true_centroids);
            for (std::size_t r = 0; r < order.size(); ++r) EXPECT_EQ(b.labels[r], a.labels[order[r]]);
            ASSERT_EQ(a.centroids.size(), b.centroids.size());
            for (std::size_t h = 0; h < a.centroids.size(); ++h) {
                for (std::size_t j = 0; j < 2; ++j) {
                    if (spec_of(p).estimator == Estimator::CoordMedian) {
                        EXPECT_EQ(a.centroids[h][j], b.centroids[h][j]);
                    } else {
                        EXPECT_NEAR(a.centroids[h][j], b.centroids[h][j], 1e-12);
                    }
                }
            }
        }
    }
}

TEST(Run, Deterministic) {
    const auto ds = small_mixture(18, 3.0, 40, 3, 2);
    Rng a(19), b(19);
    const auto x = run(ds, spec_of(Preset::KMediansHybrid), InitStrategy::random(), kDefaultEps, 100, a);
    const auto y = run(ds, spec_of(Preset::KMediansHybrid), InitStrategy::random(), kDefaultEps, 100, b);
    EXPECT_EQ(x.centroids, y.centroids);
    EXPECT_EQ(x.labels, y.labels);
    EXPECT_EQ(x.iterations, y.iterations);
}
