// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hkm/algorithms.hpp"
#include "hkm/experiments.hpp"
#include "hkm/metrics.hpp"
#include "test_oracles.hpp"

#ifndef HKM_CLI_PATH
#error "HKM_CLI_PATH must point at the hkm executable"
#endif

using namespace hkm;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
    bool pass;
    std::string detail;
};

double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string interval(const TableRow& r) {
    return fmt("%.4f", r.mean) + "±" + fmt("%.4f", r.ci_half_width);
}

// 1. Two-cluster demo at the true centroids.
Verdict demo() {
    const auto r = run_l1_demo(1000, kSeed, kDemoSigma);
    const bool pass = r.l1.mean >= 0.223 && r.l1.mean <= 0.243 && r.l2.mean >= 0.208 && r.l2.mean <= 0.228 &&
                      r.l1.mean > r.l2.mean;
    return {pass, "l1=" + fmt("%.4f", r.l1.mean) + " (se " + fmt("%.5f", r.l1.standard_error()) +
                      "), l2=" + fmt("%.4f", r.l2.mean) + " (se " + fmt("%.5f", r.l2.standard_error()) + ")"};
}

// 2. Known-centroid labeling against the Gaussian tail.
Verdict oracle_tail() {
    const auto t = run_decay_curve({1.0, 2.0}, DecayConfig{}, 2000, kSeed);
    bool pass = true;
    std::string detail;
    for (double s : {1.0, 2.0}) {
        const auto* row = t.find(s, "true-centroid-l2", "mp_raw");
        const double want = normal_tail(s);
        pass = pass && row && std::abs(row->mean - want) <= 0.01;
        detail += "snr=" + fmt("%g", s) + ": " + fmt("%.5f", row ? row->mean : NAN) + " vs " + fmt("%.5f", want) + "; ";
    }
    return {pass, detail};
}

// 3. Exponential decay of the hybrid mislabeling rate.
Verdict decay() {
    const auto t = run_decay_curve({1.5, 2.0, 2.5, 3.0}, DecayConfig{}, 2000, kSeed);
    const double slope = decay_slope(t, "hybrid");
    std::string detail = "slope=" + fmt("%.4f", slope) + " (MP:";
    for (double s : {1.5, 2.0, 2.5, 3.0}) detail += " " + fmt("%.5f", t.find(s, "hybrid", "mp_raw")->mean);
    return {slope >= -0.6 && slope <= -0.4, detail + ")"};
}

// 4. Hybrid beats k-means with disjoint intervals in the three contamination regimes.
Verdict orderings() {
    struct Cell {
        Regime regime;
        double value;
    };
    bool pass = true;
    std::string detail;
    for (auto [regime, value] : {Cell{Regime::OutlierProportion, 80}, Cell{Regime::OutlierVariance, 20},
                                 Cell{Regime::OutlierLocation, 100}}) {
        RegimeSpec spec;
        spec.regime = regime;
        spec.sweep = {value};
        spec.repetitions = 500;
        spec.inits = {InitStrategy::Kind::Omniscient};
        spec.algorithms = {Preset::KMeans, Preset::KMediansHybrid};
        spec.master_seed = kSeed;
        const auto t = run_regime(spec);
        const auto* hy = t.find(value, "hybrid", "mp_raw");
        const auto* km = t.find(value, "kmeans", "mp_raw");
        const bool ok = hy && km && hy->mean + hy->ci_half_width < km->mean - km->ci_half_width;
        pass = pass && ok;
        detail += std::string(name_of(regime)) + "@" + fmt("%g", value) + ": hybrid " + interval(*hy) + " kmeans " +
                  interval(*km) + "; ";
    }
    return {pass, detail};
}

// 5. Median stays among the survivors; the mean is dragged away.
Verdict breakdown() {
    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr double kFar = 1e6;
    std::size_t median_fail = 0, mean_fail = 0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t n = 3 + rng() % 98;
        const std::size_t d = 1 + rng() % 5;
        const std::size_t half = (n + 1) / 2;
        const std::size_t m = 1 + rng() % (half - 1);  // 1 <= m < ceil(n/2)

        std::vector<Vector> pts(n, Vector(d));
        for (auto& p : pts)
            for (auto& x : p) x = 3.0 * gauss(rng);
        const Vector clean_mean = coordinatewise_mean(pts);

        Vector dir(d);
        double norm = 0.0;
        for (auto& x : dir) {
            x = gauss(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : dir) x *= kFar / norm;

        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Vector> survivors;
        for (std::size_t r = m; r < n; ++r) survivors.push_back(pts[order[r]]);
        for (std::size_t r = 0; r < m; ++r) pts[order[r]] = dir;

        const Vector med = coordinatewise_median(pts);
        for (std::size_t j = 0; j < d; ++j) {
            double lo = survivors[0][j], hi = survivors[0][j];
            for (const auto& s : survivors) {
                lo = std::min(lo, s[j]);
                hi = std::max(hi, s[j]);
            }
            if (med[j] < lo || med[j] > hi) {
                ++median_fail;
                break;
            }
        }
        if (distance(coordinatewise_mean(pts), clean_mean, Metric::L2) <= 1e3) ++mean_fail;
    }
    return {median_fail == 0 && mean_fail == 0,
            std::to_string(trials) + " trials: median outside survivor range " + std::to_string(median_fail) +
                ", mean within 1e3 " + std::to_string(mean_fail)};
}

// 6. Estimation steps are optimal against random perturbations; Lloyd descends.
Verdict step_optimality() {
    std::mt19937_64 rng(kSeed + 6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t improved = 0;
    constexpr double kTol = 1e-9;
    for (int inst = 0; inst < 1000; ++inst) {
        const std::size_t n = 5 + rng() % 56;
        const std::size_t d = 1 + rng() % 4;
        const std::size_t k = 1 + rng() % 4;
        std::vector<Vector> pts(n, Vector(d));
        for (auto& p : pts)
            for (auto& x : p) x = 5.0 * gauss(rng);
        std::vector<int> labels(n);
        for (auto& z : labels) z = static_cast<int>(rng() % k);
        const std::vector<Vector> prev(k, Vector(d, 0.0));

        for (auto [estimator, metric] : {std::pair{Estimator::CoordMedian, Metric::L1},
                                         std::pair{Estimator::CoordMean, Metric::L2Squared}}) {
            const auto est = estimate_step(pts, labels, k, estimator, prev).centroids;
            const double base = objective(pts, labels, est, metric);
            for (int c = 0; c < 100; ++c) {
                auto cand = est;
                const double scale = std::pow(10.0, -6.0 + 6.0 * unit(rng));
                for (auto& v : cand)
                    for (auto& x : v) x += scale * gauss(rng);
                if (objective(pts, labels, cand, metric) < base - kTol * std::max(1.0, std::abs(base))) ++improved;
            }
        }
    }

    std::size_t increases = 0;
    const auto kmeans = spec_of(Preset::KMeans);
    for (int run = 0; run < 100; ++run) {
        MixtureConfig cfg;
        cfg.k = 2 + static_cast<std::size_t>(run % 4);
        cfg.d = 2 + static_cast<std::size_t>(run % 5);
        cfg.points_per_cluster = 50;
        Rng data_rng = derive_rng(kSeed, {6, static_cast<std::uint64_t>(run)});
        OutlierConfig oc;
        oc.count = 20;
        oc.sigma_out = 8.0;
        const auto ds = inject_outliers(generate_mixture(cfg, data_rng), oc, data_rng);
        const auto init = initialize(ds, InitStrategy::random(), data_rng);
        const auto result = run_from(ds.points, kmeans, init, 1e-12, 100);

        auto cost = [&](const std::vector<Vector>& c) {
            return objective(ds.points, label_step(ds.points, c, Metric::L2Squared), c, Metric::L2Squared);
        };
        double last = cost(init);
        for (const auto& rec : result.trace) {
            const double now = cost(rec.centroids);
            if (now > last * (1.0 + kTol)) ++increases;
            last = now;
        }
    }
    return {improved == 0 && increases == 0, "improving perturbations " + std::to_string(improved) +
                                                  " of 200000; Lloyd objective increases " +
                                                  std::to_string(increases) + " over 100 runs"};
}

// 7. Aligned mislabeling against an independent exhaustive oracle.
Verdict alignment() {
    std::mt19937_64 rng(kSeed + 7);
    std::size_t mismatches = 0;
    for (int inst = 0; inst < 500; ++inst) {
        const std::size_t k = 2 + rng() % 3;
        const std::size_t n = k + rng() % (51 - k);
        const std::size_t outliers = rng() % 6;
        const auto li = oracle::random_instance(rng, k, n, std::min<std::size_t>(outliers, 50 - n));
        const auto got = mislabeling_aligned(li.labels, li.truth, k);
        const auto want = oracle::aligned_mislabeling(li.labels, li.truth, k);
        if (got.mp != want.first || got.perm != want.second) ++mismatches;
    }
    return {mismatches == 0, "500 instances, " + std::to_string(mismatches) + " mismatches"};
}

// 8. Every CLI command reproduces its outputs byte for byte.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[e.path().filename().string()] = s.str();
    }
    return files;
}

int run_cli(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string(HKM_CLI_PATH) + " " + args + " --out " + out.string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict cli_determinism() {
    const fs::path root = fs::temp_directory_path() / "hkm_acceptance_cli";
    fs::remove_all(root);
    const fs::path data = root / "data";
    fs::create_directories(data);
    if (run_cli("generate --seed 3 --outliers 40 --sigma-out 10", data) != 0) {
        return {false, "could not create the input dataset"};
    }
    const std::string csv = (data / "dataset.csv").string();

    const std::vector<std::string> configs = {
        "generate --seed 7 --k 4 --d 10 --outliers 60 --sigma-out 10",
        "generate --seed 11 --k 3 --d 5 --outliers 20 --sigma-out 2 --outlier-norm 50",
        "cluster --data " + csv + " --algo hybrid --init random --seed 5",
        "cluster --data " + csv + " --algo kmedians-l1 --init omniscient",
        "regime outlier_variance --reps 3 --sweep 1,20 --seed 1 --jobs 2",
        "regime dimension --reps 3 --sweep 2,20 --seed 2 --jobs 1",
        "regime outlier_location --reps 3 --sweep 0,100 --seed 3 --jobs 2",
        "regime outlier_proportion --reps 3 --seed 4 --init omniscient --algo hybrid,kmeans",
        "demo --reps 50 --seed 5 --jobs 2",
        "decay --reps 20 --sweep 1,2,3 --seed 6",
    };
    std::size_t identical = 0;
    std::string failures;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const fs::path a = root / ("a" + std::to_string(i));
        const fs::path b = root / ("b" + std::to_string(i));
        fs::create_directories(a);
        fs::create_directories(b);
        const int ca = run_cli(configs[i], a);
        const int cb = run_cli(configs[i], b);
        const auto sa = snapshot(a);
        if (ca == cb && (ca == 0 || ca == 3) && !sa.empty() && sa == snapshot(b)) {
            ++identical;
        } else {
            failures += " [" + configs[i] + "]";
        }
    }
    return {identical == configs.size(),
            std::to_string(identical) + "/" + std::to_string(configs.size()) + " configurations identical" + failures};
}

// 9. Centroid error scales as 1/n_h when the cluster size quadruples.
Verdict centroid_rate() {
    DecayConfig small;
    small.d = 5;
    small.points_per_cluster = 100;
    DecayConfig large = small;
    large.points_per_cluster = 400;
    const double s = 4.0;
    const auto ts = run_decay_curve({s}, small, 500, kSeed);
    const auto tl = run_decay_curve({s}, large, 500, kSeed);
    const double es = ts.find(s, "hybrid", "centroid_sq_error")->mean;
    const double el = tl.find(s, "hybrid", "centroid_sq_error")->mean;
    const double ratio = es / el;
    return {ratio >= 4.0 / 3.0 && ratio <= 12.0, "err(100)=" + fmt("%.5f", es) + " err(400)=" + fmt("%.5f", el) +
                                                     " ratio=" + fmt("%.3f", ratio) + " (target 4, factor 3)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"demo l1 vs l2 mislabeling", demo},
        {"known-centroid Gaussian tail", oracle_tail},
        {"mislabeling decay slope", decay},
        {"robustness orderings", orderings},
        {"median breakdown", breakdown},
        {"estimation-step optimality", step_optimality},
        {"alignment oracle", alignment},
        {"CLI determinism", cli_determinism},
        {"centroid error rate", centroid_rate},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !v.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
