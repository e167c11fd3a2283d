#include "hkm/experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hkm {

std::string_view name_of(Regime regime) {
    switch (regime) {
        case Regime::OutlierVariance: return "outlier_variance";
        case Regime::Dimension: return "dimension";
        case Regime::OutlierLocation: return "outlier_location";
        case Regime::OutlierProportion: return "outlier_proportion";
        case Regime::Decay: return "decay";
        case Regime::L1Demo: return "l1_demo";
    }
    return "?";
}

std::optional<Regime> parse_regime(std::string_view name) {
    for (auto r : kAllRegimes) {
        if (name_of(r) == name) return r;
    }
    return std::nullopt;
}

std::string_view sweep_name(Regime regime) {
    switch (regime) {
        case Regime::OutlierVariance: return "sigma_out";
        case Regime::Dimension: return "d";
        case Regime::OutlierLocation: return "outlier_norm";
        case Regime::OutlierProportion: return "n_out";
        case Regime::Decay: return "snr";
        case Regime::L1Demo: return "sigma";
    }
    return "?";
}

std::vector<double> default_sweep(Regime regime) {
    std::vector<double> out;
    switch (regime) {
        case Regime::OutlierVariance:
            for (int s = 1; s <= 20; ++s) out.push_back(s);
            break;
        case Regime::Dimension:
            for (int d = 2; d <= 20; ++d) out.push_back(d);
            break;
        case Regime::OutlierLocation:
            for (int r = 0; r <= 100; r += 10) out.push_back(r);
            break;
        case Regime::OutlierProportion:
            out = {0, 20, 40, 60, 80};
            break;
        case Regime::Decay:
            out = {1.0, 1.5, 2.0, 2.5, 3.0};
            break;
        case Regime::L1Demo:
            out = {kDemoSigma};
            break;
    }
    return out;
}

void RegimeSpec::validate() const {
    if (repetitions < 2) throw ContractViolation("repetitions: must be >= 2");
    if (algorithms.empty()) throw ContractViolation("algorithms: must name at least one algorithm");
    if (inits.empty()) throw ContractViolation("init: must name at least one initialization");
    for (auto kind : inits) {
        if (kind == InitStrategy::Kind::Provided) throw ContractViolation("init: regimes accept random or omniscient");
    }
    if (!(eps > 0.0)) throw ContractViolation("eps: must be > 0");
    if (max_iter < 1) throw ContractViolation("max_iter: must be >= 1");
    // Builds every cell once so bad sweep values surface before any work starts.
    for (double v : resolved_sweep()) {
        if (!std::isfinite(v)) throw ContractViolation("sweep: values must be finite");
        switch (regime) {
            case Regime::Decay:
                if (!(v > 0.0)) throw ContractViolation("sweep: snr values must be > 0");
                break;
            case Regime::L1Demo:
                if (!(v > 0.0)) throw ContractViolation("sweep: sigma values must be > 0");
                break;
            default:
                cell_setup(regime, v);
        }
    }
}

const TableRow* RegimeTable::find(double sweep_value, std::string_view algorithm, std::string_view metric_name,
                                  std::string_view init) const {
    for (const auto& row : rows) {
        if (row.sweep_value == sweep_value && row.algorithm == algorithm && row.metric_name == metric_name &&
            (init.empty() || row.init == init)) {
            return &row;
        }
    }
    return nullptr;
}

namespace {

std::size_t as_count(double v, const char* field) {
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw ContractViolation(std::string(field) + ": must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

CellSetup cell_setup(Regime regime, double v) {
    CellSetup cell;
    cell.mixture.k = 4;
    cell.mixture.points_per_cluster = 100;
    cell.mixture.centroid_radius = 5.0;
    cell.mixture.d = 10;
    cell.mixture.sigma = 2.0;
    cell.outliers.count = 60;
    cell.outliers.sigma_out = 10.0;
    switch (regime) {
        case Regime::OutlierVariance:
            if (!(v > 0.0)) throw ContractViolation("sweep: sigma_out values must be > 0");
            cell.outliers.sigma_out = v;
            break;
        case Regime::Dimension:
            cell.mixture.d = as_count(v, "sweep");
            if (cell.mixture.d < 1) throw ContractViolation("sweep: d values must be >= 1");
            break;
        case Regime::OutlierLocation:
            if (!(v >= 0.0)) throw ContractViolation("sweep: outlier_norm values must be >= 0");
            cell.mixture.sigma = 1.0;
            cell.outliers.count = 40;
            cell.outliers.sigma_out = 2.0;
            cell.outlier_norm = v;
            break;
        case Regime::OutlierProportion:
            cell.outliers.count = as_count(v, "sweep");
            break;
        default:
            throw ContractViolation("cell_setup: regime has no outlier cell layout");
    }
    cell.outliers.center.assign(cell.mixture.d, 0.0);
    return cell;
}

std::string_view mp_metric_name(InitStrategy::Kind init) {
    return init == InitStrategy::Kind::Random ? "mp_aligned" : "mp_raw";
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kInitStream = 1;

std::uint64_t regime_key(Regime regime) { return static_cast<std::uint64_t>(regime) + 1; }

// Streams are keyed by the sweep VALUE so reordering a sweep leaves each cell unchanged.
Rng cell_rng(std::uint64_t seed, Regime regime, double value, std::size_t rep, std::uint64_t stream) {
    return derive_rng(seed, {regime_key(regime), std::bit_cast<std::uint64_t>(value), rep, stream});
}

TableRow make_row(Regime regime, double value, std::string_view algorithm, std::string_view init,
                  std::string_view metric, const ConfidenceInterval& ci, std::uint64_t seed) {
    return {std::string(name_of(regime)),
            std::string(sweep_name(regime)),
            value,
            std::string(algorithm),
            std::string(init),
            std::string(metric),
            ci.mean,
            ci.half_width,
            ci.n,
            seed};
}

Dataset draw_cell_dataset(const CellSetup& cell, Rng& rng) {
    Dataset ds = generate_mixture(cell.mixture, rng);
    OutlierConfig outliers = cell.outliers;
    if (cell.outlier_norm) outliers.center = outlier_center_at_radius(cell.mixture.d, *cell.outlier_norm, rng);
    return inject_outliers(std::move(ds), outliers, rng);
}

RegimeTable run_outlier_regime(const RegimeSpec& spec) {
    spec.validate();
    const auto sweep = spec.resolved_sweep();
    const std::size_t n_alg = spec.algorithms.size();
    const std::size_t n_init = spec.inits.size();
    const std::size_t reps = spec.repetitions;

    RegimeTable table;
    for (double value : sweep) {
        const CellSetup cell = cell_setup(spec.regime, value);
        // samples[(a * n_init + i) * 2 + m][r], m = 0 for MP, 1 for Lambda
        std::vector<std::vector<double>> samples(n_alg * n_init * 2, std::vector<double>(reps));

        parallel_for(reps, spec.jobs, [&](std::size_t r) {
            Rng data_rng = cell_rng(spec.master_seed, spec.regime, value, r, kDataStream);
            const Dataset ds = draw_cell_dataset(cell, data_rng);
            const double delta = min_separation(ds.true_centroids);
            for (std::size_t a = 0; a < n_alg; ++a) {
                for (std::size_t i = 0; i < n_init; ++i) {
                    // Same init stream for every algorithm: a paired comparison.
                    Rng init_rng = cell_rng(spec.master_seed, spec.regime, value, r, kInitStream);
                    const auto kind = spec.inits[i];
                    const auto result = run(ds, spec_of(spec.algorithms[a]), InitStrategy{kind, {}}, spec.eps,
                                            spec.max_iter, init_rng);
                    const double mp = kind == InitStrategy::Kind::Random
                                          ? mislabeling_aligned(result.labels, ds.truth, ds.k()).mp
                                          : mislabeling_raw(result.labels, ds.truth);
                    const std::size_t slot = (a * n_init + i) * 2;
                    samples[slot][r] = mp;
                    samples[slot + 1][r] = centroid_error(result.centroids, ds.true_centroids, delta).lambda;
                }
            }
        });

        for (std::size_t a = 0; a < n_alg; ++a) {
            for (std::size_t i = 0; i < n_init; ++i) {
                const std::size_t slot = (a * n_init + i) * 2;
                const auto alg = name_of(spec.algorithms[a]);
                const auto init = name_of(spec.inits[i]);
                table.rows.push_back(make_row(spec.regime, value, alg, init, mp_metric_name(spec.inits[i]),
                                              confidence_interval(samples[slot]), spec.master_seed));
                table.rows.push_back(make_row(spec.regime, value, alg, init, "lambda",
                                              confidence_interval(samples[slot + 1]), spec.master_seed));
            }
        }
    }
    return table;
}

RegimeTable expect_regime(const RegimeSpec& spec, Regime regime) {
    if (spec.regime != regime) {
        throw ContractViolation("regime: expected " + std::string(name_of(regime)) + ", got " +
                                std::string(name_of(spec.regime)));
    }
    return run_outlier_regime(spec);
}

}  // namespace

RegimeTable run_regime_outlier_variance(const RegimeSpec& spec) { return expect_regime(spec, Regime::OutlierVariance); }
RegimeTable run_regime_dimension(const RegimeSpec& spec) { return expect_regime(spec, Regime::Dimension); }
RegimeTable run_regime_outlier_location(const RegimeSpec& spec) { return expect_regime(spec, Regime::OutlierLocation); }
RegimeTable run_regime_outlier_proportion(const RegimeSpec& spec) {
    return expect_regime(spec, Regime::OutlierProportion);
}

RegimeTable run_regime(const RegimeSpec& spec) {
    spec.validate();
    switch (spec.regime) {
        case Regime::Decay: {
            DecayConfig base;
            base.eps = spec.eps;
            base.max_iter = spec.max_iter;
            return run_decay_curve(spec.resolved_sweep(), base, spec.repetitions, spec.master_seed, spec.jobs);
        }
        case Regime::L1Demo: {
            RegimeTable table;
            for (double sigma : spec.resolved_sweep()) {
                const auto demo = run_l1_demo(spec.repetitions, spec.master_seed, sigma, spec.jobs);
                for (auto& row : demo_table(demo, spec.master_seed, sigma).rows) table.rows.push_back(std::move(row));
            }
            return table;
        }
        default:
            return run_outlier_regime(spec);
    }
}

std::vector<Vector> demo_centroids() { return {{-5.0, 6.0}, {5.0, -6.0}}; }

L1DemoResult run_l1_demo(std::size_t repetitions, std::uint64_t seed, double sigma, std::size_t jobs) {
    if (repetitions < 2) throw ContractViolation("repetitions: must be >= 2");
    MixtureConfig config;
    config.k = 2;
    config.d = 2;
    config.sigma = sigma;
    config.points_per_cluster = kDemoPointsPerCluster;
    config.validate();

    const auto centroids = demo_centroids();
    std::vector<double> mp_l1(repetitions);
    std::vector<double> mp_l2(repetitions);
    parallel_for(repetitions, jobs, [&](std::size_t r) {
        Rng rng = derive_rng(seed, {regime_key(Regime::L1Demo), std::bit_cast<std::uint64_t>(sigma), r, kDataStream});
        const Dataset ds = generate_mixture_around(config, centroids, rng);
        mp_l1[r] = mislabeling_raw(label_step(ds.points, centroids, Metric::L1), ds.truth);
        mp_l2[r] = mislabeling_raw(label_step(ds.points, centroids, Metric::L2), ds.truth);
    });
    return {confidence_interval(mp_l1), confidence_interval(mp_l2)};
}

RegimeTable demo_table(const L1DemoResult& result, std::uint64_t seed, double sigma) {
    RegimeTable table;
    table.rows.push_back(make_row(Regime::L1Demo, sigma, "true-centroid-l1", "omniscient", "mp_raw", result.l1, seed));
    table.rows.push_back(make_row(Regime::L1Demo, sigma, "true-centroid-l2", "omniscient", "mp_raw", result.l2, seed));
    return table;
}

std::vector<Vector> antipodal_centroids(std::size_t d, double delta) {
    if (d < 1) throw ContractViolation("d: must be >= 1");
    Vector plus(d, 0.0);
    Vector minus(d, 0.0);
    plus[0] = delta / 2.0;
    minus[0] = -delta / 2.0;
    return {minus, plus};
}

RegimeTable run_decay_curve(const std::vector<double>& snr_list, const DecayConfig& base, std::size_t repetitions,
                            std::uint64_t seed, std::size_t jobs) {
    if (repetitions < 2) throw ContractViolation("repetitions: must be >= 2");
    if (snr_list.empty()) throw ContractViolation("sweep: snr list must be non-empty");
    MixtureConfig config;
    config.k = 2;
    config.d = base.d;
    config.sigma = base.sigma;
    config.points_per_cluster = base.points_per_cluster;
    config.validate();

    const auto hybrid = spec_of(Preset::KMediansHybrid);
    RegimeTable table;
    for (double snr_value : snr_list) {
        if (!(snr_value > 0.0)) throw ContractViolation("sweep: snr values must be > 0");
        const double delta = 2.0 * snr_value * base.sigma;
        const auto centroids = antipodal_centroids(base.d, delta);

        std::vector<double> mp(repetitions), lambda(repetitions), sq(repetitions), oracle(repetitions);
        parallel_for(repetitions, jobs, [&](std::size_t r) {
            Rng rng = cell_rng(seed, Regime::Decay, snr_value, r, kDataStream);
            const Dataset ds = generate_mixture_around(config, centroids, rng);
            const auto result = run_from(ds.points, hybrid, centroids, base.eps, base.max_iter);
            mp[r] = mislabeling_raw(result.labels, ds.truth);
            const auto err = centroid_error(result.centroids, centroids, delta);
            lambda[r] = err.lambda;
            sq[r] = (err.per_cluster_sq[0] + err.per_cluster_sq[1]) / 2.0;
            oracle[r] = mislabeling_raw(label_step(ds.points, centroids, Metric::L2), ds.truth);
        });

        table.rows.push_back(
            make_row(Regime::Decay, snr_value, "hybrid", "omniscient", "mp_raw", confidence_interval(mp), seed));
        table.rows.push_back(
            make_row(Regime::Decay, snr_value, "hybrid", "omniscient", "lambda", confidence_interval(lambda), seed));
        table.rows.push_back(make_row(Regime::Decay, snr_value, "hybrid", "omniscient", "centroid_sq_error",
                                      confidence_interval(sq), seed));
        table.rows.push_back(make_row(Regime::Decay, snr_value, "true-centroid-l2", "omniscient", "mp_raw",
                                      confidence_interval(oracle), seed));
    }
    return table;
}

double decay_slope(const RegimeTable& table, std::string_view algorithm) {
    std::vector<double> xs, ys;
    for (const auto& row : table.rows) {
        if (row.algorithm != algorithm || row.metric_name != "mp_raw" || !(row.mean > 0.0)) continue;
        xs.push_back(row.sweep_value * row.sweep_value);
        ys.push_back(std::log(row.mean));
    }
    if (xs.size() < 2) throw ContractViolation("decay_slope: need at least two cells with positive MP");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw ContractViolation("decay_slope: all cells share one SNR");
    return sxy / sxx;
}

}  // namespace hkm
