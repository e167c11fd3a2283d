#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkm/algorithms.hpp"
#include "hkm/datagen.hpp"
#include "hkm/metrics.hpp"

namespace hkm {

enum class Regime { OutlierVariance, Dimension, OutlierLocation, OutlierProportion, Decay, L1Demo };

inline constexpr Regime kAllRegimes[] = {Regime::OutlierVariance, Regime::Dimension,  Regime::OutlierLocation,
                                         Regime::OutlierProportion, Regime::Decay, Regime::L1Demo};

/// outlier_variance, dimension, outlier_location, outlier_proportion, decay, l1_demo
std::string_view name_of(Regime regime);
std::optional<Regime> parse_regime(std::string_view name);
/// Column value for `sweep_name`: sigma_out, d, outlier_norm, n_out, snr, sigma.
std::string_view sweep_name(Regime regime);
std::vector<double> default_sweep(Regime regime);

struct RegimeSpec {
    Regime regime = Regime::OutlierProportion;
    std::vector<double> sweep;  // empty means default_sweep(regime)
    std::size_t repetitions = 5000;
    std::vector<InitStrategy::Kind> inits{InitStrategy::Kind::Random, InitStrategy::Kind::Omniscient};
    std::vector<Preset> algorithms{std::begin(kAllPresets), std::end(kAllPresets)};
    std::uint64_t master_seed = 0;
    double eps = kDefaultEps;
    std::size_t max_iter = kDefaultMaxIter;
    /// Worker threads; 0 means std::thread::hardware_concurrency().
    std::size_t jobs = 0;

    void validate() const;
    std::vector<double> resolved_sweep() const { return sweep.empty() ? default_sweep(regime) : sweep; }
};

struct TableRow {
    std::string regime;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::string algorithm;
    std::string init;
    std::string metric_name;
    double mean = 0.0;
    double ci_half_width = 0.0;
    std::size_t repetitions = 0;
    std::uint64_t master_seed = 0;
};

struct RegimeTable {
    std::vector<TableRow> rows;

    /// First row matching all three keys, or nullptr.
    const TableRow* find(double sweep_value, std::string_view algorithm, std::string_view metric_name,
                         std::string_view init = {}) const;
};

/// Generation parameters of one sweep cell in the four outlier regimes.
struct CellSetup {
    MixtureConfig mixture;
    OutlierConfig outliers;
    /// Location regime: norm of the per-repetition random outlier centre.
    std::optional<double> outlier_norm;
};

CellSetup cell_setup(Regime regime, double sweep_value);

/// Name of the mislabeling column for an initialisation: mp_aligned for
/// random starts (labels are only identifiable up to permutation), mp_raw
/// otherwise.
std::string_view mp_metric_name(InitStrategy::Kind init);

/// Runs fn(0..count-1) on up to `jobs` threads (0 = hardware concurrency).
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

RegimeTable run_regime(const RegimeSpec& spec);
RegimeTable run_regime_outlier_variance(const RegimeSpec& spec);
RegimeTable run_regime_dimension(const RegimeSpec& spec);
RegimeTable run_regime_outlier_location(const RegimeSpec& spec);
RegimeTable run_regime_outlier_proportion(const RegimeSpec& spec);

/// Two-cluster labeling with the TRUE centroids under l1 and l2.
struct L1DemoResult {
    ConfidenceInterval l1;
    ConfidenceInterval l2;
};

inline constexpr double kDemoSigma = 10.0;
inline constexpr std::size_t kDemoPointsPerCluster = 500;

std::vector<Vector> demo_centroids();
L1DemoResult run_l1_demo(std::size_t repetitions, std::uint64_t seed, double sigma = kDemoSigma,
                         std::size_t jobs = 0);
RegimeTable demo_table(const L1DemoResult& result, std::uint64_t seed, double sigma = kDemoSigma);

/// k = 2 antipodal centroids at +/- (Delta/2) e_1 with Delta = 2 * snr * sigma,
/// no outliers, omniscient start.
struct DecayConfig {
    std::size_t d = 1;
    double sigma = 1.0;
    std::size_t points_per_cluster = 500;
    double eps = kDefaultEps;
    std::size_t max_iter = kDefaultMaxIter;
};

std::vector<Vector> antipodal_centroids(std::size_t d, double delta);

/// Rows per SNR: hybrid mp_raw, lambda and centroid_sq_error, plus the
/// true-centroid-l2 labeling mp_raw.
RegimeTable run_decay_curve(const std::vector<double>& snr_list, const DecayConfig& base, std::size_t repetitions,
                            std::uint64_t seed, std::size_t jobs = 0);

/// Least-squares slope of log(mean MP) against SNR^2 over rows of the given
/// algorithm. Cells with zero MP are skipped.
double decay_slope(const RegimeTable& table, std::string_view algorithm = "hybrid");

}  // namespace hkm
