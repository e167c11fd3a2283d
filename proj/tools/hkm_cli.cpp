// hkm command-line front end. Talks to the library only through hkm.h.
//
//   hkm generate --out DIR [--config cfg.json] [--seed N] [--k ..] [--d ..] ...
//   hkm cluster  --data DIR/dataset.csv --algo hybrid --init omniscient --out DIR
//   hkm regime   outlier_proportion --reps 500 --out DIR
//   hkm demo     --reps 1000 --out DIR
//   hkm decay    --reps 2000 --out DIR
//
// Config files are JSON objects whose keys mirror the option names with
// underscores (points_per_cluster, max_iter, ...); outlier settings nest under
// "outliers". Flags given on the command line win over the file.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkm/hkm.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kIterationCap = 3, kIoError = 4, kInternal = 5 };

struct CliError {
    int code;
    std::string message;
};

bool g_verbose = false;

[[noreturn]] void raise(int code, std::string message) { throw CliError{code, std::move(message)}; }

void check(hkm_status status) {
    switch (status) {
        case HKM_OK: return;
        case HKM_E_INVALID: raise(kValidation, hkm_last_error());
        case HKM_E_IO: raise(kIoError, hkm_last_error());
        case HKM_E_UNSUPPORTED: raise(kValidation, hkm_last_error());
        default: raise(kInternal, hkm_last_error());
    }
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};

using Dataset = Handle<hkm_dataset, hkm_dataset_free>;
using Result = Handle<hkm_result, hkm_result_free>;
using Table = Handle<hkm_table, hkm_table_free>;

// Options shared by all subcommands.
struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t jobs = 0;
    bool verbose = false;
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--config", c.config_path, "JSON config file");
    cmd.add_option("--out", c.out_dir, "Output directory");
    cmd.add_option("--seed", c.seed, "Master seed");
    cmd.add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
    cmd.add_flag("-v,--verbose", c.verbose, "Extra logging on stderr");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) raise(kIoError, "cannot open config '" + path + "'");
    try {
        json j = json::parse(in);
        if (!j.is_object()) raise(kValidation, "config: top level must be an object");
        return j;
    } catch (const json::exception& e) {
        raise(kIoError, std::string("config '") + path + "': " + e.what());
    }
}

bool given(const CLI::App& cmd, const char* flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
}

// Value from the flag if given, else from the config key, else the default.
template <typename T>
T resolve(const CLI::App& cmd, const char* flag, const json& cfg, const char* key, const T& flag_value) {
    if (given(cmd, flag)) return flag_value;
    if (cfg.contains(key)) {
        try {
            return cfg.at(key).get<T>();
        } catch (const json::exception&) {
            raise(kValidation, std::string(key) + ": wrong type in config");
        }
    }
    return flag_value;
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(kIoError, "cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

void write_manifest(const fs::path& path, const std::string& command, json config, const std::vector<fs::path>& outputs) {
    json m;
    m["tool"] = "hkm";
    m["version"] = hkm_version();
    m["command"] = command;
    m["config"] = std::move(config);
    auto files = json::array();
    for (const auto& p : outputs) files.push_back(p.filename().string());
    m["outputs"] = std::move(files);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(kIoError, "cannot write manifest '" + path.string() + "'");
    out << m.dump(2) << '\n';
    if (!out) raise(kIoError, "write to '" + path.string() + "' failed");
    if (g_verbose) {
        for (const auto& p : outputs) std::cerr << "wrote " << p.string() << '\n';
        std::cerr << "wrote " << path.string() << '\n';
    }
}

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    Common common;
    std::size_t k = 4, d = 10, points_per_cluster = 100, outlier_count = 0;
    double sigma = 2.0, centroid_radius = 5.0, sigma_out = 1.0, outlier_norm = 0.0;
    std::vector<double> outlier_center;
};

int cmd_generate(const CLI::App& cmd, const GenerateArgs& a) {
    const json cfg = load_config(a.common.config_path);
    const json ocfg = cfg.value("outliers", json::object());

    hkm_mixture_config mix;
    mix.k = resolve(cmd, "--k", cfg, "k", a.k);
    mix.d = resolve(cmd, "--d", cfg, "d", a.d);
    mix.sigma = resolve(cmd, "--sigma", cfg, "sigma", a.sigma);
    mix.points_per_cluster = resolve(cmd, "--points-per-cluster", cfg, "points_per_cluster", a.points_per_cluster);
    mix.centroid_radius = resolve(cmd, "--centroid-radius", cfg, "centroid_radius", a.centroid_radius);
    const std::uint64_t seed = resolve(cmd, "--seed", cfg, "seed", a.common.seed);

    std::vector<double> center = resolve(cmd, "--outlier-center", ocfg, "center", a.outlier_center);
    hkm_outlier_config out_cfg;
    out_cfg.count = resolve(cmd, "--outliers", ocfg, "count", a.outlier_count);
    out_cfg.sigma_out = resolve(cmd, "--sigma-out", ocfg, "sigma_out", a.sigma_out);
    out_cfg.center_norm = resolve(cmd, "--outlier-norm", ocfg, "center_norm", a.outlier_norm);
    if (!center.empty() && center.size() != mix.d) {
        raise(kValidation, "center: expected " + std::to_string(mix.d) + " coordinates");
    }
    out_cfg.center = center.empty() ? nullptr : center.data();

    Dataset ds;
    check(hkm_dataset_generate(&mix, &out_cfg, seed, ds.out()));

    const fs::path dir = prepare_out_dir(a.common.out_dir);
    const fs::path csv = dir / "dataset.csv";
    check(hkm_dataset_write_csv(ds.get(), csv.string().c_str()));

    std::vector<double> centroids(mix.k * mix.d);
    check(hkm_dataset_true_centroids(ds.get(), centroids.data(), centroids.size()));
    json true_centroids = json::array();
    for (std::size_t h = 0; h < mix.k; ++h) {
        true_centroids.push_back(std::vector<double>(centroids.begin() + static_cast<long>(h * mix.d),
                                                     centroids.begin() + static_cast<long>((h + 1) * mix.d)));
    }

    hkm_dataset_summary summary;
    check(hkm_dataset_summary_get(ds.get(), &summary));
    std::cerr << "points=" << hkm_dataset_size(ds.get()) << " outliers=" << hkm_dataset_outlier_count(ds.get())
              << " delta=" << g6(summary.delta) << " snr=" << g6(summary.snr) << " alpha=" << g6(summary.alpha)
              << '\n';

    json resolved;
    resolved["k"] = mix.k;
    resolved["d"] = mix.d;
    resolved["sigma"] = mix.sigma;
    resolved["points_per_cluster"] = mix.points_per_cluster;
    resolved["centroid_radius"] = mix.centroid_radius;
    resolved["outliers"] = {{"count", out_cfg.count},
                            {"center", center},
                            {"center_norm", out_cfg.center_norm},
                            {"sigma_out", out_cfg.sigma_out}};
    resolved["seed"] = seed;
    resolved["true_centroids"] = std::move(true_centroids);
    resolved["delta"] = summary.delta;
    resolved["snr"] = summary.snr;
    resolved["alpha"] = summary.alpha;
    write_manifest(dir / "dataset.manifest.json", "generate", std::move(resolved), {csv});
    return kOk;
}

// ----------------------------------------------------------------- cluster

struct ClusterArgs {
    Common common;
    std::string data;
    std::string truth;
    std::string algo = "hybrid";
    std::string init = "omniscient";
    double eps = 0.001;
    std::size_t max_iter = 100;
    std::size_t k = 0;
};

// Pulls true centroids (and sigma) from a generate manifest.
void attach_truth(hkm_dataset* ds, const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) raise(kIoError, "cannot open truth manifest '" + manifest_path.string() + "'");
    json m;
    try {
        m = json::parse(in);
        const json& cfg = m.at("config");
        const auto centroids = cfg.at("true_centroids").get<std::vector<std::vector<double>>>();
        if (centroids.empty()) raise(kValidation, "true_centroids: empty in manifest");
        std::vector<double> flat;
        for (const auto& c : centroids) flat.insert(flat.end(), c.begin(), c.end());
        check(hkm_dataset_set_true_centroids(ds, flat.data(), centroids.size(), centroids.front().size()));
        if (cfg.contains("sigma")) check(hkm_dataset_set_sigma(ds, cfg.at("sigma").get<double>()));
    } catch (const json::exception& e) {
        raise(kIoError, "truth manifest '" + manifest_path.string() + "': " + e.what());
    }
}

int cmd_cluster(const CLI::App& cmd, const ClusterArgs& a) {
    const json cfg = load_config(a.common.config_path);
    const std::string data = resolve(cmd, "--data", cfg, "data", a.data);
    std::string truth = resolve(cmd, "--truth", cfg, "truth", a.truth);
    const std::string algo_name = resolve(cmd, "--algo", cfg, "algorithm", a.algo);
    const std::string init_name = resolve(cmd, "--init", cfg, "init", a.init);
    const double eps = resolve(cmd, "--eps", cfg, "eps", a.eps);
    const std::size_t max_iter = resolve(cmd, "--max-iter", cfg, "max_iter", a.max_iter);
    const std::size_t k = resolve(cmd, "--k", cfg, "k", a.k);
    const std::uint64_t seed = resolve(cmd, "--seed", cfg, "seed", a.common.seed);
    if (data.empty()) raise(kValidation, "data: a dataset CSV is required (--data)");

    hkm_algorithm algo;
    check(hkm_algorithm_parse(algo_name.c_str(), &algo));
    hkm_init init;
    check(hkm_init_parse(init_name.c_str(), &init));

    Dataset ds;
    check(hkm_dataset_read_csv(data.c_str(), k, ds.out()));
    if (truth.empty()) {
        const fs::path sidecar = fs::path(data).replace_extension(".manifest.json");
        if (fs::exists(sidecar)) truth = sidecar.string();
    }
    if (!truth.empty()) attach_truth(ds.get(), truth);
    if (init == HKM_INIT_OMNISCIENT && hkm_dataset_true_centroid_count(ds.get()) == 0) {
        raise(kValidation, "init: omniscient needs true centroids (--truth manifest)");
    }

    Result result;
    check(hkm_cluster(ds.get(), algo, init, eps, max_iter, seed, result.out()));

    const fs::path dir = prepare_out_dir(a.common.out_dir);
    const std::string stem = std::string("result_") + hkm_algorithm_name(algo) + "_" + hkm_init_name(init);
    const fs::path out = dir / (stem + ".json");
    check(hkm_result_write_json(result.get(), out.string().c_str()));

    hkm_score score;
    check(hkm_result_score(result.get(), ds.get(), &score));
    const bool converged = hkm_result_converged(result.get()) != 0;
    std::cerr << hkm_algorithm_name(algo) << " init=" << hkm_init_name(init)
              << " iterations=" << hkm_result_iterations(result.get()) << " converged=" << (converged ? "yes" : "no")
              << " mp_raw=" << g6(score.mp_raw) << " mp_aligned=" << g6(score.mp_aligned) << '\n';

    json resolved;
    resolved["data"] = data;
    resolved["truth"] = truth;
    resolved["algorithm"] = hkm_algorithm_name(algo);
    resolved["init"] = hkm_init_name(init);
    resolved["eps"] = eps;
    resolved["max_iter"] = max_iter;
    resolved["k"] = hkm_dataset_k(ds.get());
    resolved["seed"] = seed;
    resolved["mp_raw"] = score.mp_raw;
    resolved["mp_aligned"] = score.mp_aligned;
    write_manifest(dir / (stem + ".manifest.json"), "cluster", std::move(resolved), {out});
    return converged ? kOk : kIterationCap;
}

// ----------------------------------------------------- regime / demo / decay

struct RegimeArgs {
    Common common;
    std::string regime;
    std::size_t reps = 5000;
    std::vector<std::string> algos;
    std::vector<std::string> inits;
    std::vector<double> sweep;
    double eps = 0.001;
    std::size_t max_iter = 100;
};

int run_table_command(const CLI::App& cmd, const RegimeArgs& a, const std::string& command,
                      const std::string& file_stem) {
    const json cfg = load_config(a.common.config_path);
    hkm_regime regime;
    check(hkm_regime_parse(a.regime.c_str(), &regime));

    hkm_regime_config rc;
    hkm_regime_config_default(regime, &rc);
    rc.repetitions = resolve(cmd, "--reps", cfg, "repetitions", a.reps);
    rc.master_seed = resolve(cmd, "--seed", cfg, "master_seed", a.common.seed);
    rc.jobs = resolve(cmd, "--jobs", cfg, "jobs", a.common.jobs);
    rc.eps = resolve(cmd, "--eps", cfg, "eps", a.eps);
    rc.max_iter = resolve(cmd, "--max-iter", cfg, "max_iter", a.max_iter);
    std::vector<double> sweep = resolve(cmd, "--sweep", cfg, "sweep", a.sweep);
    if (sweep.empty()) {
        std::size_t len = 0;
        check(hkm_regime_default_sweep(regime, nullptr, 0, &len));
        sweep.resize(len);
        check(hkm_regime_default_sweep(regime, sweep.data(), sweep.size(), &len));
    }
    rc.sweep = sweep.data();
    rc.sweep_len = sweep.size();
    if (rc.repetitions < 2) raise(kValidation, "repetitions: must be >= 2");

    // A single name is accepted where a list is expected.
    auto names = [&](const char* flag, const char* key, const std::vector<std::string>& flag_value) {
        if (!given(cmd, flag) && cfg.contains(key) && cfg.at(key).is_string()) {
            return std::vector<std::string>{cfg.at(key).get<std::string>()};
        }
        return resolve(cmd, flag, cfg, key, flag_value);
    };
    std::vector<std::string> algo_names = names("--algo", "algorithms", a.algos);
    std::vector<std::string> init_names = names("--init", "init", a.inits);
    rc.algorithms = 0;
    for (const auto& n : algo_names) {
        hkm_algorithm al;
        check(hkm_algorithm_parse(n.c_str(), &al));
        rc.algorithms |= 1u << al;
    }
    rc.inits = 0;
    for (const auto& n : init_names) {
        hkm_init in;
        check(hkm_init_parse(n.c_str(), &in));
        rc.inits |= 1u << in;
    }

    Table table;
    check(hkm_run_regime(&rc, table.out()));

    const fs::path dir = prepare_out_dir(a.common.out_dir);
    const fs::path csv = dir / (file_stem + ".csv");
    check(hkm_table_write_csv(table.get(), csv.string().c_str()));

    // One summary line per sweep cell.
    const std::size_t rows = hkm_table_rows(table.get());
    std::optional<double> current;
    std::string line;
    auto flush = [&] {
        if (!line.empty()) std::cout << line << '\n';
        line.clear();
    };
    for (std::size_t i = 0; i < rows; ++i) {
        hkm_table_row r;
        check(hkm_table_row_get(table.get(), i, &r));
        if (std::string(r.metric_name) == "lambda" || std::string(r.metric_name) == "centroid_sq_error") continue;
        if (!current || *current != r.sweep_value) {
            flush();
            current = r.sweep_value;
            line = std::string(r.regime) + " " + r.sweep_name + "=" + g6(r.sweep_value) + ":";
        }
        line += std::string(" ") + r.algorithm + "/" + r.init + " " + r.metric_name + "=" + g6(r.mean) + "±" +
                g6(r.ci_half_width);
    }
    flush();
    if (regime == HKM_REGIME_DECAY) {
        double slope = 0.0;
        if (hkm_table_decay_slope(table.get(), &slope) == HKM_OK) {
            std::cout << "decay slope of log(MP) on SNR^2 (hybrid): " << g6(slope) << '\n';
        }
    }

    json resolved;
    resolved["regime"] = hkm_regime_name(regime);
    resolved["sweep_name"] = hkm_regime_sweep_name(regime);
    resolved["sweep"] = sweep;
    resolved["repetitions"] = rc.repetitions;
    resolved["master_seed"] = rc.master_seed;
    json algos = json::array();
    for (unsigned al = 0; al < 3; ++al) {
        if (rc.algorithms == 0 || (rc.algorithms & (1u << al))) algos.push_back(hkm_algorithm_name(static_cast<hkm_algorithm>(al)));
    }
    json inits = json::array();
    for (unsigned in = 0; in < 2; ++in) {
        if (rc.inits == 0 || (rc.inits & (1u << in))) inits.push_back(hkm_init_name(static_cast<hkm_init>(in)));
    }
    if (regime != HKM_REGIME_DECAY && regime != HKM_REGIME_L1_DEMO) {
        resolved["algorithms"] = std::move(algos);
        resolved["init"] = std::move(inits);
    }
    resolved["eps"] = rc.eps;
    resolved["max_iter"] = rc.max_iter;
    write_manifest(dir / (file_stem + ".manifest.json"), command, std::move(resolved), {csv});
    return kOk;
}

void add_regime_options(CLI::App& cmd, RegimeArgs& a, bool with_algos) {
    add_common(cmd, a.common);
    cmd.add_option("--reps", a.reps, "Repetitions per sweep cell");
    cmd.add_option("--sweep", a.sweep, "Sweep values (default: the regime's own sweep)")->delimiter(',');
    cmd.add_option("--eps", a.eps, "Stopping threshold on mean squared centroid shift");
    cmd.add_option("--max-iter", a.max_iter, "Iteration cap");
    if (with_algos) {
        cmd.add_option("--algo", a.algos, "kmeans|kmedians-l1|hybrid (repeatable; default all)")->delimiter(',');
        cmd.add_option("--init", a.inits, "random|omniscient (repeatable; default both)")->delimiter(',');
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust k-clustering and its Monte-Carlo benchmark harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hkm_version()));

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Draw a contaminated Gaussian mixture and write dataset.csv");
    add_common(*generate, gen.common);
    generate->add_option("--k", gen.k, "Clusters");
    generate->add_option("--d", gen.d, "Dimension");
    generate->add_option("--sigma", gen.sigma, "Per-coordinate noise sd");
    generate->add_option("--points-per-cluster", gen.points_per_cluster, "Points per cluster");
    generate->add_option("--centroid-radius", gen.centroid_radius, "Radius of the centroid sphere");
    generate->add_option("--outliers", gen.outlier_count, "Number of outliers");
    generate->add_option("--sigma-out", gen.sigma_out, "Outlier sd");
    generate->add_option("--outlier-center", gen.outlier_center, "Outlier centre (d values)")->delimiter(',');
    generate->add_option("--outlier-norm", gen.outlier_norm, "Outlier centre norm along a random direction");

    ClusterArgs cl;
    auto* cluster = app.add_subcommand("cluster", "Cluster a dataset CSV and write the result as JSON");
    add_common(*cluster, cl.common);
    cluster->add_option("--data", cl.data, "Dataset CSV");
    cluster->add_option("--truth", cl.truth, "Manifest with true centroids (default: <data>.manifest.json)");
    cluster->add_option("--algo", cl.algo, "kmeans|kmedians-l1|hybrid");
    cluster->add_option("--init", cl.init, "random|omniscient");
    cluster->add_option("--eps", cl.eps, "Stopping threshold");
    cluster->add_option("--max-iter", cl.max_iter, "Iteration cap");
    cluster->add_option("--k", cl.k, "Cluster count (default: from truth labels)");

    RegimeArgs rg;
    auto* regime = app.add_subcommand("regime", "Run one Monte-Carlo regime and write regime_<name>.csv");
    regime->add_option("regime", rg.regime, "outlier_variance|dimension|outlier_location|outlier_proportion|decay|l1_demo");
    add_regime_options(*regime, rg, true);

    RegimeArgs dm;
    dm.regime = "l1_demo";
    dm.reps = 1000;
    auto* demo = app.add_subcommand("demo", "Two-cluster l1 vs l2 labeling at the true centroids");
    add_regime_options(*demo, dm, false);

    RegimeArgs dc;
    dc.regime = "decay";
    dc.reps = 2000;
    auto* decay = app.add_subcommand("decay", "Mislabeling decay of the hybrid algorithm against SNR");
    add_regime_options(*decay, dc, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    g_verbose = gen.common.verbose || cl.common.verbose || rg.common.verbose || dm.common.verbose ||
                dc.common.verbose;
    try {
        if (*generate) return cmd_generate(*generate, gen);
        if (*cluster) return cmd_cluster(*cluster, cl);
        if (*regime) {
            const json cfg = load_config(rg.common.config_path);
            std::string name = regime->count("regime") ? rg.regime : cfg.value("regime", std::string());
            if (name.empty()) raise(kValidation, "regime: name required");
            rg.regime = name;
            hkm_regime parsed;
            check(hkm_regime_parse(name.c_str(), &parsed));
            return run_table_command(*regime, rg, "regime", std::string("regime_") + name);
        }
        if (*demo) return run_table_command(*demo, dm, "demo", "l1_demo");
        if (*decay) return run_table_command(*decay, dc, "decay", "decay");
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        if (e.code == kValidation) std::cerr << "run with --help for usage\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
