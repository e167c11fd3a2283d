#include "hkm/hkm.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "hkm/algorithms.hpp"
#include "hkm/datagen.hpp"
#include "hkm/experiments.hpp"
#include "hkm/io.hpp"
#include "hkm/metrics.hpp"
#include "hkm/version.hpp"

struct hkm_dataset {
    hkm::Dataset value;
};

struct hkm_result {
    hkm::ClusteringResult value;
};

struct hkm_table {
    hkm::RegimeTable value;
};

namespace {

thread_local std::string g_last_error;

hkm_status fail(hkm_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename Fn>
hkm_status guarded(Fn&& fn) noexcept {
    try {
        g_last_error.clear();
        return fn();
    } catch (const hkm::ContractViolation& e) {
        return fail(HKM_E_INVALID, e.what());
    } catch (const hkm::IoError& e) {
        return fail(HKM_E_IO, e.what());
    } catch (const hkm::Unsupported& e) {
        return fail(HKM_E_UNSUPPORTED, e.what());
    } catch (const std::bad_alloc&) {
        return fail(HKM_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(HKM_E_INTERNAL, e.what());
    } catch (...) {
        return fail(HKM_E_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* message) {
    if (!ok) throw hkm::ContractViolation(message);
}

hkm::Preset to_preset(hkm_algorithm a) {
    switch (a) {
        case HKM_KMEANS: return hkm::Preset::KMeans;
        case HKM_KMEDIANS_L1: return hkm::Preset::KMediansL1;
        case HKM_HYBRID: return hkm::Preset::KMediansHybrid;
    }
    throw hkm::ContractViolation("algorithm: unknown value");
}

hkm::InitStrategy::Kind to_kind(hkm_init i) {
    switch (i) {
        case HKM_INIT_RANDOM: return hkm::InitStrategy::Kind::Random;
        case HKM_INIT_OMNISCIENT: return hkm::InitStrategy::Kind::Omniscient;
    }
    throw hkm::ContractViolation("init: unknown value");
}

bool valid_regime(hkm_regime r) { return r >= HKM_REGIME_OUTLIER_VARIANCE && r <= HKM_REGIME_L1_DEMO; }

hkm::Regime to_regime(hkm_regime r) {
    if (!valid_regime(r)) throw hkm::ContractViolation("regime: unknown value");
    return static_cast<hkm::Regime>(r);
}

void copy_centroids(const std::vector<hkm::Vector>& centroids, double* out, std::size_t capacity) {
    const std::size_t d = centroids.empty() ? 0 : centroids.front().size();
    require(out != nullptr || centroids.empty(), "out: must not be NULL");
    require(capacity >= centroids.size() * d, "capacity: buffer too small for k*d values");
    for (const auto& c : centroids) out = std::copy(c.begin(), c.end(), out);
}

}  // namespace

extern "C" {

const char* hkm_version(void) { return hkm::kVersion; }

const char* hkm_last_error(void) { return g_last_error.c_str(); }

void hkm_mixture_config_default(hkm_mixture_config* out) {
    if (!out) return;
    const hkm::MixtureConfig def;
    *out = {def.k, def.d, def.sigma, def.points_per_cluster, def.centroid_radius};
}

hkm_status hkm_dataset_generate(const hkm_mixture_config* mixture, const hkm_outlier_config* outliers, uint64_t seed,
                                hkm_dataset** out) {
    return guarded([&] {
        require(mixture && out, "mixture/out: must not be NULL");
        *out = nullptr;
        hkm::MixtureConfig config;
        config.k = mixture->k;
        config.d = mixture->d;
        config.sigma = mixture->sigma;
        config.points_per_cluster = mixture->points_per_cluster;
        config.centroid_radius = mixture->centroid_radius;
        config.validate();

        hkm::OutlierConfig oc;
        if (outliers) {
            oc.count = outliers->count;
            oc.sigma_out = outliers->sigma_out;
            if (outliers->center) oc.center.assign(outliers->center, outliers->center + config.d);
            oc.validate(config.d);
            require(outliers->center || (outliers->center_norm >= 0.0 && std::isfinite(outliers->center_norm)),
                    "center_norm: must be finite and >= 0");
        }

        hkm::Rng rng = hkm::derive_rng(seed, {});
        hkm::Dataset ds = hkm::generate_mixture(config, rng);
        if (outliers && !outliers->center && outliers->center_norm > 0.0) {
            oc.center = hkm::outlier_center_at_radius(config.d, outliers->center_norm, rng);
        }
        ds = hkm::inject_outliers(std::move(ds), oc, rng);
        ds.seed = seed;
        *out = new hkm_dataset{std::move(ds)};
        return HKM_OK;
    });
}

hkm_status hkm_dataset_read_csv(const char* path, size_t k_hint, hkm_dataset** out) {
    return guarded([&] {
        require(path && out, "path/out: must not be NULL");
        *out = nullptr;
        auto ds = hkm::read_dataset_csv(std::string(path), k_hint);
        *out = new hkm_dataset{std::move(ds)};
        return HKM_OK;
    });
}

hkm_status hkm_dataset_write_csv(const hkm_dataset* dataset, const char* path) {
    return guarded([&] {
        require(dataset && path, "dataset/path: must not be NULL");
        hkm::write_dataset_csv(dataset->value, std::string(path));
        return HKM_OK;
    });
}

void hkm_dataset_free(hkm_dataset* dataset) { delete dataset; }

size_t hkm_dataset_size(const hkm_dataset* dataset) { return dataset ? dataset->value.size() : 0; }
size_t hkm_dataset_dim(const hkm_dataset* dataset) { return dataset ? dataset->value.dim() : 0; }
size_t hkm_dataset_k(const hkm_dataset* dataset) { return dataset ? dataset->value.k() : 0; }
size_t hkm_dataset_outlier_count(const hkm_dataset* dataset) { return dataset ? dataset->value.outlier_count() : 0; }
size_t hkm_dataset_true_centroid_count(const hkm_dataset* dataset) {
    return dataset ? dataset->value.true_centroids.size() : 0;
}

hkm_status hkm_dataset_true_centroids(const hkm_dataset* dataset, double* out, size_t capacity) {
    return guarded([&] {
        require(dataset, "dataset: must not be NULL");
        copy_centroids(dataset->value.true_centroids, out, capacity);
        return HKM_OK;
    });
}

hkm_status hkm_dataset_set_true_centroids(hkm_dataset* dataset, const double* centroids, size_t k, size_t d) {
    return guarded([&] {
        require(dataset && centroids, "dataset/centroids: must not be NULL");
        auto& ds = dataset->value;
        require(d == ds.dim(), "d: does not match the dataset dimension");
        require(k == ds.k(), "k: does not match the dataset cluster count");
        std::vector<hkm::Vector> c;
        for (std::size_t h = 0; h < k; ++h) {
            c.emplace_back(centroids + h * d, centroids + (h + 1) * d);
            for (double x : c.back()) require(std::isfinite(x), "centroids: coordinates must be finite");
        }
        ds.true_centroids = std::move(c);
        return HKM_OK;
    });
}

hkm_status hkm_dataset_set_sigma(hkm_dataset* dataset, double sigma) {
    return guarded([&] {
        require(dataset, "dataset: must not be NULL");
        require(sigma > 0.0 && std::isfinite(sigma), "sigma: must be a positive finite number");
        dataset->value.mixture.sigma = sigma;
        return HKM_OK;
    });
}

hkm_status hkm_dataset_summary_get(const hkm_dataset* dataset, hkm_dataset_summary* out) {
    return guarded([&] {
        require(dataset && out, "dataset/out: must not be NULL");
        const auto& ds = dataset->value;
        std::vector<std::size_t> sizes(ds.k(), 0);
        for (int z : ds.truth) {
            if (z != hkm::kOutlier) ++sizes.at(static_cast<std::size_t>(z));
        }
        std::size_t smallest = std::numeric_limits<std::size_t>::max();
        std::size_t inliers = 0;
        for (auto n : sizes) {
            smallest = std::min(smallest, n);
            inliers += n;
        }
        out->alpha = inliers ? static_cast<double>(smallest) / static_cast<double>(inliers) : 0.0;
        out->delta = std::numeric_limits<double>::quiet_NaN();
        out->snr = std::numeric_limits<double>::quiet_NaN();
        if (ds.true_centroids.size() >= 2) {
            out->delta = hkm::min_separation(ds.true_centroids);
            if (ds.mixture.sigma > 0.0) out->snr = hkm::snr(out->delta, ds.mixture.sigma);
        }
        return HKM_OK;
    });
}

hkm_status hkm_cluster(const hkm_dataset* dataset, hkm_algorithm algorithm, hkm_init init, double eps,
                       size_t max_iter, uint64_t seed, hkm_result** out) {
    return guarded([&] {
        require(dataset && out, "dataset/out: must not be NULL");
        *out = nullptr;
        const auto spec = hkm::spec_of(to_preset(algorithm));
        hkm::Rng rng = hkm::derive_rng(seed, {});
        auto result = hkm::run(dataset->value, spec, hkm::InitStrategy{to_kind(init), {}}, eps, max_iter, rng);
        *out = new hkm_result{std::move(result)};
        return HKM_OK;
    });
}

void hkm_result_free(hkm_result* result) { delete result; }

int hkm_result_converged(const hkm_result* result) { return result && result->value.converged ? 1 : 0; }
size_t hkm_result_iterations(const hkm_result* result) { return result ? result->value.iterations : 0; }
size_t hkm_result_k(const hkm_result* result) { return result ? result->value.centroids.size() : 0; }

hkm_status hkm_result_labels(const hkm_result* result, int* out, size_t capacity) {
    return guarded([&] {
        require(result && out, "result/out: must not be NULL");
        const auto& labels = result->value.labels;
        require(capacity >= labels.size(), "capacity: buffer too small for the labels");
        std::copy(labels.begin(), labels.end(), out);
        return HKM_OK;
    });
}

hkm_status hkm_result_centroids(const hkm_result* result, double* out, size_t capacity) {
    return guarded([&] {
        require(result, "result: must not be NULL");
        copy_centroids(result->value.centroids, out, capacity);
        return HKM_OK;
    });
}

hkm_status hkm_result_write_json(const hkm_result* result, const char* path) {
    return guarded([&] {
        require(result && path, "result/path: must not be NULL");
        hkm::write_result_json(result->value, std::string(path));
        return HKM_OK;
    });
}

hkm_status hkm_result_score(const hkm_result* result, const hkm_dataset* dataset, hkm_score* out) {
    return guarded([&] {
        require(result && dataset && out, "result/dataset/out: must not be NULL");
        const auto& r = result->value;
        const auto& ds = dataset->value;
        require(r.labels.size() == ds.size(), "result: label count does not match the dataset");
        const std::size_t k = r.centroids.size();
        out->mp_raw = hkm::mislabeling_raw(r.labels, ds.truth);
        out->mp_aligned = hkm::mislabeling_aligned(r.labels, ds.truth, k).mp;
        const auto counts = hkm::confusion(r.labels, ds.truth, k);
        hkm::CentroidError err;
        err.per_cluster_sq.assign(k, 0.0);
        err.lambda = std::numeric_limits<double>::quiet_NaN();
        if (ds.true_centroids.size() == k && k >= 2) {
            err = hkm::centroid_error(r.centroids, ds.true_centroids, hkm::min_separation(ds.true_centroids));
        }
        const auto diag = hkm::diagnostics(counts, err, ds);
        out->lambda = diag.lambda;
        out->H = diag.H;
        out->G = diag.G;
        return HKM_OK;
    });
}

const char* hkm_algorithm_name(hkm_algorithm algorithm) {
    switch (algorithm) {
        case HKM_KMEANS: return "kmeans";
        case HKM_KMEDIANS_L1: return "kmedians-l1";
        case HKM_HYBRID: return "hybrid";
    }
    return nullptr;
}

hkm_status hkm_algorithm_parse(const char* name, hkm_algorithm* out) {
    return guarded([&] {
        require(name && out, "name/out: must not be NULL");
        const auto p = hkm::parse_preset(name);
        if (!p) return fail(HKM_E_INVALID, std::string("algorithm: unknown '") + name +
                                               "' (expected kmeans, kmedians-l1, hybrid)");
        *out = static_cast<hkm_algorithm>(*p);
        return HKM_OK;
    });
}

const char* hkm_init_name(hkm_init init) {
    switch (init) {
        case HKM_INIT_RANDOM: return "random";
        case HKM_INIT_OMNISCIENT: return "omniscient";
    }
    return nullptr;
}

hkm_status hkm_init_parse(const char* name, hkm_init* out) {
    return guarded([&] {
        require(name && out, "name/out: must not be NULL");
        const std::string_view s(name);
        if (s == "random") *out = HKM_INIT_RANDOM;
        else if (s == "omniscient") *out = HKM_INIT_OMNISCIENT;
        else return fail(HKM_E_INVALID, "init: unknown '" + std::string(s) + "' (expected random, omniscient)");
        return HKM_OK;
    });
}

const char* hkm_regime_name(hkm_regime regime) {
    return valid_regime(regime) ? hkm::name_of(static_cast<hkm::Regime>(regime)).data() : nullptr;
}

const char* hkm_regime_sweep_name(hkm_regime regime) {
    return valid_regime(regime) ? hkm::sweep_name(static_cast<hkm::Regime>(regime)).data() : nullptr;
}

hkm_status hkm_regime_parse(const char* name, hkm_regime* out) {
    return guarded([&] {
        require(name && out, "name/out: must not be NULL");
        const auto r = hkm::parse_regime(name);
        if (!r) {
            std::string valid;
            for (auto each : hkm::kAllRegimes) {
                if (!valid.empty()) valid += ", ";
                valid += hkm::name_of(each);
            }
            return fail(HKM_E_INVALID, "regime: unknown '" + std::string(name) + "' (valid: " + valid + ")");
        }
        *out = static_cast<hkm_regime>(*r);
        return HKM_OK;
    });
}

hkm_status hkm_regime_default_sweep(hkm_regime regime, double* out, size_t capacity, size_t* len) {
    return guarded([&] {
        require(len != nullptr, "len: must not be NULL");
        const auto sweep = hkm::default_sweep(to_regime(regime));
        *len = sweep.size();
        require(out != nullptr || capacity == 0, "out: must not be NULL when capacity > 0");
        std::copy_n(sweep.begin(), std::min(capacity, sweep.size()), out);
        return HKM_OK;
    });
}

void hkm_regime_config_default(hkm_regime regime, hkm_regime_config* out) {
    if (!out) return;
    const hkm::RegimeSpec def;
    *out = {regime, nullptr, 0, def.repetitions, def.master_seed, 0u, 0u, def.eps, def.max_iter, def.jobs};
}

hkm_status hkm_run_regime(const hkm_regime_config* config, hkm_table** out) {
    return guarded([&] {
        require(config && out, "config/out: must not be NULL");
        *out = nullptr;
        hkm::RegimeSpec spec;
        spec.regime = to_regime(config->regime);
        require(config->sweep || config->sweep_len == 0, "sweep: NULL with non-zero length");
        if (config->sweep_len) spec.sweep.assign(config->sweep, config->sweep + config->sweep_len);
        spec.repetitions = config->repetitions;
        spec.master_seed = config->master_seed;
        spec.eps = config->eps;
        spec.max_iter = config->max_iter;
        spec.jobs = config->jobs;
        if (config->algorithms != 0) {
            require((config->algorithms & ~7u) == 0, "algorithms: unknown bits in mask");
            spec.algorithms.clear();
            for (unsigned a = 0; a < 3; ++a) {
                if (config->algorithms & (1u << a)) spec.algorithms.push_back(to_preset(static_cast<hkm_algorithm>(a)));
            }
        }
        if (config->inits != 0) {
            require((config->inits & ~3u) == 0, "inits: unknown bits in mask");
            spec.inits.clear();
            for (unsigned i = 0; i < 2; ++i) {
                if (config->inits & (1u << i)) spec.inits.push_back(to_kind(static_cast<hkm_init>(i)));
            }
        }
        *out = new hkm_table{hkm::run_regime(spec)};
        return HKM_OK;
    });
}

void hkm_table_free(hkm_table* table) { delete table; }

size_t hkm_table_rows(const hkm_table* table) { return table ? table->value.rows.size() : 0; }

hkm_status hkm_table_row_get(const hkm_table* table, size_t index, hkm_table_row* out) {
    return guarded([&] {
        require(table && out, "table/out: must not be NULL");
        require(index < table->value.rows.size(), "index: out of range");
        const auto& r = table->value.rows[index];
        *out = {r.regime.c_str(), r.sweep_name.c_str(), r.sweep_value, r.algorithm.c_str(), r.init.c_str(),
                r.metric_name.c_str(), r.mean, r.ci_half_width, r.repetitions, r.master_seed};
        return HKM_OK;
    });
}

hkm_status hkm_table_write_csv(const hkm_table* table, const char* path) {
    return guarded([&] {
        require(table && path, "table/path: must not be NULL");
        hkm::write_table_csv(table->value, std::string(path));
        return HKM_OK;
    });
}

hkm_status hkm_table_decay_slope(const hkm_table* table, double* out) {
    return guarded([&] {
        require(table && out, "table/out: must not be NULL");
        *out = hkm::decay_slope(table->value);
        return HKM_OK;
    });
}

}  // extern "C"
