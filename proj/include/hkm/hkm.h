/*
 * hkm: robust k-clustering (k-means, k-medians-l1, k-medians-hybrid) and the
 * Monte-Carlo benchmark harness around it, as a plain C interface.
 *
 * Conventions
 *   - Every fallible call returns hkm_status. On failure the thread-local
 *     message from hkm_last_error() describes the problem.
 *   - Objects are opaque handles created by the library and released with the
 *     matching *_free function. Passing NULL to *_free is a no-op.
 *   - Cluster ids are 0-based; ground-truth id -1 marks an outlier.
 *   - Centroid buffers are row-major k x d.
 */
#ifndef HKM_H
#define HKM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HKM_BUILDING_LIBRARY)
#    define HKM_API __declspec(dllexport)
#  else
#    define HKM_API __declspec(dllimport)
#  endif
#else
#  define HKM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hkm_status {
  HKM_OK = 0,
  HKM_E_INVALID = 1,     /* precondition or config validation failure */
  HKM_E_IO = 2,          /* file could not be read/written or parsed */
  HKM_E_UNSUPPORTED = 3, /* e.g. k above the brute-force matching limit */
  HKM_E_INTERNAL = 4
} hkm_status;

typedef enum hkm_algorithm {
  HKM_KMEANS = 0,      /* l2^2 labels, coordinatewise mean */
  HKM_KMEDIANS_L1 = 1, /* l1 labels, coordinatewise median */
  HKM_HYBRID = 2       /* l2 labels, coordinatewise median */
} hkm_algorithm;

typedef enum hkm_init { HKM_INIT_RANDOM = 0, HKM_INIT_OMNISCIENT = 1 } hkm_init;

typedef enum hkm_regime {
  HKM_REGIME_OUTLIER_VARIANCE = 0,
  HKM_REGIME_DIMENSION = 1,
  HKM_REGIME_OUTLIER_LOCATION = 2,
  HKM_REGIME_OUTLIER_PROPORTION = 3,
  HKM_REGIME_DECAY = 4,
  HKM_REGIME_L1_DEMO = 5
} hkm_regime;

typedef struct hkm_dataset hkm_dataset;
typedef struct hkm_result hkm_result;
typedef struct hkm_table hkm_table;

typedef struct hkm_mixture_config {
  size_t k;
  size_t d;
  double sigma;
  size_t points_per_cluster;
  double centroid_radius;
} hkm_mixture_config;

typedef struct hkm_outlier_config {
  size_t count;
  const double *center; /* d values, or NULL */
  double center_norm;   /* when center is NULL: random direction at this norm (0 = origin) */
  double sigma_out;
} hkm_outlier_config;

typedef struct hkm_dataset_summary {
  double delta; /* minimum pairwise separation of the true centroids */
  double snr;   /* delta / (2 sigma) */
  double alpha; /* smallest true-cluster fraction of the non-outlier points */
} hkm_dataset_summary;

typedef struct hkm_score {
  double mp_raw;
  double mp_aligned;
  double lambda; /* NaN when the dataset has no true centroids */
  double H;
  double G;
} hkm_score;

typedef struct hkm_regime_config {
  hkm_regime regime;
  const double *sweep; /* NULL/0 length selects the regime's default sweep */
  size_t sweep_len;
  size_t repetitions;
  uint64_t master_seed;
  unsigned algorithms; /* bitmask of (1u << hkm_algorithm); 0 = all */
  unsigned inits;      /* bitmask of (1u << hkm_init); 0 = both */
  double eps;
  size_t max_iter;
  size_t jobs; /* 0 = hardware concurrency */
} hkm_regime_config;

typedef struct hkm_table_row {
  const char *regime;
  const char *sweep_name;
  double sweep_value;
  const char *algorithm;
  const char *init;
  const char *metric_name;
  double mean;
  double ci_half_width;
  size_t repetitions;
  uint64_t master_seed;
} hkm_table_row;

HKM_API const char *hkm_version(void);
HKM_API const char *hkm_last_error(void);

HKM_API void hkm_mixture_config_default(hkm_mixture_config *out);

/* ---- datasets ---------------------------------------------------------- */

/* outliers may be NULL. */
HKM_API hkm_status hkm_dataset_generate(const hkm_mixture_config *mixture, const hkm_outlier_config *outliers,
                                        uint64_t seed, hkm_dataset **out);
/* k_hint 0 infers k from the largest truth id. */
HKM_API hkm_status hkm_dataset_read_csv(const char *path, size_t k_hint, hkm_dataset **out);
HKM_API hkm_status hkm_dataset_write_csv(const hkm_dataset *dataset, const char *path);
HKM_API void hkm_dataset_free(hkm_dataset *dataset);

HKM_API size_t hkm_dataset_size(const hkm_dataset *dataset);
HKM_API size_t hkm_dataset_dim(const hkm_dataset *dataset);
HKM_API size_t hkm_dataset_k(const hkm_dataset *dataset);
HKM_API size_t hkm_dataset_outlier_count(const hkm_dataset *dataset);
/* Zero when the dataset was loaded from CSV without calling set_true_centroids. */
HKM_API size_t hkm_dataset_true_centroid_count(const hkm_dataset *dataset);

/* Copies k*d values; capacity is in doubles. */
HKM_API hkm_status hkm_dataset_true_centroids(const hkm_dataset *dataset, double *out, size_t capacity);
HKM_API hkm_status hkm_dataset_set_true_centroids(hkm_dataset *dataset, const double *centroids, size_t k, size_t d);
HKM_API hkm_status hkm_dataset_set_sigma(hkm_dataset *dataset, double sigma);
HKM_API hkm_status hkm_dataset_summary_get(const hkm_dataset *dataset, hkm_dataset_summary *out);

/* ---- clustering -------------------------------------------------------- */

HKM_API hkm_status hkm_cluster(const hkm_dataset *dataset, hkm_algorithm algorithm, hkm_init init, double eps,
                               size_t max_iter, uint64_t seed, hkm_result **out);
HKM_API void hkm_result_free(hkm_result *result);

HKM_API int hkm_result_converged(const hkm_result *result);
HKM_API size_t hkm_result_iterations(const hkm_result *result);
HKM_API size_t hkm_result_k(const hkm_result *result);
HKM_API hkm_status hkm_result_labels(const hkm_result *result, int *out, size_t capacity);
HKM_API hkm_status hkm_result_centroids(const hkm_result *result, double *out, size_t capacity);
HKM_API hkm_status hkm_result_write_json(const hkm_result *result, const char *path);
/* Scores a result against the dataset it was computed on. */
HKM_API hkm_status hkm_result_score(const hkm_result *result, const hkm_dataset *dataset, hkm_score *out);

/* ---- experiments ------------------------------------------------------- */

HKM_API const char *hkm_algorithm_name(hkm_algorithm algorithm);
HKM_API hkm_status hkm_algorithm_parse(const char *name, hkm_algorithm *out);
HKM_API const char *hkm_init_name(hkm_init init);
HKM_API hkm_status hkm_init_parse(const char *name, hkm_init *out);
HKM_API const char *hkm_regime_name(hkm_regime regime);
HKM_API const char *hkm_regime_sweep_name(hkm_regime regime);
HKM_API hkm_status hkm_regime_parse(const char *name, hkm_regime *out);

/* Writes up to capacity values; *len receives the full sweep length. */
HKM_API hkm_status hkm_regime_default_sweep(hkm_regime regime, double *out, size_t capacity, size_t *len);
HKM_API void hkm_regime_config_default(hkm_regime regime, hkm_regime_config *out);

HKM_API hkm_status hkm_run_regime(const hkm_regime_config *config, hkm_table **out);
HKM_API void hkm_table_free(hkm_table *table);
HKM_API size_t hkm_table_rows(const hkm_table *table);
/* String fields stay valid until the table is freed. */
HKM_API hkm_status hkm_table_row_get(const hkm_table *table, size_t index, hkm_table_row *out);
HKM_API hkm_status hkm_table_write_csv(const hkm_table *table, const char *path);
/* Slope of log(mean MP) on SNR^2 over the table's hybrid rows (decay tables). */
HKM_API hkm_status hkm_table_decay_slope(const hkm_table *table, double *out);

#ifdef __cplusplus
}
#endif

#endif /* HKM_H */
