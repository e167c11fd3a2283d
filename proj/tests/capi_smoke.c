/* Compiled as C to check the header is valid C and the library links without C++ glue. */
#include <stdio.h>
#include <string.h>

#include "hkm/hkm.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, \
              hkm_last_error());                                     \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  hkm_mixture_config m;
  hkm_outlier_config oc = {5, NULL, 0.0, 3.0};
  hkm_dataset *ds = NULL;
  hkm_result *r = NULL;
  hkm_score score;
  int labels[45];

  hkm_mixture_config_default(&m);
  m.k = 2;
  m.d = 2;
  m.points_per_cluster = 20;
  CHECK(hkm_dataset_generate(&m, &oc, 5, &ds) == HKM_OK);
  CHECK(hkm_dataset_size(ds) == 45);
  CHECK(hkm_cluster(ds, HKM_HYBRID, HKM_INIT_RANDOM, 0.001, 100, 5, &r) == HKM_OK);
  CHECK(hkm_result_labels(r, labels, 45) == HKM_OK);
  CHECK(hkm_result_score(r, ds, &score) == HKM_OK);
  CHECK(score.mp_aligned <= score.mp_raw);
  CHECK(strcmp(hkm_algorithm_name(HKM_KMEANS), "kmeans") == 0);
  hkm_result_free(r);
  hkm_dataset_free(ds);
  puts("ok");
  return 0;
}
