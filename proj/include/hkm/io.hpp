#pragma once

#include <iosfwd>
#include <string>

#include "hkm/algorithms.hpp"
#include "hkm/datagen.hpp"
#include "hkm/experiments.hpp"

namespace hkm {

/// Raised for unreadable/unwritable files and malformed file contents.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// point_id,coord_0..coord_{d-1},truth  (truth -1 marks an outlier).
/// Coordinates use 17 significant digits so a reload is exact.
void write_dataset_csv(const Dataset& dataset, std::ostream& out);
void write_dataset_csv(const Dataset& dataset, const std::string& path);

/// Rebuilds points and truth. true_centroids stay empty; k is taken from the
/// largest truth id unless `k_hint` is non-zero.
Dataset read_dataset_csv(std::istream& in, std::size_t k_hint = 0);
Dataset read_dataset_csv(const std::string& path, std::size_t k_hint = 0);

inline constexpr const char* kTableHeader =
    "regime,sweep_name,sweep_value,algorithm,init,metric_name,mean,ci_half_width,repetitions,master_seed";

/// Floats printed with 6 significant digits.
void write_table_csv(const RegimeTable& table, std::ostream& out);
void write_table_csv(const RegimeTable& table, const std::string& path);

/// centroids, labels, iterations, converged, shifts, empty_cluster.
std::string result_to_json(const ClusteringResult& result, int indent = 2);
void write_result_json(const ClusteringResult& result, const std::string& path);

std::string format_g6(double value);

}  // namespace hkm
