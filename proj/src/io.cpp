#include "hkm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hkm {

namespace {

std::string format_with(const char* fmt, double value) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, fmt, value == 0.0 ? 0.0 : value);  // no "-0"
    return std::string(buf, static_cast<std::size_t>(n));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

std::string format_g6(double value) { return format_with("%.6g", value); }

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
    const std::size_t d = dataset.dim();
    out << "point_id";
    for (std::size_t j = 0; j < d; ++j) out << ",coord_" << j;
    out << ",truth\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        out << i;
        for (double x : dataset.points[i]) out << ',' << format_with("%.17g", x);
        out << ',' << dataset.truth[i] << '\n';
    }
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
    auto out = open_out(path);
    write_dataset_csv(dataset, out);
    finish(out, path);
}

Dataset read_dataset_csv(std::istream& in, std::size_t k_hint) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("dataset CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.size() < 3 || header.front() != "point_id" || header.back() != "truth") {
        throw IoError("dataset CSV header must be point_id,coord_0..coord_{d-1},truth");
    }
    const std::size_t d = header.size() - 2;
    for (std::size_t j = 0; j < d; ++j) {
        if (header[j + 1] != "coord_" + std::to_string(j)) {
            throw IoError("dataset CSV header: expected coord_" + std::to_string(j));
        }
    }

    Dataset ds;
    int max_label = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line, ',');
        if (fields.size() != d + 2) {
            throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 2) + " fields");
        }
        Vector p(d);
        for (std::size_t j = 0; j < d; ++j) {
            p[j] = parse_field<double>(fields[j + 1], line_no);
            if (!std::isfinite(p[j])) throw IoError("line " + std::to_string(line_no) + ": non-finite coordinate");
        }
        const int z = parse_field<int>(fields.back(), line_no);
        if (z < kOutlier) throw IoError("line " + std::to_string(line_no) + ": truth must be >= -1");
        max_label = std::max(max_label, z);
        ds.points.push_back(std::move(p));
        ds.truth.push_back(z);
    }
    if (ds.points.empty()) throw IoError("dataset CSV has no rows");
    const auto k_seen = static_cast<std::size_t>(max_label + 1);
    if (k_hint != 0 && k_hint < k_seen) throw IoError("truth labels exceed k=" + std::to_string(k_hint));
    ds.mixture.k = k_hint != 0 ? k_hint : k_seen;
    ds.mixture.d = d;
    ds.outliers.count = ds.outlier_count();
    return ds;
}

Dataset read_dataset_csv(const std::string& path, std::size_t k_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_dataset_csv(in, k_hint);
}

void write_table_csv(const RegimeTable& table, std::ostream& out) {
    out << kTableHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.regime << ',' << r.sweep_name << ',' << format_g6(r.sweep_value) << ',' << r.algorithm << ','
            << r.init << ',' << r.metric_name << ',' << format_g6(r.mean) << ',' << format_g6(r.ci_half_width) << ','
            << r.repetitions << ',' << r.master_seed << '\n';
    }
}

void write_table_csv(const RegimeTable& table, const std::string& path) {
    auto out = open_out(path);
    write_table_csv(table, out);
    finish(out, path);
}

std::string result_to_json(const ClusteringResult& result, int indent) {
    nlohmann::ordered_json j;
    j["centroids"] = result.centroids;
    j["labels"] = result.labels;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    auto shifts = nlohmann::json::array();
    auto empties = nlohmann::json::array();
    for (const auto& rec : result.trace) {
        shifts.push_back(rec.shift);
        empties.push_back(rec.empty_cluster);
    }
    j["shifts"] = std::move(shifts);
    j["empty_cluster"] = std::move(empties);
    return j.dump(indent);
}

void write_result_json(const ClusteringResult& result, const std::string& path) {
    auto out = open_out(path);
    out << result_to_json(result) << '\n';
    finish(out, path);
}

}  // namespace hkm
