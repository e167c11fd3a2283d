#include "hkm/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hkm {

const char* to_string(Metric metric) {
    switch (metric) {
        case Metric::L1: return "l1";
        case Metric::L2: return "l2";
        case Metric::L2Squared: return "l2sq";
    }
    return "?";
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
    if (a.size() != b.size()) {
        throw ContractViolation("distance: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
    }
    double acc = 0.0;
    if (metric == Metric::L1) {
        for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]);
        return acc;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return metric == Metric::L2 ? std::sqrt(acc) : acc;
}

double order_statistic(std::span<const double> values, std::size_t t) {
    if (values.empty()) throw ContractViolation("order_statistic: empty input");
    if (t < 1 || t > values.size()) {
        throw ContractViolation("order_statistic: t=" + std::to_string(t) + " outside [1, " +
                                std::to_string(values.size()) + "]");
    }
    std::vector<double> scratch(values.begin(), values.end());
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(t - 1);
    std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>());
    return *nth;
}

double median_scalar(std::span<const double> values) {
    if (values.empty()) throw ContractViolation("median_scalar: empty input");
    return order_statistic(values, (values.size() + 1) / 2);
}

namespace {

std::size_t common_dimension(std::span<const Vector> points, const char* who) {
    if (points.empty()) throw ContractViolation(std::string(who) + ": empty point set");
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) throw ContractViolation(std::string(who) + ": mixed dimensions");
    }
    return d;
}

}  // namespace

Vector coordinatewise_median(std::span<const Vector> points) {
    const std::size_t d = common_dimension(points, "coordinatewise_median");
    const std::size_t rank = (points.size() + 1) / 2;
    Vector out(d);
    std::vector<double> column(points.size());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < points.size(); ++i) column[i] = points[i][j];
        auto nth = column.begin() + static_cast<std::ptrdiff_t>(rank - 1);
        std::nth_element(column.begin(), nth, column.end(), std::greater<>());
        out[j] = *nth;
    }
    return out;
}

Vector coordinatewise_mean(std::span<const Vector> points) {
    const std::size_t d = common_dimension(points, "coordinatewise_mean");
    Vector out(d, 0.0);
    for (const auto& p : points) {
        for (std::size_t j = 0; j < d; ++j) out[j] += p[j];
    }
    const double n = static_cast<double>(points.size());
    for (auto& x : out) x /= n;
    return out;
}

}  // namespace hkm
