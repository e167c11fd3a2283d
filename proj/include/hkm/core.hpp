#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkm {

/// A point in R^d. All vectors taking part in one computation share d.
using Vector = std::vector<double>;

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, empty input, index out of range, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for well-formed requests the library deliberately does not serve
/// (e.g. brute-force matching beyond k = 10).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Metric { L1, L2, L2Squared };

const char* to_string(Metric metric);

double distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// t-th LARGEST element, 1-indexed, duplicates counted with multiplicity.
double order_statistic(std::span<const double> values, std::size_t t);

/// The ceil(n/2)-th largest element. For even n this is the upper of the two
/// middle values, never their average, so the result is always a data value.
double median_scalar(std::span<const double> values);

Vector coordinatewise_median(std::span<const Vector> points);
Vector coordinatewise_mean(std::span<const Vector> points);

}  // namespace hkm
