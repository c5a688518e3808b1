#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stochlab {

/// Scalar coefficient or density sampled along the radial coordinate.
using RealFn = std::function<double(double)>;

/// Bad user input (CLI/config); maps to exit code 64.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A stage of the pipeline failed numerically; maps to exit code 1.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_name(stage) {}
    std::string stage_name;
};

/// An operation was called outside its contract.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// log(1 - e^x) for x < 0, stable near both ends.
inline double log1mexp(double x) {
    if (x >= 0.0) return -kInf;  // caller guards; degenerate difference
    if (x > -0.6931471805599453) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

/// 5-point centered derivative; exact for quartics, noise ~ eps/h.
inline double deriv5(const RealFn& f, double r, double h) {
    return (8.0 * (f(r + h) - f(r - h)) - (f(r + 2 * h) - f(r - 2 * h))) / (12.0 * h);
}

inline double relative_diff(double a, double b) {
    double denom = std::max(std::fabs(a), std::fabs(b));
    return denom > 0.0 ? std::fabs(a - b) / denom : 0.0;
}

/// Concurrency cap: STOCHLAB_THREADS if set, else hardware concurrency.
std::size_t thread_cap();

/// Static partition of [0,n) over worker threads; tasks must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stochlab
