#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherelab {

inline constexpr const char* kVersion = "spherelab 0.1.0";
inline constexpr int kMaxDim = 8;

using cplx = std::complex<double>;

// Guard/resource violations (enumeration budgets, dimension caps, cache limits).
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature failed to reach the requested tolerance within budget.
struct quadrature_error : std::runtime_error {
    quadrature_error(const std::string& what, double achieved_rel_error, long evals)
        : std::runtime_error(what), achieved_rel_error(achieved_rel_error), evals(evals) {}
    double achieved_rel_error;
    long evals;
};

// e(x) = exp(2*pi*i*x), with the argument reduced mod 1 before the trig calls.
inline cplx unit_phase(double x) {
    double t = x - std::floor(x);
    double a = 2.0 * M_PI * t;
    return {std::cos(a), std::sin(a)};
}

// Checked 64-bit arithmetic; representation counts must fail loudly, not wrap.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("64-bit overflow in count arithmetic");
    return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("64-bit overflow in count arithmetic");
    return r;
}

// Fixed-order pairwise summation: result depends only on element order.
double pairwise_sum(std::span<const double> v);

inline std::int64_t isqrt_floor(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Shortest %.17g-style representation that round-trips; used by all file writers
// so that identical inputs give identical bytes.
std::string format_double(double v);

}  // namespace spherelab
