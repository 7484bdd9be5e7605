#pragma once

// Test-side oracles, implemented independently of the library paths they
// check: plain box-scan enumeration for counts and spheres, direct double
// enumeration for the exact symbol, and fixed-step quadrature for transforms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;

inline std::int64_t ifloor_sqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// counts[m] = #{u in Z^k : |u|^2 = m} for m <= lambda_max, by direct
// enumeration of the ball (budgeted descent, no convolution).
inline void enumerate_counts(int k, std::int64_t lambda_max, std::vector<std::int64_t>& counts,
                             int coord = 0, std::int64_t used = 0) {
    if (coord == 0) counts.assign(static_cast<std::size_t>(lambda_max) + 1, 0);
    if (coord == k) {
        ++counts[static_cast<std::size_t>(used)];
        return;
    }
    const std::int64_t r = ifloor_sqrt(lambda_max - used);
    for (std::int64_t v = -r; v <= r; ++v)
        enumerate_counts(k, lambda_max, counts, coord + 1, used + v * v);
}

inline std::vector<std::int64_t> brute_counts(int k, std::int64_t lambda_max) {
    std::vector<std::int64_t> counts;
    enumerate_counts(k, lambda_max, counts);
    return counts;
}

// All points of {|u|^2 = lambda} in Z^d by scanning the bounding box.
inline std::vector<std::vector<std::int64_t>> brute_sphere(int d, std::int64_t lambda) {
    std::vector<std::vector<std::int64_t>> out;
    const std::int64_t r = ifloor_sqrt(lambda);
    std::vector<std::int64_t> p(static_cast<std::size_t>(d), -r);
    while (true) {
        std::int64_t n2 = 0;
        for (auto v : p) n2 += v * v;
        if (n2 == lambda) out.push_back(p);
        int i = d - 1;
        while (i >= 0 && ++p[static_cast<std::size_t>(i)] > r) p[static_cast<std::size_t>(i--)] = -r;
        if (i < 0) break;
    }
    return out;
}

// N(lambda)^{-1} sum over pairs (u, v) with |u|^2 + |v|^2 = lambda of e(u.xi),
// both factors enumerated directly.
inline cplx brute_sphere_symbol(int d, std::int64_t lambda, const std::vector<double>& xi) {
    std::int64_t pairs = 0;
    cplx acc = 0.0;
    const std::int64_t r = ifloor_sqrt(lambda);
    std::vector<std::int64_t> u(static_cast<std::size_t>(d), -r);
    // v-shell sizes by residual norm
    std::vector<std::int64_t> vshell;
    enumerate_counts(d, lambda, vshell);
    while (true) {
        std::int64_t n2 = 0;
        for (auto c : u) n2 += c * c;
        if (n2 <= lambda && vshell[static_cast<std::size_t>(lambda - n2)] > 0) {
            double phase = 0.0;
            for (int i = 0; i < d; ++i) phase += static_cast<double>(u[static_cast<std::size_t>(i)]) * xi[static_cast<std::size_t>(i)];
            double a = 2.0 * M_PI * (phase - std::floor(phase));
            acc += static_cast<double>(vshell[static_cast<std::size_t>(lambda - n2)]) *
                   cplx{std::cos(a), std::sin(a)};
            pairs += vshell[static_cast<std::size_t>(lambda - n2)];
        }
        int i = d - 1;
        while (i >= 0 && ++u[static_cast<std::size_t>(i)] > r) u[static_cast<std::size_t>(i--)] = -r;
        if (i < 0) break;
    }
    return acc / static_cast<double>(pairs);
}

// Normalized surface transform of the unit circle: (1/2pi) int e^{-2pi i s cos a} da,
// trapezoid rule (periodic integrand, spectrally accurate).
inline cplx circle_measure_ft(double s, int nodes = 8192) {
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double a = 2.0 * M_PI * j / nodes;
        double phase = -2.0 * M_PI * s * std::cos(a);
        acc += cplx{std::cos(phase), std::sin(phase)};
    }
    return acc / static_cast<double>(nodes);
}

// Fixed-step composite Simpson for complex integrands (reference quadrature).
template <typename F>
cplx simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / (2 * panels);
    cplx acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace oracles
