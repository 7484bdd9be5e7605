#pragma once

#include <limits>

#include "spherelab/lattice_function.hpp"

namespace spherelab {

// f * omega_k, omega_k the unnormalized indicator of {|u|^2 = k} in Z^d.
// Constants pass through symbolically as r_d(k) * c; box inputs are
// materialized. `rd` must be the d-dimensional table covering k.
LatticeFunction shell_convolve(const LatticeFunction& f, std::int64_t k,
                               const RepresentationTable& rd);

struct AverageResult {
    LatticeFunction values;
    std::int64_t lambda = 0;
    int arity = 0;
};

// T_lambda(f_1, ..., f_l)(x) =
//   N_l(lambda)^{-1} sum_{k_1+...+k_l = lambda} prod_i (f_i * omega_{k_i})(x),
// the shell-convolution route. N_l(lambda) = r_{l*d}(lambda) must be positive
// (an empty sphere makes the average undefined and throws). `rd` has dimension
// d, `rld` dimension l*d.
AverageResult multilinear_average(const std::vector<LatticeFunction>& fs, std::int64_t lambda,
                                  const RepresentationTable& rd, const RepresentationTable& rld);

// Oracle route: enumerate the tuples (u_1, ..., u_l) with sum |u_i|^2 = lambda
// directly. Refuses when the tuple count r_{l*d}(lambda) exceeds `guard`.
AverageResult multilinear_average_direct(const std::vector<LatticeFunction>& fs,
                                         std::int64_t lambda, const RepresentationTable& rd,
                                         const RepresentationTable& rld,
                                         std::int64_t guard = 10'000'000);

struct MaximalResult {
    LatticeFunction values;                 // pointwise max of |T_lambda| over the range
    std::vector<std::int64_t> skipped;      // lambdas with empty spheres
    std::vector<std::int64_t> used;         // lambdas actually included
    // arg-max lambda per support point (saturation diagnostics)
    std::unordered_map<LatticePoint, std::int64_t, LatticePointHash> argmax;
};

MaximalResult maximal_average(const std::vector<LatticeFunction>& fs,
                              const std::vector<std::int64_t>& lambda_range,
                              const RepresentationTable& rd, const RepresentationTable& rld);

// (sum |f|^p)^{1/p}; max for p = infinity. The constant function only admits
// the infinity norm; the box norm is the closed form side^{d/p}.
double lp_norm(const LatticeFunction& f, double p);

// ||T*(fs)||_r / prod_i ||f_i||_{p_i} over the given lambda range.
double norm_ratio(const std::vector<LatticeFunction>& fs, const std::vector<double>& p_list,
                  double r, const std::vector<std::int64_t>& lambda_range,
                  const RepresentationTable& rd, const RepresentationTable& rld);

inline constexpr double kInfOrder = std::numeric_limits<double>::infinity();

}  // namespace spherelab
