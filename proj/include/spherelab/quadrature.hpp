#pragma once

#include <functional>

#include "spherelab/common.hpp"

namespace spherelab {

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;  // absolute
    long evals = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    // Seed the interval with panels no wider than this before adapting.
    // <= 0 means a single panel.
    double initial_step = 0.0;
    long max_evals = 4'000'000;
};

// Adaptive Gauss-Kronrod (G7,K15) for complex integrands on [a,b].
// Throws quadrature_error when the budget is exhausted before the local
// error estimates meet the tolerance.
QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureOptions& opt = {});

}  // namespace spherelab
