#pragma once

#include <span>
#include <utility>

namespace spherelab {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int n_used = 0;
    bool flagged = false;  // residual above the reporting threshold
};

// Ordinary least squares y = slope*x + intercept.
FitResult fit_linear(std::span<const std::pair<double, double>> pts,
                     double flag_threshold = 0.25);

// OLS on (log x, log y). Claims being fitted are asymptotic, so the smallest
// abscissa is dropped as a transient when drop_first is set and enough points
// remain.
FitResult fit_loglog(std::span<const std::pair<double, double>> pts, bool drop_first = true,
                     double flag_threshold = 0.25);

}  // namespace spherelab
