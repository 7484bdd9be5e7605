#include "spherelab/bumps.hpp"

#include <cmath>

namespace spherelab {

double bump_profile(double t) {
    double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t2));
}

namespace {
// C-infinity step: 1 at u<=0, 0 at u>=1, built from g(t)=exp(-1/t).
double smooth_step_down(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - u));
    double b = std::exp(-1.0 / u);
    return a / (a + b);
}
}  // namespace

double plateau_bump(double t) {
    double a = std::fabs(t);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    return smooth_step_down(a - 1.0);
}

double plateau_bump_wide(double t) {
    double a = std::fabs(t);
    if (a <= 2.0) return 1.0;
    if (a >= 4.0) return 0.0;
    return smooth_step_down(0.5 * (a - 2.0));
}

double tensor_plateau(std::span<const double> x, double scale) {
    double p = 1.0;
    for (double xi : x) {
        p *= plateau_bump(xi / scale);
        if (p == 0.0) return 0.0;
    }
    return p;
}

double tensor_plateau_wide(std::span<const double> x, double scale) {
    double p = 1.0;
    for (double xi : x) {
        p *= plateau_bump_wide(xi / scale);
        if (p == 0.0) return 0.0;
    }
    return p;
}

}  // namespace spherelab
