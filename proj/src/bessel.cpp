#include "spherelab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace spherelab {

BesselLevel bessel_level(int level) {
    if (level <= 0) return {18.0, 5, false};
    return {26.0, 7, true};
}

namespace {

// 0F1(nu+1; -x^2/4) by term recurrence. Equals Gamma(nu+1)(x/2)^{-nu}J_nu(x).
template <typename F>
double scaled_series(double nu, double x, int max_terms = 200) {
    F q = static_cast<F>(-0.25L) * static_cast<F>(x) * static_cast<F>(x);
    F term = 1.0;
    F sum = 1.0;
    for (int m = 0; m < max_terms; ++m) {
        term *= q / (static_cast<F>(m + 1) * (static_cast<F>(nu) + static_cast<F>(m + 1)));
        sum += term;
        if (std::fabs(static_cast<double>(term)) <
            1e-18 * (1.0 + std::fabs(static_cast<double>(sum))))
            break;
    }
    return static_cast<double>(sum);
}

// Hankel asymptotic expansion: J_nu(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w),
// w = x - nu*pi/2 - pi/4, with a_j(nu) = prod_{i<j}(4nu^2-(2i+1)^2)/(j! 8^j).
double asymptotic_j(double nu, double x, int terms) {
    const double mu = 4.0 * nu * nu;
    double P = 1.0, Q = 0.0;
    double a = 1.0;
    for (int j = 1; j <= 2 * terms; ++j) {
        double odd = 2.0 * j - 1.0;
        a *= (mu - odd * odd) / (8.0 * j * x);
        if (j % 2 == 1) {
            Q += ((j / 2) % 2 == 0 ? a : -a);
        } else {
            P += ((j / 2) % 2 == 1 ? -a : a);
        }
    }
    double w = x - nu * M_PI_2 - M_PI_4;
    return std::sqrt(2.0 / (M_PI * x)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace

double bessel_j_scaled(double nu, double x, int level) {
    if (nu < 0.0) throw std::domain_error("bessel_j_scaled: nu must be >= 0");
    const BesselLevel lv = bessel_level(level);
    double ax = std::fabs(x);
    if (ax <= lv.series_cutoff) {
        return lv.long_double_series ? scaled_series<long double>(nu, ax)
                                     : scaled_series<double>(nu, ax);
    }
    // normalize the asymptotic branch by the same s->0 series limit
    double c = std::tgamma(nu + 1.0) * std::pow(0.5 * ax, -nu);
    return c * asymptotic_j(nu, ax, lv.asymptotic_terms);
}

double bessel_j(double nu, double x, int level) {
    const BesselLevel lv = bessel_level(level);
    double ax = std::fabs(x);
    double v;
    if (ax <= lv.series_cutoff) {
        v = bessel_j_scaled(nu, ax, level) * std::pow(0.5 * ax, nu) / std::tgamma(nu + 1.0);
    } else {
        v = asymptotic_j(nu, ax, lv.asymptotic_terms);
    }
    if (x < 0.0) {
        // integer nu only makes sense for negative arguments here
        long n = std::lround(nu);
        if (std::fabs(nu - n) > 1e-12)
            throw std::domain_error("bessel_j: negative x needs integer nu");
        if (n % 2 != 0) v = -v;
    }
    return v;
}

double sphere_surface_ft(int k, double r, double s, int level) {
    if (k < 2) throw std::domain_error("sphere_surface_ft: ambient dimension must be >= 2");
    if (r <= 0.0) throw std::domain_error("sphere_surface_ft: radius must be > 0");
    if (s < 0.0) throw std::domain_error("sphere_surface_ft: frequency magnitude must be >= 0");
    const double nu = 0.5 * (k - 2);
    return bessel_j_scaled(nu, 2.0 * M_PI * r * s, level);
}

}  // namespace spherelab
