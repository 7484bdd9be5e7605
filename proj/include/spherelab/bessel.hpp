#pragma once

namespace spherelab {

// Evaluation controls for bessel_j_scaled: series below the cutoff, the
// standard large-argument asymptotic expansion above it. Two pinned levels
// let callers check stability of derived quantities across refinements.
struct BesselLevel {
    double series_cutoff;
    int asymptotic_terms;
    bool long_double_series;
};

BesselLevel bessel_level(int level);  // level 0 (default) or 1 (refined)

// h_nu(x) = Gamma(nu+1) * (x/2)^{-nu} * J_nu(x), normalized so h_nu(0) = 1.
double bessel_j_scaled(double nu, double x, int level = 0);

// J_nu(x) itself (series/asymptotic switch as above).
double bessel_j(double nu, double x, int level = 0);

// Fourier transform of the normalized surface measure on the radius-r sphere
// in R^k, evaluated at a frequency of magnitude s; equals 1 at s = 0. The
// normalization constant is fixed by the s->0 limit of the series.
double sphere_surface_ft(int k, double r, double s, int level = 0);

}  // namespace spherelab
