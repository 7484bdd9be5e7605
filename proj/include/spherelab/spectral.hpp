#pragma once

#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "spherelab/bumps.hpp"
#include "spherelab/common.hpp"
#include "spherelab/lattice.hpp"

namespace spherelab {

// ---------------------------------------------------------------------------
// Exponential sums
// ---------------------------------------------------------------------------

// S_N(theta, xi) = sum_{u=0}^{N} e(theta u^2 + xi u). |result| <= N+1.
cplx weyl_sum(std::int64_t N, double theta, double xi);

// prod_i S_N(theta, xi_i) * S_N(theta, 0)^d  (d = xi.size()).
cplx generating_product(std::int64_t N, double theta, std::span<const double> xi);

// sup over xi in T of |S_N(theta, xi)|: max over a grid of grid_factor*N
// points (the sum varies on scale 1/N in xi), then golden-section refinement
// around the grid argmax.
double weyl_sup_xi(std::int64_t N, double theta, int grid_factor = 8);

// Batched version of weyl_sup_xi: the grid pass is the DFT of the e(theta u^2)
// sequence and runs through FFTW; refinement stays direct summation.
std::vector<double> weyl_sup_xi_batch(std::int64_t N, std::span<const double> thetas,
                                      int grid_factor = 8);

// ---------------------------------------------------------------------------
// Farey arc dissection of the circle
// ---------------------------------------------------------------------------

struct FareyArc {
    std::int64_t a = 0;  // numerator, 1 <= a <= q, gcd(a,q) = 1
    std::int64_t q = 1;
    double center = 0.0;      // a/q
    double half_width = 0.0;  // 1/(8 q N)
};

struct ArcSet {
    std::int64_t N = 0;
    std::vector<FareyArc> arcs;  // sorted by center, centers in (0, 1]

    // Is theta (taken mod 1) inside some arc?
    bool contains(double theta) const;

    // Complement of the arcs in [0,1), as disjoint intervals sorted by left end.
    std::vector<std::pair<double, double>> minor_intervals() const;
};

// All arcs |theta - a/q| <= 1/(8qN) for reduced a/q with q <= N.
ArcSet farey_major_arcs(std::int64_t N);

// Exact-rational pairwise disjointness check (128-bit cross multiplication,
// wraparound included).
bool arcs_pairwise_disjoint(const ArcSet& set);

// ---------------------------------------------------------------------------
// Complete exponential sums mod q
// ---------------------------------------------------------------------------

// g(l, a, q) = q^{-1} sum_{y mod q} e((a y^2 + l y)/q). Requires gcd(a,q)=1.
// Phases are reduced exactly in integer arithmetic before the trig calls.
cplx quadratic_gauss_sum(std::int64_t l, std::int64_t a, std::int64_t q);

// q^{-d} sum_{z mod q} e(m.z/q) = prod_i [q | m_i]; no quadratic term.
double degenerate_sum(std::span<const std::int64_t> m, std::int64_t q);

// Result cache keyed by (l mod q, a, q); scoped to one multiplier computation.
class GaussSumCache {
  public:
    cplx get(std::int64_t l, std::int64_t a, std::int64_t q);

  private:
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, cplx> cache_;
};

// ---------------------------------------------------------------------------
// Exact symbol of the normalized sphere measure
// ---------------------------------------------------------------------------

// N(lambda)^{-1} sum_{|u|^2+|v|^2=lambda, u,v in Z^d} e(u.xi), computed shell
// by shell in |u|^2 = k with the v-count taken from the d-dimensional table.
// rd must have dimension d, r2d dimension 2d. Throws std::domain_error when
// N(lambda) = 0 (measure undefined).
cplx lattice_sphere_symbol(int d, std::int64_t lambda, std::span<const double> xi,
                           const RepresentationTable& rd, const RepresentationTable& r2d);

// ---------------------------------------------------------------------------
// Oscillatory box transform and arc multipliers
// ---------------------------------------------------------------------------

// b(eta; beta) = integral e(beta t^2 - t eta) plateau(t/scale) dt. Adaptive
// quadrature seeded at one panel per 1/(8(|beta| scale + |eta|)); throws
// quadrature_error when refinement stalls.
cplx box_phase_ft(double beta, double scale, double eta, double rel_tol = 1e-8);

struct MultiplierParams {
    int d = 3;
    std::int64_t lambda = 0;
    std::int64_t N = 0;            // dissection parameter (arcs use width 1/(8qN))
    std::int64_t count_N = 0;      // N(lambda) = r_{2d}(lambda)
    double psi_scale = kFreqWindowScale;
    double rel_tol = 1e-8;
};

// Truncated-beta-integral arc multiplier without frequency windows: the l-sum
// runs over the lattice shifts near q*xi where the transform still carries
// mass, the m-sum over the multiples of q surviving the degenerate sum.
cplx arc_multiplier_raw(std::int64_t a, std::int64_t q, const MultiplierParams& p,
                        std::span<const double> xi);

// Same with the smooth windows inserted: per coordinate only the shifts inside
// the Psi_1 window survive, and only m = 0 passes Psi_2.
cplx arc_multiplier_windowed(std::int64_t a, std::int64_t q, const MultiplierParams& p,
                             std::span<const double> xi);

// One (a,q) term of the main-term multiplier, in the Bessel form:
//   e(-lambda a/q) sum_l G(l,a,q) Psi_1(q xi - l) * F_sphere(|xi - l/q|)
// where F_sphere is the radius-sqrt(lambda) sphere transform in R^{2d}.
cplx main_term_layer_term(std::int64_t a, std::int64_t q, int d, std::int64_t lambda,
                          std::span<const double> xi, double psi_scale, GaussSumCache& gauss,
                          int bessel_level = 0);

struct MainTermLayer {
    std::int64_t q = 0;
    cplx partial;               // sum over a in U_q
    double max_term_abs = 0.0;  // largest |single (a,q) term|, for the Gauss bound
};

struct MainTermResult {
    cplx value;
    std::vector<MainTermLayer> layers;
};

// Sum of the layer terms over q <= q_max, a in U_q. Per-q partials recorded.
MainTermResult main_term_multiplier(int d, std::int64_t lambda, std::int64_t N,
                                    std::span<const double> xi, std::int64_t q_max,
                                    double psi_scale = kFreqWindowScale, int bessel_level = 0);

// The two factors of the main-term split: an arithmetic factor carrying the
// Gauss sums and narrow windows, and a smooth factor carrying the sphere
// transform under the wide windows. Their product equals the (a,q) layer term
// up to the e(-lambda a/q) phase.
cplx singular_factor(std::int64_t a, std::int64_t q, int d, std::span<const double> xi,
                     double psi_scale = kFreqWindowScale);
cplx smooth_factor(std::int64_t q, int d, std::int64_t lambda, std::span<const double> xi,
                   double psi_scale = kFreqWindowScale, int bessel_level = 0);

// ---------------------------------------------------------------------------
// Minor-arc integral
// ---------------------------------------------------------------------------

struct MinorArcIntegral {
    double unnormalized = 0.0;  // integral over the minor arcs of sup_xi|F| |F|
    double normalized = 0.0;    // divided by N(Lambda)
    double minor_measure = 0.0;
};

// N(Lambda)^{-1} int_m (sup_xi |S_N(theta,xi)|)^d |S_N(theta,0)|^d dtheta with
// Lambda = N^2, composite midpoint rule at step step_factor/N^2 fitted to each
// complement interval. r2d must have dimension 2d and cover N^2.
MinorArcIntegral minor_arc_integral(int d, std::int64_t N, const RepresentationTable& r2d,
                                    double step_factor = 1.0 / 16.0, int grid_factor = 8);

}  // namespace spherelab
