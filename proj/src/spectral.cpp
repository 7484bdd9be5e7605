#include "spherelab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "spherelab/bessel.hpp"
#include "spherelab/parallel.hpp"
#include "spherelab/quadrature.hpp"

namespace spherelab {

// ---------------------------------------------------------------------------
// Exponential sums
// ---------------------------------------------------------------------------

cplx weyl_sum(std::int64_t N, double theta, double xi) {
    if (N < 0) throw std::domain_error("weyl_sum: N must be >= 0");
    // z_u = e(theta u^2 + xi u); z_{u+1} = z_u * r_u with r_{u+1} = r_u * e(2 theta).
    cplx acc = 0.0;
    cplx z = 1.0;
    cplx r = unit_phase(theta + xi);
    const cplx w = unit_phase(2.0 * theta);
    for (std::int64_t u = 0; u <= N; ++u) {
        acc += z;
        z *= r;
        r *= w;
    }
    return acc;
}

cplx generating_product(std::int64_t N, double theta, std::span<const double> xi) {
    if (xi.empty()) throw std::domain_error("generating_product: dimension must be >= 1");
    cplx prod = 1.0;
    for (double x : xi) prod *= weyl_sum(N, theta, x);
    const cplx s0 = weyl_sum(N, theta, 0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) prod *= s0;
    return prod;
}

namespace {

// FFTW plans cached per transform size; execution uses caller-owned buffers.
class FftPlanCache {
  public:
    void forward_unscaled(std::vector<cplx>& inout) {
        const int n = static_cast<int>(inout.size());
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> g(mu_);
            auto it = plans_.find(n);
            if (it == plans_.end()) {
                scratch_.assign(static_cast<std::size_t>(n), cplx{});
                plan = fftw_plan_dft_1d(
                    n, reinterpret_cast<fftw_complex*>(scratch_.data()),
                    reinterpret_cast<fftw_complex*>(scratch_.data()), FFTW_BACKWARD,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(n, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(inout.data()),
                         reinterpret_cast<fftw_complex*>(inout.data()));
    }

  private:
    std::mutex mu_;
    std::map<int, fftw_plan> plans_;
    std::vector<cplx> scratch_;
};

FftPlanCache& fft_cache() {
    static FftPlanCache cache;
    return cache;
}

// Golden-section maximization of |S_N(theta, .)| on [lo, hi].
double golden_max_abs_weyl(std::int64_t N, double theta, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = std::abs(weyl_sum(N, theta, c));
    double fd = std::abs(weyl_sum(N, theta, d));
    for (int it = 0; it < 48 && (b - a) > 1e-13; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = std::abs(weyl_sum(N, theta, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = std::abs(weyl_sum(N, theta, d));
        }
    }
    return std::max(fc, fd);
}

double weyl_sup_one(std::int64_t N, double theta, int grid_factor, std::vector<cplx>& buf) {
    const int M = std::max<int>(grid_factor * static_cast<int>(N), 16);
    buf.assign(static_cast<std::size_t>(M), cplx{});
    for (std::int64_t u = 0; u <= N; ++u)
        buf[static_cast<std::size_t>(u % M)] += unit_phase(theta * static_cast<double>(u * u));
    fft_cache().forward_unscaled(buf);  // entry j = S_N(theta, j/M)
    int best = 0;
    double best_abs = 0.0;
    for (int j = 0; j < M; ++j) {
        double v = std::norm(buf[static_cast<std::size_t>(j)]);
        if (v > best_abs) {
            best_abs = v;
            best = j;
        }
    }
    const double h = 1.0 / M;
    double refined = golden_max_abs_weyl(N, theta, (best - 1) * h, (best + 1) * h);
    return std::max(refined, std::sqrt(best_abs));
}

}  // namespace

double weyl_sup_xi(std::int64_t N, double theta, int grid_factor) {
    std::vector<cplx> buf;
    return weyl_sup_one(N, theta, grid_factor, buf);
}

std::vector<double> weyl_sup_xi_batch(std::int64_t N, std::span<const double> thetas,
                                      int grid_factor) {
    std::vector<double> out(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> buf;
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = weyl_sup_one(N, thetas[i], grid_factor, buf);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Farey arcs
// ---------------------------------------------------------------------------

ArcSet farey_major_arcs(std::int64_t N) {
    if (N < 1) throw std::domain_error("farey_major_arcs: N must be >= 1");
    ArcSet set;
    set.N = N;
    // Farey next-term recurrence from 0/1, 1/N upward; emits reduced fractions
    // of denominator <= N in increasing order. 0/1 itself is skipped (the arc
    // at 1/1 covers theta near 0 on the circle).
    std::int64_t a = 0, b = 1, c = 1, d = N;
    auto push = [&](std::int64_t num, std::int64_t den) {
        FareyArc arc;
        arc.a = num;
        arc.q = den;
        arc.center = static_cast<double>(num) / static_cast<double>(den);
        arc.half_width = 1.0 / (8.0 * static_cast<double>(den) * static_cast<double>(N));
        set.arcs.push_back(arc);
    };
    push(c, d);
    while (c < d) {
        std::int64_t k = (N + b) / d;
        std::int64_t c2 = k * c - a;
        std::int64_t d2 = k * d - b;
        a = c;
        b = d;
        c = c2;
        d = d2;
        push(c, d);
    }
    return set;
}

bool ArcSet::contains(double theta) const {
    double t = theta - std::floor(theta);
    const double w = 1.0 / (8.0 * static_cast<double>(N));
    for (std::int64_t q = 1; q <= N; ++q) {
        double tq = t * static_cast<double>(q);
        if (std::fabs(tq - std::round(tq)) <= w) return true;
    }
    return false;
}

std::vector<std::pair<double, double>> ArcSet::minor_intervals() const {
    // Covered intervals on [0,1]; the arc at 1/1 wraps and also covers [0, w].
    std::vector<std::pair<double, double>> covered;
    covered.reserve(arcs.size() + 1);
    for (const auto& arc : arcs) {
        double lo = arc.center - arc.half_width;
        double hi = arc.center + arc.half_width;
        if (hi > 1.0) {
            covered.emplace_back(lo, 1.0);
            covered.emplace_back(0.0, hi - 1.0);
        } else {
            covered.emplace_back(lo, hi);
        }
    }
    std::sort(covered.begin(), covered.end());
    std::vector<std::pair<double, double>> out;
    double cursor = 0.0;
    for (const auto& [lo, hi] : covered) {
        if (lo > cursor) out.emplace_back(cursor, lo);
        cursor = std::max(cursor, hi);
    }
    if (cursor < 1.0) out.emplace_back(cursor, 1.0);
    return out;
}

bool arcs_pairwise_disjoint(const ArcSet& set) {
    // Right end of arc i is (8 a N + 1)/(8 q N); left end of arc j is
    // (8 a' N - 1)/(8 q' N). Sorted by center, disjointness reduces to
    // right_i < left_{i+1}, cross-multiplied in 128-bit integers.
    const auto& arcs = set.arcs;
    const __int128 N = set.N;
    for (std::size_t i = 0; i + 1 < arcs.size(); ++i) {
        __int128 right_num = 8 * N * arcs[i].a + 1;  // over 8 N q_i
        __int128 left_num = 8 * N * arcs[i + 1].a - 1;
        if (right_num * arcs[i + 1].q >= left_num * arcs[i].q) return false;
    }
    if (arcs.size() >= 2) {
        // wraparound: right end of the arc at 1/1 against (first arc + 1)
        const auto& last = arcs.back();
        const auto& first = arcs.front();
        __int128 right_num = 8 * N * last.a + 1;
        __int128 left_num = 8 * N * (first.a + first.q) - 1;
        if (right_num * first.q >= left_num * last.q) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Complete sums mod q
// ---------------------------------------------------------------------------

namespace {

// e(j/q) tables per modulus; exact phase reduction happens in integers.
const std::vector<cplx>& unit_roots(std::int64_t q) {
    static std::mutex mu;
    static std::map<std::int64_t, std::vector<cplx>> tables;
    static std::int64_t cached_total = 0;
    std::lock_guard<std::mutex> g(mu);
    auto it = tables.find(q);
    if (it != tables.end()) return it->second;
    if (cached_total + q > (std::int64_t{1} << 22))
        throw guard_error("unit root cache limit exceeded (modulus too large)");
    std::vector<cplx> t(static_cast<std::size_t>(q));
    for (std::int64_t j = 0; j < q; ++j)
        t[static_cast<std::size_t>(j)] =
            unit_phase(static_cast<double>(j) / static_cast<double>(q));
    cached_total += q;
    return tables.emplace(q, std::move(t)).first->second;
}

std::int64_t mod_reduce(std::int64_t x, std::int64_t q) {
    std::int64_t r = x % q;
    return r < 0 ? r + q : r;
}

}  // namespace

cplx quadratic_gauss_sum(std::int64_t l, std::int64_t a, std::int64_t q) {
    if (q < 1) throw std::domain_error("quadratic_gauss_sum: q must be >= 1");
    const std::int64_t ar = mod_reduce(a, q);
    if (std::gcd(ar == 0 ? q : ar, q) != 1)
        throw std::domain_error("quadratic_gauss_sum: requires gcd(a, q) = 1");
    if (q == 1) return 1.0;
    const std::int64_t lr = mod_reduce(l, q);
    const auto& roots = unit_roots(q);
    cplx sum = 0.0;
    for (std::int64_t y = 0; y < q; ++y) {
        __int128 num = static_cast<__int128>(ar) * y % q * y + static_cast<__int128>(lr) * y;
        sum += roots[static_cast<std::size_t>(static_cast<std::int64_t>(num % q))];
    }
    return sum / static_cast<double>(q);
}

double degenerate_sum(std::span<const std::int64_t> m, std::int64_t q) {
    if (q < 1) throw std::domain_error("degenerate_sum: q must be >= 1");
    for (std::int64_t mi : m)
        if (mod_reduce(mi, q) != 0) return 0.0;
    return 1.0;
}

cplx GaussSumCache::get(std::int64_t l, std::int64_t a, std::int64_t q) {
    auto key = std::make_tuple(mod_reduce(l, q), a, q);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    cplx v = quadratic_gauss_sum(std::get<0>(key), a, q);
    cache_.emplace(key, v);
    return v;
}

// ---------------------------------------------------------------------------
// Exact symbol
// ---------------------------------------------------------------------------

cplx lattice_sphere_symbol(int d, std::int64_t lambda, std::span<const double> xi,
                           const RepresentationTable& rd, const RepresentationTable& r2d) {
    if (static_cast<int>(xi.size()) != d)
        throw std::domain_error("lattice_sphere_symbol: xi must have dimension d");
    if (rd.dim() != d || r2d.dim() != 2 * d)
        throw std::domain_error("lattice_sphere_symbol: table dimensions must be d and 2d");
    const std::int64_t n_lambda = r2d.count(lambda);
    if (n_lambda == 0)
        throw std::domain_error("lattice_sphere_symbol: empty sphere, measure undefined");

    cplx acc = 0.0;
    for (std::int64_t k = 0; k <= lambda; ++k) {
        const std::int64_t v_count = rd.count(lambda - k);
        if (v_count == 0 || rd.count(k) == 0) continue;
        cplx shell = 0.0;
        for_each_sphere_point(d, k, [&](const LatticePoint& p) {
            double phase = 0.0;
            for (int i = 0; i < d; ++i) phase += static_cast<double>(p.c[i]) * xi[i];
            shell += unit_phase(phase);
        });
        acc += shell * static_cast<double>(v_count);
    }
    return acc / static_cast<double>(n_lambda);
}

// ---------------------------------------------------------------------------
// Box transform and multipliers
// ---------------------------------------------------------------------------

cplx box_phase_ft(double beta, double scale, double eta, double rel_tol) {
    if (scale <= 0.0) throw std::domain_error("box_phase_ft: scale must be > 0");
    auto f = [beta, scale, eta](double t) -> cplx {
        double w = plateau_bump(t / scale);
        if (w == 0.0) return cplx{};
        return w * unit_phase(beta * t * t - eta * t);
    };
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-12 * scale;
    const double rate = 8.0 * (std::fabs(beta) * scale + std::fabs(eta));
    if (rate > 0.0) opt.initial_step = 1.0 / rate;
    opt.max_evals = 2'000'000;
    return integrate_adaptive(f, -2.0 * scale, 2.0 * scale, opt).value;
}

namespace {

void check_multiplier_args(std::int64_t a, std::int64_t q, const MultiplierParams& p,
                           std::span<const double> xi) {
    if (q < 1 || q > p.N) throw std::domain_error("arc multiplier: requires 1 <= q <= N");
    const std::int64_t ar = mod_reduce(a, q);
    if (std::gcd(ar == 0 ? q : ar, q) != 1)
        throw std::domain_error("arc multiplier: requires gcd(a, q) = 1");
    if (static_cast<int>(xi.size()) != p.d)
        throw std::domain_error("arc multiplier: xi must have dimension d");
    if (p.count_N <= 0) throw std::domain_error("arc multiplier: count_N must be positive");
    if (p.N < 1) throw std::domain_error("arc multiplier: N must be >= 1");
}

// Weighted frequency list: the beta integrand is a product over distinct
// transform frequencies; collapse repeats so each b(eta; beta) is done once.
struct FreqFactor {
    double eta;
    cplx weight;  // product of window/Gauss weights attached to this frequency
    int power;    // multiplicity among coordinates
};

cplx beta_integral(const MultiplierParams& p, std::int64_t q, double lambda_phase_rate,
                   const std::vector<std::vector<std::pair<double, cplx>>>& coord_terms) {
    // integral over |beta| <= 1/(8qN) of e(-lambda beta) prod_i
    //   [sum over that coordinate's (eta, weight) of weight * b(eta; beta)].
    const double half = 1.0 / (8.0 * static_cast<double>(q) * static_cast<double>(p.N));
    const double scale = static_cast<double>(p.N);
    auto integrand = [&](double beta) -> cplx {
        std::vector<std::pair<double, cplx>> cache;  // eta -> b(eta;beta)
        auto bval = [&](double eta) {
            for (auto& [e, v] : cache)
                if (e == eta) return v;
            cplx v = box_phase_ft(beta, scale, eta, p.rel_tol);
            cache.emplace_back(eta, v);
            return v;
        };
        cplx prod = unit_phase(-static_cast<double>(p.lambda) * beta);
        for (const auto& terms : coord_terms) {
            cplx s = 0.0;
            for (const auto& [eta, w] : terms) s += w * bval(eta);
            prod *= s;
        }
        return prod;
    };
    QuadratureOptions opt;
    opt.rel_tol = std::max(p.rel_tol, 1e-9);
    // floor relative to the trivial bound (4 scale)^{2d} * width of the integral
    opt.abs_tol = 1e-12 * std::pow(4.0 * scale, 2.0 * static_cast<double>(p.d)) * (2.0 * half);
    opt.initial_step = 1.0 / (8.0 * (lambda_phase_rate + 1.0));
    opt.max_evals = 400'000;  // outer evals; each one runs 2d inner transforms
    return integrate_adaptive(integrand, -half, half, opt).value;
}

}  // namespace

cplx arc_multiplier_windowed(std::int64_t a, std::int64_t q, const MultiplierParams& p,
                             std::span<const double> xi) {
    check_multiplier_args(a, q, p, xi);
    const double s = p.psi_scale;
    GaussSumCache gauss;

    // xi-side coordinates: shifts l with Psi_1(q xi - l) != 0, Gauss-weighted.
    std::vector<std::vector<std::pair<double, cplx>>> coord_terms;
    coord_terms.reserve(static_cast<std::size_t>(2 * p.d));
    for (int i = 0; i < p.d; ++i) {
        const double w = static_cast<double>(q) * xi[i];
        std::vector<std::pair<double, cplx>> terms;
        const auto lo = static_cast<std::int64_t>(std::ceil(w - 2.0 * s));
        const auto hi = static_cast<std::int64_t>(std::floor(w + 2.0 * s));
        for (std::int64_t l = lo; l <= hi; ++l) {
            double window = plateau_bump((w - static_cast<double>(l)) / s);
            if (window == 0.0) continue;
            cplx g = gauss.get(l, a, q);
            terms.emplace_back(xi[i] - static_cast<double>(l) / static_cast<double>(q),
                               window * g);
        }
        if (terms.empty()) return 0.0;
        coord_terms.push_back(std::move(terms));
    }
    // m-side: multiples of q inside the Psi_2 window (m = 0 unless the window
    // has been widened past the first multiple), with G(m,0,q) = 1 there.
    for (int i = 0; i < p.d; ++i) {
        std::vector<std::pair<double, cplx>> terms;
        const auto mt_max = static_cast<std::int64_t>(
            std::floor(2.0 * s / static_cast<double>(q)));
        for (std::int64_t mt = -mt_max; mt <= mt_max; ++mt) {
            double window = plateau_bump(static_cast<double>(mt * q) / s);
            if (window == 0.0) continue;
            terms.emplace_back(-static_cast<double>(mt), window);
        }
        if (terms.empty()) return 0.0;
        coord_terms.push_back(std::move(terms));
    }

    const double rate = static_cast<double>(p.lambda) +
                        2.0 * p.d * static_cast<double>(p.N) * static_cast<double>(p.N);
    cplx integral = beta_integral(p, q, rate, coord_terms);
    cplx phase = unit_phase(-static_cast<double>(mod_reduce(p.lambda * a, q)) /
                            static_cast<double>(q));
    return phase * integral / static_cast<double>(p.count_N);
}

cplx arc_multiplier_raw(std::int64_t a, std::int64_t q, const MultiplierParams& p,
                        std::span<const double> xi) {
    check_multiplier_args(a, q, p, xi);
    GaussSumCache gauss;

    // Without windows the l-sum is truncated where the transform has decayed:
    // past |q xi - l| ~ q/2 the stationary point leaves the box support, so a
    // few extra shifts are enough. Same for the multiples of q on the m side.
    const std::int64_t l_halfwidth =
        std::max<std::int64_t>(4, static_cast<std::int64_t>(std::ceil(1.5 * q)));
    const std::int64_t mt_halfwidth = 2;

    std::vector<std::vector<std::pair<double, cplx>>> coord_terms;
    coord_terms.reserve(static_cast<std::size_t>(2 * p.d));
    for (int i = 0; i < p.d; ++i) {
        const double w = static_cast<double>(q) * xi[i];
        const auto center = static_cast<std::int64_t>(std::llround(w));
        std::vector<std::pair<double, cplx>> terms;
        for (std::int64_t l = center - l_halfwidth; l <= center + l_halfwidth; ++l)
            terms.emplace_back(xi[i] - static_cast<double>(l) / static_cast<double>(q),
                               gauss.get(l, a, q));
        coord_terms.push_back(std::move(terms));
    }
    for (int i = 0; i < p.d; ++i) {
        std::vector<std::pair<double, cplx>> terms;
        for (std::int64_t mt = -mt_halfwidth; mt <= mt_halfwidth; ++mt)
            terms.emplace_back(-static_cast<double>(mt), 1.0);
        coord_terms.push_back(std::move(terms));
    }

    const double rate = static_cast<double>(p.lambda) +
                        2.0 * p.d * static_cast<double>(p.N) * static_cast<double>(p.N);
    cplx integral = beta_integral(p, q, rate, coord_terms);
    cplx phase = unit_phase(-static_cast<double>(mod_reduce(p.lambda * a, q)) /
                            static_cast<double>(q));
    return phase * integral / static_cast<double>(p.count_N);
}

cplx main_term_layer_term(std::int64_t a, std::int64_t q, int d, std::int64_t lambda,
                          std::span<const double> xi, double psi_scale, GaussSumCache& gauss,
                          int bessel_level) {
    if (static_cast<int>(xi.size()) != d)
        throw std::domain_error("main_term_layer_term: xi must have dimension d");
    cplx gauss_part = 1.0;
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double w = static_cast<double>(q) * xi[i];
        const auto l = static_cast<std::int64_t>(std::llround(w));
        const double window = plateau_bump((w - static_cast<double>(l)) / psi_scale);
        if (window == 0.0) return 0.0;
        gauss_part *= window * gauss.get(l, a, q);
        const double off = xi[i] - static_cast<double>(l) / static_cast<double>(q);
        dist2 += off * off;
    }
    const double radius = std::sqrt(static_cast<double>(lambda));
    const double smooth =
        sphere_surface_ft(2 * d, radius, std::sqrt(dist2), bessel_level);
    const cplx phase =
        unit_phase(-static_cast<double>(mod_reduce(lambda * a, q)) / static_cast<double>(q));
    return phase * gauss_part * smooth;
}

MainTermResult main_term_multiplier(int d, std::int64_t lambda, std::int64_t N,
                                    std::span<const double> xi, std::int64_t q_max,
                                    double psi_scale, int bessel_level) {
    if (q_max < 1 || q_max > N)
        throw std::domain_error("main_term_multiplier: requires 1 <= q_max <= N");
    if (lambda < 1) throw std::domain_error("main_term_multiplier: lambda must be >= 1");
    MainTermResult res;
    res.value = 0.0;
    GaussSumCache gauss;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        MainTermLayer layer;
        layer.q = q;
        layer.partial = 0.0;
        for (std::int64_t a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            cplx term = main_term_layer_term(a, q, d, lambda, xi, psi_scale, gauss, bessel_level);
            layer.partial += term;
            layer.max_term_abs = std::max(layer.max_term_abs, std::abs(term));
        }
        res.value += layer.partial;
        res.layers.push_back(layer);
    }
    return res;
}

cplx singular_factor(std::int64_t a, std::int64_t q, int d, std::span<const double> xi,
                     double psi_scale) {
    if (static_cast<int>(xi.size()) != d)
        throw std::domain_error("singular_factor: xi must have dimension d");
    GaussSumCache gauss;
    cplx prod = 1.0;
    for (int i = 0; i < d; ++i) {
        const double w = static_cast<double>(q) * xi[i];
        const auto l = static_cast<std::int64_t>(std::llround(w));
        const double window = plateau_bump((w - static_cast<double>(l)) / psi_scale);
        if (window == 0.0) return 0.0;
        prod *= window * gauss.get(l, a, q);
    }
    return prod;  // the m-sum collapses to G(0,0,q) Psi_2(0) = 1
}

cplx smooth_factor(std::int64_t q, int d, std::int64_t lambda, std::span<const double> xi,
                   double psi_scale, int bessel_level) {
    if (static_cast<int>(xi.size()) != d)
        throw std::domain_error("smooth_factor: xi must have dimension d");
    double prod_window = 1.0;
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double w = static_cast<double>(q) * xi[i];
        const auto l = static_cast<std::int64_t>(std::llround(w));
        const double window = plateau_bump_wide((w - static_cast<double>(l)) / psi_scale);
        if (window == 0.0) return 0.0;
        prod_window *= window;
        const double off = xi[i] - static_cast<double>(l) / static_cast<double>(q);
        dist2 += off * off;
    }
    const double radius = std::sqrt(static_cast<double>(lambda));
    return prod_window * sphere_surface_ft(2 * d, radius, std::sqrt(dist2), bessel_level);
}

// ---------------------------------------------------------------------------
// Minor-arc integral
// ---------------------------------------------------------------------------

MinorArcIntegral minor_arc_integral(int d, std::int64_t N, const RepresentationTable& r2d,
                                    double step_factor, int grid_factor) {
    if (step_factor <= 0.0 || step_factor > 1.0 / 16.0)
        throw std::domain_error("minor_arc_integral: step factor must be in (0, 1/16]");
    if (r2d.dim() != 2 * d)
        throw std::domain_error("minor_arc_integral: table dimension must be 2d");
    const std::int64_t cap = N * N;
    const std::int64_t n_cap = r2d.count(cap);  // throws if the table is short

    const ArcSet arcs = farey_major_arcs(N);
    const auto intervals = arcs.minor_intervals();
    const double step = step_factor / static_cast<double>(cap);

    std::vector<double> thetas;
    std::vector<double> weights;
    double measure = 0.0;
    for (const auto& [lo, hi] : intervals) {
        const double len = hi - lo;
        measure += len;
        const auto n = static_cast<std::int64_t>(std::ceil(len / step));
        const double h = len / static_cast<double>(n);
        for (std::int64_t j = 0; j < n; ++j) {
            thetas.push_back(lo + (static_cast<double>(j) + 0.5) * h);
            weights.push_back(h);
        }
    }

    std::vector<double> contrib(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> buf;
        for (std::size_t i = lo; i < hi; ++i) {
            double sup = weyl_sup_one(N, thetas[i], grid_factor, buf);
            double s0 = std::abs(weyl_sum(N, thetas[i], 0.0));
            contrib[i] = std::pow(sup, d) * std::pow(s0, d) * weights[i];
        }
    });

    MinorArcIntegral out;
    out.unnormalized = pairwise_sum(contrib);
    out.normalized = out.unnormalized / static_cast<double>(n_cap);
    out.minor_measure = measure;
    return out;
}

}  // namespace spherelab
