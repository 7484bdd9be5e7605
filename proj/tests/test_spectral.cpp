#include <doctest.h>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "spherelab/bessel.hpp"
#include "spherelab/parallel.hpp"
#include "spherelab/spectral.hpp"

using namespace spherelab;

TEST_SUITE_BEGIN("spectral");

namespace {

// independent direct evaluation, per-term trig
cplx weyl_direct(std::int64_t N, double theta, double xi) {
    cplx acc = 0.0;
    for (std::int64_t u = 0; u <= N; ++u) {
        double ph = theta * static_cast<double>(u) * static_cast<double>(u) +
                    xi * static_cast<double>(u);
        ph -= std::floor(ph);
        acc += cplx{std::cos(2 * M_PI * ph), std::sin(2 * M_PI * ph)};
    }
    return acc;
}

std::int64_t totient(std::int64_t q) {
    std::int64_t n = 0;
    for (std::int64_t a = 1; a <= q; ++a)
        if (std::gcd(a, q) == 1) ++n;
    return n;
}

}  // namespace

TEST_CASE("weyl sums: frozen examples") {
    CHECK(weyl_sum(7, 0.0, 0.0).real() == doctest::Approx(8.0));
    CHECK(std::abs(weyl_sum(7, 0.0, 0.0).imag()) < 1e-12);
    CHECK(weyl_sum(4, 0.5, 0.0).real() == doctest::Approx(1.0));  // five alternating terms
    CHECK(std::abs(weyl_sum(3, 0.0, 0.5)) < 1e-12);               // four alternating terms
}

TEST_CASE("weyl sums: rotor recurrence against per-term evaluation") {
    const double thetas[] = {0.1234567, 0.9871, 1.0 / 3.0, 0.005};
    const double xis[] = {0.0, 0.77, 0.25, 0.5};
    for (double th : thetas) {
        for (double xi : xis) {
            cplx a = weyl_sum(4096, th, xi);
            cplx b = weyl_direct(4096, th, xi);
            CHECK(std::abs(a - b) < 1e-8);
            CHECK(std::abs(a) <= 4097.0 + 1e-9);
        }
    }
}

TEST_CASE("weyl sums: conjugate symmetry") {
    for (double th : {0.3, 0.71}) {
        for (double xi : {0.2, 0.9}) {
            cplx a = weyl_sum(64, th, xi);
            cplx b = std::conj(weyl_sum(64, -th, -xi));
            CHECK(std::abs(a - b) < 1e-11);
        }
    }
}

TEST_CASE("generating product: frozen values and conjugate symmetry") {
    std::vector<double> zero3(3, 0.0);
    CHECK(generating_product(5, 0.0, zero3).real() == doctest::Approx(std::pow(6.0, 6)));
    CHECK(std::abs(generating_product(4, 0.5, zero3) - cplx{1.0, 0.0}) < 1e-10);
    std::vector<double> xi{0.21, 0.82, 0.4};
    std::vector<double> neg{-0.21, -0.82, -0.4};
    cplx a = generating_product(16, 0.37, xi);
    cplx b = std::conj(generating_product(16, -0.37, neg));
    CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
    CHECK(std::abs(a) <= std::pow(17.0, 6));
}

TEST_CASE("weyl sup: refinement dominates a dense reference grid") {
    for (std::int64_t N : {8, 32}) {
        for (double th : {0.2137, 1.0 / 7.0 + 0.001}) {
            double sup = weyl_sup_xi(N, th);
            double dense = 0.0;
            const int M = 64 * static_cast<int>(N);
            for (int j = 0; j < M; ++j)
                dense = std::max(dense,
                                 std::abs(weyl_direct(N, th, static_cast<double>(j) / M)));
            CHECK(sup >= dense - 1e-9);
            CHECK(sup <= static_cast<double>(N) + 1 + 1e-9);
        }
    }
}

TEST_CASE("weyl sup: batch equals scalar and is thread-count invariant") {
    std::vector<double> thetas;
    for (int i = 0; i < 37; ++i) thetas.push_back(0.013 + 0.021 * i);
    auto batch = weyl_sup_xi_batch(97, thetas);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        CHECK(batch[i] == weyl_sup_xi(97, thetas[i]));
    set_thread_cap(1);
    auto serial = weyl_sup_xi_batch(97, thetas);
    set_thread_cap(0);
    for (std::size_t i = 0; i < thetas.size(); ++i) CHECK(batch[i] == serial[i]);
}

TEST_CASE("farey arcs: frozen dissections") {
    ArcSet one = farey_major_arcs(1);
    REQUIRE(one.arcs.size() == 1);
    CHECK(one.arcs[0].a == 1);
    CHECK(one.arcs[0].q == 1);
    CHECK(one.arcs[0].half_width == doctest::Approx(1.0 / 8.0));

    ArcSet two = farey_major_arcs(2);
    REQUIRE(two.arcs.size() == 2);
    CHECK(two.arcs[0].center == doctest::Approx(0.5));
    CHECK(two.arcs[0].half_width == doctest::Approx(1.0 / 32.0));
    CHECK(two.arcs[1].center == doctest::Approx(1.0));
    CHECK(two.arcs[1].half_width == doctest::Approx(1.0 / 16.0));

    CHECK(farey_major_arcs(4).arcs.size() == 6);  // phi(1)+phi(2)+phi(3)+phi(4)
}

TEST_CASE("farey arcs: counts, order, reducedness, disjointness") {
    for (std::int64_t N : {3, 10, 50, 128}) {
        ArcSet set = farey_major_arcs(N);
        std::int64_t expect = 0;
        for (std::int64_t q = 1; q <= N; ++q) expect += totient(q);
        CHECK(static_cast<std::int64_t>(set.arcs.size()) == expect);
        for (std::size_t i = 0; i < set.arcs.size(); ++i) {
            const auto& arc = set.arcs[i];
            CHECK(std::gcd(arc.a, arc.q) == 1);
            CHECK(arc.a >= 1);
            CHECK(arc.a <= arc.q);
            CHECK(arc.q <= N);
            if (i > 0) CHECK(set.arcs[i - 1].center < arc.center);
        }
        CHECK(arcs_pairwise_disjoint(set));
    }
}

TEST_CASE("arc membership and the minor-arc complement") {
    ArcSet set = farey_major_arcs(12);
    for (const auto& arc : set.arcs) {
        CHECK(set.contains(arc.center - 0.9 * arc.half_width));
        CHECK(set.contains(arc.center == 1.0 ? 0.0 : arc.center));
    }
    auto intervals = set.minor_intervals();
    double arc_measure = 0.0;
    for (const auto& arc : set.arcs) arc_measure += 2.0 * arc.half_width;
    double minor_measure = 0.0;
    for (const auto& [lo, hi] : intervals) {
        CHECK(lo < hi);
        minor_measure += hi - lo;
        CHECK(!set.contains(0.5 * (lo + hi)));
    }
    CHECK(arc_measure + minor_measure == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gauss sums: frozen examples and magnitude laws") {
    CHECK(std::abs(quadratic_gauss_sum(0, 1, 1) - cplx{1.0, 0.0}) < 1e-15);
    cplx g3 = quadratic_gauss_sum(0, 1, 3);
    CHECK(std::abs(g3 - cplx{0.0, 1.0 / std::sqrt(3.0)}) < 1e-13);
    CHECK(std::abs(quadratic_gauss_sum(0, 1, 2)) < 1e-15);
    CHECK_THROWS_AS(quadratic_gauss_sum(0, 2, 4), std::domain_error);

    for (std::int64_t q = 1; q <= 61; ++q) {
        const double bound = std::sqrt(2.0) / std::sqrt(static_cast<double>(q));
        for (std::int64_t a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            for (std::int64_t l = 0; l < q; ++l) {
                const double mag = std::abs(quadratic_gauss_sum(l, a, q));
                CHECK(mag <= bound + 1e-12);
                if (q % 2 == 1)
                    CHECK(mag == doctest::Approx(1.0 / std::sqrt(static_cast<double>(q)))
                                     .epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("gauss sum cache returns the direct values") {
    GaussSumCache cache;
    for (std::int64_t q : {2, 3, 7, 12}) {
        for (std::int64_t a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            for (std::int64_t l = -5; l <= 5; ++l) {
                CHECK(std::abs(cache.get(l, a, q) - quadratic_gauss_sum(l, a, q)) < 1e-15);
                CHECK(std::abs(cache.get(l, a, q) - quadratic_gauss_sum(l, a, q)) < 1e-15);
            }
        }
    }
}

TEST_CASE("degenerate sum is the divisibility indicator") {
    const std::int64_t zero3[3] = {0, 0, 0};
    CHECK(degenerate_sum(zero3, 5) == 1.0);
    const std::int64_t m1[3] = {3, 0, 0};
    CHECK(degenerate_sum(m1, 3) == 1.0);
    const std::int64_t m2[3] = {1, 0, 0};
    CHECK(degenerate_sum(m2, 2) == 0.0);
    const std::int64_t m3[2] = {-4, 6};
    CHECK(degenerate_sum(m3, 2) == 1.0);
}

TEST_CASE("exact symbol: normalization, closed form, brute-force oracle") {
    RepresentationTable r3(3, 50), r6(6, 50);
    std::vector<double> zero(3, 0.0);
    for (std::int64_t lam = 1; lam <= 50; ++lam) {
        cplx v = lattice_sphere_symbol(3, lam, zero, r3, r6);
        CHECK(v.real() == 1.0);  // exact: integer shell sums below 2^53
        CHECK(v.imag() == 0.0);
    }

    // d=3, lambda=1: (6 + 2 sum cos(2 pi xi_i)) / 12
    std::vector<double> xi{0.13, 0.57, 0.92};
    cplx v = lattice_sphere_symbol(3, 1, xi, r3, r6);
    double expect = 6.0;
    for (double x : xi) expect += 2.0 * std::cos(2 * M_PI * x);
    expect /= 12.0;
    CHECK(v.real() == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-14);

    std::vector<double> half{0.5, 0.5, 0.5};
    CHECK(std::abs(lattice_sphere_symbol(3, 1, half, r3, r6)) < 1e-14);

    // |symbol| <= 1 and agreement with the double-enumeration oracle
    RepresentationTable r2(2, 50), r4(4, 50);
    for (int d : {2, 3}) {
        const auto& rd = d == 2 ? r2 : r3;
        const auto& r2d = d == 2 ? r4 : r6;
        for (std::int64_t lam : {1, 2, 5, 12, 29, 50}) {
            if (r2d.count(lam) == 0) continue;
            std::vector<double> x(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = 0.05 + 0.17 * (i + 1) + 0.003 * static_cast<double>(lam);
            cplx got = lattice_sphere_symbol(d, lam, x, rd, r2d);
            CHECK(std::abs(got) <= 1.0 + 1e-12);
            cplx ref = oracles::brute_sphere_symbol(d, lam, x);
            CHECK(std::abs(got - ref) < 1e-12);
        }
    }

    // empty sphere: d=1, lambda=3 has r_2(3) = 0
    RepresentationTable r1(1, 3), r2b(2, 3);
    std::vector<double> x1{0.1};
    CHECK_THROWS_AS(lattice_sphere_symbol(1, 3, x1, r1, r2b), std::domain_error);
}

TEST_CASE("box transform: no-phase values, FFT oracle, conjugate symmetry") {
    // beta = 0, eta = 0: N * integral(plateau) = 3N exactly
    for (double N : {1.0, 4.0, 9.0})
        CHECK(box_phase_ft(0.0, N, 0.0).real() == doctest::Approx(3.0 * N).epsilon(1e-9));

    // beta = 0: equals N * (transform of the plateau at N*eta), computed by FFT
    const int M = 1 << 16;
    const double h = 4.0 / M;
    std::vector<cplx> buf(M);
    for (int j = 0; j < M; ++j) buf[static_cast<std::size_t>(j)] = plateau_bump(-2.0 + h * j);
    fftw_plan plan = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double Nscale = 3.0;
    for (int k : {0, 1, 2, 5, 9}) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;  // e(t0 f) factor, t0 = -2
        const double ref = h * sign * buf[static_cast<std::size_t>(k)].real();
        const double eta = static_cast<double>(k) / (4.0 * Nscale);
        cplx got = box_phase_ft(0.0, Nscale, eta);
        CHECK(got.real() == doctest::Approx(Nscale * ref).epsilon(1e-7).scale(1.0));
        CHECK(std::abs(got.imag()) < 1e-9 * Nscale);
    }

    for (double beta : {0.003, -0.01}) {
        for (double eta : {0.3, -1.2}) {
            cplx a = box_phase_ft(beta, 5.0, eta);
            cplx b = std::conj(box_phase_ft(-beta, 5.0, -eta));
            CHECK(std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("windowed multiplier: q=1 collapse against a fixed-step reference") {
    const int d = 1;
    const std::int64_t lambda = 9, N = 3;
    RepresentationTable r2d(2 * d, lambda);
    MultiplierParams p;
    p.d = d;
    p.lambda = lambda;
    p.N = N;
    p.count_N = r2d.count(lambda);
    std::vector<double> zero(1, 0.0);
    cplx got = arc_multiplier_windowed(1, 1, p, zero);

    // independent double Simpson: outer beta over [-1/(8N), 1/(8N)], inner t
    const double half = 1.0 / (8.0 * static_cast<double>(N));
    auto bhat0 = [&](double beta) {
        auto f = [&](double t) -> cplx {
            return plateau_bump(t / static_cast<double>(N)) * unit_phase(beta * t * t);
        };
        return oracles::simpson(f, -2.0 * N, 2.0 * N, 3000);
    };
    auto outer = [&](double beta) -> cplx {
        cplx b = bhat0(beta);
        return unit_phase(-static_cast<double>(lambda) * beta) * b * b;
    };
    cplx ref = oracles::simpson(outer, -half, half, 400) / static_cast<double>(p.count_N);
    CHECK(std::abs(got - ref) < 1e-6 * std::abs(ref));
}

TEST_CASE("raw and windowed multipliers converge as the window scale grows") {
    const int d = 2;
    const std::int64_t lambda = 10, N = 3;
    RepresentationTable r2d(2 * d, lambda);
    MultiplierParams p;
    p.d = d;
    p.lambda = lambda;
    p.N = N;
    p.count_N = r2d.count(lambda);
    std::vector<double> xi{0.05, 0.21};
    const cplx raw = arc_multiplier_raw(1, 2, p, xi);
    std::vector<double> gaps;
    for (double s : {0.125, 0.5, 1.0}) {
        p.psi_scale = s;
        gaps.push_back(std::abs(arc_multiplier_windowed(1, 2, p, xi) - raw));
    }
    CHECK(gaps.back() <= gaps.front() + 1e-12);
    CHECK(gaps.back() < 0.05 * (1.0 + std::abs(raw)));
}

TEST_CASE("main term: unit layer at q=1, xi=0, and the Gauss layer bound") {
    RepresentationTable r3(3, 50), r6(6, 50);
    std::vector<double> zero(3, 0.0);
    for (std::int64_t lambda : {25, 41}) {
        const std::int64_t N = isqrt_floor(lambda);
        MainTermResult res = main_term_multiplier(3, lambda, N, zero, N);
        CHECK(std::abs(res.layers.front().partial - cplx{1.0, 0.0}) < 1e-14);
        for (const auto& layer : res.layers) {
            const double bound = std::pow(std::sqrt(2.0), 3) *
                                 std::pow(static_cast<double>(layer.q), -1.5);
            CHECK(layer.max_term_abs <= bound + 1e-12);
        }
    }
}

TEST_CASE("main term splits into the arithmetic and smooth factors") {
    const int d = 3;
    const std::int64_t lambda = 20;
    GaussSumCache gauss;
    for (auto [a, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {1, 2}, {1, 3}, {2, 3}}) {
        for (double t : {0.0, 0.07, 0.26, 0.334, 0.41}) {
            std::vector<double> xi{t, 0.01, 0.5 - t / 3.0};
            const cplx layer = main_term_layer_term(a, q, d, lambda, xi, kFreqWindowScale, gauss);
            const cplx phase =
                unit_phase(-static_cast<double>((lambda * a) % q) / static_cast<double>(q));
            const cplx split = phase * singular_factor(a, q, d, xi) *
                               smooth_factor(q, d, lambda, xi);
            CHECK(std::abs(layer - split) < 1e-12 * (1.0 + std::abs(layer)));
        }
    }
}

TEST_CASE("minor-arc integral: positivity, measure, normalization") {
    RepresentationTable r6(6, 64);
    MinorArcIntegral got = minor_arc_integral(3, 8, r6);
    CHECK(got.unnormalized > 0.0);
    CHECK(got.normalized > 0.0);
    CHECK(got.normalized == doctest::Approx(got.unnormalized / static_cast<double>(r6.count(64))));
    CHECK(got.minor_measure > 0.80);
    CHECK(got.minor_measure < 0.90);
    CHECK_THROWS_AS(minor_arc_integral(3, 8, r6, 0.2), std::domain_error);
}

TEST_SUITE_END();
