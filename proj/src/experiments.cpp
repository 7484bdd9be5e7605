#include "spherelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spherelab/bessel.hpp"
#include "spherelab/spectral.hpp"

namespace spherelab {

double ExperimentRecord::extra(const std::string& k) const {
    for (const auto& [name, v] : extras)
        if (name == k) return v;
    throw std::out_of_range("experiment record has no extra named " + k);
}

LatticeFunction random_sparse_function(Rng& rng, int dim, int support_size,
                                       std::int64_t coord_box) {
    std::set<LatticePoint> seen;
    std::vector<std::pair<LatticePoint, double>> entries;
    int attempts = 0;
    while (static_cast<int>(entries.size()) < support_size) {
        if (++attempts > 1000 * support_size)
            throw guard_error("random_sparse_function: support box too small");
        LatticePoint p;
        p.dim = dim;
        for (int i = 0; i < dim; ++i)
            p.c[i] = static_cast<std::int32_t>(rng.uniform_int(-coord_box, coord_box));
        if (!seen.insert(p).second) continue;
        double v = 2.0 * rng.uniform() - 1.0;
        if (std::fabs(v) < 1e-3) v = v < 0 ? -1e-3 : 1e-3;
        entries.emplace_back(p, v);
    }
    return LatticeFunction::sparse(dim, std::move(entries));
}

SweepGrid SweepGrid::make(const std::vector<std::array<double, 3>>& pqr, std::string family,
                          std::vector<std::int64_t> sizes) {
    SweepGrid g;
    g.family = std::move(family);
    g.sizes = std::move(sizes);
    for (const auto& t : pqr) {
        if (t[0] < 1.0 || t[1] < 1.0 || t[2] < 1.0)
            throw std::domain_error("sweep grid: exponents must be >= 1");
        Triple tr{t[0], t[1], t[2], false};
        tr.violates_necessary = 1.0 / tr.r > 1.0 / tr.p + 1.0 / tr.q + 1e-12;
        g.triples.push_back(tr);
    }
    return g;
}

namespace {

std::vector<std::int64_t> contiguous_range(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

std::string int_list_string(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

ExperimentRecord run_scaling_experiment(int d, const std::vector<std::int64_t>& L_list, double p,
                                        double q, double r, std::int64_t lambda_max) {
    if (L_list.size() < 4)
        throw std::domain_error("scaling experiment: needs at least 4 sizes");
    ExperimentRecord rec;
    rec.experiment = "scaling";
    rec.version = kVersion;
    rec.add_param("d", std::to_string(d));
    rec.add_param("p", format_double(p));
    rec.add_param("q", format_double(q));
    rec.add_param("r", format_double(r));
    rec.add_param("lambda_max", std::to_string(lambda_max));
    rec.add_param("L_list", int_list_string(L_list));

    const RepresentationTable rd(d, lambda_max);
    const RepresentationTable rld(2 * d, lambda_max);
    const auto lams = contiguous_range(0, lambda_max);

    std::vector<std::pair<double, double>> product_series;
    for (std::int64_t L : L_list) {
        std::vector<LatticeFunction> fs{LatticeFunction::box(d, L), LatticeFunction::box(d, L)};
        MaximalResult maximal = maximal_average(fs, lams, rd, rld);
        double norm = lp_norm(maximal.values, r);
        rec.measurements.emplace_back(static_cast<double>(L), norm);
        product_series.emplace_back(static_cast<double>(L),
                                    lp_norm(fs[0], p) * lp_norm(fs[1], q));
    }
    rec.fit = fit_loglog(rec.measurements);
    FitResult product_fit = fit_loglog(product_series);
    rec.add_extra("fitted_slope", rec.fit->slope);
    rec.add_extra("expected_slope", static_cast<double>(d) / r);
    rec.add_extra("product_slope", product_fit.slope);
    rec.add_extra("expected_product_slope", static_cast<double>(d) / p + static_cast<double>(d) / q);
    return rec;
}

ExperimentRecord run_sharpness_experiment(int d, int n, std::int64_t R_max, double p) {
    if (d < 3) throw std::domain_error("sharpness experiment: requires d >= 3");
    if (n < 1) throw std::domain_error("sharpness experiment: requires n >= 1");
    if (R_max < 12) throw std::domain_error("sharpness experiment: R_max too small to classify");

    ExperimentRecord rec;
    rec.experiment = "sharpness";
    rec.version = kVersion;
    rec.add_param("d", std::to_string(d));
    rec.add_param("n", std::to_string(n));
    rec.add_param("R_max", std::to_string(R_max));
    rec.add_param("p", format_double(p));

    const std::int64_t m_max = R_max * R_max;
    const RepresentationTable rd(d, std::max<std::int64_t>(m_max, (n - 1) * m_max));
    const RepresentationTable r2d(2 * d, n * m_max);

    double running = 0.0;
    double tail_max_term = 0.0;
    std::vector<double> sums(static_cast<std::size_t>(R_max) + 1, 0.0);
    for (std::int64_t R = 1; R <= R_max; ++R) {
        double inc = 0.0;
        for (std::int64_t m = (R - 1) * (R - 1) + 1; m <= R * R; ++m) {
            const std::int64_t mult = rd.count(m);
            if (mult == 0) continue;
            // d = 4 keeps only the residue class with the regular asymptotic
            if (d == 4 && n > 1 && ((n - 1) * m) % 8 != 1) continue;
            const std::int64_t n_lam = r2d.count(n * m);
            if (n_lam == 0) continue;
            const double term = std::pow(
                static_cast<double>(rd.count((n - 1) * m)) / static_cast<double>(n_lam), p);
            inc += static_cast<double>(mult) * term;
            if (R == R_max) tail_max_term = std::max(tail_max_term, term);
        }
        running += inc;
        sums[static_cast<std::size_t>(R)] = running;
        rec.measurements.emplace_back(static_cast<double>(R), running);
    }

    const double total = sums[static_cast<std::size_t>(R_max)];
    const double half = sums[static_cast<std::size_t>((R_max + 1) / 2)];
    const double growth_frac = total > 0.0 ? (total - half) / total : 0.0;

    // S vs log R over the last two thirds
    std::vector<std::pair<double, double>> window;
    for (std::int64_t R = std::max<std::int64_t>(2, R_max / 3); R <= R_max; ++R)
        window.emplace_back(std::log(static_cast<double>(R)),
                            sums[static_cast<std::size_t>(R)]);
    FitResult logfit = fit_linear(window);
    const double resid_ratio =
        logfit.slope != 0.0 ? logfit.residual_rms / std::fabs(logfit.slope) : 1e9;

    if (tail_max_term < 1e-6 && growth_frac < 0.05) {
        rec.classification = "convergent";
    } else if (logfit.slope > 0.0 && resid_ratio < 0.1) {
        rec.classification = "log-like";
    } else {
        rec.classification = "power-like";
    }
    rec.fit = logfit;
    rec.add_extra("tail_max_term", tail_max_term);
    rec.add_extra("growth_frac", growth_frac);
    rec.add_extra("log_slope", logfit.slope);
    rec.add_extra("log_residual_ratio", resid_ratio);
    rec.add_extra("total", total);
    return rec;
}

std::vector<ExperimentRecord> run_holder_sweep(const SweepGrid& grid, int d,
                                               std::int64_t lambda_max) {
    std::vector<ExperimentRecord> out;
    const RepresentationTable rd(d, lambda_max);
    const RepresentationTable rld(2 * d, lambda_max);
    const auto lams = contiguous_range(0, lambda_max);

    std::uint64_t triple_index = 0;
    for (const auto& triple : grid.triples) {
        ExperimentRecord rec;
        rec.experiment = "holder_sweep";
        rec.version = kVersion;
        rec.seed = 0x5eed0000 + triple_index;
        rec.add_param("d", std::to_string(d));
        rec.add_param("family", grid.family);
        rec.add_param("p", format_double(triple.p));
        rec.add_param("q", format_double(triple.q));
        rec.add_param("r", format_double(triple.r));
        rec.add_param("lambda_max", std::to_string(lambda_max));

        double max_ratio = 0.0;
        for (std::int64_t size : grid.sizes) {
            std::vector<LatticeFunction> fs;
            std::vector<std::int64_t> lam_range = lams;
            if (grid.family == "box") {
                fs = {LatticeFunction::box(d, size), LatticeFunction::box(d, size)};
            } else if (grid.family == "random-sparse") {
                Rng rng(rec.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(size));
                fs = {random_sparse_function(rng, d, static_cast<int>(size), size),
                      random_sparse_function(rng, d, static_cast<int>(size), size)};
            } else if (grid.family == "delta-constant") {
                fs = {LatticeFunction::delta(d), LatticeFunction::constant(d, 1.0)};
                lam_range = contiguous_range(0, size);
            } else {
                throw std::domain_error("holder sweep: unknown family " + grid.family);
            }
            if (grid.family == "delta-constant") {
                // needs tables out to the enlarged lambda range
                RepresentationTable rd_big(d, size);
                RepresentationTable rld_big(2 * d, size);
                double ratio =
                    norm_ratio(fs, {triple.p, triple.q}, triple.r, lam_range, rd_big, rld_big);
                rec.measurements.emplace_back(static_cast<double>(size), ratio);
                max_ratio = std::max(max_ratio, ratio);
            } else {
                double ratio = norm_ratio(fs, {triple.p, triple.q}, triple.r, lam_range, rd, rld);
                rec.measurements.emplace_back(static_cast<double>(size), ratio);
                max_ratio = std::max(max_ratio, ratio);
            }
        }
        bool fittable = true;
        for (const auto& [x, y] : rec.measurements) fittable &= (y > 0.0);
        if (fittable && rec.measurements.size() >= 3) rec.fit = fit_loglog(rec.measurements);
        rec.add_extra("max_ratio", max_ratio);
        rec.add_extra("violates_necessary", triple.violates_necessary ? 1.0 : 0.0);
        if (rec.fit) rec.add_extra("trend_slope", rec.fit->slope);
        out.push_back(std::move(rec));
        ++triple_index;
    }
    return out;
}

ExperimentRecord run_weyl_experiment(const std::vector<std::int64_t>& N_list, int samples,
                                     std::uint64_t seed) {
    if (N_list.size() < 5)
        throw std::domain_error("weyl experiment: needs at least 5 dyadic N values");
    ExperimentRecord rec;
    rec.experiment = "weyl_decay";
    rec.version = kVersion;
    rec.seed = seed;
    rec.add_param("N_list", int_list_string(N_list));
    rec.add_param("samples", std::to_string(samples));

    for (std::int64_t N : N_list) {
        const ArcSet arcs = farey_major_arcs(N);
        Rng rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(N)));
        std::vector<double> thetas;
        thetas.reserve(static_cast<std::size_t>(samples));
        long rejections = 0;
        while (static_cast<int>(thetas.size()) < samples) {
            double t = rng.uniform();
            if (arcs.contains(t)) {
                if (++rejections > 1000L * samples)
                    throw guard_error("weyl experiment: rejection sampling stalled");
                continue;
            }
            thetas.push_back(t);
        }
        const auto sups = weyl_sup_xi_batch(N, thetas);
        rec.measurements.emplace_back(static_cast<double>(N),
                                      *std::max_element(sups.begin(), sups.end()));
    }
    rec.fit = fit_loglog(rec.measurements);
    rec.add_extra("fitted_exponent", rec.fit->slope);

    // major-arc contrast diagnostic at theta = 1/3: scale ~ N q^{-1/2}
    const std::int64_t N_big = N_list.back();
    const double s_major = std::abs(weyl_sum(N_big, 1.0 / 3.0, 0.0));
    rec.add_extra("major_center_ratio",
                  s_major * std::sqrt(3.0) / static_cast<double>(N_big));
    return rec;
}

std::vector<ExperimentRecord> run_error_decay_experiment(int d,
                                                         const std::vector<std::int64_t>& N_list) {
    if (N_list.size() < 3)
        throw std::domain_error("error decay experiment: needs at least 3 N values");
    for (std::int64_t N : N_list)
        if (N > 128)
            throw guard_error("error decay experiment: quadrature budget exceeded for N > 128");

    ExperimentRecord norm_rec, raw_rec;
    norm_rec.experiment = "error_decay_normalized";
    raw_rec.experiment = "error_decay_unnormalized";
    for (auto* r : {&norm_rec, &raw_rec}) {
        r->version = kVersion;
        r->add_param("d", std::to_string(d));
        r->add_param("N_list", int_list_string(N_list));
    }

    for (std::int64_t N : N_list) {
        const RepresentationTable r2d(2 * d, N * N);
        const MinorArcIntegral integral = minor_arc_integral(d, N, r2d);
        norm_rec.measurements.emplace_back(static_cast<double>(N), integral.normalized);
        raw_rec.measurements.emplace_back(static_cast<double>(N), integral.unnormalized);
    }
    norm_rec.fit = fit_loglog(norm_rec.measurements);
    raw_rec.fit = fit_loglog(raw_rec.measurements);

    const double delta_fit = -norm_rec.fit->slope;
    norm_rec.add_extra("delta_fit", delta_fit);
    for (double p : {1.2, 1.5, 2.0, 3.0}) {
        const double alpha = 2.0 * (2.0 / p - 1.0) - delta_fit * (2.0 - 2.0 / p);
        norm_rec.add_extra("alpha_" + format_double(p), alpha);
    }
    raw_rec.add_extra("growth_exponent", raw_rec.fit->slope);
    return {std::move(norm_rec), std::move(raw_rec)};
}

std::vector<ExperimentRecord> run_multiplier_comparison(
    int d, const std::vector<std::int64_t>& lambda_list, int xi_points, std::int64_t q_max) {
    if (xi_points < 2) throw std::domain_error("multiplier comparison: xi_points must be >= 2");
    std::vector<ExperimentRecord> out;
    for (std::int64_t lambda : lambda_list) {
        const std::int64_t N = std::max<std::int64_t>(1, isqrt_floor(lambda));
        const std::int64_t qm = q_max > 0 ? std::min(q_max, N) : N;
        const RepresentationTable rd(d, lambda);
        const RepresentationTable r2d(2 * d, lambda);

        ExperimentRecord rec;
        rec.experiment = "multiplier_agreement";
        rec.version = kVersion;
        rec.add_param("d", std::to_string(d));
        rec.add_param("lambda", std::to_string(lambda));
        rec.add_param("N", std::to_string(N));
        rec.add_param("q_max", std::to_string(qm));
        rec.add_param("xi_points", std::to_string(xi_points));

        double sup_err = 0.0, sup_err_q1 = 0.0;
        double envelope = 0.0;
        double gauss_layer_constant = 0.0;
        const double radius = std::sqrt(static_cast<double>(lambda));
        for (int j = 0; j < xi_points; ++j) {
            const double t = 0.5 * static_cast<double>(j) / static_cast<double>(xi_points - 1);
            std::vector<double> xi(static_cast<std::size_t>(d), 0.0);
            xi[0] = t;
            const cplx sigma = lattice_sphere_symbol(d, lambda, xi, rd, r2d);
            const MainTermResult main = main_term_multiplier(d, lambda, N, xi, qm);
            const double err = std::abs(sigma - main.value);
            rec.measurements.emplace_back(t, err);
            sup_err = std::max(sup_err, err);
            sup_err_q1 = std::max(sup_err_q1, std::abs(sigma - main.layers.front().partial));
            envelope = std::max(envelope, std::abs(sigma) *
                                              std::pow(1.0 + radius * t,
                                                       0.5 * (2.0 * d - 1.0)));
            for (const auto& layer : main.layers)
                gauss_layer_constant =
                    std::max(gauss_layer_constant,
                             layer.max_term_abs *
                                 std::pow(static_cast<double>(layer.q), 0.5 * d));
        }

        MultiplierParams params;
        params.d = d;
        params.lambda = lambda;
        params.N = N;
        params.count_N = r2d.count(lambda);
        const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
        const cplx windowed = arc_multiplier_windowed(1, 1, params, zero);

        rec.add_extra("sup_error", sup_err);
        rec.add_extra("sup_error_q1", sup_err_q1);
        rec.add_extra("envelope_constant", envelope);
        rec.add_extra("gauss_layer_constant", gauss_layer_constant);
        rec.add_extra("windowed_vs_bessel_ratio", std::abs(windowed));
        out.push_back(std::move(rec));
    }
    return out;
}

ExperimentRecord run_singular_series_scan(int d, double p, std::int64_t Q) {
    if (Q < 2) throw std::domain_error("singular series scan: Q must be >= 2");
    ExperimentRecord rec;
    rec.experiment = "singular_series";
    rec.version = kVersion;
    rec.add_param("d", std::to_string(d));
    rec.add_param("p", format_double(p));
    rec.add_param("Q", std::to_string(Q));

    // linear totient sieve
    std::vector<std::int64_t> phi(static_cast<std::size_t>(Q) + 1);
    for (std::int64_t i = 0; i <= Q; ++i) phi[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 2; i <= Q; ++i) {
        if (phi[static_cast<std::size_t>(i)] == i) {  // prime
            for (std::int64_t j = i; j <= Q; j += i)
                phi[static_cast<std::size_t>(j)] -= phi[static_cast<std::size_t>(j)] / i;
        }
    }

    const double expo = static_cast<double>(d) * (1.0 - 1.0 / p);
    double sum = 0.0;
    double first = 0.0;
    double tail_max_term = 0.0;
    std::int64_t next_checkpoint = 1;
    const std::int64_t tail_from = std::max<std::int64_t>(2, Q / 10);
    for (std::int64_t q = 1; q <= Q; ++q) {
        const double term = static_cast<double>(phi[static_cast<std::size_t>(q)]) *
                            std::pow(static_cast<double>(q), -expo);
        sum += term;
        if (q == 1) first = sum;
        if (q >= tail_from) tail_max_term = std::max(tail_max_term, term);
        if (q == next_checkpoint || q == Q) {
            rec.measurements.emplace_back(static_cast<double>(q), sum);
            while (next_checkpoint <= q) next_checkpoint *= 2;
        }
    }
    rec.add_extra("exponent", expo);
    rec.add_extra("final_sum", sum);
    rec.add_extra("first_sum", first);
    rec.add_extra("growth_factor", sum / first);
    rec.add_extra("tail_max_term", tail_max_term);
    return rec;
}

}  // namespace spherelab
