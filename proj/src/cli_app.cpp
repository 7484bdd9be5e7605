#include "spherelab/cli_app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "spherelab/averaging.hpp"
#include "spherelab/bessel.hpp"
#include "spherelab/parallel.hpp"
#include "spherelab/report.hpp"
#include "spherelab/spectral.hpp"

namespace spherelab {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        out.push_back(std::stod(field));
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated list of numbers");
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        out.push_back(std::stoll(field));
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated list of integers");
    return out;
}

std::string complex_string(cplx z) {
    return format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i";
}

RepresentationTable cached_table(int dim, std::int64_t lambda_max, const std::string& cache_dir) {
    if (cache_dir.empty()) return RepresentationTable(dim, lambda_max);
    fs::path file = fs::path(cache_dir) / ("rtable_v1_d" + std::to_string(dim) + "_L" +
                                           std::to_string(lambda_max) + ".csv");
    if (fs::exists(file)) {
        try {
            auto t = RepresentationTable::load_csv(file);
            if (t.dim() == dim && t.lambda_max() == lambda_max) return t;
        } catch (const std::exception&) {
            // stale or mismatched cache entry: rebuild below
        }
    }
    RepresentationTable t(dim, lambda_max);
    fs::create_directories(cache_dir);
    t.dump_csv(file);
    return t;
}

LatticeFunction parse_function_spec(const std::string& spec, int dim) {
    auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "delta") return LatticeFunction::delta(dim);
    if (kind == "const")
        return LatticeFunction::constant(dim, arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "box") {
        if (arg.empty()) throw CLI::ValidationError("box spec needs a side: box:L");
        return LatticeFunction::box(dim, std::stoll(arg));
    }
    if (kind == "json") {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw std::ios_base::failure("cannot read function file: " + arg);
        std::stringstream buf;
        buf << in.rdbuf();
        return LatticeFunction::from_json(buf.str());
    }
    if (kind == "csv") return LatticeFunction::load_csv(arg);
    throw CLI::ValidationError("unknown function spec '" + spec +
                               "' (use delta | const[:c] | box:L | json:path | csv:path)");
}

void write_text(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for write: " + p.string());
    out << content;
    if (!out) throw std::ios_base::failure("write failed: " + p.string());
}

}  // namespace

std::unique_ptr<CLI::App> build_cli(CliState& st) {
    auto app = std::make_unique<CLI::App>("numerical laboratory for discrete multilinear "
                                          "spherical averages on Z^d");
    app->option_defaults()->always_capture_default();
    app->require_subcommand(0, 1);
    app->fallthrough();
    app->set_config("--config", "", "configuration file (key = value, one section per subcommand)");
    app->add_option("--out", st.out_dir, "output directory for result files");
    app->add_option("--table-cache", st.table_cache,
                    "directory for cached representation tables (CSV, version stamped)");
    app->add_option("--seed", st.seed, "random seed recorded in experiment provenance");
    app->add_option("--threads", st.threads, "worker thread cap (0 = hardware default)")
        ->each([](const std::string& s) { set_thread_cap(std::stoi(s)); });
    app->add_flag("--svg", st.svg, "also emit SVG plots for experiment reports");

    auto add_dim = [&](CLI::App* c, const char* help) {
        c->add_option("--dim,-d", st.dim, help)->check(CLI::Range(1, kMaxDim));
    };

    // ---- count ----
    auto* count = app->add_subcommand(
        "count", "number of lattice points with |u|^2 = lambda in Z^dim");
    add_dim(count, "ambient dimension of the count (integer, 1..8)");
    count->add_option("--lambda", st.lambda, "squared radius (nonnegative integer)");
    count->add_option("--lambda-max", st.lambda_max,
                      "table size; defaults to lambda (nonnegative integer)");
    count->callback([&st] {
        const std::int64_t lmax = st.lambda_max >= 0 ? st.lambda_max : st.lambda;
        if (lmax < st.lambda) throw std::domain_error("count: lambda-max below lambda");
        auto table = cached_table(st.dim, lmax, st.table_cache);
        std::cout << table.count(st.lambda) << "\n";
    });

    // ---- sphere ----
    auto* sphere =
        app->add_subcommand("sphere", "enumerate the lattice points with |u|^2 = lambda");
    add_dim(sphere, "dimension d of the lattice (integer, 1..8)");
    sphere->add_option("--lambda", st.lambda, "squared radius (nonnegative integer)");
    sphere->callback([&st] {
        auto pts = sphere_points(st.dim, st.lambda);
        std::vector<std::pair<LatticePoint, double>> entries;
        entries.reserve(pts.size());
        for (const auto& p : pts) entries.emplace_back(p, 1.0);
        auto f = LatticeFunction::sparse(st.dim, std::move(entries));
        fs::create_directories(st.out_dir);
        const fs::path file = fs::path(st.out_dir) / "sphere.csv";
        f.dump_csv(file);
        std::cout << "sphere d=" << st.dim << " lambda=" << st.lambda << ": " << pts.size()
                  << " points -> " << file.string() << "\n";
    });

    // ---- sigma-hat ----
    auto* sig = app->add_subcommand(
        "sigma-hat", "exact symbol of the normalized sphere measure at frequency xi");
    add_dim(sig, "dimension d of each factor (functions live on Z^d)");
    sig->add_option("--lambda", st.lambda, "squared radius (positive integer)");
    sig->add_option("--xi", st.xi_text, "frequency in T^d (comma floats, units of full turns)");
    sig->callback([&st] {
        auto xi = parse_doubles(st.xi_text);
        if (static_cast<int>(xi.size()) != st.dim)
            throw std::domain_error("sigma-hat: xi needs exactly dim entries");
        auto rd = cached_table(st.dim, st.lambda, st.table_cache);
        auto r2d = cached_table(2 * st.dim, st.lambda, st.table_cache);
        cplx v = lattice_sphere_symbol(st.dim, st.lambda, xi, rd, r2d);
        std::cout << complex_string(v) << "\n";
    });

    // ---- arcs ----
    auto* arcs = app->add_subcommand("arcs", "Farey arc dissection of the circle");
    arcs->add_option("--N", st.big_n, "dissection parameter (arcs at a/q, q <= N, width 1/(8qN))");
    arcs->callback([&st] {
        ArcSet set = farey_major_arcs(st.big_n);
        std::string csv = "a,q,center,half_width\n";
        for (const auto& arc : set.arcs)
            csv += std::to_string(arc.a) + "," + std::to_string(arc.q) + "," +
                   format_double(arc.center) + "," + format_double(arc.half_width) + "\n";
        const fs::path file = fs::path(st.out_dir) / "arcs.csv";
        write_text(file, csv);
        std::cout << "N=" << st.big_n << ": " << set.arcs.size() << " arcs, disjoint="
                  << (arcs_pairwise_disjoint(set) ? "yes" : "no") << " -> " << file.string()
                  << "\n";
    });

    // ---- gauss ----
    auto* gauss = app->add_subcommand("gauss", "normalized quadratic Gauss sum g(l,a,q)");
    gauss->add_option("--l", st.gauss_l, "linear coefficient (integer)");
    gauss->add_option("--a", st.gauss_a, "quadratic coefficient, coprime to q (integer)");
    gauss->add_option("--q", st.gauss_q, "modulus (positive integer)");
    gauss->callback([&st] {
        cplx v = quadratic_gauss_sum(st.gauss_l, st.gauss_a, st.gauss_q);
        std::cout << complex_string(v) << "  |.|=" << format_double(std::abs(v)) << "\n";
    });

    // ---- weyl ----
    auto* weyl = app->add_subcommand("weyl", "quadratic Weyl sum S_N(theta, xi)");
    weyl->add_option("--N", st.big_n, "summation length (terms u = 0..N)");
    weyl->add_option("--theta", st.theta, "quadratic phase in T (full turns)");
    weyl->add_option("--xi", st.xi_text, "linear phase in T (full turns, single float)");
    weyl->callback([&st] {
        auto xi = parse_doubles(st.xi_text);
        cplx v = weyl_sum(st.big_n, st.theta, xi.front());
        std::cout << complex_string(v) << "  |.|=" << format_double(std::abs(v)) << "\n";
    });

    // ---- average ----
    auto* avg = app->add_subcommand(
        "average", "multilinear spherical average T_lambda applied to the given functions");
    add_dim(avg, "dimension d of each function's lattice");
    avg->add_option("--lambda", st.lambda, "squared radius (nonnegative integer)");
    avg->add_option("--arity", st.arity, "number of function slots l")->check(CLI::Range(1, 4));
    avg->add_option("--fn", st.fn_specs,
                    "function per slot: delta | const[:c] | box:L | json:path | csv:path");
    avg->callback([&st] {
        if (static_cast<int>(st.fn_specs.size()) != st.arity)
            throw std::domain_error("average: need exactly --arity function specs");
        std::vector<LatticeFunction> fns;
        for (const auto& s : st.fn_specs) fns.push_back(parse_function_spec(s, st.dim));
        auto rd = cached_table(st.dim, st.lambda, st.table_cache);
        auto rld = cached_table(st.dim * st.arity, st.lambda, st.table_cache);
        AverageResult res = multilinear_average(fns, st.lambda, rd, rld);
        fs::create_directories(st.out_dir);
        const fs::path file = fs::path(st.out_dir) / "average.json";
        write_text(file, res.values.to_json() + "\n");
        LatticePoint origin;
        origin.dim = st.dim;
        std::cout << "T_" << st.lambda << ": value(0)=" << format_double(res.values.at(origin))
                  << " -> " << file.string() << "\n";
    });

    // ---- maximal ----
    auto* maximal = app->add_subcommand(
        "maximal", "pointwise max of |T_lambda| over the range 0..lambda-max");
    add_dim(maximal, "dimension d of each function's lattice");
    maximal->add_option("--lambda-max", st.lambda_max, "last lambda of the truncation range");
    maximal->add_option("--arity", st.arity, "number of function slots l")
        ->check(CLI::Range(1, 4));
    maximal->add_option("--fn", st.fn_specs,
                        "function per slot: delta | const[:c] | box:L | json:path | csv:path");
    maximal->callback([&st] {
        if (static_cast<int>(st.fn_specs.size()) != st.arity)
            throw std::domain_error("maximal: need exactly --arity function specs");
        const std::int64_t lmax = st.lambda_max >= 0 ? st.lambda_max : 4;
        std::vector<LatticeFunction> fns;
        for (const auto& s : st.fn_specs) fns.push_back(parse_function_spec(s, st.dim));
        auto rd = cached_table(st.dim, lmax, st.table_cache);
        auto rld = cached_table(st.dim * st.arity, lmax, st.table_cache);
        std::vector<std::int64_t> range;
        for (std::int64_t l = 0; l <= lmax; ++l) range.push_back(l);
        MaximalResult res = maximal_average(fns, range, rd, rld);
        fs::create_directories(st.out_dir);
        const fs::path file = fs::path(st.out_dir) / "maximal.json";
        write_text(file, res.values.to_json() + "\n");
        std::string skips;
        for (auto s : res.skipped) skips += " " + std::to_string(s);
        std::cout << "T* over lambda=0.." << lmax
                  << ": sup=" << format_double(lp_norm(res.values, kInfOrder))
                  << " skipped_lambdas=[" << (skips.empty() ? "" : skips.substr(1)) << "] -> "
                  << file.string() << "\n";
    });

    // ---- multiplier ----
    auto* mult = app->add_subcommand(
        "multiplier", "arc multipliers at frequency xi (main Bessel form, windowed or raw)");
    add_dim(mult, "dimension d of each factor");
    mult->add_option("--lambda", st.lambda, "squared radius (positive integer)");
    mult->add_option("--xi", st.xi_text, "frequency in T^d (comma floats)");
    mult->add_option("--q-max", st.q_max, "largest arc denominator (0 = dissection limit N)");
    mult->add_option("--N", st.big_n, "dissection parameter (0 = floor(sqrt(lambda)))")
        ->default_val(0);
    mult->add_option("--form", st.form, "main | windowed | raw")
        ->check(CLI::IsMember({"main", "windowed", "raw"}));
    mult->add_option("--a", st.gauss_a, "arc numerator (windowed/raw forms)");
    mult->add_option("--q", st.gauss_q, "arc denominator (windowed/raw forms)");
    mult->callback([&st] {
        auto xi = parse_doubles(st.xi_text);
        if (static_cast<int>(xi.size()) != st.dim)
            throw std::domain_error("multiplier: xi needs exactly dim entries");
        const std::int64_t N =
            st.big_n > 0 ? st.big_n : std::max<std::int64_t>(1, isqrt_floor(st.lambda));
        if (st.form == "main") {
            const std::int64_t qm = st.q_max > 0 ? std::min(st.q_max, N) : N;
            MainTermResult res = main_term_multiplier(st.dim, st.lambda, N, xi, qm);
            std::string csv = "lambda";
            for (int i = 0; i < st.dim; ++i) csv += ",xi_" + std::to_string(i + 1);
            csv += ",re,im,layer_q\n";
            for (const auto& layer : res.layers) {
                csv += std::to_string(st.lambda);
                for (int i = 0; i < st.dim; ++i) csv += "," + format_double(xi[static_cast<std::size_t>(i)]);
                csv += "," + format_double(layer.partial.real()) + "," +
                       format_double(layer.partial.imag()) + "," + std::to_string(layer.q) + "\n";
            }
            const fs::path file = fs::path(st.out_dir) / "multiplier_layers.csv";
            write_text(file, csv);
            std::cout << complex_string(res.value) << " (q<=" << qm << ") -> " << file.string()
                      << "\n";
        } else {
            auto r2d = cached_table(2 * st.dim, st.lambda, st.table_cache);
            MultiplierParams params;
            params.d = st.dim;
            params.lambda = st.lambda;
            params.N = N;
            params.count_N = r2d.count(st.lambda);
            cplx v = st.form == "windowed"
                         ? arc_multiplier_windowed(st.gauss_a, st.gauss_q, params, xi)
                         : arc_multiplier_raw(st.gauss_a, st.gauss_q, params, xi);
            std::cout << complex_string(v) << "\n";
        }
    });

    // ---- experiment ----
    auto* exp = app->add_subcommand("experiment", "scripted experiments with file reports");
    exp->require_subcommand(1);

    auto* scaling = exp->add_subcommand("scaling", "box-pair norm growth in the side length L");
    add_dim(scaling, "dimension d (3 is the default experiment dimension)");
    scaling->add_option("--sizes", st.sizes_text, "box sides L (comma integers)");
    scaling->add_option("--p", st.p_exp, "first input exponent");
    scaling->add_option("--q-exp", st.q_exp, "second input exponent");
    scaling->add_option("--r", st.r_exp, "output exponent");
    scaling->add_option("--lambda-max", st.lambda_max, "lambda truncation of the maximal operator")
        ->default_val(4);
    scaling->callback([&st] {
        auto rec = run_scaling_experiment(st.dim, parse_ints(st.sizes_text), st.p_exp, st.q_exp,
                                          st.r_exp,
                                          st.lambda_max >= 0 ? st.lambda_max : 4);
        emit_report({rec}, st.out_dir, {true, true, st.svg});
        std::cout << "scaling: fitted slope " << format_double(rec.fit->slope) << " (expected "
                  << format_double(rec.extra("expected_slope")) << ", residual "
                  << format_double(rec.fit->residual_rms) << ") -> " << st.out_dir << "\n";
    });

    auto* sharp = exp->add_subcommand("sharpness",
                                      "partial sums of the delta/constant pair at lambda = n|x|^2");
    add_dim(sharp, "dimension d (>= 3)");
    sharp->add_option("--n", st.sharp_n, "radius multiplier n in lambda = n|x|^2");
    sharp->add_option("--R-max", st.r_max, "largest |x| radius scanned");
    sharp->add_option("--p", st.p_exp, "exponent of each term");
    sharp->callback([&st] {
        auto rec = run_sharpness_experiment(st.dim, st.sharp_n, st.r_max, st.p_exp);
        emit_report({rec}, st.out_dir, {true, true, st.svg});
        std::cout << "sharpness n=" << st.sharp_n << ": " << rec.classification << " (tail "
                  << format_double(rec.extra("tail_max_term")) << ", growth "
                  << format_double(rec.extra("growth_frac")) << ") -> " << st.out_dir << "\n";
    });

    auto* holder = exp->add_subcommand("holder", "norm-ratio stability over exponent triples");
    add_dim(holder, "dimension d");
    holder->add_option("--triples", st.triples_text,
                       "p,q,r triples separated by ';' (q/r may be 'inf')");
    holder->add_option("--family", st.family, "box | random-sparse | delta-constant");
    holder->add_option("--sizes", st.sizes_text, "size schedule (comma integers)");
    holder->callback([&st] {
        std::vector<std::array<double, 3>> triples;
        std::stringstream ss(st.triples_text);
        std::string part;
        while (std::getline(ss, part, ';')) {
            auto vals = parse_doubles(part);
            if (vals.size() != 3)
                throw std::domain_error("holder: each triple needs p,q,r");
            triples.push_back({vals[0], vals[1], vals[2]});
        }
        auto grid = SweepGrid::make(triples, st.family, parse_ints(st.sizes_text));
        auto recs = run_holder_sweep(grid, st.dim);
        emit_report(recs, st.out_dir, {true, true, st.svg});
        std::cout << "holder sweep: " << recs.size() << " triples -> " << st.out_dir << "\n";
    });

    auto* weylx = exp->add_subcommand("weyl", "minor-arc Weyl sup growth over dyadic N");
    weylx->add_option("--N-list", st.n_list_text, "dyadic N values (comma integers, >= 5)");
    weylx->add_option("--samples", st.samples, "minor-arc theta samples per N");
    weylx->callback([&st] {
        auto rec = run_weyl_experiment(parse_ints(st.n_list_text), st.samples, st.seed);
        emit_report({rec}, st.out_dir, {true, true, st.svg});
        std::cout << "weyl decay: fitted exponent " << format_double(rec.fit->slope)
                  << " (residual " << format_double(rec.fit->residual_rms) << ") -> "
                  << st.out_dir << "\n";
    });

    auto* errd = exp->add_subcommand("error-decay", "minor-arc integral decay over dyadic N");
    add_dim(errd, "dimension d (3 is the default; cost grows like N^2 FFTs)");
    errd->add_option("--N-list", st.n_list_text, "N values (comma integers, each <= 128)");
    errd->callback([&st] {
        auto recs = run_error_decay_experiment(st.dim, parse_ints(st.n_list_text));
        emit_report(recs, st.out_dir, {true, true, st.svg});
        std::cout << "error decay: delta_fit " << format_double(recs[0].extra("delta_fit"))
                  << ", unnormalized exponent "
                  << format_double(recs[1].extra("growth_exponent")) << " -> " << st.out_dir
                  << "\n";
    });

    auto* multx = exp->add_subcommand("multiplier",
                                      "exact symbol vs main-term multiplier on an axis grid");
    add_dim(multx, "dimension d");
    multx->add_option("--lambda-list", st.lambda_list_text, "lambda values (comma integers)");
    multx->add_option("--xi-points", st.xi_points, "grid points on the axis t in [0, 1/2]");
    multx->add_option("--q-max", st.q_max, "largest arc denominator (0 = floor(sqrt(lambda)))");
    multx->callback([&st] {
        auto recs = run_multiplier_comparison(st.dim, parse_ints(st.lambda_list_text),
                                              st.xi_points, st.q_max);
        emit_report(recs, st.out_dir, {true, true, st.svg});
        for (const auto& rec : recs)
            std::cout << "multiplier agreement lambda=" << rec.params[1].second << ": sup error "
                      << format_double(rec.extra("sup_error")) << "\n";
        std::cout << "-> " << st.out_dir << "\n";
    });

    auto* sing = exp->add_subcommand("singular-series",
                                     "partial sums of phi(q) q^{-d(1-1/p)} with checkpoints");
    add_dim(sing, "dimension d");
    sing->add_option("--p", st.p_exp, "exponent p of the target bound");
    sing->add_option("--Q", st.big_q, "summation limit");
    sing->callback([&st] {
        auto rec = run_singular_series_scan(st.dim, st.p_exp, st.big_q);
        emit_report({rec}, st.out_dir, {true, true, st.svg});
        std::cout << "singular series: final sum " << format_double(rec.extra("final_sum"))
                  << ", growth factor " << format_double(rec.extra("growth_factor")) << " -> "
                  << st.out_dir << "\n";
    });

    // allow "[subcommand]" sections in config files
    std::function<void(CLI::App*)> mark = [&](CLI::App* a) {
        for (auto* sub : a->get_subcommands({})) {
            sub->configurable();
            mark(sub);
        }
    };
    mark(app.get());

    return app;
}

int run_cli(int argc, const char* const* argv) {
    CliState st;
    auto app = build_cli(st);
    try {
        app->parse(argc, argv);
        if (app->get_subcommands().empty()) {
            std::cout << app->help();
            return kExitOk;
        }
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        int code = app->exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const guard_error& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const quadrature_error& e) {
        std::cerr << "quadrature: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "domain: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::out_of_range& e) {
        std::cerr << "domain: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spherelab
