#include <doctest.h>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spherelab/cli_app.hpp"
#include "spherelab/report.hpp"

using namespace spherelab;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("report_cli");

namespace {

ExperimentRecord sample_record() {
    ExperimentRecord rec;
    rec.experiment = "demo";
    rec.version = kVersion;
    rec.seed = 7;
    rec.add_param("d", "3");
    rec.add_param("note", "a,b \"quoted\"");
    rec.measurements = {{2.0, 8.1}, {4.0, 64.5}, {8.0, 511.0}};
    rec.fit = fit_loglog(rec.measurements);
    rec.add_extra("answer", 42.0);
    return rec;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"spherelab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string run_capture(const std::vector<std::string>& args, int& code) {
    std::ostringstream captured;
    auto* old = std::cout.rdbuf(captured.rdbuf());
    code = run(args);
    std::cout.rdbuf(old);
    return captured.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "spherelab_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("csv emission round-trips through the documented schema") {
    auto rec = sample_record();
    std::string csv = records_to_csv({rec});
    auto rows = parse_report_csv(csv);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].experiment == "demo");
        CHECK(rows[i].abscissa == rec.measurements[i].first);
        CHECK(rows[i].value == rec.measurements[i].second);
        CHECK(rows[i].param_json.find("\"d\":\"3\"") != std::string::npos);
    }
}

TEST_CASE("emission is byte-stable and refuses empty records") {
    auto rec = sample_record();
    CHECK(records_to_csv({rec}) == records_to_csv({rec}));
    CHECK(records_to_json({rec}) == records_to_json({rec}));
    CHECK(record_to_svg(rec) == record_to_svg(rec));

    ExperimentRecord empty;
    empty.experiment = "empty";
    CHECK_THROWS_AS(records_to_csv({empty}), std::domain_error);
    CHECK_THROWS_AS(records_to_json({empty}), std::domain_error);
    CHECK_THROWS_AS(emit_report({}, "/tmp/never"), std::domain_error);
}

TEST_CASE("json carries schema version, fit, extras") {
    std::string j = records_to_json({sample_record()});
    CHECK(j.find("\"schema_version\": 1") != std::string::npos);
    CHECK(j.find("\"slope\"") != std::string::npos);
    CHECK(j.find("\"answer\": 42.0") != std::string::npos);
    CHECK(j.find("\"classification\"") == std::string::npos);  // unset -> omitted
}

TEST_CASE("svg plots are self-contained") {
    std::string svg = record_to_svg(sample_record());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("slope") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);  // no external assets
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("emit_report writes the requested files") {
    auto dir = fresh_dir("emit");
    auto files = emit_report({sample_record()}, dir, {true, true, true});
    REQUIRE(files.size() == 3);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "demo_0.svg"));
}

TEST_CASE("cli: every documented flag appears on its subcommand") {
    CliState st;
    auto app = build_cli(st);
    const std::vector<std::string> subcommands{"count",   "sphere",  "sigma-hat", "arcs",
                                              "gauss",   "weyl",    "average",   "maximal",
                                              "multiplier", "experiment"};
    for (const auto& name : subcommands) {
        auto* sub = app->get_subcommand(name);
        REQUIRE(sub != nullptr);
        CHECK_FALSE(sub->get_description().empty());
    }
    // global flags
    for (const std::string opt : {"--out", "--seed", "--threads", "--config", "--table-cache"})
        CHECK(app->get_option(opt) != nullptr);
    // operation flags, spec'd spellings
    CHECK(app->get_subcommand("count")->get_option("--dim") != nullptr);
    CHECK(app->get_subcommand("count")->get_option("--lambda") != nullptr);
    CHECK(app->get_subcommand("count")->get_option("--lambda-max") != nullptr);
    CHECK(app->get_subcommand("sigma-hat")->get_option("--xi") != nullptr);
    CHECK(app->get_subcommand("multiplier")->get_option("--q-max") != nullptr);
    CHECK(app->get_subcommand("weyl")->get_option("--N") != nullptr);
    CHECK(app->get_subcommand("average")->get_option("--arity") != nullptr);
    auto* exp = app->get_subcommand("experiment");
    CHECK(exp->get_subcommand("scaling")->get_option("--sizes") != nullptr);
    CHECK(exp->get_subcommand("scaling")->get_option("--p") != nullptr);
    CHECK(exp->get_subcommand("scaling")->get_option("--q-exp") != nullptr);
    CHECK(exp->get_subcommand("scaling")->get_option("--r") != nullptr);

    // every option documents a default or is a flag; help text renders
    for (const auto& name : subcommands) {
        auto* sub = app->get_subcommand(name);
        CHECK_FALSE(sub->help().empty());
        for (const auto* opt : sub->get_options()) {
            if (opt->get_expected_min() == 0) continue;  // pure flags
            CHECK_FALSE(opt->get_description().empty());
        }
    }
}

TEST_CASE("cli: dispatch, outputs, exit codes") {
    int code = 0;

    SUBCASE("count prints the representation count") {
        auto out = run_capture({"count", "--dim", "6", "--lambda", "1"}, code);
        CHECK(code == kExitOk);
        CHECK(out == "12\n");
    }

    SUBCASE("sigma-hat prints the normalized value") {
        auto out = run_capture({"sigma-hat", "--dim", "3", "--lambda", "1", "--xi", "0,0,0"}, code);
        CHECK(code == kExitOk);
        CHECK(out.rfind("1+0i", 0) == 0);
    }

    SUBCASE("unknown subcommand is a usage error") {
        CHECK(run({"frobnicate"}) == kExitUsage);
    }

    SUBCASE("bad flag value is a usage error") {
        CHECK(run({"count", "--dim", "banana"}) == kExitUsage);
    }

    SUBCASE("empty sphere surfaces as a domain error") {
        CHECK(run({"sigma-hat", "--dim", "1", "--lambda", "3", "--xi", "0"}) == kExitDomain);
    }

    SUBCASE("oversized modulus trips the guard") {
        CHECK(run({"gauss", "--l", "0", "--a", "1", "--q", "7000001"}) == kExitGuard);
    }

    SUBCASE("unwritable output directory is an io error") {
        CHECK(run({"arcs", "--N", "4", "--out", "/proc/version/sub"}) == kExitIo);
    }
}

TEST_CASE("cli: identical flags produce byte-identical reports") {
    auto dir1 = fresh_dir("rep1");
    auto dir2 = fresh_dir("rep2");
    const std::vector<std::string> base{"experiment", "scaling", "--dim",  "3",
                                        "--sizes",    "2,4,8,16", "--p",   "2",
                                        "--q-exp",    "2",        "--r",   "1"};
    auto args1 = base;
    args1.push_back("--out");
    args1.push_back(dir1.string());
    auto args2 = base;
    args2.push_back("--out");
    args2.push_back(dir2.string());
    int code = 0;
    run_capture(args1, code);
    CHECK(code == kExitOk);
    run_capture(args2, code);
    CHECK(code == kExitOk);
    CHECK(slurp(dir1 / "report.csv") == slurp(dir2 / "report.csv"));
    CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
}

TEST_CASE("cli: table cache is created, reused, and survives corruption") {
    auto cache = fresh_dir("cache");
    int code = 0;
    auto first = run_capture(
        {"count", "--dim", "4", "--lambda", "20", "--table-cache", cache.string()}, code);
    CHECK(code == kExitOk);
    const fs::path file = cache / "rtable_v1_d4_L20.csv";
    CHECK(fs::exists(file));
    auto second = run_capture(
        {"count", "--dim", "4", "--lambda", "20", "--table-cache", cache.string()}, code);
    CHECK(first == second);

    std::ofstream(file, std::ios::binary) << "# stale garbage\n";
    auto third = run_capture(
        {"count", "--dim", "4", "--lambda", "20", "--table-cache", cache.string()}, code);
    CHECK(code == kExitOk);
    CHECK(third == first);
}

TEST_CASE("cli: config file supplies defaults, flags win") {
    auto dir = fresh_dir("config");
    const fs::path cfg = dir / "run.ini";
    std::ofstream(cfg) << "[count]\ndim=6\nlambda=1\n";
    int code = 0;
    auto out = run_capture({"--config", cfg.string(), "count"}, code);
    CHECK(code == kExitOk);
    CHECK(out == "12\n");
    // explicit flag overrides the config value
    auto out2 = run_capture({"--config", cfg.string(), "count", "--dim", "3"}, code);
    CHECK(code == kExitOk);
    CHECK(out2 == "6\n");
}

TEST_CASE("lattice function io: csv and json round trips") {
    auto dir = fresh_dir("fnio");
    Rng rng(9);
    auto f = random_sparse_function(rng, 3, 12, 6);
    const fs::path file = dir / "f.csv";
    f.dump_csv(file);
    auto back = LatticeFunction::load_csv(file);
    CHECK(back.values().size() == f.values().size());
    for (const auto& [x, v] : f.values()) CHECK(back.at(x) == v);

    auto again = LatticeFunction::from_json(f.to_json());
    for (const auto& [x, v] : f.values()) CHECK(again.at(x) == v);

    auto c = LatticeFunction::from_json(LatticeFunction::constant(2, 3.5).to_json());
    CHECK(c.kind() == LatticeFunction::Kind::Constant);
    CHECK(c.constant_value() == 3.5);
    auto b = LatticeFunction::from_json(LatticeFunction::box(2, 9).to_json());
    CHECK(b.kind() == LatticeFunction::Kind::Box);
    CHECK(b.box_side() == 9);
}

TEST_SUITE_END();
