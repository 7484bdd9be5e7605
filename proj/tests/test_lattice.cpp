#include <doctest.h>

#include "oracles.hpp"
#include "spherelab/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

using namespace spherelab;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("one-dimensional counts have the square-indicator structure") {
    RepresentationTable t(1, 30);
    CHECK(t.count(0) == 1);
    CHECK(t.count(4) == 2);
    CHECK(t.count(9) == 2);
    CHECK(t.count(3) == 0);
    CHECK(t.count(30) == 0);
}

TEST_CASE("frozen small counts") {
    RepresentationTable r3(3, 8), r6(6, 8), r2(2, 8);
    CHECK(r3.count(2) == 12);
    CHECK(r6.count(1) == 12);
    CHECK(r2.count(5) == 8);
    for (int k = 1; k <= 6; ++k) CHECK(RepresentationTable(k, 0).count(0) == 1);
}

TEST_CASE("table equals direct enumeration for k <= 6") {
    for (int k = 1; k <= 6; ++k) {
        const std::int64_t lmax = k <= 4 ? 100 : 40;
        RepresentationTable t(k, lmax);
        auto brute = oracles::brute_counts(k, lmax);
        for (std::int64_t m = 0; m <= lmax; ++m)
            CHECK(t.count(m) == brute[static_cast<std::size_t>(m)]);
    }
}

TEST_CASE("convolution identity r_{2d} = r_d * r_d") {
    for (int d : {2, 3, 4}) {
        const std::int64_t lmax = 500;
        RepresentationTable rd(d, lmax), r2d(2 * d, lmax);
        for (std::int64_t lam = 0; lam <= lmax; ++lam) {
            std::int64_t s = 0;
            for (std::int64_t k = 0; k <= lam; ++k) s += rd.count(k) * rd.count(lam - k);
            CHECK(s == r2d.count(lam));
        }
    }
}

TEST_CASE("sphere enumeration: frozen examples, lexicographic order") {
    auto pts = sphere_points(2, 1);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].c[0] == -1);
    CHECK(pts[0].c[1] == 0);
    CHECK(pts[1].c[0] == 0);
    CHECK(pts[1].c[1] == -1);
    CHECK(pts[2].c[0] == 0);
    CHECK(pts[2].c[1] == 1);
    CHECK(pts[3].c[0] == 1);
    CHECK(pts[3].c[1] == 0);

    auto origin = sphere_points(3, 0);
    REQUIRE(origin.size() == 1);
    CHECK(origin[0].norm2() == 0);

    CHECK(sphere_points(2, 3).empty());
    CHECK_THROWS_AS(sphere_points(2, -1), std::domain_error);
}

TEST_CASE("sphere enumeration matches counts and the box-scan oracle") {
    for (int d = 1; d <= 4; ++d) {
        RepresentationTable t(d, 200);
        for (std::int64_t lam = 0; lam <= 200; ++lam) {
            auto pts = sphere_points(d, lam);
            CHECK(static_cast<std::int64_t>(pts.size()) == t.count(lam));
            for (const auto& p : pts) CHECK(p.norm2() == lam);
        }
    }
    auto pts = sphere_points(3, 9);
    auto brute = oracles::brute_sphere(3, 9);
    REQUIRE(pts.size() == brute.size());
    std::sort(brute.begin(), brute.end());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(pts[i].c[c] == brute[i][static_cast<std::size_t>(c)]);
}

TEST_CASE("count_N and the l-linear count") {
    RepresentationTable r6(6, 10), r2(2, 10);
    CHECK(count_N(r6, 3, 1, 2) == 12);
    CHECK(count_N(r6, 3, 0, 2) == 1);
    CHECK(count_N(r2, 2, 5, 1) == 8);
    CHECK_THROWS_AS(count_N(r6, 3, 1, 3), std::domain_error);    // wrong table for the arity
    CHECK_THROWS_AS(count_N(r6, 3, 100, 2), std::out_of_range);  // beyond table range
}

TEST_CASE("regularity ratio: frozen values and the recorded window") {
    RepresentationTable r6(6, 2000), r4(4, 4);
    auto series = regularity_ratio(r6, 3, 1, 2000, 2);
    CHECK(series.front().second == doctest::Approx(12.0));  // N(1)/1^2
    CHECK(series[3].second == doctest::Approx(static_cast<double>(r6.count(4)) / 16.0));
    CHECK(regularity_ratio(r4, 2, 1, 1, 2).front().second == doctest::Approx(8.0));
    // recorded window for d=3, l=2 over [1, 2000]: measured min 10.367, max 20.884
    for (const auto& [lam, ratio] : series) {
        CHECK(ratio > 10.0);
        CHECK(ratio < 21.0);
    }
    CHECK_THROWS_AS(regularity_ratio(r4, 2, 1, 4, 1), std::domain_error);  // l*d/2-1 = 0
}

TEST_CASE("checked count arithmetic fails loudly") {
    CHECK_THROWS_AS(checked_mul(std::int64_t{1} << 62, 4), std::overflow_error);
    CHECK_THROWS_AS(checked_add(std::int64_t{3} << 61, std::int64_t{3} << 61),
                    std::overflow_error);
    CHECK(checked_mul(1 << 20, 1 << 20) == std::int64_t{1} << 40);
}

TEST_CASE("table CSV dump round-trips exactly and validates its stamp") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spherelab_test_tables";
    fs::create_directories(dir);
    const fs::path file = dir / "t.csv";
    RepresentationTable t(5, 64);
    t.dump_csv(file);
    auto back = RepresentationTable::load_csv(file);
    CHECK(back.dim() == 5);
    CHECK(back.lambda_max() == 64);
    for (std::int64_t m = 0; m <= 64; ++m) CHECK(back.count(m) == t.count(m));

    const fs::path bad = dir / "bad.csv";
    std::FILE* f = std::fopen(bad.c_str(), "wb");
    std::fputs("# not a table\n", f);
    std::fclose(f);
    CHECK_THROWS_AS(RepresentationTable::load_csv(bad), std::ios_base::failure);
}

TEST_SUITE_END();
