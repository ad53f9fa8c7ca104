#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heatmann/coef_io.hpp"
#include "heatmann/spectral.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace heatmann;
using heatmann::testing::rel_diff;

TEST_CASE("grid construction") {
    auto g = SpectralGrid::laplacian(4);
    CHECK(g->n_modes() == 4);
    CHECK(g->eigenvalue(1) == 1.0);
    CHECK(g->eigenvalue(4) == 4.0);
    CHECK(g->min_eigenvalue() == 1.0);

    CHECK_THROWS_AS(SpectralGrid::laplacian(0), ConfigError);
    CHECK_THROWS_AS(SpectralGrid::from_eigenvalues({}), ConfigError);
    CHECK_THROWS_AS(SpectralGrid::from_eigenvalues({1.0, 0.5}), ConfigError);
    CHECK_THROWS_AS(SpectralGrid::from_eigenvalues({0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(SpectralGrid::from_eigenvalues({-1.0}), ConfigError);
    CHECK_NOTHROW(SpectralGrid::from_eigenvalues({0.5, 0.5, 2.0}));

    CHECK(same_grid(SpectralGrid::laplacian(3), SpectralGrid::laplacian(3)));
    CHECK_FALSE(same_grid(SpectralGrid::laplacian(3), SpectralGrid::laplacian(4)));
}

TEST_CASE("coefficient vector invariants") {
    auto g = SpectralGrid::laplacian(3);
    CHECK_THROWS_AS(CoefVec(g, {1.0, 2.0}), GridMismatchError);
    CHECK_THROWS_AS(CoefVec(g, {1.0, NAN, 0.0}), DomainError);
    CHECK_THROWS_AS(CoefVec(g, {1.0, INFINITY, 0.0}), DomainError);
    CHECK_THROWS_AS(CoefVec::single_mode(g, 4), ConfigError);

    auto a = CoefVec(g, {1.0, 2.0, 3.0});
    auto b = CoefVec(SpectralGrid::laplacian(4), {1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(a + b, GridMismatchError);
    CHECK_THROWS_AS(inner(a, b), GridMismatchError);
    CHECK(inner(a, a) == 14.0);
}

TEST_CASE("hs_norm examples") {
    auto g = SpectralGrid::laplacian(5);
    CHECK(hs_norm(CoefVec::zeros(g), 3.0) == 0.0);
    CHECK(hs_norm(CoefVec::single_mode(g, 1), 0.0) == 1.0);
    CHECK(hs_norm(CoefVec::single_mode(g, 2), 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    // negative s: dual scale weight (1 + 4)^-1
    CHECK(hs_norm(CoefVec::single_mode(g, 2), -1.0) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));
}

TEST_CASE("hs_norm overflow names the mode") {
    auto g = SpectralGrid::laplacian(64);
    std::vector<double> c(64, 0.0);
    c[63] = 1.0;
    c[10] = 1.0;
    try {
        hs_norm(CoefVec(g, c), 400.0);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        CHECK(e.mode() == 11);
    }
}

TEST_CASE("hs_norm properties") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = SpectralGrid::laplacian(1 + rng() % 64);
        auto v = heatmann::testing::random_vec(g, rng);
        double sq = 0.0;
        for (double c : v.coef()) sq += c * c;
        CHECK(hs_norm(v, 0.0) * hs_norm(v, 0.0) == doctest::Approx(sq).epsilon(1e-14));
        const double s = heatmann::testing::uniform(rng, -3.0, 3.0);
        const double r = s + heatmann::testing::uniform(rng, 0.0, 3.0);
        CHECK(hs_norm(v, s) <= hs_norm(v, r));
    }
}

TEST_CASE("apply_spectral_function examples") {
    auto g = SpectralGrid::laplacian(2);
    auto v = CoefVec(g, {1.0, 1.0});
    CHECK(apply_spectral_function(v, [](double) { return 1.0; }) == v);
    auto h = apply_spectral_function(v, [](double l) { return std::exp(-l * l); });
    CHECK(h[0] == std::exp(-1.0));
    CHECK(h[1] == std::exp(-4.0));
    CHECK(apply_spectral_function(v, [](double) { return 0.0; }) == CoefVec::zeros(g));

    try {
        apply_spectral_function(v, [](double l) { return l > 1.5 ? INFINITY : 1.0; });
        FAIL("expected domain error");
    } catch (const DomainError& e) {
        CHECK(e.mode() == 2);
    }
}

TEST_CASE("apply_spectral_function composes and is linear") {
    std::mt19937_64 rng(11);
    auto g = SpectralGrid::laplacian(32);
    auto gf = [](double l) { return std::exp(-0.01 * l * l); };
    auto hf = [](double l) { return 1.0 / (1.0 + l); };
    for (int trial = 0; trial < 50; ++trial) {
        auto u = heatmann::testing::random_vec(g, rng);
        auto w = heatmann::testing::random_vec(g, rng);
        auto composed = apply_spectral_function(apply_spectral_function(u, gf), hf);
        auto product = apply_spectral_function(u, [&](double l) { return gf(l) * hf(l); });
        for (std::size_t j = 0; j < u.size(); ++j) {
            CHECK(rel_diff(composed[j], product[j]) <= 1e-15);
        }
        const double a = heatmann::testing::uniform(rng, -2, 2), b = heatmann::testing::uniform(rng, -2, 2);
        auto lhs = apply_spectral_function(lincomb(a, u, b, w), gf);
        auto rhs = lincomb(a, apply_spectral_function(u, gf), b, apply_spectral_function(w, gf));
        CHECK(rel_diff(lhs, rhs) <= 1e-14);
    }
}

TEST_CASE("synthesize examples") {
    auto g1 = SpectralGrid::laplacian(1);
    const double half_pi = std::numbers::pi / 2;
    CHECK(synthesize(CoefVec::single_mode(g1, 1), std::vector<double>{half_pi})[0] == 1.0);

    auto g2 = SpectralGrid::laplacian(2);
    const std::vector<double> pts{-1.0, 0.0, 0.3, 2.0};
    for (double y : synthesize(CoefVec::zeros(g2), pts)) CHECK(y == 0.0);
    CHECK(synthesize(CoefVec(g2, {0.0, 1.0}), std::vector<double>{std::numbers::pi / 4})[0] ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(synthesize(CoefVec::zeros(g2), std::vector<double>{std::numbers::pi}), ConfigError);
    CHECK_THROWS_AS(synthesize(CoefVec::zeros(g2), std::vector<double>{NAN}), ConfigError);
}

TEST_CASE("coefficient serialization round trip") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = SpectralGrid::laplacian(1 + rng() % 64);
        auto v = heatmann::testing::random_vec(g, rng, std::pow(10.0, heatmann::testing::uniform(rng, -12, 12)));
        const std::string line = io::to_json_line(v);
        CHECK(line.find('\n') == std::string::npos);
        CHECK(io::from_json(g, line) == v);
        CHECK(io::from_csv(g, io::to_csv(v)) == v);
    }
}

TEST_CASE("coefficient parsing errors") {
    auto g = SpectralGrid::laplacian(2);
    CHECK(io::to_csv(CoefVec(g, {0.5, -2.0})) == "mode,coefficient\n1,0.5\n2,-2\n");
    CHECK_THROWS_AS(io::parse_json_coefficients("{\"a\":1}"), ConfigError);
    CHECK_THROWS_AS(io::parse_json_coefficients("[1, \"x\"]"), ConfigError);
    CHECK_THROWS_AS(io::parse_json_coefficients("[1,"), ConfigError);
    CHECK_THROWS_AS(io::parse_csv_coefficients("1,0.5\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_csv_coefficients("mode,coefficient\n2,0.5\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_csv_coefficients("mode,coefficient\n1,abc\n"), ConfigError);
    CHECK_THROWS_AS(io::from_json(g, "[1,2,3]"), GridMismatchError);
}
