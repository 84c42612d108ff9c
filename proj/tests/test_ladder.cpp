#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "metazeta/errors.hpp"
#include "metazeta/ladder.hpp"

using namespace metazeta;

namespace {

const LadderTable& desk_table()
{
    static const LadderTable table = build_ladder(2000.0, 12000.0, 0.05, EvalConfig{});
    return table;
}

constexpr double kBaseWidth = 0.2;

IteratedInterval desk_base()
{
    const double a = std::numbers::pi * 1592.0;
    return {0, a, a + kBaseWidth};
}

// integral over the r-th reverse iterate of F(phi^r(t)) * prod_{j<r} Z~^2(phi^j(t))
template <typename F>
double pulled_back(const LadderTable& table, const IteratedInterval& interval, F&& f)
{
    const auto& cfg = table.config();
    auto integrand = [&](double t) {
        double weight = 1.0;
        for (int j = 0; j < interval.r; ++j) {
            weight *= z_tilde_sq(t, cfg);
            t = phi1(table, t);
        }
        return f(t) * weight;
    };
    const auto breaks = grid_breakpoints(table, interval.lo, interval.hi);
    return numerics::integrate(integrand, breaks, {.rel_tol = 1e-11}).value;
}

}  // namespace

TEST_CASE("degenerate and invalid builds are rejected")
{
    CHECK_THROWS_AS(build_ladder(3000.0, 3000.0, 0.05, EvalConfig{}), ConfigError);
    CHECK_THROWS_AS(build_ladder(3000.0, 3001.0, 0.06, EvalConfig{}), ConfigError);
    CHECK_THROWS_AS(build_ladder(50.0, 60.0, 0.05, EvalConfig{}), ConfigError);
}

TEST_CASE("explicit anchor at or above the diagonal raises an anchor error")
{
    CHECK_THROWS_AS(build_ladder(3000.0, 3010.0, 0.05, EvalConfig{}, {.anchor_phi = 3000.0}), AnchorError);
    const auto ok = build_ladder(3000.0, 3010.0, 0.05, EvalConfig{}, {.anchor_phi = 2000.0});
    CHECK(ok.anchor_phi() == 2000.0);
}

TEST_CASE("table invariants")
{
    const auto& table = desk_table();
    const auto& g = table.grid();
    const auto& p = table.phi();
    REQUIRE(g.size() == 200001);
    for (std::size_t i = 0; i < g.size(); ++i) {
        REQUIRE(p[i] < g[i]);
        if (i > 0) {
            REQUIRE(p[i] > p[i - 1]);
        }
    }
    CHECK(phi1(table, table.anchor_t()) == table.anchor_phi());
    CHECK(phi1_inv(table, table.anchor_phi()) == table.anchor_t());
}

TEST_CASE("additivity over grid triples")
{
    const auto& table = desk_table();
    const auto& p = table.phi();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
    for (int n = 0; n < 200; ++n) {
        std::array<std::size_t, 3> idx = {pick(rng), pick(rng), pick(rng)};
        std::sort(idx.begin(), idx.end());
        const double whole = p[idx[2]] - p[idx[0]];
        const double split = (p[idx[1]] - p[idx[0]]) + (p[idx[2]] - p[idx[1]]);
        CHECK(std::abs(whole - split) <= 1e-12 * std::max(1.0, std::abs(whole)));
    }
}

TEST_CASE("phi1 is strictly increasing and round-trips through its inverse")
{
    const auto& table = desk_table();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ts(table.t_lo(), table.t_hi());
    for (int n = 0; n < 100; ++n) {
        double a = ts(rng);
        double b = ts(rng);
        if (a > b) {
            std::swap(a, b);
        }
        if (a < b) {
            CHECK(phi1(table, a) < phi1(table, b));
        }
    }
    std::uniform_real_distribution<double> ys(table.phi_lo(), table.phi_hi());
    double worst = 0.0;
    double previous_y = table.phi_lo();
    double previous_t = table.t_lo();
    std::vector<double> samples(100);
    for (auto& y : samples) {
        y = ys(rng);
    }
    std::sort(samples.begin(), samples.end());
    for (double y : samples) {
        const double t = phi1_inv(table, y);
        worst = std::max(worst, std::abs(phi1(table, t) - y));
        if (y > previous_y) {
            CHECK(t > previous_t);
        }
        previous_y = y;
        previous_t = t;
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("range errors report the admissible range")
{
    const auto& table = desk_table();
    CHECK_THROWS_AS(phi1(table, 1999.0), RangeError);
    CHECK_THROWS_AS(phi1(table, 12000.5), DomainError);
    try {
        phi1_inv(table, table.phi_hi() + 1.0);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("achievable range") != std::string::npos);
    }
}

TEST_CASE("reverse iteration")
{
    const auto& table = desk_table();
    const auto base = desk_base();
    const auto same = reverse_interval(table, base, 0);
    CHECK(same.lo == base.lo);
    CHECK(same.hi == base.hi);

    const auto tol = table.config().rootfind_abs_tol;
    IteratedInterval previous = base;
    for (int r = 1; r <= 2; ++r) {
        const auto it = reverse_interval(table, base, r);
        CHECK(it.r == r);
        CHECK(it.lo > previous.hi);
        CHECK(std::abs(phi1_iterate(table, it.lo, r) - base.lo) <= r * tol);
        CHECK(std::abs(phi1_iterate(table, it.hi, r) - base.hi) <= r * tol);
        // |I_{r-1}| is the Z~^2 mass of I_r
        const double mass = pulled_back(table, {1, it.lo, it.hi}, [](double) { return 1.0; });
        CHECK(mass == doctest::Approx(previous.length()).epsilon(1e-7));
        previous = it;
    }

    try {
        reverse_interval(table, {0, 9000.0, 9000.2}, 3);
        FAIL("expected escape");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("depth") != std::string::npos);
    }
}

TEST_CASE("substitution identity")
{
    const auto& table = desk_table();
    const auto base = desk_base();
    struct Case {
        const char* name;
        double (*f)(double);
        double base_integral;
    };
    const double a = base.lo;
    const double b = base.hi;
    const Case cases[] = {
        {"1", [](double) { return 1.0; }, b - a},
        {"sin^2", [](double t) { return std::sin(t) * std::sin(t); },
         0.5 * (b - a) - 0.25 * (std::sin(2 * b) - std::sin(2 * a))},
        {"cos 2t", [](double t) { return std::cos(2 * t); }, 0.5 * (std::sin(2 * b) - std::sin(2 * a))},
    };
    for (const auto& c : cases) {
        for (int r = 1; r <= 2; ++r) {
            CAPTURE(c.name);
            CAPTURE(r);
            const auto it = reverse_interval(table, base, r);
            const double value = pulled_back(table, it, c.f);
            CHECK(value == doctest::Approx(c.base_integral).epsilon(1e-7));
        }
    }
}

TEST_CASE("cache round-trip is bit-exact and checksummed")
{
    const auto table = build_ladder(3000.0, 3020.0, 0.05, EvalConfig{});
    const auto dir = std::filesystem::temp_directory_path() / "metazeta_ladder_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "table.csv";
    save_ladder(table, path);
    const auto loaded = load_ladder(path);
    CHECK(loaded == table);
    CHECK(ladder_checksum(loaded) == ladder_checksum(table));
    CHECK(phi1(loaded, 3007.3) == phi1(table, 3007.3));

    {
        std::ofstream out(path, std::ios::app);
        out << "3020.05,1,1\n";
    }
    CHECK_THROWS_AS(load_ladder(path), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("increase over [1e3, 1e4] matches independent quadrature")
{
    EvalConfig cfg;
    const auto table = build_ladder(1000.0, 10000.0, 0.05, cfg);
    // Boost's 61-point Gauss-Kronrod on 0.1-wide panels, straight from the Riemann-Siegel Z.
    auto f = [](double t) {
        const double z = riemann_siegel_z(t);
        return z * z / std::log(t);
    };
    numerics::CompensatedSum<double> oracle;
    for (int k = 10000; k < 100000; ++k) {
        oracle.add(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, k / 10.0, (k + 1) / 10.0, 3, 1e-12));
    }
    const double increase = table.phi_hi() - table.phi_lo();
    CHECK(increase == doctest::Approx(oracle.value()).epsilon(1e-8));
    // local mean of |zeta|^2 is ln(t / 2 pi) + 2 gamma
    const double mean_guess = 1.0 + (2 * std::numbers::egamma - std::log(2 * std::numbers::pi)) / std::log(5000.0);
    CHECK(increase / 9000.0 == doctest::Approx(mean_guess).epsilon(0.01));
}
