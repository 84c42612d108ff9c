#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "metazeta/errors.hpp"
#include "metazeta/zeta.hpp"

using namespace metazeta;

// Expected values were produced by tools/oracles/zeta_oracle.py: an
// independent 40-digit Euler-Maclaurin implementation in mpmath, cross-checked
// against mpmath.zeta / mpmath.siegelz.

namespace {

double rel_err(std::complex<double> got, std::complex<double> want)
{
    return std::abs(got - want) / std::abs(want);
}

EvalConfig low_cutoff()
{
    EvalConfig cfg;
    cfg.t_min = 10.0;
    return cfg;
}

}  // namespace

TEST_CASE("zeta(2) = pi^2/6")
{
    const auto v = zeta({2.0, 0.0});
    CHECK(std::abs(v.real() - std::numbers::pi * std::numbers::pi / 6.0) < 1e-15);
    CHECK(std::abs(v.imag()) < 1e-16);
}

TEST_CASE("zeta pole and domain")
{
    CHECK_THROWS_AS(zeta({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(zeta({0.0, 5.0}), DomainError);
    CHECK_THROWS_AS(zeta({-1.0, 5.0}), DomainError);
    CHECK_THROWS_AS(zeta({0.7, 2e6}), CapabilityError);
    EvalConfig too_precise;
    too_precise.working_precision = 25;
    CHECK_THROWS_AS(zeta({0.7, 20.0}, too_precise), CapabilityError);
}

TEST_CASE("zeta off the critical line matches the arbitrary-precision oracle")
{
    const double target = EvalConfig{}.target_rel_error();
    CHECK(rel_err(zeta({0.75, 100.0}), {2.0029919952553958251, -0.054392071190092586923}) <= 1e-10);
    CHECK(rel_err(zeta({0.75, 100.0}), {2.0029919952553958251, -0.054392071190092586923}) <= target);
    CHECK(rel_err(zeta({0.6, 1234.5}), {1.2581809550516999534, -0.02842617839580897949}) <= target);
    CHECK(rel_err(zeta({0.9, 25.0}), {0.40667929512879727065, 0.10985273171157265001}) <= target);
    CHECK(rel_err(zeta({1.5, 3.0}), {0.71983412483453084597, -0.11844908318875969628}) <= target);
    CHECK(rel_err(zeta({0.55, 20000.0}), {0.68577294272746272626, -0.96850349544856476721}) <= 1e-11);
    // first critical-line zero
    CHECK(std::abs(zeta({0.5, 14.134725141734693})) < 1e-13);
}

TEST_CASE("extended backend agrees with the oracle")
{
    EvalConfig cfg;
    cfg.working_precision = 18;
    const auto v = zeta_extended({0.75L, 100.0L}, cfg);
    const std::complex<long double> want(2.0029919952553958251L, -0.054392071190092586923L);
    CHECK(static_cast<double>(std::abs(v - want) / std::abs(want)) < 1e-15);
    CHECK(rel_err(zeta({0.75, 100.0}, cfg), {2.0029919952553958251, -0.054392071190092586923}) <= 1e-15);
}

TEST_CASE("conjugate symmetry")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> sig(0.3, 2.0);
    std::uniform_real_distribution<double> height(-3000.0, 3000.0);
    for (int i = 0; i < 25; ++i) {
        const std::complex<double> s(sig(rng), height(rng));
        const auto a = zeta(std::conj(s));
        const auto b = std::conj(zeta(s));
        CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("Riemann-Siegel theta")
{
    CHECK(riemann_siegel_theta(20.0) == doctest::Approx(1.186894808444484044813).epsilon(1e-14));
    CHECK(riemann_siegel_theta(99.0) == doctest::Approx(86.5910291516638315408).epsilon(1e-15));
    CHECK(riemann_siegel_theta(100.0) == doctest::Approx(87.97216523178721962548).epsilon(1e-15));
    CHECK(riemann_siegel_theta(5000.0) == doctest::Approx(14197.89761760219780997).epsilon(1e-15));
}

TEST_CASE("hardy_z against the oracle")
{
    const EvalConfig cfg = low_cutoff();
    CHECK(std::abs(hardy_z(50.0, cfg) - (-0.34073500595502498275)) < 1e-12);
    CHECK(std::abs(hardy_z(100.0, cfg) - 2.692697056664463475) < 1e-12);
    CHECK(std::abs(hardy_z(150.0, cfg) - (-0.091010923267403593374)) < 1e-12);
    CHECK(std::abs(hardy_z(999.5, cfg) - (-1.0532269400228828323)) < 1e-11);
    CHECK(std::abs(hardy_z(1000.0, cfg) - 0.99779463752158661399) < 1e-10);
    CHECK(std::abs(hardy_z(2500.0, cfg) - 0.71658672993979919695) < 1e-10);
    CHECK(std::abs(hardy_z(7777.0, cfg) - (-0.72167760927564002932)) < 1e-11);
    CHECK(std::abs(hardy_z(12000.0, cfg) - 0.11631484570161377145) < 1e-11);
    CHECK(std::abs(hardy_z(99999.0, cfg) - (-0.63089222006231193466)) < 1e-10);
}

TEST_CASE("sign change of Z across the first zero")
{
    const EvalConfig cfg = low_cutoff();
    const double below = hardy_z(14.0, cfg);
    const double above = hardy_z(14.2, cfg);
    CHECK(below < 0.0);
    CHECK(above > 0.0);
    CHECK(below == doctest::Approx(-0.10562626777988261014).epsilon(1e-10));
    CHECK(above == doctest::Approx(0.052045271715564370184).epsilon(1e-10));
}

TEST_CASE("hardy_z cutoff")
{
    EvalConfig cfg;
    CHECK_THROWS_AS(hardy_z(99.9, cfg), DomainError);
    CHECK(std::isfinite(hardy_z(cfg.t_min, cfg)));
    CHECK_THROWS_AS(z_tilde_sq(50.0, cfg), DomainError);
    EvalConfig bad;
    bad.t_min = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = EvalConfig{};
    bad.working_precision = 12;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_NOTHROW(EvalConfig{}.validate());
}

TEST_CASE("|Z|^2 agrees with |zeta(1/2+it)|^2 across [t_min, 1e5]")
{
    const EvalConfig cfg;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logt(std::log(100.0), std::log(1e5));
    for (int i = 0; i < 40; ++i) {
        const double t = std::exp(logt(rng));
        const double z2 = hardy_z(t, cfg) * hardy_z(t, cfg);
        const double zeta2 = std::norm(zeta({0.5, t}, cfg));
        CHECK(std::abs(z2 - zeta2) <= 1e-9 * std::max(1.0, zeta2));
    }
}

TEST_CASE("the two Z evaluators agree where Riemann-Siegel is accurate")
{
    const EvalConfig cfg;
    for (double t : {1000.0, 1733.3, 2500.0, 5000.0, 9876.5, 12000.0}) {
        const double rs = riemann_siegel_z(t);
        const double em = hardy_z_euler_maclaurin(t, cfg);
        CHECK(std::abs(rs * rs - em * em) <= 1e-9 * std::max(1.0, em * em));
    }
}

TEST_CASE("z_tilde_sq is Z^2 / ln t exactly and non-negative")
{
    const EvalConfig cfg;
    for (double t : {100.0, 150.0, 1000.0, 4321.0, 12000.0}) {
        const double z = hardy_z(t, cfg);
        const double v = z_tilde_sq(t, cfg);
        CHECK(v == z * z / std::log(t));
        CHECK(v >= 0.0);
        const auto sample = critical_sample(t, cfg);
        CHECK(sample.z_tilde_sq == v);
        CHECK(sample.z == z);
    }
    CHECK(z_tilde_sq(1000.0, cfg) == doctest::Approx(0.14412701354607570413).epsilon(1e-9));
}

TEST_CASE("z_tilde_sq vanishes at a critical-line zero")
{
    EvalConfig cfg = low_cutoff();
    CHECK(z_tilde_sq(14.134725141734693, cfg) < 1e-26);
}
