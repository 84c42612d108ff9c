#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "metazeta/errors.hpp"
#include "metazeta/numerics.hpp"
#include "metazeta/trig.hpp"

using namespace metazeta;

namespace {

double quadrature_mean(int l, double U, double L)
{
    const double a = std::numbers::pi * L;
    const auto r = numerics::integrate([&](double t) { return eval_f(l, t); }, a, a + U, {.rel_tol = 1e-14});
    return r.value / U;
}

}  // namespace

TEST_CASE("eval_f spot values")
{
    CHECK(eval_f(1, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(eval_f(7, std::numbers::pi / 4)) < 1e-15);
    CHECK(eval_f(10, 1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_f(12, 0.2) == doctest::Approx(std::sin(1.2) / 1.2).epsilon(1e-15));
}

TEST_CASE("sinc atoms enforce the width domain")
{
    CHECK_THROWS_AS(eval_f(10, 0.0), DomainError);
    CHECK_THROWS_AS(eval_f(11, kUMax), DomainError);
    CHECK_THROWS_AS(eval_f(13, 0.1), DomainError);
    CHECK_THROWS_AS(eval_f(0, 0.1), DomainError);
    for (int l = 10; l <= 12; ++l) {
        const double v = eval_f(l, 0.25);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("function kinds partition 1..9 and 10..12")
{
    for (int l = 1; l <= 12; ++l) {
        CHECK((elementary_function(l).kind == FunctionKind::Integrand) == (l <= 9));
    }
}

TEST_CASE("closed forms of the nine interval means")
{
    const double U = 0.17;
    CHECK(mean_value_closed_form(7, U) == doctest::Approx(std::sin(2 * U) / (2 * U)).epsilon(1e-15));
    CHECK(mean_value_closed_form(1, U) == doctest::Approx(0.5 - 0.5 * std::sin(2 * U) / (2 * U)).epsilon(1e-14));
    CHECK(mean_value_closed_form(5, U) ==
          doctest::Approx(5.0 / 16 - 15.0 / 64 * std::sin(2 * U) / U + 3.0 / 64 * std::sin(4 * U) / U -
                          1.0 / 192 * std::sin(6 * U) / U)
              .epsilon(1e-13));
    CHECK(mean_value_closed_form(1, 1e-7) < 1e-13);
    CHECK_THROWS_AS(mean_value_closed_form(3, 0.3), DomainError);
    CHECK_THROWS_AS(mean_value_closed_form(10, 0.1), DomainError);
}

TEST_CASE("sin^6 mean at U = pi/12 - eps matches quadrature")
{
    const double U = kUMax * (1 - 1e-12);
    CHECK(std::abs(mean_value_closed_form(5, U) - quadrature_mean(5, U, 1591.0)) <= 1e-12);
}

TEST_CASE("sinc decomposition coefficients")
{
    const auto d6 = sinc_decomposition(6);
    CHECK(d6.c0 == Rational(5, 16));
    CHECK(d6.c2 == Rational(15, 32));
    CHECK(d6.c4 == Rational(3, 16));
    CHECK(d6.c6 == Rational(1, 32));
    const auto d3 = sinc_decomposition(3);
    CHECK(d3.c0 == Rational(3, 8));
    CHECK(d3.c2 == Rational(-1, 2));
    CHECK(d3.c4 == Rational(1, 8));
    CHECK(d3.c6 == 0);
    const auto d9 = sinc_decomposition(9);
    CHECK(d9.c0 == 0);
    CHECK(d9.c2 == 0);
    CHECK(d9.c4 == 0);
    CHECK(d9.c6 == 1);
    CHECK_THROWS_AS(sinc_decomposition(10), DomainError);
}

TEST_CASE("coefficients sum to f_l at the left endpoint")
{
    for (int l = 1; l <= 9; ++l) {
        const auto d = sinc_decomposition(l);
        const Rational total = d.c0 + d.c2 + d.c4 + d.c6;
        CHECK(to_double(total) == doctest::Approx(eval_f(l, 0.0)).epsilon(1e-15));
    }
}

TEST_CASE("means are L-independent and agree with quadrature on a U grid")
{
    for (int l = 1; l <= 9; ++l) {
        for (int i = 1; i <= 50; ++i) {
            const double U = kUMax * i / 51.0;
            const double closed = mean_value_closed_form(l, U);
            // Near L = 1 the representation error of pi L is negligible, so the
            // comparison can be fully relative; at pi L ~ 5000 it is absolute.
            const double quad = quadrature_mean(l, U, 1.0);
            CHECK(std::abs(closed - quad) <= 1e-10 * std::abs(quad));
            // pi * 1591 carries ~5e-13 rounding, amplified by 1/U in the mean
            CHECK(std::abs(closed - quadrature_mean(l, U, 1591.0)) <= 1e-9);
        }
    }
}

TEST_CASE("trig shadows of the crossbreeding identities")
{
    for (int i = 1; i <= 200; ++i) {
        const double U = kUMax * i / 201.0;
        const double m1 = mean_value_closed_form(1, U);
        const double m2 = mean_value_closed_form(2, U);
        const double m3 = mean_value_closed_form(3, U);
        const double m4 = mean_value_closed_form(4, U);
        const double m5 = mean_value_closed_form(5, U);
        const double m6 = mean_value_closed_form(6, U);
        CHECK(std::abs(m1 + m2 - 1.0) <= 1e-14);
        CHECK(std::abs(m3 + m4 - (0.75 + 0.25 * sinc(4 * U))) <= 1e-14);
        CHECK(std::abs(m5 + m6 - (0.625 + 0.375 * sinc(4 * U))) <= 1e-14);
        CHECK(std::abs(2 * (m5 + m6) + 1 - 3 * (m3 + m4)) <= 1e-14);
    }
}
