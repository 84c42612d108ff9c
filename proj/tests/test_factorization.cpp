#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "metazeta/errors.hpp"
#include "metazeta/factorization.hpp"
#include "metazeta/trig.hpp"

using namespace metazeta;

namespace {

constexpr long kL = 1592;  // pi L ~ 5001.6

const LadderTable& table()
{
    static const LadderTable t = build_ladder(4000.0, 10500.0, 0.05, EvalConfig{});
    return t;
}

}  // namespace

TEST_CASE("weight_wk")
{
    const auto& tab = table();
    CHECK(weight_wk(tab, 5000.3, 1) == z_tilde_sq(5000.3));
    for (double t = 9000.0; t < 9010.0; t += 0.37) {
        CHECK(weight_wk(tab, t, 3) >= 0.0);
    }
    CHECK_THROWS_AS(weight_wk(tab, 5000.0, 3), RangeError);

    const auto i2 = reverse_interval(tab, base_interval(0.2, kL), 2);
    const auto breaks = grid_breakpoints(tab, i2.lo, i2.hi);
    const double mass =
        numerics::integrate([&](double t) { return weight_wk(tab, t, 2); }, breaks, {.rel_tol = 1e-11}).value;
    CHECK(mass == doctest::Approx(0.2).epsilon(1e-7));
}

TEST_CASE("sin^2 certificate carries the closed-form mean")
{
    const double U = 0.15;
    const auto cert = factorize(1, 1, U, kL, table());
    CHECK(cert.rhs == doctest::Approx(0.5 - std::sin(2 * U) / (4 * U)).epsilon(1e-14));
    CHECK(cert.residual <= kCertificateRelTol * cert.rhs);
    CHECK(cert.convention == "smallest-root");
}

TEST_CASE("constant integrand gives a zero residual")
{
    const auto cert = factorize_function([](double) { return 1.0; }, 1.0, 2, 0.2, kL, table());
    CHECK(cert.alpha[1] == cert.beta[0]);
    CHECK(cert.alpha[2] == cert.beta[1]);
    CHECK(cert.lhs == 1.0);
    CHECK(cert.residual == 0.0);
}

TEST_CASE("sin^6, k = 2, U = 0.2")
{
    const auto cert = factorize(7, 2, 0.2, kL, table());
    CHECK(cert.residual <= 1e-7);
    CHECK(cert.residual <= 1e-6 * cert.rhs);
    const auto report = verify_certificate(cert, table());
    CHECK(report.passed());
}

TEST_CASE("all nine formulas at k in {1, 2}, U in {0.1, 0.2}")
{
    for (int k = 1; k <= 2; ++k) {
        for (double U : {0.1, 0.2}) {
            std::vector<double> shared_beta;
            for (int l = 1; l <= kIntegrandCount; ++l) {
                CAPTURE(l);
                CAPTURE(k);
                CAPTURE(U);
                const auto cert = factorize(l, k, U, kL, table());
                const auto report = verify_certificate(cert, table());
                for (const auto& c : report.checks) {
                    CAPTURE(c.name);
                    CAPTURE(c.detail);
                    CHECK(c.passed);
                }
                CHECK(report.residual <= 1e-6 * std::abs(report.rhs));
                if (l == 1) {
                    shared_beta = cert.beta;
                } else {
                    CHECK(cert.beta == shared_beta);
                }
            }
        }
    }
}

TEST_CASE("desk-scale spread of heights, widths and depths")
{
    const struct {
        int l;
        int k;
        double U;
        long L;
    } cases[] = {{2, 3, 0.05, 1400}, {4, 3, 0.25, 1500}, {8, 1, 0.05, 2200}, {9, 2, 0.25, 2000}, {5, 3, 0.12, 1330}};
    for (const auto& c : cases) {
        CAPTURE(c.l);
        CAPTURE(c.L);
        const auto cert = factorize(c.l, c.k, c.U, c.L, table());
        const auto report = verify_certificate(cert, table());
        CHECK(report.passed());
        CHECK(report.residual <= 1e-6 * std::abs(report.rhs));
    }
}

TEST_CASE("shared-beta identity for the sin^2 / cos^2 pair")
{
    for (int k = 1; k <= 2; ++k) {
        const auto c1 = factorize(1, k, 0.2, kL, table());
        const auto c2 = factorize(2, k, 0.2, kL, table());
        auto numerator = [&](const FactorizationCertificate& c) {
            double p = eval_f(c.l, c.alpha[0]);
            for (int r = 1; r <= k; ++r) {
                p *= z_tilde_sq(c.alpha[static_cast<std::size_t>(r)]);
            }
            return p;
        };
        double denominator = 1.0;
        for (double b : c1.beta) {
            denominator *= z_tilde_sq(b);
        }
        CHECK(numerator(c1) + numerator(c2) == doctest::Approx(denominator).epsilon(1e-6));
    }
}

TEST_CASE("perturbed chain is rejected")
{
    auto cert = factorize(3, 2, 0.2, kL, table());
    REQUIRE(verify_certificate(cert, table()).passed());
    cert.alpha[1] += 10 * table().config().rootfind_abs_tol;
    const auto report = verify_certificate(cert, table());
    CHECK_FALSE(report.passed());
    bool chain_failed = false;
    bool lhs_failed = false;
    for (const auto& c : report.checks) {
        chain_failed = chain_failed || (c.name.rfind("alpha chain", 0) == 0 && !c.passed);
        lhs_failed = lhs_failed || (c.name == "stored lhs reproduced" && !c.passed);
    }
    CHECK(chain_failed);
    CHECK(lhs_failed);
    CHECK_THROWS_AS(require_valid(report), CertificateError);
}

TEST_CASE("certificate JSON round-trip")
{
    const auto cert = factorize(6, 1, 0.1, kL, table());
    const nlohmann::json j = cert;
    for (const char* key : {"l", "k", "U", "L", "alpha", "beta", "lhs", "rhs", "residual"}) {
        CHECK(j.contains(key));
    }
    const auto back = nlohmann::json::parse(j.dump()).get<FactorizationCertificate>();
    CHECK(back.alpha == cert.alpha);
    CHECK(back.beta == cert.beta);
    CHECK(back.lhs == cert.lhs);
    CHECK(verify_certificate(back, table()).passed());
}

TEST_CASE("input validation")
{
    CHECK_THROWS_AS(factorize(1, 1, 0.3, kL, table()), DomainError);
    CHECK_THROWS_AS(factorize(1, 1, 0.0, kL, table()), DomainError);
    CHECK_THROWS_AS(factorize(10, 1, 0.1, kL, table()), DomainError);
    CHECK_THROWS_AS(factorize(1, 4, 0.1, kL, table()), DomainError);
    CHECK_THROWS_AS(factorize(1, 3, 0.1, 2900, table()), RangeError);
}
