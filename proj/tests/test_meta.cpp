#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "metazeta/errors.hpp"
#include "metazeta/meta.hpp"
#include "metazeta/trig.hpp"

using namespace metazeta;

namespace {

constexpr long kL = 1592;

const LadderTable& table()
{
    static const LadderTable t = build_ladder(4000.0, 8400.0, 0.05, EvalConfig{});
    return t;
}

const StripSet& strips()
{
    static const StripSet s = build_strips(DefaultStrips::sigma1, DefaultStrips::sigma2, DefaultStrips::delta);
    return s;
}

MetaEquationInstance assemble(int l, int k, double U, long L)
{
    const auto cert = factorize(l, k, U, L, table());
    return assemble_meta(l, cert, build_support_grafts(cert, strips()));
}

}  // namespace

TEST_CASE("support follows the sinc decomposition")
{
    CHECK(graft_support(1) == std::vector<int>{1, 10});
    CHECK(graft_support(6) == std::vector<int>{6, 10, 11, 12});
    CHECK(graft_support(7) == std::vector<int>{7, 10});
    CHECK(graft_support(8) == std::vector<int>{8, 11});
    CHECK(graft_support(9) == std::vector<int>{9, 12});
    CHECK(graft_support(3) == std::vector<int>{3, 10, 11});
    CHECK_THROWS_AS(graft_support(10), DomainError);
}

TEST_CASE("cos^6 equation carries 5/16, 15/32, 3/16, 1/32")
{
    const auto dec = sinc_decomposition(6);
    CHECK(dec.c0 == Rational(5, 16));
    CHECK(dec.c2 == Rational(15, 32));
    CHECK(dec.c4 == Rational(3, 16));
    CHECK(dec.c6 == Rational(1, 32));

    const auto m = assemble(6, 2, 0.2, kL);
    const double expected = 5.0 / 16 + 15.0 / 32 * std::abs(zeta(m.graft(10).w)) +
                            3.0 / 16 * std::abs(zeta(m.graft(11).w)) + 1.0 / 32 * std::abs(zeta(m.graft(12).w));
    CHECK(m.rhs_value == doctest::Approx(expected).epsilon(1e-15));
    const auto rep = verify_meta(m, MetaForm::Exact, table());
    CHECK(rep.passed);
}

TEST_CASE("cos 2t equation has |zeta(w_10)| alone on the right")
{
    const auto m = assemble(7, 2, 0.2, kL);
    CHECK(m.rhs_value == std::abs(zeta(m.graft(10).w)));
    CHECK(m.grafts.size() == 2);
}

TEST_CASE("sin^2 equation at k = 2, U = 0.2")
{
    const auto m = assemble(2, 2, 0.2, kL);
    const auto rep = verify_meta(m, MetaForm::Exact, table());
    CHECK(rep.residual <= 1e-6);
    CHECK(rep.passed);
    CHECK(rep.rhs == doctest::Approx(0.5 + 0.5 * std::abs(zeta(m.graft(10).w))).epsilon(1e-15));
}

TEST_CASE("perfect grafts reproduce the certificate residual")
{
    const auto cert = factorize(1, 2, 0.2, kL, table());
    // grafts whose targets equal |zeta(w)| exactly
    auto grafts = build_support_grafts(cert, strips());
    auto perfect = cert;
    for (auto& g : grafts) {
        g.achieved = std::abs(zeta(g.w));
    }
    perfect.alpha[0] = cert.alpha[0];
    const double lhs = grafts[0].achieved * (cert.lhs / eval_f(1, cert.alpha[0]));
    const double rhs = 0.5 - 0.5 * grafts[1].achieved;
    const double substituted = std::abs(lhs - rhs);
    const double gap = std::abs(grafts[0].achieved - grafts[0].target) * (cert.lhs / eval_f(1, cert.alpha[0])) +
                       0.5 * std::abs(grafts[1].achieved - grafts[1].target);
    CHECK(std::abs(substituted - cert.residual) <= gap + 1e-15);
}

TEST_CASE("assembly errors")
{
    const auto cert = factorize(3, 1, 0.2, kL, table());
    auto grafts = build_support_grafts(cert, strips());
    CHECK_THROWS_AS(assemble_meta(4, cert, grafts), AssemblyError);

    auto missing = grafts;
    missing.pop_back();
    CHECK_THROWS_AS(assemble_meta(3, cert, missing), AssemblyError);

    auto moved = cert;
    moved.alpha[0] += 1e-4;
    CHECK_THROWS_AS(assemble_meta(3, moved, grafts), StaleBindingError);

    auto wrong_u = cert;
    wrong_u.U = 0.21;
    CHECK_THROWS_AS(assemble_meta(3, wrong_u, grafts), StaleBindingError);
}

TEST_CASE("tampering is caught by the binding hash")
{
    auto m = assemble(5, 1, 0.15, kL);
    REQUIRE(verify_meta(m, MetaForm::Exact, table()).passed);
    m.cert.residual *= 2;
    const auto rep = verify_meta(m, MetaForm::Exact, table());
    CHECK_FALSE(rep.hash_ok);
    CHECK_FALSE(rep.passed);

    auto n = assemble(5, 1, 0.15, kL);
    n.grafts[1].w += std::complex<double>(0.0, 1e-3);
    const auto bad = verify_meta(n, MetaForm::Exact, table());
    CHECK_FALSE(bad.grafts_ok);
    CHECK_FALSE(bad.passed);
}

TEST_CASE("all nine equations on a 3x3 grid of (U, L)")
{
    for (double U : {0.07, 0.15, 0.25}) {
        for (long L : {1300L, 1450L, 1592L}) {
            for (int l = 1; l <= kIntegrandCount; ++l) {
                CAPTURE(U);
                CAPTURE(L);
                CAPTURE(l);
                const auto m = assemble(l, 2, U, L);
                const auto exact = verify_meta(m, MetaForm::Exact, table());
                CHECK(exact.passed);
                CHECK(exact.residual <= exact.bound);
                const auto asym = verify_meta(m, MetaForm::Asymptotic, table());
                CHECK(asym.passed);
                CHECK(asym.extra_residual <= 2.0 * 2 / std::log(std::numbers::pi * L) * std::abs(asym.lhs));
                // the extra residual is the omega correction times the lhs
                CHECK(asym.extra_residual <=
                      1.01 * asym.omega_point * std::abs(asym.exact_lhs) + 1e-15 * std::abs(asym.lhs));
                CHECK(asym.omega_point <= std::expm1(asym.omega_interval));
            }
        }
    }
}

TEST_CASE("the omega correction shrinks from L to 4L")
{
    const auto far = build_ladder(19500.0, 27000.0, 0.05, EvalConfig{});
    // single intervals follow the local size of Z~^2 and the spread is heavy
    // tailed, so compare medians over 100 consecutive bases
    auto median_bound = [](const LadderTable& tab, long L0) {
        std::vector<double> v;
        for (long i = 0; i < 100; ++i) {
            v.push_back(omega_interval_bound(tab, 0.2, L0 + i, 1));
        }
        std::nth_element(v.begin(), v.begin() + 50, v.end());
        return v[50];
    };
    const double near_median = median_bound(table(), kL);
    const double far_median = median_bound(far, 4 * kL);
    MESSAGE("median omega bound at L: " << near_median << ", at 4L: " << far_median);
    CHECK(far_median < near_median / 2);
    CHECK(2.0 / std::log(std::numbers::pi * 4 * kL) < 2.0 / std::log(std::numbers::pi * kL));

    const auto cert = factorize(4, 1, 0.2, 4 * kL, far);
    const auto m = assemble_meta(4, cert, build_support_grafts(cert, strips()));
    const auto rep = verify_meta(m, MetaForm::Asymptotic, far);
    CHECK(rep.passed);
    CHECK(rep.omega_interval == omega_interval_bound(far, 0.2, 4 * kL, 1));
}

TEST_CASE("instance and report JSON")
{
    const auto m = assemble(8, 1, 0.1, kL);
    CHECK(m.grafts.size() == 2);
    const nlohmann::json j = m;
    const auto back = nlohmann::json::parse(j.dump()).get<MetaEquationInstance>();
    CHECK(back.binding_hash == m.binding_hash);
    CHECK(binding_hash(back.cert, back.grafts) == m.binding_hash);
    const auto rep = verify_meta(back, MetaForm::Asymptotic, table());
    CHECK(rep.passed);
    const nlohmann::json r = rep;
    CHECK(r.at("form") == "asymptotic");
    CHECK(r.at("passed") == true);
    CHECK(parse_meta_form("exact") == MetaForm::Exact);
    CHECK_THROWS_AS(parse_meta_form("limit"), ConfigError);
}
