#include "metazeta/factorization.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "metazeta/errors.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/trig.hpp"

namespace metazeta {

namespace {

struct Transport {
    double image = 0.0;   // phi^k(t)
    double weight = 1.0;  // prod_{j<k} Z~^2(phi^j(t))
};

Transport transport(const LadderTable& table, double t, int k)
{
    Transport out{t, 1.0};
    for (int j = 0; j < k; ++j) {
        out.weight *= z_tilde_sq(out.image, table.config());
        out.image = phi1(table, out.image);
    }
    return out;
}

// Roots of h on [breaks.front(), breaks.back()] in increasing order, found by
// scanning the breakpoints and bisecting each sign change.
class RootScanner {
public:
    RootScanner(std::function<double(double)> h, std::vector<double> breaks)
        : h_(std::move(h)), breaks_(std::move(breaks))
    {
        values_.reserve(breaks_.size());
        for (double x : breaks_) {
            values_.push_back(h_(x));
        }
    }

    std::optional<double> next()
    {
        while (cursor_ + 1 < breaks_.size()) {
            const std::size_t i = cursor_++;
            const double a = breaks_[i];
            const double b = breaks_[i + 1];
            const double fa = values_[i];
            const double fb = values_[i + 1];
            if (fa == 0.0 && i > 0) {
                return a;
            }
            if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
                return numerics::bisect(h_, a, b, fa, 0.0);
            }
            // finer look inside the panel before moving on
            if (auto r = refine_panel(a, b, fa)) {
                return r;
            }
        }
        return std::nullopt;
    }

private:
    std::optional<double> refine_panel(double a, double b, double fa)
    {
        constexpr int kSub = 8;
        double x0 = a;
        double f0 = fa;
        for (int s = 1; s <= kSub; ++s) {
            const double x1 = s == kSub ? b : a + (b - a) * s / kSub;
            const double f1 = s == kSub ? values_[cursor_] : h_(x1);
            if (s < kSub && f1 == 0.0) {
                return x1;
            }
            if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
                return numerics::bisect(h_, x0, x1, f0, 0.0);
            }
            x0 = x1;
            f0 = f1;
        }
        return std::nullopt;
    }

    std::function<double(double)> h_;
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::size_t cursor_ = 0;
};

// f(alpha_0) * prod Z~^2(alpha_r) / Z~^2(beta_r), in a fixed order.
double chain_lhs(double f_alpha0, const std::vector<double>& alpha, const std::vector<double>& beta,
                 const EvalConfig& cfg)
{
    double value = f_alpha0;
    for (std::size_t r = 1; r < alpha.size(); ++r) {
        value *= z_tilde_sq(alpha[r], cfg) / z_tilde_sq(beta[r - 1], cfg);
    }
    return value;
}

std::vector<double> forward_chain(const LadderTable& table, double deep, int k)
{
    std::vector<double> chain(static_cast<std::size_t>(k) + 1);
    chain[static_cast<std::size_t>(k)] = deep;
    for (int r = k; r >= 1; --r) {
        chain[static_cast<std::size_t>(r - 1)] = phi1(table, chain[static_cast<std::size_t>(r)]);
    }
    return chain;
}

void check_inputs(int k, double U, const FactorizationOptions& options)
{
    if (!(U > 0.0 && U < kUMax)) {
        throw DomainError("factorize: U = " + format_double(U) + " must lie in (0, pi/12)");
    }
    if (k < 1 || k > options.k_max) {
        throw DomainError("factorize: k = " + std::to_string(k) + " must lie in 1.." + std::to_string(options.k_max));
    }
}

}  // namespace

double weight_wk(const LadderTable& table, double t, int k)
{
    if (k < 1) {
        throw DomainError("weight_wk: k must be >= 1");
    }
    return transport(table, t, k).weight;
}

IteratedInterval base_interval(double U, long L)
{
    const double a = std::numbers::pi * static_cast<double>(L);
    return {0, a, a + U};
}

FactorizationCertificate factorize_function(const std::function<double(double)>& f, double mean, int k, double U,
                                            long L, const LadderTable& table, const FactorizationOptions& options)
{
    check_inputs(k, U, options);
    const auto interval = reverse_interval(table, base_interval(U, L), k);
    const auto breaks = grid_breakpoints(table, interval.lo, interval.hi);
    const double width = interval.length();
    const numerics::QuadratureOptions quad{.rel_tol = options.quadrature_rel_tol, .abs_tol = 1e-300};

    auto g_f = [&](double t) {
        const auto tr = transport(table, t, k);
        return f(tr.image) * tr.weight;
    };
    auto g_1 = [&](double t) { return transport(table, t, k).weight; };
    const double j_f = numerics::integrate(g_f, breaks, quad).value;
    const double j_1 = numerics::integrate(g_1, breaks, quad).value;

    RootScanner alpha_roots([&](double t) { return g_f(t) * width - j_f; }, breaks);
    const auto c = alpha_roots.next();
    if (!c) {
        throw CertificateError("factorize: no mean-value point for the integrand on " + format_double(interval.lo) +
                               ".." + format_double(interval.hi) + " (quadrature/grid inconsistency)");
    }

    RootScanner beta_roots([&](double t) { return g_1(t) * width - j_1; }, breaks);
    std::vector<double> beta_chain;
    bool found = false;
    while (auto c_prime = beta_roots.next()) {
        beta_chain = forward_chain(table, *c_prime, k);
        bool degenerate = false;
        for (int r = 1; r <= k; ++r) {
            degenerate = degenerate || z_tilde_sq(beta_chain[static_cast<std::size_t>(r)], table.config()) <
                                           kDegenerateWeight;
        }
        if (!degenerate) {
            found = true;
            break;
        }
    }
    if (!found) {
        if (beta_chain.empty()) {
            throw CertificateError("factorize: no mean-value point for the weight on " + format_double(interval.lo) +
                                   ".." + format_double(interval.hi));
        }
        throw DegeneratePointError("factorize: every weight mean-value point has Z~^2(beta_r) < 1e-12");
    }

    FactorizationCertificate cert;
    cert.l = 0;
    cert.k = k;
    cert.U = U;
    cert.L = L;
    cert.alpha = forward_chain(table, *c, k);
    cert.beta.assign(beta_chain.begin() + 1, beta_chain.end());
    cert.lhs = chain_lhs(f(cert.alpha[0]), cert.alpha, cert.beta, table.config());
    cert.rhs = mean;
    cert.residual = std::abs(cert.lhs - cert.rhs);
    return cert;
}

FactorizationCertificate factorize(int l, int k, double U, long L, const LadderTable& table,
                                   const FactorizationOptions& options)
{
    if (l < 1 || l > kIntegrandCount) {
        throw DomainError("factorize: l = " + std::to_string(l) + " must lie in 1..9");
    }
    check_inputs(k, U, options);
    auto cert = factorize_function([l](double t) { return eval_f(l, t); }, mean_value_closed_form(l, U), k, U, L,
                                   table, options);
    cert.l = l;
    return cert;
}

bool CertificateReport::passed() const
{
    return failed() == nullptr;
}

const NamedCheck* CertificateReport::failed() const
{
    for (const auto& c : checks) {
        if (!c.passed) {
            return &c;
        }
    }
    return nullptr;
}

CertificateReport verify_certificate(const FactorizationCertificate& cert, const LadderTable& table)
{
    if (cert.l < 1 || cert.l > kIntegrandCount) {
        throw DomainError("verify_certificate: l = " + std::to_string(cert.l) + " must lie in 1..9");
    }
    if (cert.k < 1 || cert.alpha.size() != static_cast<std::size_t>(cert.k) + 1 ||
        cert.beta.size() != static_cast<std::size_t>(cert.k)) {
        throw CertificateError("verify_certificate: alpha/beta lengths do not match k");
    }
    const auto& cfg = table.config();
    const double tol = cfg.rootfind_abs_tol;
    CertificateReport report;
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const auto base = base_interval(cert.U, cert.L);
    add("alpha_0 in (pi L, pi L + U)", base.contains_strictly(cert.alpha[0]), "alpha_0 = " + format_double(cert.alpha[0]));
    for (int r = 1; r <= cert.k; ++r) {
        const auto ir = reverse_interval(table, base, r);
        const auto rr = static_cast<std::size_t>(r);
        const std::string range = " in I_" + std::to_string(r);
        add("alpha_" + std::to_string(r) + range, ir.contains_strictly(cert.alpha[rr]),
            format_double(cert.alpha[rr]) + " vs [" + format_double(ir.lo) + ", " + format_double(ir.hi) + "]");
        add("beta_" + std::to_string(r) + range, ir.contains_strictly(cert.beta[rr - 1]),
            format_double(cert.beta[rr - 1]) + " vs [" + format_double(ir.lo) + ", " + format_double(ir.hi) + "]");
    }
    for (int r = 1; r <= cert.k; ++r) {
        const auto rr = static_cast<std::size_t>(r);
        const double gap = std::abs(phi1(table, cert.alpha[rr]) - cert.alpha[rr - 1]);
        add("alpha chain r=" + std::to_string(r), gap <= tol, "|phi(alpha_r) - alpha_{r-1}| = " + format_double(gap));
    }
    for (int r = 2; r <= cert.k; ++r) {
        const auto rr = static_cast<std::size_t>(r);
        const double gap = std::abs(phi1(table, cert.beta[rr - 1]) - cert.beta[rr - 2]);
        add("beta chain r=" + std::to_string(r), gap <= tol, "|phi(beta_r) - beta_{r-1}| = " + format_double(gap));
    }

    report.lhs = chain_lhs(eval_f(cert.l, cert.alpha[0]), cert.alpha, cert.beta, cfg);
    report.rhs = mean_value_closed_form(cert.l, cert.U);
    report.residual = std::abs(report.lhs - report.rhs);
    report.tolerance = kCertificateRelTol * std::abs(report.rhs);
    const double repro = 1e-14 * std::abs(cert.lhs);
    add("stored lhs reproduced", std::abs(report.lhs - cert.lhs) <= repro,
        "recomputed " + format_double(report.lhs) + " vs stored " + format_double(cert.lhs));
    add("stored rhs reproduced", std::abs(report.rhs - cert.rhs) <= 1e-14 * std::abs(cert.rhs),
        "closed form " + format_double(report.rhs) + " vs stored " + format_double(cert.rhs));
    add("residual", report.residual <= report.tolerance,
        "|lhs - rhs| = " + format_double(report.residual) + ", bound " + format_double(report.tolerance));
    return report;
}

void require_valid(const CertificateReport& report)
{
    if (const auto* bad = report.failed()) {
        throw CertificateError("certificate invariant failed: " + bad->name + " (" + bad->detail + ")");
    }
}

void to_json(nlohmann::json& j, const FactorizationCertificate& c)
{
    j = {{"l", c.l},     {"k", c.k},       {"U", c.U},     {"L", c.L},
         {"alpha", c.alpha}, {"beta", c.beta}, {"lhs", c.lhs}, {"rhs", c.rhs},
         {"residual", c.residual}, {"convention", c.convention}};
}

void from_json(const nlohmann::json& j, FactorizationCertificate& c)
{
    j.at("l").get_to(c.l);
    j.at("k").get_to(c.k);
    j.at("U").get_to(c.U);
    j.at("L").get_to(c.L);
    j.at("alpha").get_to(c.alpha);
    j.at("beta").get_to(c.beta);
    j.at("lhs").get_to(c.lhs);
    j.at("rhs").get_to(c.rhs);
    j.at("residual").get_to(c.residual);
    c.convention = j.value("convention", std::string("smallest-root"));
}

void to_json(nlohmann::json& j, const CertificateReport& r)
{
    j = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"passed", r.passed()}};
    auto& checks = j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
}

}  // namespace metazeta
