#include "metazeta/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "metazeta/errors.hpp"
#include "metazeta/hash.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/trig.hpp"

namespace metazeta {

namespace {

void check_eq_id(int eq_id)
{
    if (eq_id < 1 || eq_id > kIntegrandCount) {
        throw DomainError("meta-equation id " + std::to_string(eq_id) + " outside 1..9");
    }
}

const Graft* find_graft_for(const std::vector<Graft>& grafts, int l)
{
    for (const auto& g : grafts) {
        if (g.l == l) {
            return &g;
        }
    }
    return nullptr;
}

bool same_target(double stored, double expected)
{
    return std::abs(stored - expected) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(expected);
}

double expected_target(int l, const FactorizationCertificate& cert)
{
    return l <= kIntegrandCount ? eval_f(l, cert.alpha.at(0)) : eval_f(l, cert.U);
}

double z_tilde_ratio(const FactorizationCertificate& cert, const EvalConfig& cfg)
{
    double ratio = 1.0;
    for (int r = 1; r <= cert.k; ++r) {
        const auto i = static_cast<std::size_t>(r);
        ratio *= z_tilde_sq(cert.alpha[i], cfg) / z_tilde_sq(cert.beta[i - 1], cfg);
    }
    return ratio;
}

double critical_ratio(const FactorizationCertificate& cert, const EvalConfig& cfg)
{
    double ratio = 1.0;
    for (int r = 1; r <= cert.k; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const double za = hardy_z(cert.alpha[i], cfg);
        const double zb = hardy_z(cert.beta[i - 1], cfg);
        ratio *= (za * za) / (zb * zb);
    }
    return ratio;
}

double sinc_side(const MetaEquationInstance& m, const EvalConfig& cfg)
{
    const auto dec = sinc_decomposition(m.eq_id);
    double rhs = to_double(dec.c0);
    for (int j = 1; j <= 3; ++j) {
        const auto& c = dec.coefficient(j);
        if (c != Rational(0)) {
            rhs += to_double(c) * graft_modulus(m.graft(kIntegrandCount + j), cfg);
        }
    }
    return rhs;
}

double coefficient_mass(int eq_id)
{
    const auto dec = sinc_decomposition(eq_id);
    double mass = 0.0;
    for (int j = 1; j <= 3; ++j) {
        mass += std::abs(to_double(dec.coefficient(j)));
    }
    return mass;
}

}  // namespace

std::string to_string(MetaForm form)
{
    return form == MetaForm::Exact ? "exact" : "asymptotic";
}

MetaForm parse_meta_form(const std::string& text)
{
    if (text == "exact") {
        return MetaForm::Exact;
    }
    if (text == "asymptotic") {
        return MetaForm::Asymptotic;
    }
    throw ConfigError("form must be exact or asymptotic, got '" + text + "'");
}

std::vector<int> graft_support(int eq_id)
{
    check_eq_id(eq_id);
    std::vector<int> support{eq_id};
    const auto dec = sinc_decomposition(eq_id);
    for (int j = 1; j <= 3; ++j) {
        if (dec.coefficient(j) != Rational(0)) {
            support.push_back(kIntegrandCount + j);
        }
    }
    return support;
}

const Graft& MetaEquationInstance::graft(int l) const
{
    if (const auto* g = find_graft_for(grafts, l)) {
        return *g;
    }
    throw AssemblyError("meta-equation " + std::to_string(eq_id) + " has no graft w_" + std::to_string(l));
}

std::string binding_hash(const FactorizationCertificate& cert, const std::vector<Graft>& grafts)
{
    const nlohmann::json j = {{"certificate", cert}, {"grafts", grafts}};
    return sha256_hex(j.dump());
}

double graft_modulus(const Graft& g, const EvalConfig& cfg)
{
    return std::abs(zeta(g.w, cfg));
}

std::vector<Graft> build_support_grafts(const FactorizationCertificate& cert, const StripSet& strips, int n,
                                        const GraftSearchOptions& options, const EvalConfig& cfg)
{
    std::vector<Graft> out;
    for (int l : graft_support(cert.l)) {
        auto g = find_graft(strips[static_cast<std::size_t>(l - 1)], graft_target(l, &cert, cert.U), options, cfg);
        g.l = l;
        g.n = n;
        out.push_back(g);
    }
    return out;
}

MetaEquationInstance assemble_meta(int eq_id, const FactorizationCertificate& cert, const std::vector<Graft>& grafts,
                                   const EvalConfig& cfg)
{
    check_eq_id(eq_id);
    if (cert.l != eq_id) {
        throw AssemblyError("meta-equation " + std::to_string(eq_id) + " given the certificate for l = " +
                            std::to_string(cert.l));
    }
    if (cert.k < 1 || cert.alpha.size() != static_cast<std::size_t>(cert.k) + 1 ||
        cert.beta.size() != static_cast<std::size_t>(cert.k)) {
        throw AssemblyError("certificate chains do not match k = " + std::to_string(cert.k));
    }

    MetaEquationInstance m;
    m.eq_id = eq_id;
    m.cert = cert;
    m.U = cert.U;
    m.L = cert.L;
    m.k = cert.k;
    for (int l : graft_support(eq_id)) {
        const double expected = expected_target(l, cert);
        const Graft* chosen = nullptr;
        bool seen = false;
        for (const auto& g : grafts) {
            if (g.l != l) {
                continue;
            }
            seen = true;
            if (same_target(g.target, expected)) {
                chosen = &g;
                break;
            }
        }
        if (!seen) {
            throw AssemblyError("meta-equation " + std::to_string(eq_id) + " needs a graft w_" + std::to_string(l));
        }
        if (chosen == nullptr) {
            throw StaleBindingError("graft w_" + std::to_string(l) + " was built for a different target than f_" +
                                    std::to_string(l) + " = " + format_double(expected));
        }
        m.grafts.push_back(*chosen);
    }
    m.binding_hash = binding_hash(m.cert, m.grafts);

    m.lhs_value = graft_modulus(m.graft(eq_id), cfg) * z_tilde_ratio(cert, cfg);
    m.rhs_value = sinc_side(m, cfg);
    m.residual = std::abs(m.lhs_value - m.rhs_value);
    return m;
}

double asymptotic_lhs(const MetaEquationInstance& instance, const EvalConfig& cfg)
{
    return graft_modulus(instance.graft(instance.eq_id), cfg) * critical_ratio(instance.cert, cfg);
}

double omega_interval_bound(const LadderTable& table, double U, long L, int k)
{
    const auto base = base_interval(U, L);
    double sum = 0.0;
    for (int r = 1; r <= k; ++r) {
        const auto ir = reverse_interval(table, base, r);
        sum += std::log(ir.hi) / std::log(ir.lo) - 1.0;
    }
    return sum;
}

MetaReport verify_meta(const MetaEquationInstance& instance, MetaForm form, const LadderTable& table,
                       const MetaTolerances& tolerances)
{
    const auto& cfg = table.config();
    const auto& cert = instance.cert;

    MetaReport rep;
    rep.eq_id = instance.eq_id;
    rep.form = form;
    rep.certificate_ok = verify_certificate(cert, table).passed();
    for (const auto& g : instance.grafts) {
        rep.grafts_ok = rep.grafts_ok && std::abs(graft_modulus(g, cfg) - g.target) <= tolerances.graft_tol &&
                        same_target(g.target, expected_target(g.l, cert));
    }
    const auto support = graft_support(instance.eq_id);
    rep.grafts_ok = rep.grafts_ok && instance.grafts.size() == support.size();
    for (int l : support) {
        rep.grafts_ok = rep.grafts_ok && find_graft_for(instance.grafts, l) != nullptr;
    }
    rep.hash_ok = binding_hash(cert, instance.grafts) == instance.binding_hash;
    if (!rep.grafts_ok) {
        return rep;
    }

    const double ratio = z_tilde_ratio(cert, cfg);
    rep.exact_lhs = graft_modulus(instance.graft(instance.eq_id), cfg) * ratio;
    rep.rhs = sinc_side(instance, cfg);
    rep.exact_residual = std::abs(rep.exact_lhs - rep.rhs);
    rep.bound = tolerances.cert_rel_tol * std::abs(cert.rhs) +
                (ratio + coefficient_mass(instance.eq_id)) * tolerances.graft_tol;

    double log_ratio = 1.0;
    for (int r = 1; r <= cert.k; ++r) {
        const auto i = static_cast<std::size_t>(r);
        log_ratio *= std::log(cert.alpha[i]) / std::log(cert.beta[i - 1]);
    }
    rep.omega_point = std::abs(log_ratio - 1.0);
    rep.omega_interval = omega_interval_bound(table, cert.U, cert.L, cert.k);

    bool ok = rep.certificate_ok && rep.hash_ok && rep.exact_residual <= rep.bound;
    if (form == MetaForm::Exact) {
        rep.lhs = rep.exact_lhs;
        rep.residual = rep.exact_residual;
    } else {
        rep.lhs = asymptotic_lhs(instance, cfg);
        rep.residual = std::abs(rep.lhs - rep.rhs);
        rep.extra_residual = std::abs(rep.lhs - rep.exact_lhs);
        rep.extra_bound = tolerances.asymptotic_factor * cert.k / std::log(std::numbers::pi * cert.L) * std::abs(rep.lhs);
        ok = ok && rep.extra_residual <= rep.extra_bound;
    }
    rep.passed = ok;
    return rep;
}

void to_json(nlohmann::json& j, const MetaEquationInstance& m)
{
    j = {{"eq_id", m.eq_id},
         {"form", to_string(m.form)},
         {"certificate", m.cert},
         {"grafts", m.grafts},
         {"U", m.U},
         {"L", m.L},
         {"k", m.k},
         {"lhs", m.lhs_value},
         {"rhs", m.rhs_value},
         {"residual", m.residual},
         {"binding_hash", m.binding_hash}};
}

void from_json(const nlohmann::json& j, MetaEquationInstance& m)
{
    j.at("eq_id").get_to(m.eq_id);
    m.form = parse_meta_form(j.value("form", std::string("exact")));
    j.at("certificate").get_to(m.cert);
    j.at("grafts").get_to(m.grafts);
    m.U = m.cert.U;
    m.L = m.cert.L;
    m.k = m.cert.k;
    m.lhs_value = j.value("lhs", 0.0);
    m.rhs_value = j.value("rhs", 0.0);
    m.residual = j.value("residual", 0.0);
    j.at("binding_hash").get_to(m.binding_hash);
}

void to_json(nlohmann::json& j, const MetaReport& r)
{
    j = {{"eq_id", r.eq_id},
         {"form", to_string(r.form)},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"residual", r.residual},
         {"bound", r.bound},
         {"exact_lhs", r.exact_lhs},
         {"exact_residual", r.exact_residual},
         {"extra_residual", r.extra_residual},
         {"extra_bound", r.extra_bound},
         {"omega_point", r.omega_point},
         {"omega_interval", r.omega_interval},
         {"certificate_ok", r.certificate_ok},
         {"grafts_ok", r.grafts_ok},
         {"hash_ok", r.hash_ok},
         {"passed", r.passed}};
}

}  // namespace metazeta
