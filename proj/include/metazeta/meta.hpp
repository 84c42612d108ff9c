#pragma once

// Meta-functional equations: a factorization certificate whose elementary
// function values are replaced by graft moduli |zeta(w_l)|,
//
//   |zeta(w_l)| prod_r Z~^2(alpha_r)/Z~^2(beta_r) = c0 + sum_j c_2j |zeta(w_{9+j})|,
//
// in exact form (Z~^2 ratios) and asymptotic form (|zeta(1/2+it)|^2 ratios).

#include <string>
#include <vector>

#include "json.hpp"

#include "metazeta/factorization.hpp"
#include "metazeta/grafting.hpp"

namespace metazeta {

enum class MetaForm { Exact, Asymptotic };

std::string to_string(MetaForm form);
MetaForm parse_meta_form(const std::string& text);

// The graft indices an equation references: eq_id itself and the sinc atoms
// 10..12 whose decomposition coefficient is nonzero.
std::vector<int> graft_support(int eq_id);

struct MetaEquationInstance {
    int eq_id = 1;
    MetaForm form = MetaForm::Exact;
    FactorizationCertificate cert;
    std::vector<Graft> grafts;  // exactly the support, ordered by l
    double U = 0.0;
    long L = 0;
    int k = 1;
    double lhs_value = 0.0;
    double rhs_value = 0.0;
    double residual = 0.0;
    std::string binding_hash;

    const Graft& graft(int l) const;
};

void to_json(nlohmann::json& j, const MetaEquationInstance& m);
void from_json(const nlohmann::json& j, MetaEquationInstance& m);

// SHA-256 over the canonical JSON of the certificate and grafts.
std::string binding_hash(const FactorizationCertificate& cert, const std::vector<Graft>& grafts);

// |zeta(w)| of a graft, recomputed.
double graft_modulus(const Graft& g, const EvalConfig& cfg = {});

// One graft per support index for the certificate's targets, each searched in
// strips[l - 1]. Graft::n is set to `n`.
std::vector<Graft> build_support_grafts(const FactorizationCertificate& cert, const StripSet& strips, int n = 1,
                                        const GraftSearchOptions& options = {}, const EvalConfig& cfg = {});

// Throws AssemblyError on a missing graft or certificate mismatch and
// StaleBindingError when a graft target no longer matches the certificate.
MetaEquationInstance assemble_meta(int eq_id, const FactorizationCertificate& cert, const std::vector<Graft>& grafts,
                                   const EvalConfig& cfg = {});

struct MetaTolerances {
    double graft_tol = 1e-9;
    double cert_rel_tol = kCertificateRelTol;
    // Asymptotic extra residual must stay below factor * k / ln(pi L) * |lhs|.
    double asymptotic_factor = 2.0;
};

struct MetaReport {
    int eq_id = 1;
    MetaForm form = MetaForm::Exact;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    // cert_tol + (prod ratio + sum |c_2j|) * graft_tol
    double bound = 0.0;
    double exact_lhs = 0.0;
    double exact_residual = 0.0;
    // |lhs - exact_lhs|; zero in exact form
    double extra_residual = 0.0;
    double extra_bound = 0.0;
    // |prod_r ln(alpha_r)/ln(beta_r) - 1| at the certificate points
    double omega_point = 0.0;
    // sum_r (ln hi_r / ln lo_r - 1) over the reverse intervals I_r
    double omega_interval = 0.0;
    bool certificate_ok = true;
    bool grafts_ok = true;
    bool hash_ok = true;
    bool passed = false;
};

void to_json(nlohmann::json& j, const MetaReport& r);

MetaReport verify_meta(const MetaEquationInstance& instance, MetaForm form, const LadderTable& table,
                       const MetaTolerances& tolerances = {});

// prod_r |zeta(1/2 + i alpha_r)|^2 / |zeta(1/2 + i beta_r)|^2 times |zeta(w_l)|.
double asymptotic_lhs(const MetaEquationInstance& instance, const EvalConfig& cfg = {});

// Interval-wide omega bound for base [pi L, pi L + U] and depth k.
double omega_interval_bound(const LadderTable& table, double U, long L, int k);

}  // namespace metazeta
