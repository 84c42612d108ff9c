#pragma once

// Mean-value point chains witnessing the zeta-factorization formulas
//
//   f_l(alpha_0) * prod_{r=1}^{k} Z~^2(alpha_r) / Z~^2(beta_r) = (1/U) int_{pi L}^{pi L + U} f_l
//
// over the surrogate ladder. A single deep point c in I_k is transported
// forward by phi, so the chain law phi(alpha_r) = alpha_{r-1} holds by
// construction; beta depends only on (U, L, k).

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "metazeta/ladder.hpp"

namespace metazeta {

inline constexpr int kDefaultKMax = 3;
// Residual bound for certificates, relative to |rhs|.
inline constexpr double kCertificateRelTol = 1e-6;
// Z~^2(beta_r) below this is treated as a degenerate mean-value point.
inline constexpr double kDegenerateWeight = 1e-12;

struct FactorizationCertificate {
    int l = 1;
    int k = 1;
    double U = 0.0;
    long L = 0;
    std::vector<double> alpha;  // alpha_0 .. alpha_k
    std::vector<double> beta;   // beta_1 .. beta_k
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    // Tie-break among several mean-value points.
    std::string convention = "smallest-root";
};

void to_json(nlohmann::json& j, const FactorizationCertificate& c);
void from_json(const nlohmann::json& j, FactorizationCertificate& c);

struct FactorizationOptions {
    int k_max = kDefaultKMax;
    double quadrature_rel_tol = 1e-9;
};

// prod_{j=0}^{k-1} Z~^2(phi^j(t)).
double weight_wk(const LadderTable& table, double t, int k);

// The base interval [pi L, pi L + U].
IteratedInterval base_interval(double U, long L);

FactorizationCertificate factorize(int l, int k, double U, long L, const LadderTable& table,
                                   const FactorizationOptions& options = {});

// Same construction for an arbitrary integrand f with known interval mean;
// the certificate carries l = 0.
FactorizationCertificate factorize_function(const std::function<double(double)>& f, double mean, int k, double U,
                                            long L, const LadderTable& table,
                                            const FactorizationOptions& options = {});

struct NamedCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CertificateReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    std::vector<NamedCheck> checks;

    bool passed() const;
    const NamedCheck* failed() const;
};

void to_json(nlohmann::json& j, const CertificateReport& r);

CertificateReport verify_certificate(const FactorizationCertificate& cert, const LadderTable& table);

// Throws CertificateError naming the first failed invariant.
void require_valid(const CertificateReport& report);

}  // namespace metazeta
