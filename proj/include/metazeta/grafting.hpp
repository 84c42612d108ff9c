#pragma once

// Twelve disjoint vertical strips inside the right half of the critical
// strip, admissible width sets, and graft points w with |zeta(w)| equal to a
// prescribed value in (0, 1).

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "metazeta/factorization.hpp"
#include "metazeta/rational.hpp"
#include "metazeta/zeta.hpp"

namespace metazeta {

inline constexpr int kStripCount = 12;

struct Strip {
    int l = 1;
    double sigma0 = 0.75;
    double delta = 0.0;

    double sigma_lo() const { return sigma0 - delta; }
    double sigma_hi() const { return sigma0 + delta; }
    bool contains(std::complex<double> w) const { return w.real() > sigma_lo() && w.real() < sigma_hi() && w.imag() > 0; }
};

using StripSet = std::array<Strip, kStripCount>;

// Centres sigma1 + (l - 1/2)(sigma2 - sigma1)/12. Feasible iff
// delta < (sigma2 - sigma1)/24; otherwise ConfigError quoting that bound.
StripSet build_strips(double sigma1, double sigma2, double delta);

// Exact check of the strict ordering and disjointness inequalities.
bool strips_disjoint(const StripSet& strips, double sigma1, double sigma2);

// Strips hugging the critical line, where |zeta| dips to ~1e-11 near every
// zero so that targets down to that scale are reachable at modest heights.
struct DefaultStrips {
    static constexpr double sigma1 = 0.5 + 1e-12;
    static constexpr double sigma2 = 0.5 + 1.3e-11;
    static constexpr double delta = 2.5e-13;
};

// Width candidates a + b*pi with exact rational a, b, so that values such as
// pi/12 - 1e-50 are representable.
struct WidthValue {
    Rational offset;
    Rational pi_coeff;
    std::string text;
};

// Accepts decimals, p/q, "pi/12", "pi/12 - 1e-50", "2*pi/25 + 1/3".
WidthValue parse_width(const std::string& text);
WidthValue width_from_double(double x);

struct USetViolation {
    std::string constraint;
    std::string detail;
};

struct AdmissibleUSet {
    std::vector<WidthValue> values;

    std::size_t size() const { return values.size(); }
    // U_n as a double, n = 1..n_0.
    double at(std::size_t n) const;
};

using USetResult = std::variant<AdmissibleUSet, std::vector<USetViolation>>;

USetResult validate_u_set(const std::vector<WidthValue>& candidate);
USetResult validate_u_set(const std::vector<std::string>& candidate);
USetResult validate_u_set(const std::vector<double>& candidate);

struct Graft {
    int l = 1;
    int n = 1;
    std::complex<double> w;
    double target = 0.0;
    double achieved = 0.0;
    int strip_id = 1;
};

void to_json(nlohmann::json& j, const Graft& g);
void from_json(const nlohmann::json& j, Graft& g);

struct GraftSearchOptions {
    double t_a = 10.0;
    double t_b = 2000.0;
    // Window doubles (t_b -> 2 t_b) until it would pass this height.
    double t_cap = 32000.0;
    bool escalate = true;
    double scan_step = 0.05;
    double graft_tol = 1e-9;
};

// First (smallest t) solution of |zeta(w)| = target in the strip: centre line
// first, then the lines sigma0 -/+ delta/2, per window.
Graft find_graft(const Strip& strip, double target, const GraftSearchOptions& options = {},
                 const EvalConfig& cfg = {});

// Up to `count` distinct solutions (|dt| > 1e-6) on the centre line, in scan order.
std::vector<Graft> find_grafts(const Strip& strip, double target, std::size_t count,
                               const GraftSearchOptions& options = {}, const EvalConfig& cfg = {});

// f_l(alpha_0) of the certificate for l <= 9, f_l(U_n) for l >= 10. Throws
// DegenerateTargetError unless the value lies strictly inside (0, 1).
double graft_target(int l, const FactorizationCertificate* cert, double U_n);

// Looks up the certificate for (l, U_n) among `certs` when l <= 9.
double build_graft_targets(const std::vector<FactorizationCertificate>& certs, const AdmissibleUSet& u_set, int l,
                           std::size_t n);

}  // namespace metazeta
