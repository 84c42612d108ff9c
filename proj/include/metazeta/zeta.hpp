#pragma once

// Evaluation of the Riemann zeta function off the critical line
// (Euler-Maclaurin), Hardy's Z(t) on it (Riemann-Siegel above a crossover
// height, Euler-Maclaurin below) and the normalised square Z~^2(t) = Z(t)^2/ln t.

#include <complex>

namespace metazeta {

// Immutable evaluation settings shared by every numerical stage.
struct EvalConfig {
    // Decimal digits. <= 15 selects the double backend, 16..18 long double.
    int working_precision = 15;
    // Lower cutoff for Z~^2 (stand-in for the unquantified L0); must exceed e.
    double t_min = 100.0;
    double quadrature_rel_tol = 1e-10;
    double rootfind_abs_tol = 1e-10;
    // Hardy Z uses Riemann-Siegel (C0..C4) at and above this height.
    double rs_min_height = 1000.0;

    // Throws ConfigError when an invariant is violated.
    void validate() const;
    // Relative accuracy promised by zeta(): 10^(2 - working_precision).
    double target_rel_error() const;
};

struct CriticalSample {
    double t = 0.0;
    double z = 0.0;
    double z_tilde_sq = 0.0;
};

// Largest |Im s| the Euler-Maclaurin evaluator accepts.
inline constexpr double kMaxZetaHeight = 1e6;

std::complex<double> zeta(std::complex<double> s, const EvalConfig& cfg = {});

// Extended-precision backend; used by zeta() when working_precision > 15.
std::complex<long double> zeta_extended(std::complex<long double> s, const EvalConfig& cfg = {});

// Riemann-Siegel theta function.
double riemann_siegel_theta(double t);

// Z(t) from the Riemann-Siegel formula with corrections C0..C4, for t >= 10.
// Remainder is roughly 0.02 t^(-11/4).
double riemann_siegel_z(double t);

// Z(t) as Re(e^{i theta(t)} zeta(1/2 + i t)).
double hardy_z_euler_maclaurin(double t, const EvalConfig& cfg = {});

double hardy_z(double t, const EvalConfig& cfg = {});

// Z(t)^2 / ln t. omega(t) is taken to be ln t exactly.
double z_tilde_sq(double t, const EvalConfig& cfg = {});

CriticalSample critical_sample(double t, const EvalConfig& cfg = {});

}  // namespace metazeta
