#include "metazeta/zeta.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "metazeta/detail_rs_coefficients.hpp"
#include "metazeta/errors.hpp"
#include "metazeta/numerics.hpp"

namespace metazeta {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Reduce a phase into [-pi, pi] in extended precision.
long double reduce_phase(long double x)
{
    return x - kTwoPiL * std::nearbyint(x / kTwoPiL);
}

// Unevaluated sum hi + lo carrying ~106 bits.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

DoubleDouble split(long double x)
{
    const double hi = static_cast<double>(x);
    return {hi, static_cast<double>(x - hi)};
}

constexpr double kTwoPiHi = 6.283185307179586232;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

// theta - t * ln n reduced into [-pi, pi], with error ~1e-15 for t up to 1e6.
double reduced_phase(const DoubleDouble& theta, double t, const DoubleDouble& ln_n)
{
    const double p = t * ln_n.hi;
    const double p_err = std::fma(t, ln_n.hi, -p);
    const double s = theta.hi - p;
    const double bb = s - theta.hi;
    const double s_err = (theta.hi - (s - bb)) + (-p - bb);
    const double low = s_err + theta.lo - p_err - t * ln_n.lo;
    const double k = std::nearbyint(s / kTwoPiHi);
    return std::fma(-k, kTwoPiHi, s) - k * kTwoPiLo + low;
}

struct MainSumTables {
    std::array<DoubleDouble, 1025> log;
    std::array<double, 1025> inv_sqrt;
};

// ln n and n^{-1/2} for the Riemann-Siegel main sum; covers t up to ~6.5e6.
const MainSumTables& main_sum_tables()
{
    static const MainSumTables tables = [] {
        MainSumTables out{};
        for (std::size_t n = 1; n < out.log.size(); ++n) {
            out.log[n] = split(std::log(static_cast<long double>(n)));
            out.inv_sqrt[n] = 1.0 / std::sqrt(static_cast<double>(n));
        }
        return out;
    }();
    return tables;
}

// log Gamma for complex z with Re z > 0, by upward shift and Stirling's series.
std::complex<long double> log_gamma(std::complex<long double> z)
{
    std::complex<long double> shift = 0;
    while (std::abs(z) < 20.0L) {
        shift += std::log(z);
        z += 1.0L;
    }
    const std::complex<long double> inv = 1.0L / z;
    const std::complex<long double> inv2 = inv * inv;
    // B_{2k} / (2k (2k-1)) for k = 1..8
    constexpr std::array<long double, 8> c = {1.0L / 12,       -1.0L / 360,        1.0L / 1260,    -1.0L / 1680,
                                              1.0L / 1188,     -691.0L / 360360,   1.0L / 156,     -3617.0L / 122400};
    std::complex<long double> series = 0;
    std::complex<long double> pw = inv;
    for (long double ck : c) {
        series += ck * pw;
        pw *= inv2;
    }
    return (z - 0.5L) * std::log(z) - z + 0.5L * std::log(kTwoPiL) + series - shift;
}

long double theta_ld(long double t)
{
    if (t >= 100.0L) {
        const long double it = 1.0L / t;
        const long double it2 = it * it;
        return t / 2 * std::log(t / kTwoPiL) - t / 2 - kPiL / 8 +
               it * (1.0L / 48 + it2 * (7.0L / 5760 + it2 * (31.0L / 80640 + it2 * (127.0L / 430080 + it2 * 511.0L / 1216512))));
    }
    const std::complex<long double> z(0.25L, t / 2);
    return log_gamma(z).imag() - t / 2 * std::log(kPiL);
}

template <typename Real>
std::complex<Real> zeta_euler_maclaurin(std::complex<Real> s)
{
    using C = std::complex<Real>;
    const Real sigma = s.real();
    const long double t = static_cast<long double>(s.imag());
    if (s == C(1, 0)) {
        throw DomainError("zeta: pole at s = 1");
    }
    if (!(sigma > 0)) {
        throw DomainError("zeta: Re(s) must be positive (no continuation left of Re(s) = 0)");
    }
    if (std::abs(s.imag()) > kMaxZetaHeight) {
        throw CapabilityError("zeta: |Im s| = " + std::to_string(static_cast<double>(std::abs(s.imag()))) +
                              " exceeds the supported height 1e6");
    }
    const double mod_s = static_cast<double>(std::abs(s));
    const long n_terms = 20 + static_cast<long>(std::ceil(mod_s / std::numbers::pi));

    auto power_neg_s = [&](long n) {
        const long double ln = std::log(static_cast<long double>(n));
        const long double phase = reduce_phase(t * ln);
        const Real mag = std::exp(-sigma * static_cast<Real>(ln));
        // The reduced phase is accurate to extended precision; the final
        // trigonometric call only needs the backend's own precision.
        const Real ph = static_cast<Real>(phase);
        return C(mag * std::cos(ph), -mag * std::sin(ph));
    };

    numerics::CompensatedSum<Real> re;
    numerics::CompensatedSum<Real> im;
    for (long n = n_terms - 1; n >= 1; --n) {
        const C term = power_neg_s(n);
        re.add(term.real());
        im.add(term.imag());
    }
    const Real big_n = static_cast<Real>(n_terms);
    const C n_pow = power_neg_s(n_terms);
    C tail = n_pow * big_n / (s - Real(1)) + n_pow / Real(2);

    // Bernoulli corrections: B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    const Real eps = std::numeric_limits<Real>::epsilon();
    C rising = s / big_n * n_pow;
    Real previous = std::numeric_limits<Real>::infinity();
    bool converged = false;
    for (unsigned k = 1; k <= 80; ++k) {
        const Real coeff = boost::math::bernoulli_b2n<Real>(k) / boost::math::factorial<Real>(2 * k);
        const C term = coeff * rising;
        tail += term;
        const Real mag = std::abs(term);
        const Real scale = std::abs(C(re.value(), im.value()) + tail);
        if (mag <= eps * scale * Real(0.25)) {
            converged = true;
            break;
        }
        if (k > 3 && mag > previous) {
            break;
        }
        previous = mag;
        const Real kk = static_cast<Real>(k);
        rising *= (s + (2 * kk - 1)) * (s + 2 * kk) / (big_n * big_n);
    }
    if (!converged) {
        throw CapabilityError("zeta: Euler-Maclaurin tail did not converge at the requested precision");
    }
    return C(re.value(), im.value()) + tail;
}

// Horner evaluation of a correction polynomial in u = p - 1/2.
double eval_correction(std::span<const double> coeffs, double u)
{
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * u + *it;
    }
    return acc;
}

void check_backend(const EvalConfig& cfg)
{
    if (cfg.working_precision > 18) {
        throw CapabilityError("zeta: working_precision " + std::to_string(cfg.working_precision) +
                              " exceeds the extended backend (18 digits)");
    }
}

}  // namespace

void EvalConfig::validate() const
{
    if (working_precision < 15) {
        throw ConfigError("EvalConfig: working_precision must be >= 15");
    }
    if (!(t_min > std::numbers::e)) {
        throw ConfigError("EvalConfig: t_min must exceed e so that ln t > 1");
    }
    if (!(quadrature_rel_tol > 0) || !(rootfind_abs_tol > 0)) {
        throw ConfigError("EvalConfig: tolerances must be positive");
    }
    if (!(rs_min_height >= 10.0)) {
        throw ConfigError("EvalConfig: rs_min_height must be >= 10");
    }
}

double EvalConfig::target_rel_error() const
{
    return std::pow(10.0, 2.0 - working_precision);
}

std::complex<double> zeta(std::complex<double> s, const EvalConfig& cfg)
{
    check_backend(cfg);
    if (cfg.working_precision > 15) {
        const auto v = zeta_extended(std::complex<long double>(s.real(), s.imag()), cfg);
        return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    return zeta_euler_maclaurin<double>(s);
}

std::complex<long double> zeta_extended(std::complex<long double> s, const EvalConfig& cfg)
{
    check_backend(cfg);
    return zeta_euler_maclaurin<long double>(s);
}

double riemann_siegel_theta(double t)
{
    return static_cast<double>(theta_ld(t));
}

double riemann_siegel_z(double t)
{
    if (!(t >= 10.0)) {
        throw DomainError("riemann_siegel_z: requires t >= 10");
    }
    const long double tl = t;
    const long double theta = theta_ld(tl);
    const long double tau = std::sqrt(tl / kTwoPiL);
    const long n_main = static_cast<long>(std::floor(tau));
    const auto& tables = main_sum_tables();
    if (n_main >= static_cast<long>(tables.log.size())) {
        throw CapabilityError("riemann_siegel_z: height beyond the tabulated main sum");
    }
    const DoubleDouble theta_dd = split(theta);
    numerics::CompensatedSum<double> sum;
    for (long n = 1; n <= n_main; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        sum.add(std::cos(reduced_phase(theta_dd, t, tables.log[idx])) * tables.inv_sqrt[idx]);
    }
    const double u = static_cast<double>(tau - n_main) - 0.5;
    const double inv_tau = 1.0 / static_cast<double>(tau);
    double corr = 0.0;
    double scale = 1.0;
    for (const auto& coeffs : detail::kRsCorrections) {
        corr += eval_correction(coeffs, u) * scale;
        scale *= inv_tau;
    }
    const double sign = (n_main % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N-1)
    return 2.0 * sum.value() + sign * std::sqrt(inv_tau) * corr;
}

double hardy_z_euler_maclaurin(double t, const EvalConfig& cfg)
{
    const std::complex<long double> z =
        cfg.working_precision > 15 ? zeta_extended({0.5L, static_cast<long double>(t)}, cfg)
                                   : [&] {
                                         const auto v = zeta({0.5, t}, cfg);
                                         return std::complex<long double>(v.real(), v.imag());
                                     }();
    const long double theta = reduce_phase(theta_ld(t));
    return static_cast<double>(std::cos(theta) * z.real() - std::sin(theta) * z.imag());
}

double hardy_z(double t, const EvalConfig& cfg)
{
    if (!(t >= cfg.t_min)) {
        throw DomainError("hardy_z: t = " + std::to_string(t) + " is below t_min = " + std::to_string(cfg.t_min));
    }
    if (t >= cfg.rs_min_height) {
        return riemann_siegel_z(t);
    }
    return hardy_z_euler_maclaurin(t, cfg);
}

double z_tilde_sq(double t, const EvalConfig& cfg)
{
    if (!(t > std::numbers::e)) {
        throw DomainError("z_tilde_sq: t must exceed e (ln t <= 1 undermines the normalisation)");
    }
    const double z = hardy_z(t, cfg);
    return z * z / std::log(t);
}

CriticalSample critical_sample(double t, const EvalConfig& cfg)
{
    const double z = hardy_z(t, cfg);
    return {t, z, z * z / std::log(t)};
}

}  // namespace metazeta
