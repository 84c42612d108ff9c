#include "metazeta/trig.hpp"

#include <cmath>
#include <string>

#include "metazeta/errors.hpp"

namespace metazeta {

namespace {

void check_index(int l, int max_l)
{
    if (l < 1 || l > max_l) {
        throw DomainError("function index " + std::to_string(l) + " outside 1.." + std::to_string(max_l));
    }
}

void check_width(double U)
{
    if (!(U > 0.0 && U < kUMax)) {
        throw DomainError("interval width U = " + std::to_string(U) + " outside (0, pi/12)");
    }
}

BigInt binomial(int n, int k)
{
    BigInt out = 1;
    for (int i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

// Cosine coefficients a_0..a_3 of f_l = sum_m a_m cos(2 m t).
std::array<Rational, 4> cosine_coefficients(int l)
{
    std::array<Rational, 4> a{};
    if (l >= 7) {
        a[static_cast<std::size_t>(l - 6)] = 1;
        return a;
    }
    // sin^{2n} (odd l) and cos^{2n} (even l), n = 1, 2, 3
    const int n = (l + 1) / 2;
    const bool is_sine = (l % 2) == 1;
    const BigInt four_n = BigInt(1) << (2 * n);
    a[0] = Rational(binomial(2 * n, n), four_n);
    for (int j = 1; j <= n; ++j) {
        const int sign = (is_sine && (j % 2 == 1)) ? -1 : 1;
        a[static_cast<std::size_t>(j)] = Rational(2 * sign * binomial(2 * n, n - j), four_n);
    }
    return a;
}

// Taylor coefficients of mean(l, U) in U^2:
//   mean = sum_j (-1)^j U^{2j} / (2j+1)! * sum_m a_m (2m)^{2j}.
// Low-order moments cancel exactly in rationals, so the series keeps full
// relative accuracy where the sinc combination itself would cancel (l = 5, small U).
constexpr int kSeriesTerms = 24;

const std::array<std::array<double, kSeriesTerms>, kIntegrandCount>& mean_series()
{
    static const auto table = [] {
        std::array<std::array<double, kSeriesTerms>, kIntegrandCount> out{};
        for (int l = 1; l <= kIntegrandCount; ++l) {
            const auto a = cosine_coefficients(l);
            BigInt factorial = 1;  // (2j+1)!
            for (int j = 0; j < kSeriesTerms; ++j) {
                if (j > 0) {
                    factorial *= (2 * j) * (2 * j + 1);
                }
                Rational moment = 0;
                for (int m = 0; m <= 3; ++m) {
                    BigInt power = 1;
                    for (int e = 0; e < 2 * j; ++e) {
                        power *= 2 * m;
                    }
                    moment += a[static_cast<std::size_t>(m)] * Rational(power);
                }
                const Rational term = (j % 2 == 0 ? moment : Rational(-moment)) / Rational(factorial);
                out[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(j)] = to_double(term);
            }
        }
        return out;
    }();
    return table;
}

}  // namespace

ElementaryFunction elementary_function(int l)
{
    check_index(l, kFunctionCount);
    return {l, l <= kIntegrandCount ? FunctionKind::Integrand : FunctionKind::SincAtom};
}

std::string function_name(int l)
{
    check_index(l, kFunctionCount);
    static const std::array<const char*, kFunctionCount> names = {
        "sin^2 t", "cos^2 t", "sin^4 t", "cos^4 t", "sin^6 t", "cos^6 t",
        "cos 2t", "cos 4t", "cos 6t", "sin(2U)/(2U)", "sin(4U)/(4U)", "sin(6U)/(6U)"};
    return names[static_cast<std::size_t>(l - 1)];
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

double eval_f(int l, double x)
{
    check_index(l, kFunctionCount);
    switch (l) {
    case 1: {
        const double s = std::sin(x);
        return s * s;
    }
    case 2: {
        const double c = std::cos(x);
        return c * c;
    }
    case 3: {
        const double s = std::sin(x);
        return s * s * s * s;
    }
    case 4: {
        const double c = std::cos(x);
        return c * c * c * c;
    }
    case 5: {
        const double s2 = std::sin(x) * std::sin(x);
        return s2 * s2 * s2;
    }
    case 6: {
        const double c2 = std::cos(x) * std::cos(x);
        return c2 * c2 * c2;
    }
    case 7:
        return std::cos(2.0 * x);
    case 8:
        return std::cos(4.0 * x);
    case 9:
        return std::cos(6.0 * x);
    default:
        check_width(x);
        return sinc(2.0 * (l - 9) * x);
    }
}

const Rational& SincDecomposition::coefficient(int j) const
{
    switch (j) {
    case 0:
        return c0;
    case 1:
        return c2;
    case 2:
        return c4;
    case 3:
        return c6;
    default:
        throw DomainError("sinc decomposition index " + std::to_string(j) + " outside 0..3");
    }
}

SincDecomposition sinc_decomposition(int l)
{
    check_index(l, kIntegrandCount);
    // The mean of cos(2 m t) over [pi L, pi L + U] is sinc(2 m U).
    const auto a = cosine_coefficients(l);
    return {l, a[0], a[1], a[2], a[3]};
}

double mean_value_closed_form(int l, double U)
{
    check_index(l, kIntegrandCount);
    check_width(U);
    const auto& series = mean_series()[static_cast<std::size_t>(l - 1)];
    const double u2 = U * U;
    double acc = 0.0;
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
        acc = acc * u2 + *it;
    }
    return acc;
}

}  // namespace metazeta
