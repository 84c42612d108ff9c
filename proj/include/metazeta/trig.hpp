#pragma once

// The twelve elementary functions: nine period-pi integrands f1..f9 and the
// three sinc atoms f10..f12 of the interval width U, together with the
// closed-form interval means of f1..f9 and their exact sinc decompositions.

#include <array>
#include <numbers>
#include <string>

#include "metazeta/rational.hpp"

namespace metazeta {

inline constexpr int kFunctionCount = 12;
inline constexpr int kIntegrandCount = 9;
// Upper bound (exclusive) on interval widths U.
inline constexpr double kUMax = std::numbers::pi / 12.0;

enum class FunctionKind { Integrand, SincAtom };

struct ElementaryFunction {
    int index = 1;
    FunctionKind kind = FunctionKind::Integrand;
};

// Throws DomainError unless 1 <= l <= 12.
ElementaryFunction elementary_function(int l);

// Human-readable name, e.g. "sin^4 t" or "sin(4U)/(4U)".
std::string function_name(int l);

// sin(x)/x with the removable singularity filled in.
double sinc(double x);

// For l <= 9, x is a point t; for l >= 10, x is a width U in (0, pi/12).
double eval_f(int l, double x);

// mean(l, U) = c0 + c2 sinc(2U) + c4 sinc(4U) + c6 sinc(6U).
struct SincDecomposition {
    int l = 1;
    Rational c0;
    Rational c2;
    Rational c4;
    Rational c6;

    // Coefficient of sinc(2jU) for j = 0..3 (j = 0 is the constant).
    const Rational& coefficient(int j) const;
    bool operator==(const SincDecomposition&) const = default;
};

// Derived from the power-reduction formulas, so the coefficients are exact.
SincDecomposition sinc_decomposition(int l);

// (1/U) * integral of f_l over [pi L, pi L + U]; independent of L.
double mean_value_closed_form(int l, double U);

}  // namespace metazeta
