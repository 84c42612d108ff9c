#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace metazeta {

// Exact rational arithmetic for decomposition coefficients and the symbolic
// crossbreeding engine.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

// Parses "p", "p/q", or a decimal literal ("-0.125", "1e-43", "2.5E+3") exactly.
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

}  // namespace metazeta
