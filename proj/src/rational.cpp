#include "metazeta/rational.hpp"

#include <cctype>

#include "metazeta/errors.hpp"

namespace metazeta {

std::string to_string(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

namespace {

bool all_digits(const std::string& s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

// cpp_int reads a leading 0 as an octal prefix.
BigInt decimal_int(const std::string& digits)
{
    const auto first = digits.find_first_not_of('0');
    return first == std::string::npos ? BigInt(0) : BigInt(digits.substr(first));
}

BigInt pow10(long e)
{
    BigInt out = 1;
    for (long i = 0; i < e; ++i) {
        out *= 10;
    }
    return out;
}

}  // namespace

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            text.push_back(c);
        }
    }
    if (text.empty()) {
        throw ConfigError("empty rational literal");
    }
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::string body = text.substr(pos);
    Rational value;
    if (const auto slash = body.find('/'); slash != std::string::npos) {
        const std::string num = body.substr(0, slash);
        const std::string den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw ConfigError("malformed rational literal '" + raw + "'");
        }
        const BigInt d = decimal_int(den);
        if (d == 0) {
            throw ConfigError("zero denominator in '" + raw + "'");
        }
        value = Rational(decimal_int(num), d);
    } else {
        long exponent = 0;
        if (const auto e = body.find_first_of("eE"); e != std::string::npos) {
            try {
                exponent = std::stol(body.substr(e + 1));
            } catch (const std::exception&) {
                throw ConfigError("malformed exponent in '" + raw + "'");
            }
            body = body.substr(0, e);
        }
        std::string int_part = body;
        std::string frac_part;
        if (const auto dot = body.find('.'); dot != std::string::npos) {
            int_part = body.substr(0, dot);
            frac_part = body.substr(dot + 1);
        }
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part))) {
            throw ConfigError("malformed decimal literal '" + raw + "'");
        }
        const BigInt digits = decimal_int(int_part + frac_part);
        exponent -= static_cast<long>(frac_part.size());
        if (exponent >= 0) {
            value = Rational(digits * pow10(exponent));
        } else {
            value = Rational(digits, pow10(-exponent));
        }
    }
    return negative ? Rational(-value) : value;
}

double to_double(const Rational& r)
{
    return r.convert_to<double>();
}

}  // namespace metazeta
