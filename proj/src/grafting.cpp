#include "metazeta/grafting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "metazeta/errors.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/trig.hpp"

namespace metazeta {

namespace {

// pi to 80 decimals, truncated; pi lies in [kPiLow, kPiLow + 1e-80].
const Rational& pi_low()
{
    static const Rational v =
        parse_rational("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899");
    return v;
}

const Rational& pi_high()
{
    static const Rational v = pi_low() + parse_rational("1e-80");
    return v;
}

// Sign of offset + pi_coeff * pi, decided with the 80-digit enclosure.
int sign_of(const Rational& offset, const Rational& pi_coeff)
{
    if (pi_coeff == 0) {
        return offset > 0 ? 1 : (offset < 0 ? -1 : 0);
    }
    Rational a = offset + pi_coeff * pi_low();
    Rational b = offset + pi_coeff * pi_high();
    if (a > b) {
        std::swap(a, b);
    }
    if (a > 0) {
        return 1;
    }
    if (b < 0) {
        return -1;
    }
    throw ConsistencyError("width comparison undecidable with 80 digits of pi");
}

// sign of (x - y - margin)
bool exceeds(const WidthValue& x, const WidthValue& y, const Rational& margin)
{
    return sign_of(x.offset - y.offset - margin, x.pi_coeff - y.pi_coeff) > 0;
}

WidthValue constant(const Rational& offset, const Rational& pi_coeff, std::string text)
{
    return {offset, pi_coeff, std::move(text)};
}

const WidthValue& zero_width()
{
    static const WidthValue v = constant(0, 0, "0");
    return v;
}

const WidthValue& u_max()
{
    static const WidthValue v = constant(0, Rational(1, 12), "pi/12");
    return v;
}

std::string trim(std::string s)
{
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

// One signed term: a rational literal, or [c*]pi[/d].
void add_term(WidthValue& out, const std::string& term, bool negative, const std::string& whole)
{
    if (term.empty()) {
        throw ConfigError("width '" + whole + "': empty term");
    }
    const auto pos = term.find("pi");
    Rational value;
    bool is_pi = pos != std::string::npos;
    if (!is_pi) {
        value = parse_rational(term);
    } else {
        Rational coeff = 1;
        const std::string before = term.substr(0, pos);
        const std::string after = term.substr(pos + 2);
        if (!before.empty()) {
            if (before.back() != '*') {
                throw ConfigError("width '" + whole + "': expected '*' before pi");
            }
            coeff = parse_rational(before.substr(0, before.size() - 1));
        }
        if (!after.empty()) {
            if (after.front() != '/') {
                throw ConfigError("width '" + whole + "': expected '/' after pi");
            }
            const Rational den = parse_rational(after.substr(1));
            if (den == 0) {
                throw ConfigError("width '" + whole + "': division by zero");
            }
            coeff /= den;
        }
        value = coeff;
    }
    if (negative) {
        value = -value;
    }
    (is_pi ? out.pi_coeff : out.offset) += value;
}

double eval_modulus(double sigma, double t, const EvalConfig& cfg)
{
    return std::abs(zeta({sigma, t}, cfg));
}

// Level-set scan of |zeta(sigma + it)| = target along one vertical line.
class LineScanner {
public:
    LineScanner(double sigma, double target, const GraftSearchOptions& options, const EvalConfig& cfg)
        : sigma_(sigma), target_(target), options_(options), cfg_(cfg)
    {
    }

    // Appends solutions in [ta, tb] to `roots` until it holds `count`.
    void scan(double ta, double tb, std::size_t count, std::vector<double>& roots)
    {
        auto mod = [&](double t) { return eval_modulus(sigma_, t, cfg_); };
        auto h = [&](double t) { return mod(t) - target_; };
        const auto steps = static_cast<long>(std::ceil((tb - ta) / options_.scan_step));
        std::optional<Sample> prev2;
        std::optional<Sample> prev;
        for (long i = 0; i <= steps && roots.size() < count; ++i) {
            const double t = i == steps ? tb : ta + (tb - ta) * static_cast<double>(i) / static_cast<double>(steps);
            const Sample cur{t, mod(t)};
            if (prev) {
                if ((prev->v < target_) != (cur.v < target_)) {
                    push(roots, numerics::bisect(h, prev->t, cur.t, prev->v - target_, 0.0));
                } else if (prev2 && prev->v > target_ && prev->v < prev2->v && prev->v <= cur.v) {
                    // a dip between grid points can still cross the level
                    const double m = numerics::golden_minimum(mod, prev2->t, cur.t);
                    const double vm = mod(m);
                    if (vm < target_) {
                        push(roots, numerics::bisect(h, prev2->t, m, prev2->v - target_, 0.0));
                        if (roots.size() < count) {
                            push(roots, numerics::bisect(h, m, cur.t, vm - target_, 0.0));
                        }
                    }
                }
            }
            prev2 = prev;
            prev = cur;
        }
    }

private:
    struct Sample {
        double t;
        double v;
    };

    void push(std::vector<double>& roots, double t) const
    {
        const double achieved = eval_modulus(sigma_, t, cfg_);
        if (std::abs(achieved - target_) > options_.graft_tol) {
            return;
        }
        if (!roots.empty() && std::abs(t - roots.back()) <= 1e-6) {
            return;
        }
        roots.push_back(t);
    }

    double sigma_;
    double target_;
    GraftSearchOptions options_;
    EvalConfig cfg_;
};

void check_target(double target)
{
    if (target == 0.0) {
        throw DomainError("graft: target 0 is excluded (zeta(s) = a requires a != 0)");
    }
    if (!(target > 0.0 && target < 1.0)) {
        throw DomainError("graft: target " + format_double(target) + " must lie in (0, 1)");
    }
}

void check_window(const GraftSearchOptions& o)
{
    if (!(o.t_a > 0.0 && o.t_b > o.t_a)) {
        throw ConfigError("graft: window must satisfy 0 < t_a < t_b");
    }
    if (!(o.scan_step > 0.0) || !(o.graft_tol > 0.0)) {
        throw ConfigError("graft: scan_step and graft_tol must be positive");
    }
}

Graft make_graft(const Strip& strip, double sigma, double t, double target, const EvalConfig& cfg)
{
    Graft g;
    g.l = strip.l;
    g.strip_id = strip.l;
    g.w = {sigma, t};
    g.target = target;
    g.achieved = eval_modulus(sigma, t, cfg);
    return g;
}

}  // namespace

StripSet build_strips(double sigma1, double sigma2, double delta)
{
    if (!(sigma1 > 0.5 && sigma1 < sigma2 && sigma2 < 1.0)) {
        throw ConfigError("strips: need 1/2 < sigma1 < sigma2 < 1");
    }
    const double span = sigma2 - sigma1;
    const double max_delta = span / (2.0 * kStripCount);
    if (!(delta > 0.0)) {
        throw ConfigError("strips: delta must be positive");
    }
    if (!(delta < max_delta)) {
        throw ConfigError("strips: delta = " + format_double(delta) + " does not fit 12 disjoint strips; need delta < " +
                          format_double(max_delta));
    }
    StripSet out;
    for (int l = 1; l <= kStripCount; ++l) {
        out[static_cast<std::size_t>(l - 1)] = {l, sigma1 + (l - 0.5) * span / kStripCount, delta};
    }
    if (!strips_disjoint(out, sigma1, sigma2)) {
        throw ConfigError("strips: rounding breaks strict separation; choose a smaller delta");
    }
    return out;
}

bool strips_disjoint(const StripSet& strips, double sigma1, double sigma2)
{
    const Rational s1(sigma1);
    const Rational s2(sigma2);
    if (!(Rational(0.5) < s1 && s1 < s2 && s2 < 1)) {
        return false;
    }
    for (std::size_t i = 0; i < strips.size(); ++i) {
        const Rational c(strips[i].sigma0);
        const Rational d(strips[i].delta);
        if (!(d > 0)) {
            return false;
        }
        if (i == 0 && !(s1 < c - d)) {
            return false;
        }
        if (i + 1 == strips.size() && !(c + d < s2)) {
            return false;
        }
        if (i + 1 < strips.size()) {
            const Rational cn(strips[i + 1].sigma0);
            const Rational dn(strips[i + 1].delta);
            if (!(c + d < cn - dn)) {
                return false;
            }
        }
    }
    return true;
}

WidthValue parse_width(const std::string& text)
{
    const std::string s = trim(text);
    if (s.empty()) {
        throw ConfigError("width: empty value");
    }
    WidthValue out{0, 0, text};
    std::size_t start = 0;
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        start = 1;
    }
    for (std::size_t i = start; i <= s.size(); ++i) {
        const bool end = i == s.size();
        const bool split = !end && (s[i] == '+' || s[i] == '-') && i > start && s[i - 1] != 'e' && s[i - 1] != 'E';
        if (end || split) {
            add_term(out, s.substr(start, i - start), negative, text);
            if (!end) {
                negative = s[i] == '-';
                start = i + 1;
            }
        }
    }
    return out;
}

WidthValue width_from_double(double x)
{
    return {Rational(x), 0, format_double(x)};
}

double AdmissibleUSet::at(std::size_t n) const
{
    if (n < 1 || n > values.size()) {
        throw RangeError("U-set index " + std::to_string(n) + " outside 1.." + std::to_string(values.size()));
    }
    const auto& v = values[n - 1];
    return to_double(v.offset) + to_double(v.pi_coeff) * std::numbers::pi;
}

USetResult validate_u_set(const std::vector<WidthValue>& candidate)
{
    std::vector<USetViolation> bad;
    if (candidate.empty()) {
        bad.push_back({"nonempty", "the U-set has no elements"});
        return bad;
    }
    const Rational planck_gap = parse_rational("1e-34");
    const Rational planck_margin = parse_rational("1e-43");
    for (std::size_t n = 0; n < candidate.size(); ++n) {
        const auto& u = candidate[n];
        const std::string name = "U_" + std::to_string(n + 1) + " = " + u.text;
        if (!exceeds(u, zero_width(), 0) || !exceeds(u_max(), u, 0)) {
            bad.push_back({"0 < U_n < pi/12", name});
        }
        if (n + 1 < candidate.size()) {
            const auto& next = candidate[n + 1];
            const std::string pair = "U_" + std::to_string(n + 2) + " = " + next.text + " after " + name;
            if (!exceeds(next, u, 0)) {
                bad.push_back({"increasing", pair});
            }
            if (!exceeds(next, u, planck_gap)) {
                bad.push_back({"U_{n+1} - U_n > 1e-34", pair});
            }
        }
    }
    if (!exceeds(candidate.front(), zero_width(), planck_margin)) {
        bad.push_back({"U_1 > 1e-43", "U_1 = " + candidate.front().text});
    }
    if (!exceeds(u_max(), candidate.back(), planck_margin)) {
        bad.push_back({"pi/12 - U_n0 > 1e-43", "U_n0 = " + candidate.back().text});
    }
    // n_0 <= 1e43 holds for any list that fits in memory.
    if (!bad.empty()) {
        return bad;
    }
    return AdmissibleUSet{candidate};
}

USetResult validate_u_set(const std::vector<std::string>& candidate)
{
    std::vector<WidthValue> values;
    values.reserve(candidate.size());
    for (const auto& s : candidate) {
        values.push_back(parse_width(s));
    }
    return validate_u_set(values);
}

USetResult validate_u_set(const std::vector<double>& candidate)
{
    std::vector<WidthValue> values;
    values.reserve(candidate.size());
    for (double x : candidate) {
        values.push_back(width_from_double(x));
    }
    return validate_u_set(values);
}

std::vector<Graft> find_grafts(const Strip& strip, double target, std::size_t count,
                               const GraftSearchOptions& options, const EvalConfig& cfg)
{
    check_target(target);
    check_window(options);
    std::vector<double> roots;
    LineScanner scanner(strip.sigma0, target, options, cfg);
    double ta = options.t_a;
    double tb = options.t_b;
    while (true) {
        scanner.scan(ta, tb, count, roots);
        if (roots.size() >= count || !options.escalate || 2.0 * tb > options.t_cap) {
            break;
        }
        ta = tb;
        tb *= 2.0;
    }
    std::vector<Graft> out;
    for (double t : roots) {
        out.push_back(make_graft(strip, strip.sigma0, t, target, cfg));
    }
    return out;
}

Graft find_graft(const Strip& strip, double target, const GraftSearchOptions& options, const EvalConfig& cfg)
{
    check_target(target);
    check_window(options);
    const double lines[] = {strip.sigma0, strip.sigma0 - 0.5 * strip.delta, strip.sigma0 + 0.5 * strip.delta};
    double ta = options.t_a;
    double tb = options.t_b;
    while (true) {
        for (double sigma : lines) {
            std::vector<double> roots;
            LineScanner(sigma, target, options, cfg).scan(ta, tb, 1, roots);
            if (!roots.empty()) {
                return make_graft(strip, sigma, roots.front(), target, cfg);
            }
        }
        if (!options.escalate || 2.0 * tb > options.t_cap) {
            break;
        }
        ta = tb;
        tb *= 2.0;
    }
    throw NotFoundError("graft: no solution of |zeta(w)| = " + format_double(target) + " in strip " +
                        std::to_string(strip.l) + " for t in (" + format_double(options.t_a) + ", " +
                        format_double(tb) + "); enlarge the window or raise t_cap");
}

double graft_target(int l, const FactorizationCertificate* cert, double U_n)
{
    double value = 0.0;
    if (l >= 1 && l <= kIntegrandCount) {
        if (cert == nullptr || cert->l != l || cert->alpha.empty()) {
            throw AssemblyError("graft target for l = " + std::to_string(l) + " needs its certificate");
        }
        value = eval_f(l, cert->alpha[0]);
    } else if (l > kIntegrandCount && l <= kFunctionCount) {
        value = eval_f(l, U_n);
    } else {
        throw DomainError("graft target: l = " + std::to_string(l) + " must lie in 1..12");
    }
    if (!(value > 0.0 && value < 1.0)) {
        throw DegenerateTargetError("graft target f_" + std::to_string(l) + " = " + format_double(value) +
                                    " is not strictly inside (0, 1)");
    }
    return value;
}

double build_graft_targets(const std::vector<FactorizationCertificate>& certs, const AdmissibleUSet& u_set, int l,
                           std::size_t n)
{
    const double U = u_set.at(n);
    if (l > kIntegrandCount) {
        return graft_target(l, nullptr, U);
    }
    for (const auto& c : certs) {
        if (c.l == l && c.U == U) {
            return graft_target(l, &c, U);
        }
    }
    throw AssemblyError("graft target: no certificate for l = " + std::to_string(l) + ", U = " + format_double(U));
}

void to_json(nlohmann::json& j, const Graft& g)
{
    j = {{"l", g.l},
         {"n", g.n},
         {"w", {g.w.real(), g.w.imag()}},
         {"target", g.target},
         {"achieved", g.achieved},
         {"strip_id", g.strip_id}};
}

void from_json(const nlohmann::json& j, Graft& g)
{
    j.at("l").get_to(g.l);
    j.at("n").get_to(g.n);
    const auto& w = j.at("w");
    g.w = {w.at(0).get<double>(), w.at(1).get<double>()};
    j.at("target").get_to(g.target);
    j.at("achieved").get_to(g.achieved);
    j.at("strip_id").get_to(g.strip_id);
}

}  // namespace metazeta
