#include "metazeta/crossbreed.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "metazeta/errors.hpp"
#include "metazeta/json_io.hpp"
#include "metazeta/trig.hpp"

namespace metazeta {

namespace {

constexpr double kMinDenominator = 1e-12;

BigInt num_of(const Rational& r)
{
    return boost::multiprecision::numerator(r);
}

BigInt den_of(const Rational& r)
{
    return boost::multiprecision::denominator(r);
}

void prune(std::map<Atom, Rational>& terms)
{
    std::erase_if(terms, [](const auto& kv) { return kv.second == 0; });
}

void prune(std::map<SourceKey, Rational>& sources)
{
    std::erase_if(sources, [](const auto& kv) { return kv.second == 0; });
}

LinearRelation scaled(const LinearRelation& rel, const Rational& c)
{
    LinearRelation out;
    for (const auto& [a, v] : rel.terms) {
        out.terms[a] = v * c;
    }
    for (const auto& [s, v] : rel.sources) {
        out.sources[s] = v * c;
    }
    out.constant = rel.constant * c;
    prune(out.terms);
    prune(out.sources);
    return out;
}

// "3*X", "X", "1/2*X" for a positive coefficient.
std::string scaled_text(const Rational& c, const std::string& x)
{
    return c == 1 ? x : to_string(c) + "*" + x;
}

int parse_index(const std::string& text, const std::string& whole)
{
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw SymbolicError("malformed atom '" + whole + "'");
    }
    return std::stoi(text);
}

// (coefficient, remainder) of a canonical term; remainder is absent for a constant.
std::pair<Rational, std::optional<Expr>> split_coefficient(const Expr& e)
{
    if (e.kind() == Expr::Kind::Constant) {
        return {e.value(), std::nullopt};
    }
    if (e.kind() == Expr::Kind::Product && e.children().front().kind() == Expr::Kind::Constant) {
        std::vector<Expr> rest(e.children().begin() + 1, e.children().end());
        return {e.children().front().value(),
                rest.size() == 1 ? rest.front() : Expr::product(std::move(rest))};
    }
    return {Rational(1), e};
}

Expr with_coefficient(const Rational& c, const Expr& rest)
{
    if (c == 1) {
        return rest;
    }
    std::vector<Expr> factors{Expr::constant(c)};
    if (rest.kind() == Expr::Kind::Product) {
        factors.insert(factors.end(), rest.children().begin(), rest.children().end());
    } else {
        factors.push_back(rest);
    }
    return Expr::product(std::move(factors));
}

bool by_text(const Expr& a, const Expr& b)
{
    return a.text() < b.text();
}

Expr canonical_sum(const std::vector<Expr>& raw)
{
    std::vector<Expr> flat;
    for (const auto& c : raw) {
        auto cc = c.canonical();
        if (cc.kind() == Expr::Kind::Sum) {
            flat.insert(flat.end(), cc.children().begin(), cc.children().end());
        } else {
            flat.push_back(cc);
        }
    }
    Rational constant = 0;
    std::map<std::string, std::pair<Rational, Expr>> merged;
    for (const auto& t : flat) {
        auto [c, rest] = split_coefficient(t);
        if (!rest) {
            constant += c;
            continue;
        }
        const auto key = rest->text();
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, std::make_pair(c, *rest));
        } else {
            it->second.first += c;
        }
    }
    std::vector<Expr> terms;
    for (const auto& [key, cr] : merged) {
        if (cr.first != 0) {
            terms.push_back(with_coefficient(cr.first, cr.second));
        }
    }
    if (constant != 0) {
        terms.push_back(Expr::constant(constant));
    }
    if (terms.empty()) {
        return Expr::constant(0);
    }
    if (terms.size() == 1) {
        return terms.front();
    }
    return Expr::sum(std::move(terms));
}

Expr canonical_product(const std::vector<Expr>& raw)
{
    Rational c = 1;
    std::vector<Expr> factors;
    std::optional<Expr> denominator;
    for (const auto& f : raw) {
        auto cf = f.canonical();
        std::vector<Expr> parts;
        if (cf.kind() == Expr::Kind::Product) {
            parts = cf.children();
        } else {
            parts.push_back(cf);
        }
        for (auto& p : parts) {
            if (p.kind() == Expr::Kind::Constant) {
                c *= p.value();
            } else if (p.kind() == Expr::Kind::Quotient) {
                factors.push_back(p.children()[0]);
                denominator = denominator ? Expr::product({*denominator, p.children()[1]}).canonical()
                                          : p.children()[1];
            } else {
                factors.push_back(p);
            }
        }
    }
    if (c == 0) {
        return Expr::constant(0);
    }
    if (denominator) {
        Expr num = factors.size() == 1 ? factors.front() : Expr::product(factors).canonical();
        return with_coefficient(c, Expr::quotient(num, *denominator).canonical());
    }
    if (factors.size() == 1 && factors.front().kind() == Expr::Kind::Sum) {
        std::vector<Expr> terms;
        for (const auto& t : factors.front().children()) {
            terms.push_back(Expr::product({Expr::constant(c), t}));
        }
        return canonical_sum(terms);
    }
    std::sort(factors.begin(), factors.end(), by_text);
    if (factors.empty()) {
        return Expr::constant(c);
    }
    if (factors.size() == 1 && c == 1) {
        return factors.front();
    }
    return with_coefficient(c, factors.size() == 1 ? factors.front() : Expr::product(std::move(factors)));
}

Expr canonical_quotient(const Expr& n, const Expr& d)
{
    const Expr num = n.canonical();
    const Expr den = d.canonical();
    if (den.kind() == Expr::Kind::Constant) {
        if (den.value() == 0) {
            throw SymbolicError("division by the constant 0");
        }
        return canonical_product({Expr::constant(1 / den.value()), num});
    }
    if (num.kind() == Expr::Kind::Constant && num.value() == 0) {
        return num;
    }
    auto [c, rest] = split_coefficient(num);
    if (c != 1) {
        Expr q = rest ? canonical_quotient(*rest, den) : canonical_quotient(Expr::constant(1), den);
        return canonical_product({Expr::constant(c), q});
    }
    if (num.kind() == Expr::Kind::Quotient) {
        return canonical_quotient(num.children()[0], Expr::product({num.children()[1], den}));
    }
    if (den.kind() == Expr::Kind::Quotient) {
        return canonical_quotient(Expr::product({num, den.children()[1]}), den.children()[0]);
    }
    return Expr::quotient(num, den);
}

bool positive_denominator(const Expr& e)
{
    if (e.kind() == Expr::Kind::Symbol) {
        return e.atom().kind != AtomKind::One;
    }
    if (e.kind() == Expr::Kind::Product) {
        return std::all_of(e.children().begin(), e.children().end(), [](const Expr& c) {
            return c.kind() == Expr::Kind::Constant ? c.value() > 0 : positive_denominator(c);
        });
    }
    if (e.kind() == Expr::Kind::Sum) {
        return std::all_of(e.children().begin(), e.children().end(), [](const Expr& c) {
            return c.kind() == Expr::Kind::Constant ? c.value() > 0 : positive_denominator(c);
        });
    }
    return e.kind() == Expr::Kind::Constant && e.value() > 0;
}

// Terms of a canonical side.
std::vector<Expr> terms_of(const Expr& side)
{
    if (side.kind() == Expr::Kind::Sum) {
        return side.children();
    }
    if (side.kind() == Expr::Kind::Constant && side.value() == 0) {
        return {};
    }
    return {side};
}

void add_linear(LinearRelation& into, const Expr& e, const Rational& c)
{
    if (e.kind() == Expr::Kind::Symbol) {
        into.terms[e.atom()] += c;
        return;
    }
    if (e.kind() == Expr::Kind::Constant) {
        into.constant += c * e.value();
        return;
    }
    if (e.kind() == Expr::Kind::Sum) {
        for (const auto& t : e.children()) {
            add_linear(into, t, c);
        }
        return;
    }
    auto [coef, rest] = split_coefficient(e);
    if (coef != 1 && rest) {
        add_linear(into, *rest, c * coef);
        return;
    }
    throw SymbolicError("'" + e.text() + "' is not linear in the atoms");
}

}  // namespace

std::string to_string(const Atom& a)
{
    switch (a.kind) {
    case AtomKind::ProductTerm:
        return "P" + std::to_string(a.l) + "[" + std::to_string(a.k) + "]";
    case AtomKind::GraftModulus:
        return "G" + std::to_string(a.l);
    case AtomKind::NumeratorProduct:
        return "N" + std::to_string(a.l) + "[" + std::to_string(a.k) + "]";
    case AtomKind::DenominatorProduct:
        return "D[" + std::to_string(a.k) + "]";
    case AtomKind::One:
        break;
    }
    return "1";
}

Atom parse_atom(const std::string& text)
{
    if (text == "1") {
        return {};
    }
    if (text.size() < 2) {
        throw SymbolicError("malformed atom '" + text + "'");
    }
    const char head = text.front();
    const auto open = text.find('[');
    if (head == 'G') {
        return Atom::graft(parse_index(text.substr(1), text));
    }
    if (open == std::string::npos || text.back() != ']') {
        throw SymbolicError("atom '" + text + "' needs a depth, e.g. P3[2]");
    }
    const int k = parse_index(text.substr(open + 1, text.size() - open - 2), text);
    if (head == 'D' && open == 1) {
        return Atom::denominator(k);
    }
    const int l = parse_index(text.substr(1, open - 1), text);
    if (head == 'P') {
        return Atom::product(l, k);
    }
    if (head == 'N') {
        return Atom::numerator(l, k);
    }
    throw SymbolicError("unknown atom '" + text + "'");
}

Rational LinearRelation::coefficient(const Atom& a) const
{
    const auto it = terms.find(a);
    return it == terms.end() ? Rational(0) : it->second;
}

std::string to_string(const LinearRelation& rel)
{
    std::string out;
    auto append = [&](const Rational& c, const std::string& x) {
        if (out.empty()) {
            out = c < 0 ? "-" + scaled_text(-c, x) : scaled_text(c, x);
        } else {
            out += c < 0 ? " - " + scaled_text(-c, x) : " + " + scaled_text(c, x);
        }
    };
    for (const auto& [a, c] : rel.terms) {
        append(c, to_string(a));
    }
    if (rel.constant != 0) {
        const Rational mag = abs(rel.constant);
        if (out.empty()) {
            out = to_string(rel.constant);
        } else {
            out += (rel.constant < 0 ? " - " : " + ") + to_string(mag);
        }
    }
    return (out.empty() ? "0" : out) + " = 0";
}

LinearRelation relation_of(int eq_id, int k)
{
    if (eq_id < 1 || eq_id > kIntegrandCount) {
        throw DomainError("equation " + std::to_string(eq_id) + " outside 1..9");
    }
    if (k < 1) {
        throw DomainError("depth k = " + std::to_string(k) + " must be positive");
    }
    const auto dec = sinc_decomposition(eq_id);
    LinearRelation rel;
    rel.terms[Atom::product(eq_id, k)] = 1;
    rel.constant = -dec.c0;
    for (int j = 1; j <= 3; ++j) {
        rel.terms[Atom::graft(kIntegrandCount + j)] = -dec.coefficient(j);
    }
    prune(rel.terms);
    rel.sources[{eq_id, k}] = 1;
    return rel;
}

LinearRelation combine(const LinearRelation& a, const LinearRelation& b, const Rational& ca, const Rational& cb)
{
    LinearRelation out = scaled(a, ca);
    for (const auto& [atom, v] : b.terms) {
        out.terms[atom] += cb * v;
    }
    for (const auto& [s, v] : b.sources) {
        out.sources[s] += cb * v;
    }
    out.constant += cb * b.constant;
    prune(out.terms);
    prune(out.sources);
    return out;
}

LinearRelation normalize(const LinearRelation& rel)
{
    if (rel.empty()) {
        return rel;
    }
    BigInt lcm = 1;
    for (const auto& [a, c] : rel.terms) {
        lcm = boost::multiprecision::lcm(lcm, den_of(c));
    }
    lcm = boost::multiprecision::lcm(lcm, den_of(rel.constant));
    BigInt g = 0;
    for (const auto& [a, c] : rel.terms) {
        g = boost::multiprecision::gcd(g, num_of(c * lcm));
    }
    g = boost::multiprecision::gcd(g, num_of(rel.constant * lcm));
    Rational factor = Rational(lcm) / Rational(abs(g));
    const Rational lead = rel.terms.empty() ? rel.constant : rel.terms.begin()->second;
    if (lead < 0) {
        factor = -factor;
    }
    return scaled(rel, factor);
}

LinearRelation eliminate(const Atom& atom, const LinearRelation& a, const LinearRelation& b)
{
    const Rational ca = a.coefficient(atom);
    const Rational cb = b.coefficient(atom);
    if (ca == 0 || cb == 0) {
        throw SymbolicError("cannot eliminate " + to_string(atom) + ": it is absent from " +
                            (ca == 0 ? "the first" : "the second") + " relation");
    }
    auto out = normalize(combine(a, b, cb, -ca));
    out.terms.erase(atom);
    return out;
}

LinearRelation to_product_form(const LinearRelation& rel)
{
    int k = 0;
    LinearRelation out;
    for (const auto& [a, c] : rel.terms) {
        if (a.kind != AtomKind::ProductTerm) {
            throw SymbolicError("product form needs P atoms only, found " + to_string(a));
        }
        if (k != 0 && a.k != k) {
            throw SymbolicError("product form needs a single depth, found k = " + std::to_string(k) + " and " +
                                std::to_string(a.k));
        }
        k = a.k;
        out.terms[Atom::numerator(a.l, a.k)] = c;
    }
    if (k == 0) {
        throw SymbolicError("product form needs at least one P atom");
    }
    out.terms[Atom::denominator(k)] = rel.constant;
    prune(out.terms);
    out.sources = rel.sources;
    return normalize(out);
}

Expr Expr::constant(const Rational& c)
{
    Expr e;
    e.kind_ = Kind::Constant;
    e.value_ = c;
    return e;
}

Expr Expr::symbol(const Atom& a)
{
    if (a.kind == AtomKind::One) {
        return constant(1);
    }
    Expr e;
    e.kind_ = Kind::Symbol;
    e.atom_ = a;
    return e;
}

Expr Expr::sum(std::vector<Expr> terms)
{
    Expr e;
    e.kind_ = Kind::Sum;
    e.children_ = std::move(terms);
    return e;
}

Expr Expr::product(std::vector<Expr> factors)
{
    Expr e;
    e.kind_ = Kind::Product;
    e.children_ = std::move(factors);
    return e;
}

Expr Expr::quotient(Expr numerator, Expr denominator)
{
    Expr e;
    e.kind_ = Kind::Quotient;
    e.children_ = {std::move(numerator), std::move(denominator)};
    return e;
}

Expr Expr::canonical() const
{
    switch (kind_) {
    case Kind::Constant:
    case Kind::Symbol:
        return *this;
    case Kind::Sum:
        return canonical_sum(children_);
    case Kind::Product:
        return canonical_product(children_);
    case Kind::Quotient:
        return canonical_quotient(children_[0], children_[1]);
    }
    return *this;
}

std::string Expr::text() const
{
    switch (kind_) {
    case Kind::Constant:
        return to_string(value_);
    case Kind::Symbol:
        return to_string(atom_);
    case Kind::Sum: {
        std::string out;
        for (const auto& t : children_) {
            auto [c, rest] = split_coefficient(t);
            const bool negative = c < 0;
            const std::string body =
                rest ? (abs(c) == 1 ? rest->text() : with_coefficient(abs(c), *rest).text()) : to_string(abs(c));
            if (out.empty()) {
                out = negative ? "-" + body : body;
            } else {
                out += (negative ? " - " : " + ") + body;
            }
        }
        return out;
    }
    case Kind::Product: {
        std::string out;
        for (const auto& f : children_) {
            if (!out.empty()) {
                out += "*";
            }
            out += f.kind() == Kind::Sum ? "(" + f.text() + ")" : f.text();
        }
        return out;
    }
    case Kind::Quotient: {
        const auto& n = children_[0];
        const auto& d = children_[1];
        const std::string num = n.kind() == Kind::Sum ? "(" + n.text() + ")" : n.text();
        const std::string den = d.kind() == Kind::Symbol || d.kind() == Kind::Constant ? d.text() : "(" + d.text() + ")";
        return num + "/" + den;
    }
    }
    return {};
}

RationalRelation RationalRelation::canonical() const
{
    return {lhs.canonical(), rhs.canonical()};
}

bool RationalRelation::structurally_equal(const RationalRelation& other) const
{
    const auto a = canonical();
    const auto b = other.canonical();
    const auto al = a.lhs.text();
    const auto ar = a.rhs.text();
    const auto bl = b.lhs.text();
    const auto br = b.rhs.text();
    return (al == bl && ar == br) || (al == br && ar == bl);
}

std::string to_string(const RationalRelation& rel)
{
    const auto c = rel.canonical();
    return c.lhs.text() + " = " + c.rhs.text();
}

RationalRelation substitute_denominator(const LinearRelation& target, const std::vector<LinearRelation>& identities)
{
    std::map<int, Expr> denominators;
    for (const auto& id : identities) {
        const auto n = normalize(id);
        if (n.terms.size() != 3 || n.constant != 0) {
            throw SymbolicError("product identity must read N1[k] + N2[k] - D[k] = 0, got " + to_string(id));
        }
        const int k = n.terms.begin()->first.k;
        if (n.coefficient(Atom::numerator(1, k)) != 1 || n.coefficient(Atom::numerator(2, k)) != 1 ||
            n.coefficient(Atom::denominator(k)) != -1) {
            throw SymbolicError("product identity must read N1[k] + N2[k] - D[k] = 0, got " + to_string(id));
        }
        denominators[k] = Expr::sum({Expr::symbol(Atom::numerator(1, k)), Expr::symbol(Atom::numerator(2, k))});
    }

    std::vector<Expr> left;
    std::vector<Expr> right;
    for (const auto& [a, c] : target.terms) {
        Expr term = Expr::symbol(a);
        if (a.kind == AtomKind::ProductTerm) {
            const auto it = denominators.find(a.k);
            if (it == denominators.end()) {
                throw SymbolicError("no product identity for k = " + std::to_string(a.k) + " (needed by " +
                                    to_string(a) + ")");
            }
            term = Expr::quotient(Expr::symbol(Atom::numerator(a.l, a.k)), it->second);
        }
        (c > 0 ? left : right).push_back(Expr::product({Expr::constant(abs(c)), term}));
    }
    if (target.constant != 0) {
        (target.constant > 0 ? left : right).push_back(Expr::constant(abs(target.constant)));
    }
    RationalRelation out{Expr::sum(std::move(left)), Expr::sum(std::move(right))};
    out = out.canonical();
    for (const auto* side : {&out.lhs, &out.rhs}) {
        for (const auto& t : terms_of(*side)) {
            auto [c, rest] = split_coefficient(t);
            if (rest && rest->kind() == Expr::Kind::Quotient && !positive_denominator(rest->children()[1])) {
                throw SymbolicError("denominator " + rest->children()[1].text() + " is not a sum of positive atoms");
            }
        }
    }
    return out;
}

LinearRelation clear_denominators(const RationalRelation& rel)
{
    const auto c = rel.canonical();
    std::optional<Expr> common;
    LinearRelation out;
    auto visit = [&](const Expr& side, const Rational& sign) {
        for (const auto& t : terms_of(side)) {
            auto [coef, rest] = split_coefficient(t);
            if (!rest) {
                // constant * common, expanded once the denominator is known
                out.constant += sign * coef;
                continue;
            }
            if (rest->kind() != Expr::Kind::Quotient) {
                throw SymbolicError("term '" + t.text() + "' has no denominator to clear");
            }
            const auto& den = rest->children()[1];
            if (common && common->text() != den.text()) {
                throw SymbolicError("denominators differ: " + common->text() + " and " + den.text());
            }
            common = den;
            add_linear(out, rest->children()[0], sign * coef);
        }
    };
    visit(c.lhs, 1);
    visit(c.rhs, -1);
    if (!common) {
        throw SymbolicError("relation has no denominators to clear");
    }
    const Rational k0 = out.constant;
    out.constant = 0;
    add_linear(out, *common, k0);
    prune(out.terms);
    return normalize(out);
}

LinearRelation restore_products(const LinearRelation& rel, int k)
{
    if (rel.constant != 0) {
        throw SymbolicError("restore needs a relation without a constant term");
    }
    LinearRelation out;
    const Rational m = rel.coefficient(Atom::numerator(1, k));
    for (const auto& [a, c] : rel.terms) {
        if (a.kind != AtomKind::NumeratorProduct || a.k != k) {
            throw SymbolicError("restore needs N atoms at k = " + std::to_string(k) + ", found " + to_string(a));
        }
        const Rational rest = (a.l == 1 || a.l == 2) ? c - m : c;
        if (rest != 0) {
            out.terms[Atom::product(a.l, k)] += rest;
        }
    }
    out.constant = m;
    prune(out.terms);
    out.sources = rel.sources;
    return normalize(out);
}

double numeric_eval(const Expr& e, const Binding& binding)
{
    switch (e.kind()) {
    case Expr::Kind::Constant:
        return to_double(e.value());
    case Expr::Kind::Symbol: {
        const auto it = binding.find(e.atom());
        if (it == binding.end()) {
            throw SymbolicError("atom " + to_string(e.atom()) + " is not bound");
        }
        return it->second;
    }
    case Expr::Kind::Sum: {
        double s = 0.0;
        for (const auto& c : e.children()) {
            s += numeric_eval(c, binding);
        }
        return s;
    }
    case Expr::Kind::Product: {
        double p = 1.0;
        for (const auto& c : e.children()) {
            p *= numeric_eval(c, binding);
        }
        return p;
    }
    case Expr::Kind::Quotient: {
        const double d = numeric_eval(e.children()[1], binding);
        if (std::abs(d) < kMinDenominator) {
            throw SymbolicError("denominator " + e.children()[1].text() + " = " + format_double(d) +
                                " is too close to zero");
        }
        return numeric_eval(e.children()[0], binding) / d;
    }
    }
    return 0.0;
}

double numeric_eval(const LinearRelation& rel, const Binding& binding)
{
    double s = to_double(rel.constant);
    for (const auto& [a, c] : rel.terms) {
        const auto it = binding.find(a);
        if (it == binding.end()) {
            throw SymbolicError("atom " + to_string(a) + " is not bound");
        }
        s += to_double(c) * it->second;
    }
    return s;
}

double numeric_eval(const RationalRelation& rel, const Binding& binding)
{
    return numeric_eval(rel.lhs, binding) - numeric_eval(rel.rhs, binding);
}

Binding binding_of(const MetaEquationInstance& instance, const EvalConfig& cfg)
{
    Binding b;
    for (const auto& g : instance.grafts) {
        b[Atom::graft(g.l)] = graft_modulus(g, cfg);
    }
    const int l = instance.eq_id;
    const int k = instance.cert.k;
    double num = 1.0;
    double den = 1.0;
    double ratio = 1.0;
    for (int r = 1; r <= k; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const double za = z_tilde_sq(instance.cert.alpha[i], cfg);
        const double zb = z_tilde_sq(instance.cert.beta[i - 1], cfg);
        num *= za;
        den *= zb;
        ratio *= za / zb;
    }
    const double g = b.at(Atom::graft(l));
    b[Atom::product(l, k)] = g * ratio;
    b[Atom::numerator(l, k)] = g * num;
    b[Atom::denominator(k)] = den;
    return b;
}

void merge_binding(Binding& into, const Binding& from)
{
    for (const auto& [a, v] : from) {
        const auto [it, inserted] = into.emplace(a, v);
        if (!inserted && it->second != v) {
            throw ConsistencyError("atom " + to_string(a) + " bound to both " + format_double(it->second) + " and " +
                                   format_double(v));
        }
    }
}

double propagated_tolerance(const LinearRelation& rel, const std::map<SourceKey, double>& residuals)
{
    double tol = 0.0;
    for (const auto& [s, w] : rel.sources) {
        const auto it = residuals.find(s);
        if (it == residuals.end()) {
            throw SymbolicError("no residual for equation " + std::to_string(s.eq_id) + " at k = " +
                                std::to_string(s.k));
        }
        tol += std::abs(to_double(w)) * it->second;
    }
    return tol;
}

const LinearRelation& Script::linear(const std::string& name) const
{
    const auto it = linear_.find(name);
    if (it == linear_.end()) {
        throw SymbolicError("line " + std::to_string(line_no_) + ": no linear relation named " + name);
    }
    return it->second;
}

const RationalRelation& Script::rational(const std::string& name) const
{
    const auto it = rational_.find(name);
    if (it == rational_.end()) {
        throw SymbolicError("line " + std::to_string(line_no_) + ": no rational relation named " + name);
    }
    return it->second;
}

void Script::run(std::istream& in, std::ostream& out)
{
    std::string line;
    while (std::getline(in, line)) {
        run_line(line, out);
    }
}

void Script::run_line(const std::string& raw, std::ostream& out)
{
    ++line_no_;
    const auto hash = raw.find('#');
    std::istringstream in(raw.substr(0, hash));
    std::vector<std::string> tok;
    for (std::string t; in >> t;) {
        tok.push_back(t);
    }
    if (tok.empty()) {
        return;
    }
    const std::string where = "line " + std::to_string(line_no_) + ": ";
    auto need = [&](std::size_t n) {
        if (tok.size() != n) {
            throw SymbolicError(where + "expected " + std::to_string(n) + " words in '" + raw + "'");
        }
    };
    auto rational_arg = [&](const std::string& t) {
        try {
            return parse_rational(t);
        } catch (const Error&) {
            throw SymbolicError(where + "bad coefficient '" + t + "'");
        }
    };
    auto int_arg = [&](const std::string& t) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(t, &used);
            if (used == t.size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw SymbolicError(where + "bad integer '" + t + "'");
    };

    try {
        if (tok[0] == "print") {
            need(2);
            if (has_linear(tok[1])) {
                out << tok[1] << ": " << to_string(linear(tok[1])) << '\n';
            } else {
                out << tok[1] << ": " << to_string(rational(tok[1])) << '\n';
            }
            return;
        }
        if (tok[0] == "eval") {
            need(2);
            if (binding_ == nullptr) {
                throw SymbolicError(where + "eval needs a numeric binding");
            }
            const double v = has_linear(tok[1]) ? numeric_eval(linear(tok[1]), *binding_)
                                                : numeric_eval(rational(tok[1]), *binding_);
            out << tok[1] << " = " << format_double(v) << '\n';
            return;
        }
        if (tok[0] == "same") {
            need(3);
            bool eq = false;
            if (has_linear(tok[1]) && has_linear(tok[2])) {
                eq = normalize(linear(tok[1])) == normalize(linear(tok[2]));
            } else {
                eq = rational(tok[1]).structurally_equal(rational(tok[2]));
            }
            out << tok[1] << " " << tok[2] << ": " << (eq ? "equal" : "differ") << '\n';
            return;
        }
        if (tok.size() < 3 || tok[1] != "=") {
            throw SymbolicError(where + "expected 'NAME = op ...', 'print', 'eval' or 'same'");
        }
        const std::string& name = tok[0];
        const std::string& op = tok[2];
        linear_.erase(name);
        rational_.erase(name);
        if (op == "eq") {
            need(6);
            if (tok[4] != "k") {
                throw SymbolicError(where + "expected 'eq L k K'");
            }
            linear_[name] = relation_of(int_arg(tok[3]), int_arg(tok[5]));
        } else if (op == "combine") {
            need(7);
            linear_[name] = combine(linear(tok[4]), linear(tok[6]), rational_arg(tok[3]), rational_arg(tok[5]));
        } else if (op == "eliminate") {
            need(6);
            linear_[name] = eliminate(parse_atom(tok[3]), linear(tok[4]), linear(tok[5]));
        } else if (op == "normalize") {
            need(4);
            linear_[name] = normalize(linear(tok[3]));
        } else if (op == "product") {
            need(4);
            linear_[name] = to_product_form(linear(tok[3]));
        } else if (op == "substitute") {
            if (tok.size() < 5) {
                throw SymbolicError(where + "substitute needs a target and at least one identity");
            }
            std::vector<LinearRelation> ids;
            for (std::size_t i = 4; i < tok.size(); ++i) {
                ids.push_back(linear(tok[i]));
            }
            rational_[name] = substitute_denominator(linear(tok[3]), ids);
        } else if (op == "clear") {
            need(4);
            linear_[name] = clear_denominators(rational(tok[3]));
        } else if (op == "restore") {
            need(5);
            linear_[name] = restore_products(linear(tok[3]), int_arg(tok[4]));
        } else {
            throw SymbolicError(where + "unknown operation '" + op + "'");
        }
    } catch (const SymbolicError& e) {
        const std::string msg = e.what();
        throw SymbolicError(msg.rfind("line ", 0) == 0 ? msg : where + msg);
    } catch (const DomainError& e) {
        throw SymbolicError(where + e.what());
    }
}

}  // namespace metazeta
