#pragma once

// Exact symbolic manipulation of meta-functional equations: linear
// combinations and eliminations over opaque atoms, and the substitution of the
// sin^2 + cos^2 product identity into a linear relation, which produces a
// relation between ratios of products.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "metazeta/meta.hpp"
#include "metazeta/rational.hpp"

namespace metazeta {

enum class AtomKind {
    ProductTerm,        // P(l,k) = |zeta(w_l)| prod_r Z~^2(alpha_r^{l,k}) / Z~^2(beta_r^k)
    GraftModulus,       // G(l) = |zeta(w_l)|
    NumeratorProduct,   // N(l,k) = |zeta(w_l)| prod_r Z~^2(alpha_r^{l,k})
    DenominatorProduct, // D(k) = prod_r Z~^2(beta_r^k)
    One,
};

struct Atom {
    AtomKind kind = AtomKind::One;
    int l = 0;
    int k = 0;

    static Atom product(int l, int k) { return {AtomKind::ProductTerm, l, k}; }
    static Atom graft(int l) { return {AtomKind::GraftModulus, l, 0}; }
    static Atom numerator(int l, int k) { return {AtomKind::NumeratorProduct, l, k}; }
    static Atom denominator(int k) { return {AtomKind::DenominatorProduct, 0, k}; }

    auto operator<=>(const Atom&) const = default;
};

// "P3[2]", "G11", "N5[2]", "D[2]", "1".
std::string to_string(const Atom& a);
Atom parse_atom(const std::string& text);

// Which single equation (eq_id at depth k) a relation was built from.
struct SourceKey {
    int eq_id = 1;
    int k = 1;
    auto operator<=>(const SourceKey&) const = default;
};

// sum coeff * atom + constant = 0. `sources` records the rational weight of
// each single equation in the derivation and is ignored by equality.
struct LinearRelation {
    std::map<Atom, Rational> terms;
    Rational constant;
    std::map<SourceKey, Rational> sources;

    bool empty() const { return terms.empty() && constant == 0; }
    Rational coefficient(const Atom& a) const;
    bool operator==(const LinearRelation& other) const { return terms == other.terms && constant == other.constant; }
};

// "3*P3[2] + 3*P4[2] - 2*P5[2] - 2*P6[2] - 1 = 0"
std::string to_string(const LinearRelation& rel);

// P(eq_id,k) - c0 - sum_j c_2j G(9+j) = 0.
LinearRelation relation_of(int eq_id, int k);

LinearRelation combine(const LinearRelation& a, const LinearRelation& b, const Rational& ca, const Rational& cb);

// Integer coefficients with gcd 1 and a positive first term (atoms ordered
// P < G < N < D, then by l and k).
LinearRelation normalize(const LinearRelation& rel);

// Normalized combination of a and b in which `atom` cancels. Throws
// SymbolicError when the atom is absent from either relation.
LinearRelation eliminate(const Atom& atom, const LinearRelation& a, const LinearRelation& b);

// Multiplies a relation in P(., k) and constants by D(k): P(l,k) -> N(l,k),
// constant c -> c D(k). Used to turn P1 + P2 - 1 = 0 into N1 + N2 - D = 0.
LinearRelation to_product_form(const LinearRelation& rel);

// Expression tree over atoms with +, *, / and rational constants.
class Expr {
public:
    enum class Kind { Constant, Symbol, Sum, Product, Quotient };

    static Expr constant(const Rational& c);
    static Expr symbol(const Atom& a);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr quotient(Expr numerator, Expr denominator);

    Kind kind() const { return kind_; }
    const Rational& value() const { return value_; }
    const Atom& atom() const { return atom_; }
    const std::vector<Expr>& children() const { return children_; }

    // Flattened, constants folded and distributed over sums, children sorted.
    Expr canonical() const;
    std::string text() const;

private:
    Kind kind_ = Kind::Constant;
    Rational value_;
    Atom atom_;
    std::vector<Expr> children_;
};

struct RationalRelation {
    Expr lhs;
    Expr rhs;

    RationalRelation canonical() const;
    // Equal after canonical ordering, in either orientation.
    bool structurally_equal(const RationalRelation& other) const;
};

std::string to_string(const RationalRelation& rel);

// Rewrites every P(l,k) of `target` as N(l,k)/D(k) and replaces D(k) by the
// sum given by the matching identity N(1,k) + N(2,k) - D(k) = 0. Positive
// terms go left, negative terms right. Throws SymbolicError when an identity
// is missing or malformed.
RationalRelation substitute_denominator(const LinearRelation& target, const std::vector<LinearRelation>& identities);

// Multiplies through by the common denominator; every quotient must share the
// same denominator. The result is linear in N atoms.
LinearRelation clear_denominators(const RationalRelation& rel);

// Inverse of to_product_form after clear_denominators: the N(1,k) + N(2,k)
// pair becomes D(k), then everything is divided by D(k).
LinearRelation restore_products(const LinearRelation& rel, int k);

using Binding = std::map<Atom, double>;

// Value of lhs - rhs. Throws SymbolicError on an unbound atom or a
// denominator below 1e-12 in magnitude.
double numeric_eval(const LinearRelation& rel, const Binding& binding);
double numeric_eval(const RationalRelation& rel, const Binding& binding);
double numeric_eval(const Expr& e, const Binding& binding);

// P, G, N and D values of a verified instance.
Binding binding_of(const MetaEquationInstance& instance, const EvalConfig& cfg = {});
void merge_binding(Binding& into, const Binding& from);

// sum over sources |weight| * residual(source).
double propagated_tolerance(const LinearRelation& rel, const std::map<SourceKey, double>& residuals);

// Line-oriented derivation scripts:
//   E3 = eq 3 k 2
//   S1 = combine 1 E3 1 E4
//   C = eliminate G11 S1 S2
//   I2 = product E12          (to_product_form)
//   R = substitute C I2 ...
//   X = clear R
//   Y = restore X 2
//   print C
//   eval C                    (needs a binding)
//   same C Y                  (prints "equal" or "differ")
// '#' starts a comment.
class Script {
public:
    explicit Script(const Binding* binding = nullptr) : binding_(binding) {}

    // Runs every line, writing print/eval/same output to `out`. Throws
    // SymbolicError naming the offending line.
    void run(std::istream& in, std::ostream& out);
    void run_line(const std::string& line, std::ostream& out);

    const LinearRelation& linear(const std::string& name) const;
    const RationalRelation& rational(const std::string& name) const;
    bool has_linear(const std::string& name) const { return linear_.count(name) != 0; }

private:
    const Binding* binding_;
    std::map<std::string, LinearRelation> linear_;
    std::map<std::string, RationalRelation> rational_;
    int line_no_ = 0;
};

}  // namespace metazeta
