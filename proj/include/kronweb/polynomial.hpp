#pragma once

#include "kronweb/expr.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace kronweb {

/*
 * Symbols index the indeterminates of canonical polynomials. A symbol is
 * either a chart variable (same id as intern_variable) or an atom: an
 * elementary-function application whose normalized argument is recorded.
 * Treating atoms as free indeterminates makes "numerator == 0" a sound
 * zero proof; the converse needs sampling.
 */
using SymId = std::uint32_t;

class RationalFunction;

bool symbol_is_atom(SymId s);
const std::string& symbol_name(SymId s);
Op atom_op(SymId s);
const Expr& atom_argument(SymId s);
const RationalFunction& atom_argument_canonical(SymId s);
// Chart variables an atom depends on, directly or through nested atoms.
const std::vector<SymId>& atom_variables(SymId s);
SymId intern_atom(Op op, const RationalFunction& arg);

using Monomial = std::vector<std::pair<SymId, int>>;

struct Term {
    Monomial mono;
    mpq_class coef;
};

class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(const mpq_class& c);
    static Polynomial symbol(SymId s, int power = 1);
    static Polynomial from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    mpq_class constant_value() const;
    std::size_t size() const { return terms_.size(); }

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const mpq_class& c) const;
    Polynomial pow(unsigned n) const;

    int degree_in(SymId s) const;
    // Coefficient of s^k, as a polynomial free of s.
    Polynomial coefficient(SymId s, int k) const;
    bool contains(SymId s) const;
    std::vector<SymId> symbols() const;
    bool has_atoms() const;

    // Splits this = content * monomial * primitive with a positive leading
    // coefficient and integer coprime coefficients in the primitive part.
    struct Split;
    Split split() const;

    std::optional<Polynomial> exact_divide(const Polynomial& d) const;
    // Partial derivative in an explicit symbol (atoms are not expanded here).
    Polynomial derivative(SymId s) const;

    mpq_class evaluate_exact(const std::map<SymId, mpq_class>& point) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator<(const Polynomial& a, const Polynomial& b);

    Expr to_expr() const;

private:
    std::vector<Term> terms_;  // sorted by monomial, nonzero coefficients
    void normalize();
};

struct Polynomial::Split {
    mpq_class content;
    Monomial monomial;
    Polynomial primitive;
};

/*
 * Quotient num / prod(den_i^e_i) with denominator factors kept separately.
 * Sums use the least common multiple of factor exponents, which keeps
 * repeated differentiation from squaring denominators.
 */
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(const mpq_class& c);
    RationalFunction(const Polynomial& p);
    static RationalFunction symbol(SymId s);

    const Polynomial& numerator() const { return num_; }
    const std::vector<std::pair<Polynomial, int>>& denominator() const { return den_; }
    Polynomial denominator_product() const;

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return den_.empty() && num_.is_constant(); }
    mpq_class constant_value() const { return num_.constant_value(); }
    bool has_atoms() const;
    bool contains(SymId s) const;
    // Chart variables this function depends on, including through atoms.
    std::vector<SymId> variables() const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction inverse() const;
    RationalFunction pow(long n) const;

    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    // Total derivative in a chart variable, chain rule through atoms.
    RationalFunction derivative(SymId var) const;

    mpq_class evaluate_exact(const std::map<SymId, mpq_class>& point) const;

    friend bool operator==(const RationalFunction& a, const RationalFunction& b);

    Expr to_expr() const;
    std::string str() const { return to_expr().str(); }

private:
    Polynomial num_;
    std::vector<std::pair<Polynomial, int>> den_;  // primitive, non-constant, sorted
    void add_factor(const Polynomial& f, int e);
    void cancel();
};

RationalFunction canonical(const Expr& e);

// Rational-function derivative of an expression, rendered as an expression.
Expr derivative(const Expr& e, const std::string& var);

// Zero test on an already canonical value.
ZeroVerdict zero_test(const RationalFunction& r, const ZeroPolicy& policy = {});

}  // namespace kronweb
