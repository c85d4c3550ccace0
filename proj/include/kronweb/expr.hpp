#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kronweb {

using VarList = std::vector<std::string>;

enum class Op : std::uint8_t { Const, Var, Add, Mul, Pow, Div, Exp, Log, Sin, Cos, Sqrt };

bool is_function(Op op);
const char* function_name(Op op);

struct ExprNode;

/*
 * Immutable expression tree. Nodes are shared; the arithmetic builders apply
 * a light normalization (flattening, constant folding, a single leading
 * coefficient in products, a single trailing constant in sums) so that
 * printing and reparsing reproduce the same tree.
 */
class Expr {
public:
    Expr();
    template <std::integral T>
    Expr(T v) : Expr(mpq_class(static_cast<long>(v))) {}
    Expr(const mpq_class& v);

    static Expr variable(const std::string& name);

    Op op() const;
    const mpq_class& value() const;
    const std::string& name() const;
    std::uint32_t var_id() const;
    const std::vector<Expr>& args() const;
    long exponent() const;

    bool is_const() const;
    bool is_zero() const;
    bool is_one() const;
    // True when no exp/log/sin/cos/sqrt node occurs.
    bool is_rational() const;
    std::size_t hash() const;
    const ExprNode* node() const { return n_.get(); }

    std::string str() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
    std::shared_ptr<const ExprNode> n_;
    friend struct ExprFactory;
};

struct ExprNode {
    Op op;
    mpq_class value;
    std::uint32_t var = 0;
    long exponent = 0;
    std::vector<Expr> args;
    std::size_t hash = 0;
    bool rational = true;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, long n);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);
Expr apply_function(Op op, const Expr& a);
Expr sum(const std::vector<Expr>& terms);
Expr product(const std::vector<Expr>& factors);

inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

// Global interning of variable names; ids are stable for the process lifetime.
std::uint32_t intern_variable(const std::string& name);
const std::string& variable_name(std::uint32_t id);

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position;
};

struct UnknownIdentifier : ParseError {
    UnknownIdentifier(const std::string& ident, std::size_t pos);
    std::string identifier;
};

// Identifiers not listed in `vars` are rejected.
Expr parse_expr(const std::string& text, const VarList& vars);

Expr differentiate(const Expr& e, const std::string& var);
Expr differentiate(const Expr& e, const std::string& var, const VarList& chart);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& values);
std::vector<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, const std::string& var);

struct EvalError : std::runtime_error {
    enum class Kind { DivisionByZero, Domain, Transcendental, Unbound };
    EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

using ExactPoint = std::map<std::string, mpq_class>;
using FloatPoint = std::map<std::string, double>;

mpq_class evaluate_exact(const Expr& e, const ExactPoint& point);
double evaluate_float(const Expr& e, const FloatPoint& point);

/*
 * Flat instruction tape for repeated floating-point evaluation. Variables are
 * bound positionally through the slot list given at compile time.
 */
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const VarList& slots);

    struct Result {
        long double value = 0;
        long double scale = 0;  // magnitude bound used for relative tolerances
        bool singular = false;  // denominator within the rejection radius
        bool domain = false;    // log/sqrt outside the real domain
    };
    Result run(const long double* x, long double singular_radius = 0) const;
    long double operator()(const long double* x) const;
    long double operator()(const std::vector<long double>& x) const { return (*this)(x.data()); }

private:
    struct Instr {
        Op op;
        long double c = 0;
        long exponent = 0;
        std::uint32_t slot = 0;
        std::vector<std::uint32_t> args;
    };
    std::vector<Instr> tape_;
};

struct ZeroPolicy {
    int samples = 12;
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    double box_lo = -2.0;
    double box_hi = 2.0;
    long max_denominator = 1000;
    double singular_radius = 1e-6;
};

struct ZeroVerdict {
    enum class Tag { ProvenZero, ProbablyZero, NonZero };
    Tag tag = Tag::ProvenZero;
    double confidence = 1.0;
    int samples = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> witness;  // exact coordinates
    double witness_value = 0.0;
    std::string note;

    bool zero() const { return tag != Tag::NonZero; }
    bool proven() const { return tag == Tag::ProvenZero; }
    std::string tag_name() const;
    std::string describe() const;
};

// Accumulates component verdicts: NonZero dominates, then ProbablyZero.
void merge_verdict(ZeroVerdict& acc, const ZeroVerdict& v);

struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ZeroVerdict zero_test(const Expr& e, const ZeroPolicy& policy = {});

std::vector<Expr> lambda_poly_coeffs(const Expr& e, const std::string& param, int max_deg);

// Canonical rational-function form rendered back as an expression tree.
Expr simplify(const Expr& e);

std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace kronweb
