#pragma once

#include "kronweb/polynomial.hpp"
#include "kronweb/symbolic_matrix.hpp"

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kronweb {

struct CalculusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Scalar = RationalFunction;

class Chart {
public:
    Chart() = default;
    explicit Chart(VarList names);
    static Chart standard(std::size_t n, const std::string& prefix = "x");

    std::size_t dim() const { return names_.size(); }
    const VarList& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    SymId id(std::size_t i) const { return ids_[i]; }
    Scalar coordinate(std::size_t i) const { return Scalar::symbol(ids_[i]); }
    Scalar parse(const std::string& text) const;
    // Parse with extra identifiers allowed (such as a pencil parameter).
    Scalar parse(const std::string& text, const VarList& extra) const;

    friend bool operator==(const Chart& a, const Chart& b) { return a.names_ == b.names_; }
    friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

private:
    VarList names_;
    std::vector<SymId> ids_;
};

Scalar partial(const Scalar& f, const Chart& chart, std::size_t i);

class VectorField {
public:
    VectorField() = default;
    VectorField(Chart chart, std::vector<Scalar> components);
    static VectorField coordinate(const Chart& chart, std::size_t i);
    static VectorField zero(const Chart& chart);

    const Chart& chart() const { return chart_; }
    const std::vector<Scalar>& components() const { return c_; }
    const Scalar& operator[](std::size_t i) const { return c_[i]; }
    // Directional derivative X f.
    Scalar apply(const Scalar& f) const;
    std::vector<Expr> exprs() const;
    std::string str() const;

    friend VectorField operator+(const VectorField& a, const VectorField& b);
    friend VectorField operator-(const VectorField& a, const VectorField& b);
    friend VectorField operator*(const Scalar& f, const VectorField& x);
    VectorField operator-() const;
    bool is_zero() const;

private:
    Chart chart_;
    std::vector<Scalar> c_;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

/*
 * Differential form of degree <= 3. Coefficients are stored for strictly
 * increasing index tuples only; missing entries are zero.
 */
class Form {
public:
    static constexpr int max_degree = 3;
    using Index = std::vector<std::size_t>;

    Form() = default;
    Form(Chart chart, int degree);
    static Form one_form(const Chart& chart, std::vector<Scalar> components);
    static Form differential(const Chart& chart, const Scalar& f);

    const Chart& chart() const { return chart_; }
    int degree() const { return degree_; }
    // Coefficient for any index tuple (sign from sorting, zero on repeats).
    Scalar at(Index idx) const;
    void set(Index idx, const Scalar& v);
    const std::map<Index, Scalar>& coefficients() const { return c_; }
    bool is_zero() const;
    std::vector<Scalar> components() const;  // one-forms only
    std::string str() const;

    friend Form operator+(const Form& a, const Form& b);
    friend Form operator-(const Form& a, const Form& b);
    friend Form operator*(const Scalar& f, const Form& a);

private:
    Chart chart_;
    int degree_ = 0;
    std::map<Index, Scalar> c_;
};

using OneForm = Form;
using TwoForm = Form;
using ThreeForm = Form;

Form exterior_derivative(const Form& w);
Form wedge(const Form& a, const Form& b);
Scalar pairing(const Form& alpha, const VectorField& x);
Form interior(const VectorField& x, const Form& w);

class OneOneTensor {
public:
    OneOneTensor() = default;
    OneOneTensor(Chart chart, RFMatrix m);
    static OneOneTensor identity(const Chart& chart);
    static OneOneTensor parse(const Chart& chart, const std::vector<std::vector<std::string>>& rows);

    const Chart& chart() const { return chart_; }
    const RFMatrix& matrix() const { return m_; }
    VectorField apply(const VectorField& x) const;
    // (N* a)(X) = a(N X).
    Form apply_dual(const Form& a) const;
    // a I + b N
    OneOneTensor combine(const Scalar& a, const Scalar& b) const;

private:
    Chart chart_;
    RFMatrix m_;
};

// Division-free Laplace expansion, for the small matrices used here.
Scalar small_determinant(const RFMatrix& m);
// Maximal minors of a k x n matrix (k <= n), column subsets in lexicographic order.
std::vector<Scalar> maximal_minors(const RFMatrix& rows);
// Inverse through the adjugate; nullopt when the determinant is identically zero.
std::optional<RFMatrix> small_inverse(const RFMatrix& m);

// Frame with <alpha_i, X_j> = delta_ij.
std::vector<VectorField> dual_frame(const std::vector<Form>& coframe, const ZeroPolicy& policy = {});
std::vector<Form> dual_coframe(const std::vector<VectorField>& frame, const ZeroPolicy& policy = {});

// Deterministic sample points inside the policy box for numeric checks.
class PointSampler {
public:
    PointSampler(const Chart& chart, const ZeroPolicy& policy);
    // Rational points with bounded denominators, so witnesses print exactly.
    std::vector<mpq_class> next_exact();
    std::vector<long double> next();
    static std::vector<long double> to_float(const std::vector<mpq_class>& x);

private:
    std::size_t n_;
    ZeroPolicy policy_;
    std::mt19937_64 rng_;
};

// Numeric evaluation of canonical scalars at a point in chart order.
class ScalarEvaluator {
public:
    ScalarEvaluator(const Scalar& f, const Chart& chart);
    CompiledExpr::Result run(const std::vector<long double>& x, long double singular_radius = 0) const;
    long double operator()(const std::vector<long double>& x) const { return run(x).value; }

private:
    CompiledExpr code_;
};

// Numeric rank of the fields at a point (relative SVD threshold); -1 when a value is singular.
int numeric_rank(const std::vector<VectorField>& fields, const std::vector<long double>& x, double tolerance);

struct IntegrabilityReport {
    ZeroVerdict brackets;               // bracket-rank test
    std::optional<ZeroVerdict> wedge;   // d w ^ w for corank-1 distributions
    ZeroVerdict verdict;                // combined
};

ZeroVerdict integrability_by_brackets(const std::vector<VectorField>& fields, const ZeroPolicy& policy = {});
// Annihilating one-form of a corank-1 distribution.
Form annihilator(const std::vector<VectorField>& fields, const ZeroPolicy& policy = {});
ZeroVerdict integrability_by_wedge(const std::vector<VectorField>& fields, const ZeroPolicy& policy = {});
IntegrabilityReport integrability_report(const std::vector<VectorField>& fields, const ZeroPolicy& policy = {});
ZeroVerdict distribution_integrability(const std::vector<VectorField>& fields, const ZeroPolicy& policy = {});

// Merged zero verdict over all coefficients.
ZeroVerdict zero_test(const Form& w, const ZeroPolicy& policy = {});
ZeroVerdict zero_test(const VectorField& x, const ZeroPolicy& policy = {});

}  // namespace kronweb
