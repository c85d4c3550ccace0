#pragma once

#include "kronweb/nijenhuis.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kronweb {

struct WebError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// alpha^l = alpha_0 + l alpha_1 + ... + l^n alpha_n on a chart of dimension n+1.
struct VeroneseWeb {
    Chart chart;
    std::vector<Form> alpha;

    std::size_t n() const { return alpha.empty() ? 0 : alpha.size() - 1; }
};

// Builds the web from coefficient rows: rows[k][i] is the dx_i component of alpha_k.
VeroneseWeb make_web(const Chart& chart, const std::vector<std::vector<std::string>>& rows);
VeroneseWeb flat_web(std::size_t n);

Form alpha_lambda(const VeroneseWeb& w, const Scalar& lambda);
// Rows are the components of alpha_0..alpha_n; nondegeneracy is a nonzero determinant.
RFMatrix coefficient_matrix(const VeroneseWeb& w);
bool nondegenerate_at(const VeroneseWeb& w, const std::vector<mpq_class>& point);
bool nondegenerate_at(const VeroneseWeb& w, const std::vector<long double>& point, double tolerance = 1e-9);

struct WebMode {
    enum class Kind { Full, Sampled };
    Kind kind = Kind::Full;
    int samples = 0;  // 0 means n+3 in sampled mode

    static WebMode full() { return {}; }
    static WebMode sampled(int m = 0) { return {Kind::Sampled, m}; }
};

struct WebIntegrability {
    ZeroVerdict verdict;
    std::vector<ZeroVerdict> parts;  // per lambda-coefficient (full) or per sampled s
    std::vector<mpq_class> s_values;  // sampled mode only
};

// Coefficient of l^m in d alpha^l ^ alpha^l.
Form integrability_coefficient(const VeroneseWeb& w, std::size_t m);
WebIntegrability web_integrability(const VeroneseWeb& w, WebMode mode = WebMode::full(), const ZeroPolicy& policy = {});

// Frame X_0..X_n dual to alpha_0..alpha_n.
std::vector<VectorField> web_frame(const VeroneseWeb& w, const ZeroPolicy& policy = {});
GeometricPNO pno_from_web(const VeroneseWeb& w, const ZeroPolicy& policy = {});
VeroneseWeb web_from_pno(const GeometricPNO& p, const ZeroPolicy& policy = {});
// Zero verdict of alpha^l(a) ^ alpha^l(b) with l symbolic: the two webs have the same foliations.
ZeroVerdict same_foliations(const VeroneseWeb& a, const VeroneseWeb& b, const ZeroPolicy& policy = {});

// phi X_k phi - X_{k+1} phi for k = 0..n-1.
std::vector<Scalar> selfpropelled_residual(const VeroneseWeb& w, const Scalar& phi, const ZeroPolicy& policy = {});

/*
 * Self-propelled functions from the implicit equation F(x, phi) = f(phi),
 * where F(x, l) is a family of first integrals of the web's foliations.
 * Both F and f are written with the parameter symbol (default "lambda").
 */
class SelfPropelledSolver {
public:
    struct Options {
        long double tolerance = 1e-12L;
        int max_iterations = 50;
        long double guard = 1e-8L;  // lower bound on |F_l - f'|
    };

    SelfPropelledSolver(const Chart& chart, const Scalar& F, const Scalar& f, const std::string& parameter = "lambda");
    SelfPropelledSolver(const Chart& chart, const Scalar& F, const Scalar& f, const std::string& parameter, Options options);

    // Newton with step halving while the residual grows; throws WebError on divergence or guard violation.
    long double solve_at(const std::vector<long double>& x, long double start) const;
    long double residual(const std::vector<long double>& x, long double phi) const;
    const Chart& chart() const { return chart_; }

private:
    Chart chart_;
    Options options_;
    ScalarEvaluator g_, dg_;
};

// Solver whose solution takes the value c at x0: f is the constant F(x0, c).
SelfPropelledSolver seeded_solver(const Chart& chart, const Scalar& F, const std::vector<mpq_class>& x0, const mpq_class& c,
                                  const std::string& parameter = "lambda");

// Uniform grid with the same number of points per axis.
struct Grid {
    std::vector<long double> lo, hi;
    std::size_t points = 0;

    std::size_t dim() const { return lo.size(); }
    std::size_t size() const;
    long double spacing(std::size_t axis) const { return (hi[axis] - lo[axis]) / static_cast<long double>(points - 1); }
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::size_t flat_index(const std::vector<std::size_t>& idx) const;
    std::vector<long double> point(std::size_t flat) const;
    std::size_t nearest(const std::vector<long double>& x) const;
    static Grid cube(std::size_t dim, long double lo, long double hi, std::size_t points);
};

struct GridField {
    Grid grid;
    std::vector<long double> values;
};

// Newton at every node, continued breadth-first from the grid center seeded with `seed`.
GridField solve_selfpropelled(const SelfPropelledSolver& solver, const Grid& grid, long double seed);
// Off-grid evaluation: Newton started from the nearest node value.
NumericFunction selfpropelled_function(const SelfPropelledSolver& solver, const GridField& field);

// Largest |phi X_k phi - X_{k+1} phi| at the points, derivatives by central differences at step h.
long double selfpropelled_fd_residual(const VeroneseWeb& w, const NumericFunction& phi,
                                      const std::vector<std::vector<long double>>& points, long double h = 1e-5L);
// Determinant of the numeric Jacobian of the functions at x.
long double numeric_jacobian(const std::vector<NumericFunction>& fs, const std::vector<long double>& x, long double h = 1e-5L);

/*
 * Kronecker web data with a trivial bundle Phi of rank k: phi1, phi2 are k x dim
 * matrices acting on covectors. The PNO is N = phi2^t (phi1^t)^-1 on im phi1^t.
 */
struct KroneckerWebData {
    Chart chart;
    RFMatrix phi1, phi2;
};

GeometricPNO kronecker_pno_from_data(const KroneckerWebData& k, const ZeroPolicy& policy = {});
/*
 * Checks at sample points that s1 phi1 + s2 phi2 is surjective for every complex
 * (s1, s2) != 0. Rational data: the transposed pencil must have only increasing
 * Kronecker blocks. Otherwise random complex (s1, s2) are tried numerically.
 */
bool kronecker_surjective(const KroneckerWebData& k, int samples = 10, std::uint64_t seed = 1);
/*
 * Integrability of im phi1^t and of D_l = (N - l) T F at sampled l. The bracket
 * minors are polynomials of degree <= 4 in l, so 5 or more samples decide them.
 */
WebIntegrability kronecker_integrability(const KroneckerWebData& k, int samples = 7, const ZeroPolicy& policy = {});

/*
 * Extension of a 3D web's PNO by numeric self-propelled functions: phi_k solves
 * F(x, phi) = levels[k] by Newton, continued over the grid from seeds[k].
 */
struct ExtensionRun {
    std::vector<std::vector<long double>> points;  // interior sample points
    long double residual = 0;      // largest FD residual of the self-propelled system
    long double min_jacobian = 0;  // smallest |det| of the Jacobian of the phi's
    long double torsion = 0;       // largest numeric torsion of the extension
};

ExtensionRun numeric_extension_pipeline(const VeroneseWeb& w, const Scalar& F, const std::vector<mpq_class>& levels,
                                        const std::vector<long double>& seeds, const Grid& grid, int samples,
                                        std::uint64_t seed, const std::string& parameter = "lambda");

}  // namespace kronweb
