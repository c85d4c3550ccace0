#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace kronweb {

using QVec = std::vector<mpq_class>;
// Row-major; a linear map h -> g is dim(g) x dim(h), one column per basis vector of h.
using QMat = std::vector<std::vector<mpq_class>>;

QMat q_zero(std::size_t rows, std::size_t cols);
QMat q_identity(std::size_t n);
QVec q_apply(const QMat& m, const QVec& x);
QMat q_mul(const QMat& a, const QMat& b);
std::size_t q_rank(const QMat& m);
// Coordinates of v in the column span of basis, if it lies there.
std::optional<QVec> q_coordinates(const QMat& basis, const QVec& v);
QVec q_column(const QMat& m, std::size_t j);

struct LieError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * Lie algebra given by structure constants c^k_ij in a fixed basis.
 * Antisymmetry is imposed from the i<j data; Jacobi is verified on
 * construction unless verification is explicitly skipped.
 */
class LieAlgebra {
public:
    struct Constant {
        std::size_t i, j, k;
        mpq_class value;
    };

    LieAlgebra() = default;
    LieAlgebra(std::size_t dim, const std::vector<Constant>& constants, bool verify = true,
               std::vector<std::string> labels = {});

    std::size_t dim() const { return n_; }
    const mpq_class& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
    QVec bracket(const QVec& x, const QVec& y) const;
    QVec basis_bracket(std::size_t i, std::size_t j) const;
    const std::vector<std::string>& labels() const { return labels_; }
    std::vector<Constant> constants() const;  // i<j, nonzero

    // First (i,j,k,l) with a nonzero Jacobiator component, if any.
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> jacobi_violation() const;

    // New basis given by the columns of p (invertible).
    LieAlgebra change_basis(const QMat& p) const;

    static LieAlgebra gl(std::size_t n);
    static LieAlgebra so3();
    static LieAlgebra sl2();
    static LieAlgebra heisenberg();
    static LieAlgebra aff1();
    static LieAlgebra abelian(std::size_t n);
    static LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

private:
    std::size_t n_ = 0;
    std::vector<mpq_class> c_;
    std::vector<std::string> labels_;
};

// Index of E_ij in the standard basis of gl(n).
inline std::size_t gl_index(std::size_t n, std::size_t i, std::size_t j) { return i * n + j; }
// Vectorized matrix <-> gl(n) coordinates.
QVec gl_vector(const QMat& x);
QMat gl_matrix(const QVec& v, std::size_t n);

/*
 * Partial operator: subalgebra h of g given by an inclusion matrix (columns
 * are a basis of h in g-coordinates) and N : h -> g (columns are the images
 * of those basis vectors).
 */
struct PartialOp {
    QMat inclusion;
    QMat N;

    std::size_t dim_h() const { return inclusion.empty() ? 0 : inclusion[0].size(); }
    QVec embed(const QVec& x) const { return q_apply(inclusion, x); }
    QVec apply(const QVec& x) const { return q_apply(N, x); }
};

// Validates shapes, independence of the inclusion columns, and closure of h.
void validate_partial_op(const LieAlgebra& g, const PartialOp& p);
bool is_subalgebra(const LieAlgebra& g, const QMat& basis);

// L_A on gl(n) (full domain), and L_A restricted to so(n) inside gl(n).
PartialOp left_multiplication(const QMat& a);
PartialOp left_multiplication_on_so(const QMat& a);
QMat so_basis(std::size_t n);

struct DeformedBracket {
    QVec value;                  // [Nx,y] + [x,Ny] - N[x,y] in g-coordinates
    std::optional<QVec> in_h;    // h-coordinates when the value lies in h
};

// x, y in h-coordinates.
DeformedBracket deformed_bracket(const LieAlgebra& g, const PartialOp& p, const QVec& x, const QVec& y);
// [Nx,Ny] - N[x,y]_N; throws LieError when [x,y]_N is not in h.
QVec torsion(const LieAlgebra& g, const PartialOp& p, const QVec& x, const QVec& y);

struct PnoCheck {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // basis pair of h
    std::string reason;
};
PnoCheck is_algebraic_pno(const LieAlgebra& g, const PartialOp& p);

// Jacobi identity for every member of the pencil l1[,]1 + l2[,]2.
bool check_compatibility(const LieAlgebra& a, const LieAlgebra& b);

// Sufficient condition via subalgebras (a_k I + b_k N)h with trivial intersection.
struct SubalgebraCriterion {
    bool applies = false;
    std::string reason;
};
SubalgebraCriterion pencil_subalgebra_criterion(const LieAlgebra& g, const PartialOp& p,
                                                const std::vector<std::pair<mpq_class, mpq_class>>& coefficients);

// Closure of the image of (I + aN) on h + a h inside g[a], tested on generators.
bool affinization_criterion(const LieAlgebra& g, const PartialOp& p);

// Bracket [x,y]_N on h as a Lie algebra in h-coordinates (requires a PNO).
LieAlgebra deformed_algebra(const LieAlgebra& g, const PartialOp& p);

}  // namespace kronweb
