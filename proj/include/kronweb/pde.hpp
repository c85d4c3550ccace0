#pragma once

#include "kronweb/webs.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace kronweb {

struct PdeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * Symbols: A0..A3, B0..B3, C0, C1 (3D, constants a1,a2,a3), H (Hirota in
 * coefficient form, a1+a2+a3 = 0), K4 (4D, l1..l4), K4DEG (4D, l1 and l3).
 */
struct EquationSpec {
    std::string symbol;
    std::vector<mpq_class> constants;
    std::size_t dim = 3;

    std::size_t functions() const { return dim == 4 ? 2 : 1; }
};

// Validates the symbol and its constants (count, distinctness, zero sum for H).
EquationSpec make_equation(const std::string& symbol, const std::vector<mpq_class>& constants);

struct CatalogEntry {
    std::string symbol;
    std::size_t dim;
    std::size_t constants;   // how many constants the symbol reads
    std::string equation;    // residual in text form
    std::string alpha;       // annihilating form(s) in text form
    std::vector<std::string> lambdas;  // l_i as coordinate or constant, empty for C and 4D
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& symbol);

// Hirota eigenvalues (0, -a3, a2) realizing the coefficient form a1 f1 f23 + a2 f2 f31 + a3 f3 f12.
std::vector<mpq_class> hirota_lambdas(const std::vector<mpq_class>& coefficients);

struct SymbolicSolution {
    Chart chart;
    std::vector<Scalar> f;  // f, or (f1, f2) in 4D
};

SymbolicSolution parse_solution(const EquationSpec& eq, const std::vector<std::string>& texts);

// One residual in 3D, two (i = 1, 2) in 4D.
std::vector<Scalar> residual(const EquationSpec& eq, const SymbolicSolution& s);
ZeroVerdict residual_verdict(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy = {});

// The operator N whose restriction to the level sets yields the equation.
OneOneTensor equation_operator(const EquationSpec& eq);
// 3D: alpha^l of the catalog display at l = lambda.
Form alpha_display(const EquationSpec& eq, const SymbolicSolution& s, const Scalar& lambda);
// 4D: omega^l_1, omega^l_2.
std::vector<Form> annihilator_forms(const EquationSpec& eq, const SymbolicSolution& s, const Scalar& lambda);

bool solution_nondegeneracy(const EquationSpec& eq, const SymbolicSolution& s, const std::vector<mpq_class>& point);
// Nondegeneracy as functions (not identically degenerate).
bool solution_nondegenerate(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy = {});

using SolutionWeb = std::variant<VeroneseWeb, KroneckerWebData>;

// Throws PdeError for a nonzero residual or a degenerate solution.
SolutionWeb web_from_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy = {});
VeroneseWeb veronese_web_from_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy = {});
KroneckerWebData kronecker_web_from_solution(const EquationSpec& eq, const SymbolicSolution& s,
                                             const ZeroPolicy& policy = {});

/*
 * Distinguished leaves: for each eigenvalue function l_i the distribution
 * (N - l_i) T F lies in the coordinate plane {dx_j = 0, j in the index set}.
 */
struct DistinguishedFoliation {
    Scalar eigenvalue;
    std::vector<std::size_t> coordinates;
};

std::vector<DistinguishedFoliation> distinguished_foliations(const EquationSpec& eq);
ZeroVerdict check_distinguished_foliations(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy = {});

// Residuals from numeric values d1[k][i] = f^k_i and d2[k][i][j] = f^k_ij at x.
std::vector<long double> residual_from_jet(const EquationSpec& eq, const std::vector<long double>& x,
                                           const std::vector<std::vector<long double>>& d1,
                                           const std::vector<std::vector<std::vector<long double>>>& d2);
// The same formula over symbolic jets; constants are not validated.
std::vector<Scalar> residual_from_jet(const EquationSpec& eq, const std::vector<Scalar>& x,
                                      const std::vector<std::vector<Scalar>>& d1,
                                      const std::vector<std::vector<std::vector<Scalar>>>& d2);

// Gridded samples of f (or f1, f2) on a uniform grid.
struct GridSolution {
    Grid grid;
    std::vector<std::vector<long double>> f;
};

GridSolution sample_solution(const EquationSpec& eq, const SymbolicSolution& s, const Grid& grid);
// Central-difference residuals; nodes within one cell of the boundary hold NaN.
std::vector<GridField> residual_grid(const EquationSpec& eq, const GridSolution& g);
// Largest |value| over non-NaN entries.
long double interior_max(const GridField& field);

struct OrderStudy {
    std::vector<std::size_t> points;
    std::vector<long double> errors;
    std::vector<long double> orders;  // log(e_i / e_i+1) / log(h_i / h_i+1)
};

/*
 * FD residuals on cubes [lo, hi]^dim with the given point counts, each measured
 * as the max over the interior nodes of the coarsest grid (which every finer
 * grid must contain).
 */
OrderStudy convergence_study(const EquationSpec& eq, const SymbolicSolution& s, long double lo, long double hi,
                             const std::vector<std::size_t>& points);

// CSV with a header "x1,...,xd,f" (or f1,f2); rows may come in any order.
GridSolution read_grid_csv(std::istream& in, const EquationSpec& eq);
void write_grid_csv(std::ostream& out, const GridSolution& g);

}  // namespace kronweb
