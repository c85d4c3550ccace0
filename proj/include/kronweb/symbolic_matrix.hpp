#pragma once

#include "kronweb/polynomial.hpp"

#include <optional>
#include <vector>

namespace kronweb {

// Dense matrices over the field of canonical rational functions.
using RFMatrix = std::vector<std::vector<RationalFunction>>;

RFMatrix rf_matrix(const std::vector<std::vector<Expr>>& m);
std::vector<std::vector<Expr>> to_expr_matrix(const RFMatrix& m);

// An entry counts as a pivot when it is not zero as a function: exact for
// rational entries, decided by sampling when atoms are present.
bool definitely_nonzero(const RationalFunction& r, const ZeroPolicy& policy = {});

struct RowEchelon {
    RFMatrix rows;                  // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_reduce(RFMatrix m, const ZeroPolicy& policy = {});
std::size_t rank(const RFMatrix& m, const ZeroPolicy& policy = {});
RationalFunction determinant(RFMatrix m, const ZeroPolicy& policy = {});
// Basis of {v : m v = 0}, one column vector per entry.
std::vector<std::vector<RationalFunction>> nullspace(const RFMatrix& m, const ZeroPolicy& policy = {});
// Some X with A X = B, or nullopt when the system is inconsistent.
std::optional<RFMatrix> solve(const RFMatrix& a, const RFMatrix& b, const ZeroPolicy& policy = {});
std::optional<RFMatrix> inverse(const RFMatrix& a, const ZeroPolicy& policy = {});
RFMatrix multiply(const RFMatrix& a, const RFMatrix& b);

}  // namespace kronweb
