#include "kronweb/symbolic_matrix.hpp"

#include <stdexcept>

namespace kronweb {

RFMatrix rf_matrix(const std::vector<std::vector<Expr>>& m) {
    RFMatrix out;
    for (const auto& row : m) {
        std::vector<RationalFunction> r;
        for (const auto& e : row) r.push_back(canonical(e));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<Expr>> to_expr_matrix(const RFMatrix& m) {
    std::vector<std::vector<Expr>> out;
    for (const auto& row : m) {
        std::vector<Expr> r;
        for (const auto& e : row) r.push_back(e.to_expr());
        out.push_back(std::move(r));
    }
    return out;
}

bool definitely_nonzero(const RationalFunction& r, const ZeroPolicy& policy) {
    if (r.is_zero()) return false;
    if (!r.has_atoms()) return true;
    return !zero_test(r, policy).zero();
}

namespace {

std::size_t weight(const RationalFunction& r) {
    std::size_t w = r.numerator().size();
    for (const auto& [f, e] : r.denominator()) w += f.size() * static_cast<std::size_t>(e);
    return w;
}

}  // namespace

RowEchelon row_reduce(RFMatrix m, const ZeroPolicy& policy) {
    RowEchelon out;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // Lightest nonzero entry as pivot to limit expression growth.
        std::size_t best = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (!definitely_nonzero(m[i][c], policy)) continue;
            if (best == rows || weight(m[i][c]) < weight(m[best][c])) best = i;
        }
        if (best == rows) {
            for (std::size_t i = r; i < rows; ++i) m[i][c] = RationalFunction();
            continue;
        }
        std::swap(m[r], m[best]);
        RationalFunction inv = m[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) m[r][j] = j == c ? RationalFunction(1) : m[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            RationalFunction f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (j == c)
                    m[i][j] = RationalFunction();
                else if (!m[r][j].is_zero())
                    m[i][j] -= f * m[r][j];
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

std::size_t rank(const RFMatrix& m, const ZeroPolicy& policy) { return row_reduce(m, policy).pivots.size(); }

RationalFunction determinant(RFMatrix m, const ZeroPolicy& policy) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    RationalFunction det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = n;
        for (std::size_t i = c; i < n; ++i) {
            if (!definitely_nonzero(m[i][c], policy)) continue;
            if (best == n || weight(m[i][c]) < weight(m[best][c])) best = i;
        }
        if (best == n) return RationalFunction();
        if (best != c) {
            std::swap(m[c], m[best]);
            det = -det;
        }
        det *= m[c][c];
        RationalFunction inv = m[c][c].inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            RationalFunction f = m[i][c] * inv;
            for (std::size_t j = c + 1; j < n; ++j)
                if (!m[c][j].is_zero()) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

std::vector<std::vector<RationalFunction>> nullspace(const RFMatrix& m, const ZeroPolicy& policy) {
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    RowEchelon e = row_reduce(m, policy);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::vector<RationalFunction>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<RationalFunction> v(cols);
        v[f] = RationalFunction(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RFMatrix> solve(const RFMatrix& a, const RFMatrix& b, const ZeroPolicy& policy) {
    const std::size_t n = a.empty() ? 0 : a[0].size();
    const std::size_t k = b.empty() ? 0 : b[0].size();
    if (a.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
    RFMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].insert(aug[i].end(), b[i].begin(), b[i].end());
    RowEchelon e = row_reduce(aug, policy);
    for (auto c : e.pivots)
        if (c >= n) return std::nullopt;
    RFMatrix x(n, std::vector<RationalFunction>(k));
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) x[e.pivots[r]][j] = e.rows[r][n + j];
    return x;
}

std::optional<RFMatrix> inverse(const RFMatrix& a, const ZeroPolicy& policy) {
    const std::size_t n = a.size();
    RFMatrix id(n, std::vector<RationalFunction>(n));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = RationalFunction(1);
    if (rank(a, policy) != n) return std::nullopt;
    return solve(a, id, policy);
}

RFMatrix multiply(const RFMatrix& a, const RFMatrix& b) {
    const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    RFMatrix c(n, std::vector<RationalFunction>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < k; ++l)
                if (!a[i][l].is_zero() && !b[l][j].is_zero()) c[i][j] += a[i][l] * b[l][j];
    return c;
}

}  // namespace kronweb
