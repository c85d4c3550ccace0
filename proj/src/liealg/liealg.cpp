#include "kronweb/liealg.hpp"

#include <algorithm>

namespace kronweb {

namespace {

std::size_t cols_of(const QMat& m) { return m.empty() ? 0 : m[0].size(); }

bool is_zero_vec(const QVec& v) {
    return std::all_of(v.begin(), v.end(), [](const mpq_class& q) { return sgn(q) == 0; });
}

QVec sub(QVec a, const QVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

QVec add(QVec a, const QVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

QVec scale(QVec a, const mpq_class& s) {
    for (auto& x : a) x *= s;
    return a;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    const std::size_t rows = m.size(), cols = cols_of(m);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(m[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        mpq_class inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            mpq_class f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Kernel basis, as columns.
QMat kernel(QMat m, std::size_t cols) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(cols, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
        basis.push_back(v);
    }
    QMat out = q_zero(cols, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < cols; ++i) out[i][j] = basis[j][i];
    return out;
}

QMat from_columns(const std::vector<QVec>& cols, std::size_t rows) {
    QMat m = q_zero(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];
    return m;
}

// Basis of the column space, as columns.
QMat column_basis(const QMat& m) {
    const std::size_t rows = m.size(), cols = cols_of(m);
    QMat t = q_zero(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    auto pivots = rref(t);
    std::vector<QVec> out;
    for (std::size_t r = 0; r < pivots.size(); ++r) out.push_back(t[r]);
    return from_columns(out, rows);
}

QMat intersect(const QMat& u, const QMat& w) {
    const std::size_t rows = u.size(), cu = cols_of(u), cw = cols_of(w);
    if (cu == 0 || cw == 0) return q_zero(rows, 0);
    QMat joined = q_zero(rows, cu + cw);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cu; ++j) joined[i][j] = u[i][j];
        for (std::size_t j = 0; j < cw; ++j) joined[i][cu + j] = -w[i][j];
    }
    QMat k = kernel(joined, cu + cw);
    std::vector<QVec> vecs;
    for (std::size_t c = 0; c < cols_of(k); ++c) {
        QVec coeff(cu);
        for (std::size_t j = 0; j < cu; ++j) coeff[j] = k[j][c];
        vecs.push_back(q_apply(u, coeff));
    }
    return column_basis(from_columns(vecs, rows));
}

QMat combine(const PartialOp& p, const mpq_class& a, const mpq_class& b) {
    QMat m = p.inclusion;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] = a * p.inclusion[i][j] + b * p.N[i][j];
    return m;
}

}  // namespace

QMat q_zero(std::size_t rows, std::size_t cols) { return QMat(rows, QVec(cols, 0)); }

QMat q_identity(std::size_t n) {
    QMat m = q_zero(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QVec q_apply(const QMat& m, const QVec& x) {
    QVec out(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (sgn(x[j]) != 0) out[i] += m[i][j] * x[j];
    return out;
}

QMat q_mul(const QMat& a, const QMat& b) {
    const std::size_t n = a.size(), k = b.size(), m = cols_of(b);
    QMat out = q_zero(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (sgn(a[i][t]) == 0) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

std::size_t q_rank(const QMat& m) {
    QMat c = m;
    return rref(c).size();
}

QVec q_column(const QMat& m, std::size_t j) {
    QVec v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i][j];
    return v;
}

std::optional<QVec> q_coordinates(const QMat& basis, const QVec& v) {
    const std::size_t rows = basis.size(), cols = cols_of(basis);
    QMat aug = q_zero(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = basis[i][j];
        aug[i][cols] = v[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    QVec x(cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
    return x;
}

LieAlgebra::LieAlgebra(std::size_t dim, const std::vector<Constant>& constants, bool verify,
                       std::vector<std::string> labels)
    : n_(dim), c_(dim * dim * dim, 0), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n_) throw LieError("label count does not match the dimension");
    for (const auto& k : constants) {
        if (k.i >= n_ || k.j >= n_ || k.k >= n_) throw LieError("structure constant index out of range");
        if (k.i == k.j) {
            if (sgn(k.value) != 0) throw LieError("antisymmetry violated: c^k_ii must vanish");
            continue;
        }
        std::size_t i = std::min(k.i, k.j), j = std::max(k.i, k.j);
        mpq_class v = k.i < k.j ? k.value : mpq_class(-k.value);
        c_[(i * n_ + j) * n_ + k.k] += v;
        c_[(j * n_ + i) * n_ + k.k] -= v;
    }
    if (verify) {
        if (auto bad = jacobi_violation()) {
            auto [i, j, k, l] = *bad;
            throw LieError("Jacobi identity fails for basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                           std::to_string(k) + ") in component " + std::to_string(l));
        }
    }
}

QVec LieAlgebra::bracket(const QVec& x, const QVec& y) const {
    QVec out(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (sgn(y[j]) == 0 || i == j) continue;
            mpq_class w = x[i] * y[j];
            for (std::size_t k = 0; k < n_; ++k) {
                const auto& cc = c(i, j, k);
                if (sgn(cc) != 0) out[k] += w * cc;
            }
        }
    }
    return out;
}

QVec LieAlgebra::basis_bracket(std::size_t i, std::size_t j) const {
    QVec out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = c(i, j, k);
    return out;
}

std::vector<LieAlgebra::Constant> LieAlgebra::constants() const {
    std::vector<Constant> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k)
                if (sgn(c(i, j, k)) != 0) out.push_back({i, j, k, c(i, j, k)});
    return out;
}

std::optional<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> LieAlgebra::jacobi_violation() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            for (std::size_t k = j + 1; k < n_; ++k)
                for (std::size_t l = 0; l < n_; ++l) {
                    mpq_class s = 0;
                    for (std::size_t m = 0; m < n_; ++m)
                        s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
                    if (sgn(s) != 0) return std::make_tuple(i, j, k, l);
                }
    return std::nullopt;
}

LieAlgebra LieAlgebra::change_basis(const QMat& p) const {
    if (p.size() != n_ || cols_of(p) != n_ || q_rank(p) != n_) throw LieError("basis change must be invertible");
    std::vector<Constant> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            auto coords = q_coordinates(p, bracket(q_column(p, i), q_column(p, j)));
            for (std::size_t k = 0; k < n_; ++k)
                if (sgn((*coords)[k]) != 0) out.push_back({i, j, k, (*coords)[k]});
        }
    return LieAlgebra(n_, out, false);
}

LieAlgebra LieAlgebra::gl(std::size_t n) {
    std::vector<Constant> out;
    std::vector<std::string> labels;
    const std::size_t d = n * n;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) labels.push_back("E" + std::to_string(a + 1) + std::to_string(b + 1));
    // [E_ij, E_kl] = d_jk E_il - d_li E_kj
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = x + 1; y < d; ++y) {
            std::size_t i = x / n, j = x % n, k = y / n, l = y % n;
            QVec v(d, 0);
            if (j == k) v[gl_index(n, i, l)] += 1;
            if (l == i) v[gl_index(n, k, j)] -= 1;
            for (std::size_t t = 0; t < d; ++t)
                if (sgn(v[t]) != 0) out.push_back({x, y, t, v[t]});
        }
    return LieAlgebra(d, out, false, labels);
}

LieAlgebra LieAlgebra::so3() {
    return LieAlgebra(3, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}, true, {"e1", "e2", "e3"});
}

LieAlgebra LieAlgebra::sl2() {
    // h, e, f: [h,e]=2e, [h,f]=-2f, [e,f]=h
    return LieAlgebra(3, {{0, 1, 1, 2}, {0, 2, 2, -2}, {1, 2, 0, 1}}, true, {"h", "e", "f"});
}

LieAlgebra LieAlgebra::heisenberg() { return LieAlgebra(3, {{0, 1, 2, 1}}, true, {"e1", "e2", "e3"}); }

LieAlgebra LieAlgebra::aff1() { return LieAlgebra(2, {{0, 1, 0, 1}}, true, {"e1", "e2"}); }

LieAlgebra LieAlgebra::abelian(std::size_t n) { return LieAlgebra(n, {}, false); }

LieAlgebra LieAlgebra::direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
    auto out = a.constants();
    for (auto k : b.constants()) out.push_back({k.i + a.dim(), k.j + a.dim(), k.k + a.dim(), k.value});
    return LieAlgebra(a.dim() + b.dim(), out, false);
}

QVec gl_vector(const QMat& x) {
    const std::size_t n = x.size();
    QVec v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[gl_index(n, i, j)] = x[i][j];
    return v;
}

QMat gl_matrix(const QVec& v, std::size_t n) {
    QMat m = q_zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = v[gl_index(n, i, j)];
    return m;
}

bool is_subalgebra(const LieAlgebra& g, const QMat& basis) {
    const std::size_t k = cols_of(basis);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (!q_coordinates(basis, g.bracket(q_column(basis, i), q_column(basis, j)))) return false;
    return true;
}

void validate_partial_op(const LieAlgebra& g, const PartialOp& p) {
    if (p.inclusion.size() != g.dim() || p.N.size() != g.dim())
        throw LieError("partial operator matrices must have dim(g) rows");
    for (const auto& row : p.inclusion)
        if (row.size() != p.dim_h()) throw LieError("ragged inclusion matrix");
    for (const auto& row : p.N)
        if (row.size() != p.dim_h()) throw LieError("operator matrix must have dim(h) columns");
    if (q_rank(p.inclusion) != p.dim_h()) throw LieError("inclusion columns are linearly dependent");
    if (!is_subalgebra(g, p.inclusion)) throw LieError("h is not closed under the bracket");
}

PartialOp left_multiplication(const QMat& a) {
    const std::size_t n = a.size(), d = n * n;
    PartialOp p{q_identity(d), q_zero(d, d)};
    for (std::size_t x = 0; x < d; ++x) {
        QMat e = q_zero(n, n);
        e[x / n][x % n] = 1;
        QVec img = gl_vector(q_mul(a, e));
        for (std::size_t t = 0; t < d; ++t) p.N[t][x] = img[t];
    }
    return p;
}

QMat so_basis(std::size_t n) {
    std::vector<QVec> cols;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            QVec v(n * n, 0);
            v[gl_index(n, i, j)] = 1;
            v[gl_index(n, j, i)] = -1;
            cols.push_back(v);
        }
    return from_columns(cols, n * n);
}

PartialOp left_multiplication_on_so(const QMat& a) {
    const std::size_t n = a.size();
    QMat basis = so_basis(n);
    PartialOp full = left_multiplication(a);
    return {basis, q_mul(full.N, basis)};
}

DeformedBracket deformed_bracket(const LieAlgebra& g, const PartialOp& p, const QVec& x, const QVec& y) {
    QVec gx = p.embed(x), gy = p.embed(y);
    QVec v = add(g.bracket(p.apply(x), gy), g.bracket(gx, p.apply(y)));
    auto xy = q_coordinates(p.inclusion, g.bracket(gx, gy));
    if (!xy) throw LieError("h is not closed under the bracket");
    v = sub(v, p.apply(*xy));
    DeformedBracket out;
    out.in_h = q_coordinates(p.inclusion, v);
    out.value = std::move(v);
    return out;
}

QVec torsion(const LieAlgebra& g, const PartialOp& p, const QVec& x, const QVec& y) {
    auto d = deformed_bracket(g, p, x, y);
    if (!d.in_h) throw LieError("[x,y]_N is not in h, so the torsion is undefined");
    return sub(g.bracket(p.apply(x), p.apply(y)), p.apply(*d.in_h));
}

PnoCheck is_algebraic_pno(const LieAlgebra& g, const PartialOp& p) {
    const std::size_t k = p.dim_h();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            QVec x(k, 0), y(k, 0);
            x[i] = 1;
            y[j] = 1;
            auto d = deformed_bracket(g, p, x, y);
            if (!d.in_h) return {false, std::make_pair(i, j), "[x,y]_N not in h"};
            QVec t = sub(g.bracket(p.apply(x), p.apply(y)), p.apply(*d.in_h));
            if (!is_zero_vec(t)) return {false, std::make_pair(i, j), "torsion nonzero"};
        }
    return {};
}

bool check_compatibility(const LieAlgebra& a, const LieAlgebra& b) {
    if (a.dim() != b.dim()) throw LieError("brackets live on spaces of different dimension");
    const std::size_t n = a.dim();
    // Mixed term of the Jacobiator of a + b.
    auto mixed = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        mpq_class s = 0;
        for (std::size_t m = 0; m < n; ++m)
            s += a.c(i, j, m) * b.c(m, k, l) + b.c(i, j, m) * a.c(m, k, l);
        return s;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    if (sgn(mixed(i, j, k, l) + mixed(j, k, i, l) + mixed(k, i, j, l)) != 0) return false;
    return true;
}

SubalgebraCriterion pencil_subalgebra_criterion(const LieAlgebra& g, const PartialOp& p,
                                                const std::vector<std::pair<mpq_class, mpq_class>>& coefficients) {
    if (coefficients.empty()) return {false, "no coefficient pairs"};
    for (const auto& [a, b] : coefficients)
        if (sgn(a) == 0 || sgn(b) == 0) return {false, "coefficient pair proportional to (1,0) or (0,1)"};
    if (!is_subalgebra(g, column_basis(p.N))) return {false, "N h is not a subalgebra"};
    QMat common;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        QMat hk = column_basis(combine(p, coefficients[k].first, coefficients[k].second));
        if (!is_subalgebra(g, hk)) return {false, "h_" + std::to_string(k) + " is not a subalgebra"};
        common = k == 0 ? hk : intersect(common, hk);
    }
    if (cols_of(common) != 0) return {false, "the subalgebras h_k intersect nontrivially"};
    return {true, "sufficient condition holds"};
}

bool affinization_criterion(const LieAlgebra& g, const PartialOp& p) {
    // Elements of g[a] up to degree 2 are stacked as (c0, c1, c2). The image of
    // (I + aN) on h + a h is spanned by (x, Nx, 0) and (0, x, Nx) for x in h.
    const std::size_t n = g.dim(), k = p.dim_h();
    std::vector<QVec> gens;
    for (std::size_t i = 0; i < k; ++i) {
        QVec x = q_column(p.inclusion, i), nx = q_column(p.N, i);
        QVec lo(3 * n, 0), hi(3 * n, 0);
        for (std::size_t t = 0; t < n; ++t) {
            lo[t] = x[t];
            lo[n + t] = nx[t];
            hi[n + t] = x[t];
            hi[2 * n + t] = nx[t];
        }
        gens.push_back(lo);
        gens.push_back(hi);
    }
    QMat image = from_columns(gens, 3 * n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            QVec x = q_column(p.inclusion, i), y = q_column(p.inclusion, j);
            QVec nx = q_column(p.N, i), ny = q_column(p.N, j);
            QVec c0 = g.bracket(x, y), c1 = add(g.bracket(nx, y), g.bracket(x, ny)), c2 = g.bracket(nx, ny);
            QVec v(3 * n);
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = c0[t];
                v[n + t] = c1[t];
                v[2 * n + t] = c2[t];
            }
            if (!q_coordinates(image, v)) return false;
        }
    return true;
}

LieAlgebra deformed_algebra(const LieAlgebra& g, const PartialOp& p) {
    const std::size_t k = p.dim_h();
    std::vector<LieAlgebra::Constant> out;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            QVec x(k, 0), y(k, 0);
            x[i] = 1;
            y[j] = 1;
            auto d = deformed_bracket(g, p, x, y);
            if (!d.in_h) throw LieError("[x,y]_N leaves h");
            for (std::size_t t = 0; t < k; ++t)
                if (sgn((*d.in_h)[t]) != 0) out.push_back({i, j, t, (*d.in_h)[t]});
        }
    return LieAlgebra(k, out, true);
}

}  // namespace kronweb
