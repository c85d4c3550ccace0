#include "kronweb/pencil.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace kronweb {

namespace {

// Blocks of the form c1*S1 + c2*S2, placed on a block grid.
struct BlockEntry {
    std::size_t row, col;
    Gaussian c1, c2;
};

/*
 * Ranks of block matrices assembled from S1 and S2. The pencil is reduced
 * once per prime; if a prime does not apply the exact path is used.
 */
class RankOracle {
public:
    explicit RankOracle(const Pencil& p) : p_(p) {
        for (const auto& f : rank_primes()) {
            auto a = reduce(p.S1, f), b = reduce(p.S2, f);
            if (a && b) reduced_.push_back({f, std::move(*a), std::move(*b)});
        }
    }

    std::size_t rank(std::size_t block_rows, std::size_t block_cols, const std::vector<BlockEntry>& blocks) const {
        const std::size_t W = p_.dimW, V = p_.dimV;
        std::size_t best = 0;
        bool any = false;
        for (const auto& r : reduced_) {
            ModMatrix m(block_rows * W, std::vector<std::uint64_t>(block_cols * V, 0));
            bool ok = true;
            for (const auto& b : blocks) {
                auto c1 = reduce(b.c1, r.field), c2 = reduce(b.c2, r.field);
                if (!c1 || !c2) {
                    ok = false;
                    break;
                }
                for (std::size_t i = 0; i < W; ++i)
                    for (std::size_t j = 0; j < V; ++j)
                        m[b.row * W + i][b.col * V + j] = (*c1 * r.s1[i][j] + *c2 * r.s2[i][j]) % r.field.p;
            }
            if (!ok) continue;
            any = true;
            best = std::max(best, modular_rank(std::move(m), r.field.p));
        }
        if (any) return best;
        GMatrix g = zero_matrix(block_rows * W, block_cols * V);
        for (const auto& b : blocks)
            for (std::size_t i = 0; i < W; ++i)
                for (std::size_t j = 0; j < V; ++j)
                    g[b.row * W + i][b.col * V + j] = b.c1 * p_.S1[i][j] + b.c2 * p_.S2[i][j];
        return exact_rank(std::move(g));
    }

private:
    struct Reduced {
        ModularField field;
        ModMatrix s1, s2;
    };
    const Pencil& p_;
    std::vector<Reduced> reduced_;
};

// Minimal indices of the decreasing blocks: polynomial kernel vectors of degree d.
std::vector<int> minimal_indices(const Pencil& p, std::size_t count) {
    std::vector<int> out;
    if (count == 0) return out;
    RankOracle oracle(p);
    long prev1 = 0, prev2 = 0;  // n_{d-1}, n_{d-2}
    for (std::size_t d = 0; d <= p.dimW + 1 && out.size() < count; ++d) {
        std::vector<BlockEntry> blocks;
        for (std::size_t c = 0; c <= d; ++c) {
            blocks.push_back({c, c, Gaussian(0), Gaussian(1)});
            blocks.push_back({c + 1, c, Gaussian(1), Gaussian(0)});
        }
        long cols = static_cast<long>((d + 1) * p.dimV);
        long nd = cols - static_cast<long>(oracle.rank(d + 2, d + 1, blocks));
        long exact_d = nd - 2 * prev1 + prev2;
        for (long k = 0; k < exact_d; ++k) out.push_back(static_cast<int>(d));
        prev2 = prev1;
        prev1 = nd;
    }
    if (out.size() != count) throw std::runtime_error("Kronecker index computation did not close");
    return out;
}

// Sizes of Jordan blocks at mu from nullities of the chain matrices T_k(mu).
std::vector<int> jordan_sizes_exact(const Pencil& p, const Gaussian& mu, std::size_t n_minus) {
    RankOracle oracle(p);
    std::vector<long> at_least;  // number of blocks of size >= k
    long prev = 0;
    for (std::size_t k = 1; k <= p.dimV + 1; ++k) {
        std::vector<BlockEntry> blocks;
        for (std::size_t c = 0; c < k; ++c) {
            blocks.push_back({c, c, -mu, Gaussian(1)});
            if (c + 1 < k) blocks.push_back({c + 1, c, Gaussian(-1), Gaussian(0)});
        }
        long nk = static_cast<long>(k * p.dimV) - static_cast<long>(oracle.rank(k, k, blocks));
        long ck = nk - prev - static_cast<long>(n_minus);
        prev = nk;
        if (ck <= 0) break;
        at_least.push_back(ck);
    }
    std::vector<int> sizes;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
        long next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        for (long t = 0; t < at_least[k] - next; ++t) sizes.push_back(static_cast<int>(k + 1));
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    return sizes;
}

std::size_t numeric_rank(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    double tol = 1e-8 * std::max(1.0, sv(0));
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++r;
    return r;
}

std::vector<int> jordan_sizes_numeric(const Pencil& p, std::complex<double> mu, std::size_t n_minus) {
    const Eigen::Index W = static_cast<Eigen::Index>(p.dimW), V = static_cast<Eigen::Index>(p.dimV);
    Eigen::MatrixXcd s1(W, V), s2(W, V);
    for (Eigen::Index i = 0; i < W; ++i)
        for (Eigen::Index j = 0; j < V; ++j) {
            s1(i, j) = p.S1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].approx();
            s2(i, j) = p.S2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].approx();
        }
    std::vector<long> at_least;
    long prev = 0;
    for (Eigen::Index k = 1; k <= V + 1; ++k) {
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(k * W, k * V);
        for (Eigen::Index c = 0; c < k; ++c) {
            t.block(c * W, c * V, W, V) = s2 - mu * s1;
            if (c + 1 < k) t.block((c + 1) * W, c * V, W, V) = -s1;
        }
        long nk = static_cast<long>(k * V) - static_cast<long>(numeric_rank(t));
        long ck = nk - prev - static_cast<long>(n_minus);
        prev = nk;
        if (ck <= 0) break;
        at_least.push_back(ck);
    }
    std::vector<int> sizes;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
        long next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        for (long t = 0; t < at_least[k] - next; ++t) sizes.push_back(static_cast<int>(k + 1));
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    return sizes;
}

// gcd over random compressions det(A (S2 - t S1) B) of the r x r minors.
GPoly eigenvalue_polynomial(const Pencil& p, std::size_t r) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long> pick(-3, 3);
    GPoly g;
    int combos = 0;
    for (int attempt = 0; attempt < 12 && combos < 2; ++attempt) {
        GMatrix a = zero_matrix(r, p.dimW), b = zero_matrix(p.dimV, r);
        for (auto& row : a)
            for (auto& x : row) x = Gaussian(pick(rng));
        for (auto& row : b)
            for (auto& x : row) x = Gaussian(pick(rng));
        GMatrix m1 = mat_mul(mat_mul(a, p.S1), b), m2 = mat_mul(mat_mul(a, p.S2), b);
        std::vector<Gaussian> xs, ys;
        for (std::size_t k = 0; k <= r; ++k) {
            Gaussian t(static_cast<long>(k));
            xs.push_back(t);
            ys.push_back(exact_determinant(mat_add(m2, m1, -t)));
        }
        GPoly d = interpolate(xs, ys);
        if (d.is_zero()) continue;
        g = combos == 0 ? d.monic() : gcd(g, d);
        ++combos;
        if (g.degree() == 0) break;
    }
    if (combos == 0) throw std::runtime_error("could not compress the pencil to a regular square pencil");
    return g;
}

struct Roots {
    std::vector<Gaussian> exact;
    std::vector<std::complex<double>> algebraic;
    int algebraic_degree = 0;
};

Roots find_roots(GPoly g) {
    Roots out;
    if (g.degree() < 1) return out;
    GPoly h = divmod(g, gcd(g, g.derivative())).first.monic();
    for (const auto& z : numeric_roots(h)) {
        if (h.degree() < 1) break;
        auto re = convergents(z.real(), 10000000);
        auto im = convergents(z.imag(), 10000000);
        if (std::fabs(static_cast<double>(z.imag())) < 1e-12) im = {mpq_class(0)};
        bool found = false;
        // Later convergents are closer; try them first.
        for (auto i = re.rbegin(); i != re.rend() && !found; ++i)
            for (auto j = im.rbegin(); j != im.rend() && !found; ++j) {
                Gaussian q(*i, *j);
                if (h(q).is_zero()) {
                    out.exact.push_back(q);
                    h = divmod(h, GPoly(std::vector<Gaussian>{-q, Gaussian(1)})).first;
                    found = true;
                }
            }
        if (!found && std::fabs(static_cast<double>(z.imag())) < 1e-9) {
            // Real rational roots whose imaginary part came out as noise.
            for (auto i = re.rbegin(); i != re.rend() && !found; ++i) {
                Gaussian q(*i);
                if (h(q).is_zero()) {
                    out.exact.push_back(q);
                    h = divmod(h, GPoly(std::vector<Gaussian>{-q, Gaussian(1)})).first;
                    found = true;
                }
            }
        }
    }
    if (h.degree() >= 1) {
        out.algebraic_degree = h.degree();
        for (const auto& z : numeric_roots(h)) out.algebraic.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return out;
}

}  // namespace

BlockStructure block_structure(const Pencil& p) {
    BlockStructure s;
    if (p.dimV == 0 && p.dimW == 0) return s;
    const std::size_t r = generic_rank(p);
    const std::size_t n_minus = p.dimV - r, n_plus = p.dimW - r;
    s.kronecker_minus = minimal_indices(p, n_minus);
    s.kronecker_plus = minimal_indices(p.transposed(), n_plus);
    if (r > 0) {
        Roots roots = find_roots(eigenvalue_polynomial(p, r));
        for (const auto& mu : roots.exact) {
            auto sizes = jordan_sizes_exact(p, mu, n_minus);
            if (!sizes.empty()) s.jordan.push_back({Eigenvalue::finite(mu), sizes});
        }
        for (const auto& z : roots.algebraic) {
            auto sizes = jordan_sizes_numeric(p, z, n_minus);
            if (sizes.empty()) continue;
            Eigenvalue e;
            e.kind = Eigenvalue::Kind::Algebraic;
            e.approx = z;
            e.degree = roots.algebraic_degree;
            s.jordan.push_back({e, sizes});
        }
        if (fast_rank(p.S1) < r) {
            auto sizes = jordan_sizes_exact(p.swapped(), Gaussian(0), n_minus);
            if (!sizes.empty()) s.jordan.push_back({Eigenvalue::infinite(), sizes});
        }
    }
    s.normalize();
    if (s.dim_v() != p.dimV || s.dim_w() != p.dimW)
        throw std::runtime_error("block inventory " + s.str() + " does not match the pencil shape");
    return s;
}

}  // namespace kronweb
