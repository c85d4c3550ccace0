#include "kronweb/pencil.hpp"

namespace kronweb {

namespace {

void place(GMatrix& m, std::size_t r0, std::size_t c0, const GMatrix& b) {
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b[i].size(); ++j) m[r0 + i][c0 + j] = b[i][j];
}

// Unit lower times unit upper triangular with small integer entries.
GMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> pick(-2, 2);
    GMatrix l = identity_matrix(n), u = identity_matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l[i][j] = Gaussian(pick(rng));
            u[j][i] = Gaussian(pick(rng));
        }
    return mat_mul(l, u);
}

}  // namespace

Pencil block_template_pencil(const BlockStructure& s) {
    const std::size_t W = s.dim_w(), V = s.dim_v();
    GMatrix s1 = zero_matrix(W, V), s2 = zero_matrix(W, V);
    std::size_t r = 0, c = 0;
    for (int k : s.kronecker_plus) {
        auto n = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < n; ++i) {
            s1[r + i][c + i] = Gaussian(1);
            s2[r + i + 1][c + i] = Gaussian(1);
        }
        r += n + 1;
        c += n;
    }
    for (int k : s.kronecker_minus) {
        auto n = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < n; ++i) {
            s1[r + i][c + i] = Gaussian(1);
            s2[r + i][c + i + 1] = Gaussian(1);
        }
        r += n;
        c += n + 1;
    }
    for (const auto& j : s.jordan) {
        if (j.eigenvalue.kind == Eigenvalue::Kind::Algebraic)
            throw std::invalid_argument("cannot synthesize a block for a non-exact eigenvalue");
        bool inf = j.eigenvalue.kind == Eigenvalue::Kind::Infinite;
        for (int size : j.sizes) {
            auto n = static_cast<std::size_t>(size);
            GMatrix a = identity_matrix(n), b = zero_matrix(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                if (!inf) b[i][i] = j.eigenvalue.value;
                if (i + 1 < n) b[i][i + 1] = Gaussian(1);
            }
            // Finite: S1 = I, S2 = J(mu). Infinite: S1 = J(0), S2 = I.
            place(s1, r, c, inf ? b : a);
            place(s2, r, c, inf ? a : b);
            r += n;
            c += n;
        }
    }
    return Pencil(s1, s2, W, V);
}

Pencil synthesize_pencil(const BlockStructure& s, std::uint64_t seed) {
    Pencil t = block_template_pencil(s);
    std::mt19937_64 rng(seed);
    GMatrix g = random_invertible(t.dimW, rng), h = random_invertible(t.dimV, rng);
    return Pencil(mat_mul(mat_mul(g, t.S1), h), mat_mul(mat_mul(g, t.S2), h), t.dimW, t.dimV);
}

BlockStructure random_block_structure(std::mt19937_64& rng, std::size_t max_dim, bool gaussian) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    static const long nums[] = {0, 1, -1, 2, -3, 5, 1, -2};
    static const long dens[] = {1, 1, 1, 2, 3, 1, 4, 5};
    BlockStructure s;
    int blocks = pick(1, 5);
    for (int b = 0; b < blocks; ++b) {
        BlockStructure trial = s;
        int type = pick(0, 3);
        if (type == 0) {
            trial.kronecker_plus.push_back(pick(0, 3));
        } else if (type == 1) {
            trial.kronecker_minus.push_back(pick(0, 3));
        } else {
            Eigenvalue e;
            if (pick(0, 4) == 0) {
                e = Eigenvalue::infinite();
            } else {
                int k = pick(0, 7);
                mpq_class q(nums[k], dens[k]);
                q.canonicalize();
                Gaussian g(q);
                if (gaussian && pick(0, 2) == 0) g.im = pick(1, 2);
                e = Eigenvalue::finite(g);
            }
            trial.jordan.push_back({e, {pick(1, 3)}});
        }
        trial.normalize();
        if (std::max(trial.dim_v(), trial.dim_w()) <= max_dim) s = trial;
    }
    s.normalize();
    return s;
}

}  // namespace kronweb
