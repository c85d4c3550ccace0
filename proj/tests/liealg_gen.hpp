#pragma once

#include "kronweb/liealg.hpp"

#include <random>

namespace kwtest {

using kronweb::LieAlgebra;
using kronweb::PartialOp;
using kronweb::QMat;
using kronweb::QVec;

inline long pick(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline QMat random_invertible(std::mt19937_64& rng, std::size_t n) {
    QMat l = kronweb::q_identity(n), u = kronweb::q_identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l[i][j] = pick(rng, -1, 1);
            u[j][i] = pick(rng, -1, 1);
        }
    return kronweb::q_mul(l, u);
}

inline QMat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo = -2, long hi = 2) {
    QMat m = kronweb::q_zero(r, c);
    for (auto& row : m)
        for (auto& x : row) x = pick(rng, lo, hi);
    return m;
}

// Direct sum of small named algebras in a random basis, dimension 2..6.
inline LieAlgebra random_algebra(std::mt19937_64& rng) {
    LieAlgebra g = LieAlgebra::abelian(0);
    for (int attempt = 0; attempt < 6; ++attempt) {
        LieAlgebra piece;
        switch (pick(rng, 0, 5)) {
            case 0: piece = LieAlgebra::so3(); break;
            case 1: piece = LieAlgebra::sl2(); break;
            case 2: piece = LieAlgebra::heisenberg(); break;
            case 3: piece = LieAlgebra::aff1(); break;
            case 4: piece = LieAlgebra::abelian(1); break;
            default: piece = LieAlgebra::gl(2); break;
        }
        if (g.dim() + piece.dim() <= 6) g = LieAlgebra::direct_sum(g, piece);
        if (g.dim() >= 2 && pick(rng, 0, 2) == 0) break;
    }
    if (g.dim() < 2) g = LieAlgebra::direct_sum(g, LieAlgebra::aff1());
    return g.change_basis(random_invertible(rng, g.dim()));
}

// Subalgebra generated by a few random vectors, as independent columns.
inline QMat random_subalgebra(std::mt19937_64& rng, const LieAlgebra& g) {
    const std::size_t n = g.dim();
    std::vector<QVec> span;
    auto try_add = [&](const QVec& v) {
        std::vector<QVec> cand = span;
        cand.push_back(v);
        QMat m = kronweb::q_zero(n, cand.size());
        for (std::size_t j = 0; j < cand.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) m[i][j] = cand[j][i];
        if (kronweb::q_rank(m) == cand.size()) span = cand;
    };
    long gens = pick(rng, 1, 3);
    for (long k = 0; k < gens; ++k) {
        QVec v(n, 0);
        for (auto& x : v) x = pick(rng, 0, 3) == 0 ? pick(rng, -2, 2) : 0;
        v[static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 1))] = 1;
        try_add(v);
    }
    for (bool grown = true; grown;) {
        grown = false;
        std::size_t before = span.size();
        for (std::size_t i = 0; i < before; ++i)
            for (std::size_t j = i + 1; j < before; ++j) try_add(g.bracket(span[i], span[j]));
        grown = span.size() != before;
    }
    QMat m = kronweb::q_zero(n, span.size());
    for (std::size_t j = 0; j < span.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m[i][j] = span[j][i];
    return m;
}

// Mix of operators: arbitrary, scalar, h-preserving, and full-domain Nijenhuis-like ones.
inline PartialOp random_partial_op(std::mt19937_64& rng, const LieAlgebra& g) {
    QMat inc = random_subalgebra(rng, g);
    const std::size_t n = g.dim(), k = inc.empty() ? 0 : inc[0].size();
    PartialOp p{inc, kronweb::q_zero(n, k)};
    switch (pick(rng, 0, 4)) {
        case 0: p.N = random_matrix(rng, n, k); break;
        case 1: {
            mpq_class lam(pick(rng, -3, 3), pick(rng, 1, 3));
            lam.canonicalize();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < k; ++j) p.N[i][j] = lam * inc[i][j];
            break;
        }
        case 2: p.N = kronweb::q_mul(inc, random_matrix(rng, k, k, -1, 1)); break;
        case 3: break;
        default: {
            // Scalar plus a map into a random central-ish direction.
            p.N = kronweb::q_mul(inc, kronweb::q_identity(k));
            QMat r = random_matrix(rng, n, 1, -1, 1), row = random_matrix(rng, 1, k, -1, 1);
            QMat add = kronweb::q_mul(r, row);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < k; ++j) p.N[i][j] += add[i][j];
            break;
        }
    }
    return p;
}

inline QMat random_symmetric(std::mt19937_64& rng, std::size_t n) {
    QMat a = kronweb::q_zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a[i][j] = a[j][i] = pick(rng, -3, 3);
    return a;
}

}  // namespace kwtest
