#include "kronweb/poisson.hpp"

#include <random>

namespace kronweb {

namespace {

ZeroVerdict proven(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

void check_shape(const AlgebroidData& a) {
    const std::size_t r = a.rank, n = a.base.dim();
    if (a.anchor.size() != r) throw PoissonError("anchor needs one row per basis section");
    for (const auto& row : a.anchor)
        if (row.size() != n) throw PoissonError("anchor rows must have the base dimension");
    if (a.c.size() != r) throw PoissonError("structure functions need rank x rank x rank entries");
    for (const auto& ck : a.c) {
        if (ck.size() != r) throw PoissonError("structure functions need rank x rank x rank entries");
        for (const auto& ckl : ck)
            if (ckl.size() != r) throw PoissonError("structure functions need rank x rank x rank entries");
    }
}

// rho(e_i) applied to a function.
Scalar anchor_apply(const AlgebroidData& a, std::size_t i, const Scalar& f) {
    Scalar out(0);
    for (std::size_t j = 0; j < a.base.dim(); ++j)
        if (!a.anchor[i][j].is_zero()) out += a.anchor[i][j] * partial(f, a.base, j);
    return out;
}

void note(ZeroVerdict& v, const std::string& what) { v.note = what + (v.note.empty() ? "" : "; " + v.note); }

}  // namespace

AlgebroidData AlgebroidData::zero(const Chart& base, std::size_t rank) {
    AlgebroidData a;
    a.base = base;
    a.rank = rank;
    a.anchor.assign(rank, std::vector<Scalar>(base.dim(), Scalar(0)));
    a.c.assign(rank, std::vector<std::vector<Scalar>>(rank, std::vector<Scalar>(rank, Scalar(0))));
    return a;
}

ZeroVerdict check_algebroid(const AlgebroidData& a, const ZeroPolicy& policy) {
    check_shape(a);
    const std::size_t r = a.rank;
    ZeroVerdict acc = proven(policy);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
            auto v = zero_test(a.c[k][l][0] + a.c[l][k][0], policy);
            for (std::size_t m = 1; m < r; ++m) merge_verdict(v, zero_test(a.c[k][l][m] + a.c[l][k][m], policy));
            if (!v.zero()) {
                note(v, "antisymmetry of c");
                return v;
            }
        }
    // [rho e_k, rho e_l] = c^m_kl rho e_m
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l) {
            VectorField x(a.base, a.anchor[k]), y(a.base, a.anchor[l]);
            auto d = lie_bracket(x, y);
            for (std::size_t m = 0; m < r; ++m) d = d - a.c[k][l][m] * VectorField(a.base, a.anchor[m]);
            auto v = zero_test(d, policy);
            note(v, "anchor homomorphism on (" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")");
            merge_verdict(acc, v);
            if (!v.zero()) return acc;
        }
    // Cyclic sum of [[e_k, e_l], e_p] = c^m_kl c^q_mp e_q - (rho(e_p) c^q_kl) e_q.
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l)
            for (std::size_t p = l + 1; p < r; ++p) {
                const std::size_t t[3][3] = {{k, l, p}, {l, p, k}, {p, k, l}};
                for (std::size_t q = 0; q < r; ++q) {
                    Scalar s(0);
                    for (const auto& tr : t) {
                        for (std::size_t m = 0; m < r; ++m) s += a.c[tr[0]][tr[1]][m] * a.c[m][tr[2]][q];
                        s -= anchor_apply(a, tr[2], a.c[tr[0]][tr[1]][q]);
                    }
                    auto v = zero_test(s, policy);
                    note(v, "Jacobi on (" + std::to_string(k + 1) + "," + std::to_string(l + 1) + "," + std::to_string(p + 1) + ")");
                    merge_verdict(acc, v);
                    if (!v.zero()) return acc;
                }
            }
    return acc;
}

PoissonBivector::PoissonBivector(Chart chart) : chart_(std::move(chart)) {}

Scalar PoissonBivector::at(std::size_t i, std::size_t j) const {
    if (i == j) return Scalar(0);
    auto it = c_.find({std::min(i, j), std::max(i, j)});
    if (it == c_.end()) return Scalar(0);
    return i < j ? it->second : -it->second;
}

void PoissonBivector::set(std::size_t i, std::size_t j, const Scalar& v) {
    if (i == j) {
        if (!v.is_zero()) throw PoissonError("bivector diagonal must vanish");
        return;
    }
    if (i >= dim() || j >= dim()) throw PoissonError("bivector index out of range");
    Scalar w = i < j ? v : -v;
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    if (w.is_zero())
        c_.erase(key);
    else
        c_[key] = w;
}

Scalar PoissonBivector::bracket(const Scalar& f, const Scalar& g) const {
    Scalar out(0);
    for (const auto& [ij, v] : c_) {
        auto [i, j] = ij;
        out += v * (partial(f, chart_, i) * partial(g, chart_, j) - partial(f, chart_, j) * partial(g, chart_, i));
    }
    return out;
}

PoissonBivector operator+(const PoissonBivector& a, const PoissonBivector& b) {
    if (a.chart_ != b.chart_) throw PoissonError("chart mismatch");
    PoissonBivector out = a;
    for (const auto& [ij, v] : b.c_) out.set(ij.first, ij.second, out.at(ij.first, ij.second) + v);
    return out;
}

PoissonBivector operator*(const Scalar& s, const PoissonBivector& a) {
    PoissonBivector out(a.chart_);
    for (const auto& [ij, v] : a.c_) out.set(ij.first, ij.second, s * v);
    return out;
}

bool operator==(const PoissonBivector& a, const PoissonBivector& b) { return a.chart_ == b.chart_ && a.c_ == b.c_; }

Chart dual_bundle_chart(const Chart& base, std::size_t rank, const std::string& fiber_prefix) {
    VarList names = base.names();
    for (std::size_t k = 0; k < rank; ++k) names.push_back(fiber_prefix + std::to_string(k + 1));
    return Chart(names);
}

PoissonBivector linear_poisson(const AlgebroidData& a) {
    check_shape(a);
    const std::size_t n = a.base.dim(), r = a.rank;
    auto chart = dual_bundle_chart(a.base, r);
    PoissonBivector p(chart);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!a.anchor[i][j].is_zero()) p.set(n + i, j, -a.anchor[i][j]);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l) {
            Scalar v(0);
            for (std::size_t m = 0; m < r; ++m) v -= a.c[k][l][m] * chart.coordinate(n + m);
            p.set(n + k, n + l, v);
        }
    return p;
}

std::vector<Scalar> jacobiator(const PoissonBivector& p) {
    const std::size_t N = p.dim();
    // Cache the derivatives d_l pi^{jk}.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Scalar>> d;
    for (const auto& [ij, v] : p.components()) {
        std::vector<Scalar> g;
        for (std::size_t l = 0; l < N; ++l) g.push_back(partial(v, p.chart(), l));
        d[ij] = g;
    }
    auto dpi = [&](std::size_t l, std::size_t j, std::size_t k) -> Scalar {
        if (j == k) return Scalar(0);
        auto it = d.find({std::min(j, k), std::max(j, k)});
        if (it == d.end()) return Scalar(0);
        return j < k ? it->second[l] : -it->second[l];
    };
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (std::size_t k = j + 1; k < N; ++k) {
                Scalar s(0);
                for (std::size_t l = 0; l < N; ++l) {
                    Scalar a = p.at(i, l), b = p.at(j, l), c = p.at(k, l);
                    if (!a.is_zero()) s += a * dpi(l, j, k);
                    if (!b.is_zero()) s += b * dpi(l, k, i);
                    if (!c.is_zero()) s += c * dpi(l, i, j);
                }
                out.push_back(s);
            }
    return out;
}

ZeroVerdict check_jacobi(const PoissonBivector& p, const ZeroPolicy& policy) {
    ZeroVerdict acc = proven(policy);
    for (const auto& s : jacobiator(p)) merge_verdict(acc, zero_test(s, policy));
    return acc;
}

ZeroVerdict check_compatibility(const PoissonBivector& a, const PoissonBivector& b, const ZeroPolicy& policy) {
    if (a.chart() != b.chart()) throw PoissonError("chart mismatch");
    auto js = jacobiator(a + b), ja = jacobiator(a), jb = jacobiator(b);
    ZeroVerdict acc = proven(policy);
    for (std::size_t i = 0; i < js.size(); ++i) merge_verdict(acc, zero_test(js[i] - ja[i] - jb[i], policy));
    return acc;
}

std::pair<AlgebroidData, AlgebroidData> pno_algebroids(const GeometricPNO& p, const ZeroPolicy& policy) {
    const std::size_t r = p.rank();
    AlgebroidData a1 = AlgebroidData::zero(p.chart, r), a2 = AlgebroidData::zero(p.chart, r);
    for (std::size_t i = 0; i < r; ++i) {
        a1.anchor[i] = p.fields[i].components();
        a2.anchor[i] = p.images[i].components();
    }
    auto expand = [&](const VectorField& v, const char* what) {
        auto m = span_membership(p.fields, v, policy);
        if (!m.zero()) throw PoissonError(std::string(what) + " does not expand in the spanning fields: " + m.describe());
        return span_coefficients(p.fields, v, policy);
    };
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k + 1; l < r; ++l) {
            auto c1 = expand(lie_bracket(p.fields[k], p.fields[l]), "bracket of spanning fields");
            // [Z_k, Z_l]_N = [N Z_k, Z_l] + [Z_k, N Z_l] - N [Z_k, Z_l]
            auto bn = lie_bracket(p.images[k], p.fields[l]) + lie_bracket(p.fields[k], p.images[l]) - p.apply(c1);
            auto c2 = expand(bn, "deformed bracket");
            for (std::size_t m = 0; m < r; ++m) {
                a1.c[k][l][m] = c1[m];
                a1.c[l][k][m] = -c1[m];
                a2.c[k][l][m] = c2[m];
                a2.c[l][k][m] = -c2[m];
            }
        }
    return {a1, a2};
}

std::pair<PoissonBivector, PoissonBivector> up_construction(const GeometricPNO& p, const ZeroPolicy& policy) {
    PnoVerdict v;
    try {
        v = is_geometric_pno(p, policy);
    } catch (const NijenhuisError& e) {
        throw PoissonError(std::string("not a PNO: ") + e.what());
    }
    if (!v.ok) throw PoissonError("not a PNO: " + v.reason);
    auto [a1, a2] = pno_algebroids(p, policy);
    return {linear_poisson(a1), linear_poisson(a2)};
}

std::pair<PoissonBivector, PoissonBivector> cotangent_lift(const OneOneTensor& n, const ZeroPolicy& policy) {
    auto t = is_nijenhuis(n, policy);
    if (!t.zero()) throw PoissonError("torsion does not vanish: " + t.describe());
    const auto& c = n.chart();
    const std::size_t d = c.dim();
    const auto& m = n.matrix();
    AlgebroidData a1 = AlgebroidData::zero(c, d), a2 = AlgebroidData::zero(c, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            a1.anchor[i][j] = Scalar(i == j ? 1 : 0);
            a2.anchor[i][j] = m[j][i];
        }
    // [d_k, d_l]_N has components d_k N^m_l - d_l N^m_k.
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t q = 0; q < d; ++q) a2.c[k][l][q] = partial(m[q][l], c, k) - partial(m[q][k], c, l);
    return {linear_poisson(a1), linear_poisson(a2)};
}

GMatrix bivector_matrix(const PoissonBivector& p, const std::vector<mpq_class>& point) {
    const std::size_t N = p.dim();
    if (point.size() != N) throw PoissonError("point has the wrong dimension");
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < N; ++i) at[p.chart().id(i)] = point[i];
    GMatrix m = zero_matrix(N, N);
    for (const auto& [ij, v] : p.components()) {
        mpq_class x;
        try {
            x = v.evaluate_exact(at);
        } catch (const EvalError& e) {
            throw PoissonError(std::string("bivector has no exact value at the point: ") + e.what());
        }
        m[ij.first][ij.second] = Gaussian(x);
        m[ij.second][ij.first] = Gaussian(mpq_class(-x));
    }
    return m;
}

BlockStructure pointwise_classification(const PoissonBivector& a, const PoissonBivector& b, const std::vector<mpq_class>& point) {
    if (a.chart() != b.chart()) throw PoissonError("chart mismatch");
    const std::size_t N = a.dim();
    return block_structure(Pencil(bivector_matrix(a, point), bivector_matrix(b, point), N, N));
}

std::vector<std::vector<mpq_class>> bilagrangian_at(const PoissonBivector& a, const PoissonBivector& b,
                                                    const std::vector<mpq_class>& point, std::uint64_t seed) {
    if (a.chart() != b.chart()) throw PoissonError("chart mismatch");
    const std::size_t N = a.dim();
    auto ma = bivector_matrix(a, point), mb = bivector_matrix(b, point);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> d(-50, 50);
    std::vector<GMatrix> members;
    std::size_t best = 0;
    for (int tries = 0; members.size() < N + 1 && tries < 50 * static_cast<int>(N + 1); ++tries) {
        Gaussian l1(d(rng)), l2(d(rng));
        if (l1 == Gaussian(0) && l2 == Gaussian(0)) continue;
        GMatrix m = zero_matrix(N, N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m[i][j] = l1 * ma[i][j] + l2 * mb[i][j];
        std::size_t r = exact_rank(m);
        if (r > best) {
            best = r;
            members.clear();
        }
        if (r == best) members.push_back(m);
    }
    // Images of skew matrices are annihilated by their kernels.
    GMatrix annihilators;
    for (const auto& m : members) {
        auto k = kernel(m);
        const std::size_t cols = k.empty() ? 0 : k[0].size();
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<Gaussian> row(N);
            for (std::size_t i = 0; i < N; ++i) row[i] = k[i][j];
            annihilators.push_back(row);
        }
    }
    std::vector<std::vector<mpq_class>> out;
    if (annihilators.empty()) {
        for (std::size_t j = 0; j < N; ++j) {
            std::vector<mpq_class> e(N, 0);
            e[j] = 1;
            out.push_back(e);
        }
        return out;
    }
    auto k = kernel(annihilators);
    const std::size_t cols = k.empty() ? 0 : k[0].size();
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<mpq_class> v(N);
        for (std::size_t i = 0; i < N; ++i) v[i] = k[i][j].re;
        out.push_back(v);
    }
    return out;
}

AlgebroidData algebroid_from_poisson(const PoissonBivector& p, const ZeroPolicy& policy) {
    auto j = check_jacobi(p, policy);
    if (!j.zero()) throw PoissonError("Jacobi identity fails: " + j.describe());
    const std::size_t n = p.dim();
    AlgebroidData a = AlgebroidData::zero(p.chart(), n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            a.anchor[k][l] = p.at(k, l);
            for (std::size_t m = 0; m < n; ++m) a.c[k][l][m] = partial(p.at(k, l), p.chart(), m);
        }
    return a;
}

AlgebroidData combine_algebroids(const AlgebroidData& a, const AlgebroidData& b, const Scalar& l1, const Scalar& l2) {
    check_shape(a);
    check_shape(b);
    if (a.base != b.base || a.rank != b.rank) throw PoissonError("algebroids live on different bundles");
    AlgebroidData out = AlgebroidData::zero(a.base, a.rank);
    for (std::size_t i = 0; i < a.rank; ++i)
        for (std::size_t j = 0; j < a.base.dim(); ++j) out.anchor[i][j] = l1 * a.anchor[i][j] + l2 * b.anchor[i][j];
    for (std::size_t k = 0; k < a.rank; ++k)
        for (std::size_t l = 0; l < a.rank; ++l)
            for (std::size_t m = 0; m < a.rank; ++m) out.c[k][l][m] = l1 * a.c[k][l][m] + l2 * b.c[k][l][m];
    return out;
}

}  // namespace kronweb
