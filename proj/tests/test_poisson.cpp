#include "doctest.h"
#include "kronweb/pde.hpp"
#include "kronweb/poisson.hpp"

#include <random>
#include <set>

using namespace kronweb;

namespace {

Scalar sym(const std::string& name) { return Scalar::symbol(intern_variable(name)); }

AlgebroidData so3_point_algebroid() {
    auto a = AlgebroidData::zero(Chart(VarList{}), 3);
    // [e1,e2] = e3 and cyclic
    const std::size_t t[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& r : t) {
        a.c[r[0]][r[1]][r[2]] = Scalar(1);
        a.c[r[1]][r[0]][r[2]] = Scalar(-1);
    }
    return a;
}

// Lie-Poisson bivector of so(3) on R^3: {x1,x2} = x3 and cyclic.
PoissonBivector so3_lie_poisson() {
    auto c = Chart::standard(3);
    PoissonBivector p(c);
    p.set(0, 1, c.coordinate(2));
    p.set(1, 2, c.coordinate(0));
    p.set(2, 0, c.coordinate(1));
    return p;
}

// {f,{g,h}} + cyclic through the bracket only.
Scalar jacobi_by_brackets(const PoissonBivector& p, const Scalar& f, const Scalar& g, const Scalar& h) {
    return p.bracket(f, p.bracket(g, h)) + p.bracket(g, p.bracket(h, f)) + p.bracket(h, p.bracket(f, g));
}

bool jacobi_oracle_zero(const PoissonBivector& p) {
    const auto& c = p.chart();
    for (std::size_t i = 0; i < c.dim(); ++i)
        for (std::size_t j = i + 1; j < c.dim(); ++j)
            for (std::size_t k = j + 1; k < c.dim(); ++k)
                if (!jacobi_by_brackets(p, c.coordinate(i), c.coordinate(j), c.coordinate(k)).is_zero()) return false;
    return true;
}

Scalar random_poly(std::mt19937_64& rng, const Chart& c, int terms, int max_power) {
    std::uniform_int_distribution<int> coef(-3, 3), pw(0, max_power);
    Scalar out(0);
    for (int t = 0; t < terms; ++t) {
        Scalar m(coef(rng));
        for (std::size_t i = 0; i < c.dim(); ++i) m *= c.coordinate(i).pow(pw(rng));
        out += m;
    }
    return out;
}

// pi^{ij} = f eps^{ijk} d_k g is Poisson on R^3 for any f, g.
PoissonBivector casimir_bivector(const Chart& c, const Scalar& f, const Scalar& g) {
    PoissonBivector p(c);
    p.set(0, 1, f * partial(g, c, 2));
    p.set(1, 2, f * partial(g, c, 0));
    p.set(2, 0, f * partial(g, c, 1));
    return p;
}

GeometricPNO rank_one_pno() {
    auto c = Chart::standard(3);
    return GeometricPNO{c, {VectorField::coordinate(c, 0)}, {VectorField::coordinate(c, 1)}};
}

GeometricPNO flat_web_pno() { return pno_from_web(flat_web(2)); }

GeometricPNO hirota_web_pno() {
    auto eq = make_equation("A3", {1, 2, 3});
    return pno_from_web(veronese_web_from_solution(eq, parse_solution(eq, {"x1*x2*x3"})));
}

std::map<SymId, mpq_class> exact_point(const Chart& c, const std::vector<mpq_class>& x) {
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < c.dim(); ++i) at[c.id(i)] = x[i];
    return at;
}

std::vector<mpq_class> random_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long> d(-9, 9), q(1, 4);
    std::vector<mpq_class> x;
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class v(d(rng), q(rng));
        v.canonicalize();
        x.push_back(v);
    }
    return x;
}

// Same subspace of Q^N: equal ranks and rank of the union unchanged.
bool same_span(const GMatrix& a_cols, const GMatrix& b_cols) {
    const std::size_t n = a_cols.size();
    GMatrix joined(n);
    for (std::size_t i = 0; i < n; ++i) {
        joined[i] = a_cols[i];
        joined[i].insert(joined[i].end(), b_cols[i].begin(), b_cols[i].end());
    }
    auto ra = exact_rank(a_cols), rb = exact_rank(b_cols);
    return ra == rb && exact_rank(joined) == ra;
}

GMatrix fiber_columns(std::size_t n, std::size_t r) {
    GMatrix m = zero_matrix(n + r, r);
    for (std::size_t k = 0; k < r; ++k) m[n + k][k] = Gaussian(1);
    return m;
}

GMatrix as_columns(const std::vector<std::vector<mpq_class>>& vs, std::size_t n) {
    GMatrix m = zero_matrix(n, vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m[i][j] = Gaussian(vs[j][i]);
    return m;
}

struct UpChecks {
    int points = 0;
    int kronecker = 0;
    int fiber = 0;
};

UpChecks up_pointwise(const GeometricPNO& p, const PoissonBivector& a, const PoissonBivector& b, std::uint64_t seed) {
    const std::size_t n = p.chart.dim(), r = p.rank();
    std::mt19937_64 rng(seed);
    UpChecks out;
    for (int tries = 0; out.points < 10 && tries < 100; ++tries) {
        auto x = random_point(rng, n + r);
        BlockStructure s;
        std::vector<std::vector<mpq_class>> bl;
        try {
            s = pointwise_classification(a, b, x);
            bl = bilagrangian_at(a, b, x, seed + tries);
        } catch (const PoissonError&) {
            continue;  // singular point of the frame
        }
        ++out.points;
        if (classify(s).kind == PencilKind::Kronecker) ++out.kronecker;
        if (!bl.empty() && same_span(as_columns(bl, n + r), fiber_columns(n, r))) ++out.fiber;
    }
    return out;
}

}  // namespace

TEST_CASE("linear Poisson examples") {
    auto so3 = linear_poisson(so3_point_algebroid());
    REQUIRE(so3.dim() == 3);
    CHECK(so3.chart().name(0) == "xi1");
    CHECK(so3.at(0, 1) == -sym("xi3"));
    CHECK(so3.at(1, 2) == -sym("xi1"));
    CHECK(so3.at(2, 0) == -sym("xi2"));

    auto line = Chart::standard(1);
    auto t = AlgebroidData::zero(line, 1);
    t.anchor[0][0] = Scalar(1);
    auto can = linear_poisson(t);
    CHECK(can.at(1, 0) == Scalar(-1));
    CHECK(can.components().size() == 1);
    CHECK(can.bracket(sym("xi1"), sym("x1")) == Scalar(-1));

    CHECK(linear_poisson(AlgebroidData::zero(Chart::standard(2), 2)).components().empty());

    auto bad = t;
    bad.anchor.pop_back();
    CHECK_THROWS_AS(linear_poisson(bad), PoissonError);
}

TEST_CASE("bivector storage is antisymmetric") {
    PoissonBivector p(Chart::standard(3));
    p.set(2, 0, sym("x1"));
    CHECK(p.at(0, 2) == -sym("x1"));
    CHECK(p.components().count({0, 2}) == 1);
    p.set(0, 2, Scalar(0));
    CHECK(p.components().empty());
    CHECK_THROWS_AS(p.set(1, 1, Scalar(1)), PoissonError);
    CHECK_THROWS_AS(p.set(0, 3, Scalar(1)), PoissonError);
    CHECK_NOTHROW(p.set(1, 1, Scalar(0)));
}

TEST_CASE("Jacobi verdicts") {
    CHECK(check_jacobi(linear_poisson(so3_point_algebroid())).proven());
    CHECK(check_jacobi(so3_lie_poisson()).proven());

    auto c = Chart::standard(4);
    PoissonBivector can(c);
    can.set(0, 2, Scalar(1));
    can.set(1, 3, Scalar(1));
    CHECK(check_jacobi(can).proven());

    // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e1 violates Jacobi.
    auto broken = AlgebroidData::zero(Chart(VarList{}), 3);
    auto put = [&](std::size_t k, std::size_t l, std::size_t m, long v) {
        broken.c[k][l][m] = Scalar(v);
        broken.c[l][k][m] = Scalar(-v);
    };
    put(0, 1, 2, 1);
    put(1, 2, 0, 1);
    put(2, 0, 0, 1);
    // Oracle: sum over cyclic (k,l,p) of c^m_kl c^q_mp.
    bool violated = false;
    const std::size_t cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (std::size_t q = 0; q < 3; ++q) {
        Scalar s(0);
        for (const auto& t : cyc)
            for (std::size_t m = 0; m < 3; ++m) s += broken.c[t[0]][t[1]][m] * broken.c[m][t[2]][q];
        if (!s.is_zero()) violated = true;
    }
    REQUIRE(violated);
    auto v = check_jacobi(linear_poisson(broken));
    CHECK_FALSE(v.zero());
    CHECK_FALSE(check_algebroid(broken).zero());
}

TEST_CASE("jacobiator matches the bracket oracle") {
    std::mt19937_64 rng(11);
    auto c = Chart::standard(3);
    for (int trial = 0; trial < 12; ++trial) {
        PoissonBivector p(c);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i + 1; j < 3; ++j) p.set(i, j, random_poly(rng, c, 2, 1));
        auto j = jacobiator(p);
        REQUIRE(j.size() == 1);
        CHECK(j[0] == jacobi_by_brackets(p, c.coordinate(0), c.coordinate(1), c.coordinate(2)));
        CHECK(check_jacobi(p).zero() == jacobi_oracle_zero(p));
    }
}

TEST_CASE("algebroid axioms iff Jacobi of the linear structure") {
    std::mt19937_64 rng(5);
    auto c2 = Chart::standard(2), c3 = Chart::standard(3);
    int valid = 0, broken = 0;
    for (int trial = 0; trial < 10; ++trial) {
        AlgebroidData a;
        if (trial % 2 == 0) {
            PoissonBivector p(c2);
            p.set(0, 1, random_poly(rng, c2, 3, 2));
            if (p.components().empty()) continue;
            a = algebroid_from_poisson(p);
        } else {
            auto p = casimir_bivector(c3, random_poly(rng, c3, 2, 1), random_poly(rng, c3, 3, 2));
            if (p.components().empty()) continue;
            a = algebroid_from_poisson(p);
        }
        bool ok = check_algebroid(a).zero();
        CHECK(ok);
        CHECK(check_jacobi(linear_poisson(a)).zero() == ok);
        ++valid;

        // Perturb one structure function; the anchor homomorphism then fails where the anchor has full image.
        auto b = a;
        std::uniform_int_distribution<int> pick(1, 3);
        Scalar delta(pick(rng));
        b.c[0][1][1] += delta;
        b.c[1][0][1] -= delta;
        bool bok = check_algebroid(b).zero();
        CHECK_FALSE(bok);
        CHECK(check_jacobi(linear_poisson(b)).zero() == bok);
        ++broken;

        // Break antisymmetry of the anchor data instead.
        auto d = a;
        d.anchor[0][0] += Scalar(1);
        CHECK(check_jacobi(linear_poisson(d)).zero() == check_algebroid(d).zero());
    }
    CHECK(valid >= 8);
    CHECK(broken >= 8);

    // Frames of vector fields closing under brackets.
    auto x1 = c2.coordinate(0), x2 = c2.coordinate(1);
    auto f = AlgebroidData::zero(c2, 2);
    f.anchor = {{Scalar(1), Scalar(0)}, {x2, x1 * x1}};  // d1, x2 d1 + x1^2 d2
    // [d1, x2 d1 + x1^2 d2] = 2 x1 d2 = (2/x1) (e2 - x2 e1)
    f.c[0][1] = {Scalar(-2) * x2 / x1, Scalar(2) / x1};
    f.c[1][0] = {Scalar(2) * x2 / x1, Scalar(-2) / x1};
    CHECK(check_algebroid(f).zero());
    CHECK(check_jacobi(linear_poisson(f)).zero());
    f.c[0][1][0] += Scalar(1);
    f.c[1][0][0] -= Scalar(1);
    CHECK_FALSE(check_algebroid(f).zero());
    CHECK_FALSE(check_jacobi(linear_poisson(f)).zero());
}

TEST_CASE("compatibility") {
    auto lp = so3_lie_poisson();
    CHECK(check_compatibility(lp, lp).proven());

    PoissonBivector k(lp.chart());
    k.set(0, 1, Scalar(1));
    auto v = check_compatibility(lp, k);
    // Oracle: every constant bivector is a 2-cocycle of so(3).
    CHECK(jacobi_oracle_zero(lp + k));
    CHECK(v.proven());

    PoissonBivector q(lp.chart());
    q.set(0, 1, sym("x1") * sym("x1"));
    CHECK(check_jacobi(q).proven());
    CHECK_FALSE(jacobi_oracle_zero(lp + q));
    CHECK_FALSE(check_compatibility(lp, q).zero());

    CHECK_THROWS_AS(check_compatibility(lp, PoissonBivector(Chart::standard(2))), PoissonError);
}

TEST_CASE("up construction of the rank-one operator d1 -> d2") {
    auto p = rank_one_pno();
    auto [e1, e2] = up_construction(p);
    // chart x1,x2,x3,xi1
    REQUIRE(e1.dim() == 4);
    CHECK(e1.components().size() == 1);
    CHECK(e1.at(3, 0) == Scalar(-1));
    CHECK(e2.components().size() == 1);
    CHECK(e2.at(3, 1) == Scalar(-1));
    CHECK(check_jacobi(e1).proven());
    CHECK(check_jacobi(e2).proven());
    CHECK(check_compatibility(e1, e2).proven());

    auto u = up_pointwise(p, e1, e2, 3);
    CHECK(u.points == 10);
    CHECK(u.kronecker == 10);
    CHECK(u.fiber == 10);
    auto bl = bilagrangian_at(e1, e2, {1, 2, 3, 4});
    REQUIRE(bl.size() == 1);
    CHECK(bl[0][3] != 0);
}

TEST_CASE("up construction of web PNOs") {
    for (const auto& p : {flat_web_pno(), hirota_web_pno()}) {
        auto [e1, e2] = up_construction(p);
        CHECK(check_jacobi(e1).zero());
        CHECK(check_jacobi(e2).zero());
        CHECK(check_compatibility(e1, e2).zero());
        // Fibers are isotropic: no {x_i, x_j} terms.
        for (const auto& [ij, v] : e1.components()) CHECK(ij.second >= p.chart.dim());
        for (const auto& [ij, v] : e2.components()) CHECK(ij.second >= p.chart.dim());
        auto u = up_pointwise(p, e1, e2, 17);
        CHECK(u.points == 10);
        CHECK(u.kronecker == 10);
        CHECK(u.fiber == 10);
    }
    auto [f1, f2] = up_construction(flat_web_pno());
    for (const auto& [ij, v] : f1.components()) CHECK(v.is_constant());
    for (const auto& [ij, v] : f2.components()) CHECK(v.is_constant());
}

TEST_CASE("up construction rejects non-PNO input") {
    auto c = Chart::standard(3);
    auto x1 = c.coordinate(0);
    // [d1, d2 + x1 d3] = d3 leaves the span.
    GeometricPNO p{c, {VectorField::coordinate(c, 0), VectorField(c, {Scalar(0), Scalar(1), x1})},
                   {VectorField::coordinate(c, 1), VectorField::coordinate(c, 2)}};
    CHECK_THROWS_AS(up_construction(p), PoissonError);
}

TEST_CASE("symplectic leaves project to the web foliations") {
    for (const auto& p : {flat_web_pno(), hirota_web_pno()}) {
        auto [e1, e2] = up_construction(p);
        const std::size_t n = p.chart.dim(), r = p.rank();
        std::mt19937_64 rng(23);
        int checked = 0;
        for (int tries = 0; checked < 6 && tries < 60; ++tries) {
            auto x = random_point(rng, n + r);
            mpq_class s(static_cast<long>(tries % 5) - 2);
            GMatrix m1, m2;
            GMatrix base = zero_matrix(n, r);
            try {
                m1 = bivector_matrix(e1, x);
                m2 = bivector_matrix(e2, x);
                auto at = exact_point(p.chart, x);
                for (std::size_t k = 0; k < r; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        base[i][k] = Gaussian(
                            mpq_class(p.images[k][i].evaluate_exact(at) - s * p.fields[k][i].evaluate_exact(at)));
            } catch (const std::exception&) {
                continue;
            }
            // Base rows of the image of e2 - s e1.
            GMatrix proj = zero_matrix(n, n + r);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n + r; ++j) proj[i][j] = m2[i][j] - Gaussian(s) * m1[i][j];
            CHECK(same_span(proj, base));
            ++checked;
        }
        CHECK(checked == 6);
    }
}

TEST_CASE("cotangent lift") {
    auto c = Chart::standard(3);
    RFMatrix d(3, std::vector<Scalar>(3, Scalar(0)));
    d[0][0] = Scalar(1);
    d[1][1] = Scalar(2);
    d[2][2] = Scalar(3);
    OneOneTensor diag(c, d);
    auto [h1, h2] = cotangent_lift(diag);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(h1.at(3 + i, i) == Scalar(-1));
        CHECK(h2.at(3 + i, i) == Scalar(-static_cast<long>(i + 1)));
    }
    CHECK(h2.components().size() == 3);
    CHECK(check_compatibility(h1, h2).proven());

    auto s = pointwise_classification(h1, h2, {1, 2, 3, 4, 5, 6});
    CHECK(classify(s).kind == PencilKind::Jordan);
    CHECK(s.jordan_dimension() == 6);
    std::set<long> eig;
    for (const auto& j : s.jordan) {
        REQUIRE(j.eigenvalue.kind == Eigenvalue::Kind::Finite);
        CHECK(j.sizes == std::vector<int>{1, 1});
        eig.insert(j.eigenvalue.value.re.get_num().get_si());
    }
    CHECK(eig == std::set<long>{1, 2, 3});

    auto [i1, i2] = cotangent_lift(OneOneTensor::identity(c));
    CHECK(i1 == i2);

    auto c0 = normal_form("C0", 'N', {1, 2, 3});
    auto [n1, n2] = cotangent_lift(c0);
    CHECK(check_jacobi(n1).proven());
    CHECK(check_jacobi(n2).zero());
    CHECK(check_compatibility(n1, n2).zero());

    RFMatrix bad(3, std::vector<Scalar>(3, Scalar(0)));
    // diag(x2, x1, 0): an eigenvalue depending on another eigenvalue's coordinate.
    bad[0][0] = c.coordinate(1);
    bad[1][1] = c.coordinate(0);
    CHECK_THROWS_AS(cotangent_lift(OneOneTensor(c, bad)), PoissonError);
}

TEST_CASE("full-domain up construction equals the cotangent lift") {
    auto c = Chart::standard(3);
    std::vector<VectorField> frame;
    for (std::size_t i = 0; i < 3; ++i) frame.push_back(VectorField::coordinate(c, i));
    for (const auto& sym : normal_form_symbols()) {
        auto n = normal_form(sym, 'N', {1, 2, 3});
        auto up = up_construction(make_pno(n, frame));
        auto lift = cotangent_lift(n);
        CHECK_MESSAGE(up.first == lift.first, sym);
        CHECK_MESSAGE(up.second == lift.second, sym);
    }
    RFMatrix k(3, std::vector<Scalar>(3, Scalar(0)));
    k[0][0] = Scalar(2);
    k[1][1] = Scalar(-1);
    k[2][2] = Scalar(5);
    auto up = up_construction(make_pno(OneOneTensor(c, k), frame));
    auto s = pointwise_classification(up.first, up.second, {1, -1, 2, 3, 1, 7});
    CHECK(classify(s).kind == PencilKind::Jordan);
}

TEST_CASE("realization: up pair is the pushforward of the cotangent lift") {
    auto c = Chart::standard(3);
    auto x1 = c.coordinate(0);
    RFMatrix m(3, std::vector<Scalar>(3, Scalar(0)));
    m[0][0] = Scalar(1);
    m[1][0] = Scalar(1);
    m[1][1] = Scalar(2);
    m[2][2] = Scalar(3);
    OneOneTensor nbar(c, m);
    // E spanned by Z1 = d1 + x1 d3 and Z2 = d2; both are bracket closed under nbar's deformed bracket.
    std::vector<VectorField> fields{VectorField(c, {Scalar(1), Scalar(0), x1}), VectorField::coordinate(c, 1)};
    auto p = make_pno(nbar, fields);
    REQUIRE(is_geometric_pno(p).ok);
    auto up = up_construction(p);
    auto lift = cotangent_lift(nbar);
    const auto& src = lift.first.chart();   // x1..x3, xi1..xi3 (momenta p)
    const auto& dst = up.first.chart();     // x1..x3, xi1, xi2
    // Projection: x -> x, xi_k -> <p, Z_k>.
    std::vector<Scalar> phi;
    for (std::size_t i = 0; i < 3; ++i) phi.push_back(src.coordinate(i));
    for (const auto& z : fields) {
        Scalar v(0);
        for (std::size_t j = 0; j < 3; ++j) v += z[j] * src.coordinate(3 + j);
        phi.push_back(v);
    }
    std::mt19937_64 rng(29);
    for (int t = 0; t < 5; ++t) {
        auto x = random_point(rng, 6);
        auto at_src = exact_point(src, x);
        std::vector<mpq_class> y;
        for (const auto& f : phi) y.push_back(f.evaluate_exact(at_src));
        auto at_dst = exact_point(dst, y);
        for (int which = 0; which < 2; ++which) {
            const auto& ps = which == 0 ? lift.first : lift.second;
            const auto& pd = which == 0 ? up.first : up.second;
            for (std::size_t a = 0; a < dst.dim(); ++a)
                for (std::size_t b = a + 1; b < dst.dim(); ++b)
                    CHECK(ps.bracket(phi[a], phi[b]).evaluate_exact(at_src) == pd.at(a, b).evaluate_exact(at_dst));
        }
    }
}

TEST_CASE("zero second structure") {
    auto c = Chart::standard(2);
    PoissonBivector w(c), z(c);
    w.set(0, 1, Scalar(1));
    auto s = pointwise_classification(w, z, {0, 0});
    CHECK(classify(s).kind == PencilKind::Jordan);
    REQUIRE(s.jordan.size() == 1);
    CHECK(s.jordan[0].eigenvalue.kind == Eigenvalue::Kind::Finite);
    CHECK(s.jordan[0].eigenvalue.value.is_zero());
    CHECK(s.jordan_dimension() == 2);

    auto ss = pointwise_classification(z, z, {0, 0});
    CHECK(ss.jordan.empty());
    // Zero map of Q^2: two k+(0) and two k-(0).
    CHECK(ss.kronecker_plus == std::vector<int>{0, 0});
    CHECK(ss.kronecker_minus == std::vector<int>{0, 0});
    auto bl = bilagrangian_at(z, z, {0, 0});
    CHECK(bl.empty());
}

TEST_CASE("algebroid from a Poisson structure") {
    auto c2 = Chart::standard(2);
    PoissonBivector w(c2);
    w.set(0, 1, Scalar(1));
    auto a = algebroid_from_poisson(w);
    CHECK(a.anchor[0][1] == Scalar(1));
    CHECK(a.anchor[1][0] == Scalar(-1));
    for (const auto& ck : a.c)
        for (const auto& ckl : ck)
            for (const auto& v : ckl) CHECK(v.is_zero());
    CHECK(check_algebroid(a).proven());

    auto lp = so3_lie_poisson();
    auto b = algebroid_from_poisson(lp);
    // [dx1, dx2] = d{x1,x2} = dx3.
    CHECK(b.c[0][1][2] == Scalar(1));
    CHECK(b.c[0][1][0].is_zero());
    CHECK(b.c[1][2][0] == Scalar(1));
    CHECK(b.c[2][0][1] == Scalar(1));
    CHECK(b.anchor[0][1] == sym("x3"));
    CHECK(check_algebroid(b).proven());
    auto bl = linear_poisson(b);
    CHECK(bl.dim() == 6);
    CHECK(check_jacobi(bl).proven());

    // Bracket on exact forms: [df, dg] = d{f, g}.
    auto f = sym("x1") * sym("x2"), g = sym("x3");
    auto df = Form::differential(lp.chart(), f).components();
    auto dg = Form::differential(lp.chart(), g).components();
    auto dfg = Form::differential(lp.chart(), lp.bracket(f, g)).components();
    for (std::size_t m = 0; m < 3; ++m) {
        // df_k dg_l c^m_kl + rho(df) dg_m - rho(dg) df_m
        Scalar s(0);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 3; ++l) s += df[k] * dg[l] * b.c[k][l][m];
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t j = 0; j < 3; ++j) {
                s += df[k] * b.anchor[k][j] * partial(dg[m], lp.chart(), j);
                s -= dg[k] * b.anchor[k][j] * partial(df[m], lp.chart(), j);
            }
        CHECK(s == dfg[m]);
    }

    PoissonBivector k(lp.chart());
    k.set(0, 1, Scalar(1));
    auto ka = algebroid_from_poisson(k);
    for (long t : {1, 2, -3}) {
        auto sum = combine_algebroids(b, ka, Scalar(1), Scalar(t));
        CHECK(check_jacobi(linear_poisson(sum)).zero());
    }
    auto tau = sym("tau");
    CHECK(check_jacobi(linear_poisson(combine_algebroids(b, ka, Scalar(1), tau))).zero());

    PoissonBivector q(lp.chart());
    q.set(0, 1, sym("x1") * sym("x1"));
    auto qa = algebroid_from_poisson(q);
    CHECK_FALSE(check_jacobi(linear_poisson(combine_algebroids(b, qa, Scalar(1), Scalar(1)))).zero());

    PoissonBivector bad(lp.chart());
    bad.set(0, 1, sym("x3"));
    bad.set(1, 2, sym("x3"));
    bad.set(0, 2, sym("x2"));
    if (!jacobi_oracle_zero(bad)) CHECK_THROWS_AS(algebroid_from_poisson(bad), PoissonError);
    CHECK_THROWS_AS(combine_algebroids(b, a, Scalar(1), Scalar(1)), PoissonError);
}
