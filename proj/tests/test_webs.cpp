#include "doctest.h"
#include "kronweb/webs.hpp"

#include <cmath>
#include <random>

using namespace kronweb;

namespace {

const Chart& R3() {
    static Chart c = Chart::standard(3);
    return c;
}

// Web of a Hirota solution f with constants l1, l2, l3: alpha^l = sum (lj - l)(lk - l) f_i dx_i.
VeroneseWeb hirota_web(const Scalar& f, const std::vector<mpq_class>& l) {
    const auto& c = R3();
    std::vector<Scalar> g;
    for (std::size_t i = 0; i < 3; ++i) g.push_back(partial(f, c, i));
    std::vector<Scalar> a0(3), a1(3), a2(3);
    for (std::size_t i = 0; i < 3; ++i) {
        mpq_class lj = l[(i + 1) % 3], lk = l[(i + 2) % 3];
        a0[i] = Scalar(lj * lk) * g[i];
        a1[i] = Scalar(-(lj + lk)) * g[i];
        a2[i] = g[i];
    }
    return VeroneseWeb{c, {Form::one_form(c, a0), Form::one_form(c, a1), Form::one_form(c, a2)}};
}

std::vector<mpq_class> L123() { return {mpq_class(1), mpq_class(2), mpq_class(3)}; }

Scalar random_poly(std::mt19937_64& rng, const Chart& c, int terms = 2) {
    std::uniform_int_distribution<int> coef(-3, 3), pw(0, 1);
    Scalar out(0);
    for (int t = 0; t < terms; ++t) {
        Scalar m(coef(rng));
        for (std::size_t i = 0; i < c.dim(); ++i) m *= c.coordinate(i).pow(pw(rng));
        out += m;
    }
    return out;
}

// Random coframe: identity plus small polynomial perturbations.
VeroneseWeb random_web(std::mt19937_64& rng, std::size_t dim) {
    auto c = Chart::standard(dim);
    VeroneseWeb w{c, {}};
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<Scalar> comps;
        for (std::size_t i = 0; i < dim; ++i) comps.push_back((i == k ? Scalar(4) : Scalar(0)) + random_poly(rng, c, 1));
        w.alpha.push_back(Form::one_form(c, comps));
    }
    return w;
}

}  // namespace

TEST_CASE("alpha lambda and nondegeneracy") {
    auto w = flat_web(2);
    const auto& c = w.chart;
    auto a = alpha_lambda(w, Scalar(2));
    CHECK(a.at({0}) == Scalar(1));
    CHECK(a.at({1}) == Scalar(2));
    CHECK(a.at({2}) == Scalar(4));
    CHECK(zero_test(alpha_lambda(w, Scalar(0)) - w.alpha[0]).proven());
    CHECK(nondegenerate_at(w, std::vector<mpq_class>{0, 0, 0}));

    auto h = hirota_web(c.parse("exp(x1+x2+x3)"), L123());
    auto det = small_determinant(coefficient_matrix(h));
    // det = f1 f2 f3 times a Vandermonde constant.
    auto ratio = det / c.parse("exp(x1+x2+x3)^3");
    CHECK(ratio.is_constant());
    CHECK_FALSE(ratio.is_zero());
    CHECK(nondegenerate_at(h, std::vector<long double>{0.3L, -1.0L, 0.7L}));
    CHECK(nondegenerate_at(h, std::vector<mpq_class>{1, 2, 3}));

    auto deg = hirota_web(c.parse("x1*x2"), L123());
    CHECK_FALSE(nondegenerate_at(deg, std::vector<mpq_class>{1, 2, 3}));
    CHECK_THROWS_AS(make_web(c, {{"1", "0", "0"}, {"0", "1", "0"}}), WebError);
}

TEST_CASE("web integrability") {
    auto flat = flat_web(2);
    CHECK(web_integrability(flat).verdict.proven());
    CHECK(web_integrability(flat, WebMode::sampled()).verdict.proven());
    CHECK(web_integrability(flat, WebMode::sampled()).s_values.size() == 5);

    const auto& c = R3();
    auto hir = web_integrability(hirota_web(c.parse("exp(x1+x2+x3)"), L123()));
    CHECK(hir.verdict.zero());
    CHECK(hir.parts.size() == 5);
    CHECK(web_integrability(hirota_web(c.parse("x1*x2*x3"), L123())).verdict.proven());

    // d alpha ^ alpha = 2 l^2 x3 dx1^dx2^dx3 for alpha_1 = dx2 + x3^2 dx1.
    auto pert = make_web(c, {{"1", "0", "0"}, {"x3^2", "1", "0"}, {"0", "0", "1"}});
    for (std::size_t m = 0; m <= 4; ++m) {
        auto coef = integrability_coefficient(pert, m);
        CHECK(coef.at({0, 1, 2}) == (m == 2 ? c.parse("2*x3") : Scalar(0)));
    }
    auto full = web_integrability(pert);
    CHECK(full.verdict.tag == ZeroVerdict::Tag::NonZero);
    CHECK_FALSE(full.verdict.witness.empty());
    CHECK(web_integrability(pert, WebMode::sampled()).verdict.tag == ZeroVerdict::Tag::NonZero);

    // A non-Hirota f gives a family that is not integrable.
    auto bad = hirota_web(c.parse("x1^2+x2*x3"), L123());
    CHECK(web_integrability(bad).verdict.tag == ZeroVerdict::Tag::NonZero);
}

TEST_CASE("sampled and full integrability agree on solution webs") {
    std::mt19937_64 rng(21);
    const auto& c = R3();
    std::uniform_int_distribution<int> k(-3, 3);
    int integrable = 0, not_integrable = 0;
    for (int t = 0; t < 40; ++t) {
        // g(a.x) solves every A3 equation; a product x1 x2 x3 too; random quadrics usually do not.
        Scalar f;
        if (t % 4 == 0) {
            f = random_poly(rng, c, 3) * c.coordinate(0) + c.coordinate(1);
        } else {
            Scalar s = Scalar(k(rng)) * c.coordinate(0) + Scalar(k(rng)) * c.coordinate(1) + Scalar(k(rng) | 1) * c.coordinate(2);
            f = t % 4 == 1 ? s.pow(3) + s : (t % 4 == 2 ? c.parse("x1*x2*x3") + Scalar(k(rng)) : s * s * s * s + Scalar(2) * s);
        }
        auto w = hirota_web(f, L123());
        auto full = web_integrability(w);
        auto sampled = web_integrability(w, WebMode::sampled());
        CHECK(full.verdict.zero() == sampled.verdict.zero());
        (full.verdict.zero() ? integrable : not_integrable)++;
    }
    CHECK(integrable > 20);
    CHECK(not_integrable > 3);
}

TEST_CASE("PNO from web and back") {
    auto flat = flat_web(2);
    const auto& c = flat.chart;
    auto p = pno_from_web(flat);
    REQUIRE(p.rank() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(zero_test(p.fields[k] - VectorField::coordinate(c, k)).proven());
        CHECK(zero_test(p.images[k] - VectorField::coordinate(c, k + 1)).proven());
    }
    CHECK(is_geometric_pno(p).ok);
    auto back = web_from_pno(p);
    CHECK(same_foliations(back, flat).proven());
    for (std::size_t k = 0; k < 3; ++k) CHECK(zero_test(back.alpha[k] - flat.alpha[k]).proven());

    auto hw = hirota_web(c.parse("exp(x1+x2+x3)"), L123());
    auto hp = pno_from_web(hw);
    CHECK(is_geometric_pno(hp).ok);
    CHECK(same_foliations(web_from_pno(hp), hw).zero());

    auto rw = hirota_web(c.parse("x1*x2*x3"), L123());
    auto rp = pno_from_web(rw);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> u(1, 9);
    for (int t = 0; t < 10; ++t) {
        auto bs = block_structure(pointwise_pencil(rp, {mpq_class(u(rng)), mpq_class(u(rng)), mpq_class(u(rng))}));
        CHECK(bs.kronecker_plus == std::vector<int>{2});
        CHECK(bs.jordan.empty());
    }

    GeometricPNO ex3{c, {VectorField::coordinate(c, 0)}, {VectorField::coordinate(c, 1)}};
    CHECK_THROWS_AS(web_from_pno(ex3), WebError);
    CHECK_THROWS_AS(pno_from_web(make_web(c, {{"1", "0", "0"}, {"1", "0", "0"}, {"0", "0", "1"}})), WebError);
}

TEST_CASE("round trips preserve foliations") {
    std::mt19937_64 rng(33);
    for (std::size_t dim : {3u, 4u}) {
        for (int t = 0; t < 6; ++t) {
            auto w = random_web(rng, dim);
            auto p = pno_from_web(w);
            auto w2 = web_from_pno(p);
            CHECK(same_foliations(w, w2).zero());
            // The PNO of the rebuilt web has the same domain and the same operator.
            auto p2 = pno_from_web(w2);
            for (std::size_t i = 0; i < p.rank(); ++i) {
                CHECK(span_membership(p2.fields, p.fields[i]).zero());
                auto coef = span_coefficients(p2.fields, p.fields[i]);
                CHECK(zero_test(p2.apply(coef) - p.images[i]).zero());
            }
        }
    }
    auto w4 = flat_web(3);
    auto bs = block_structure(pointwise_pencil(pno_from_web(w4), {mpq_class(1), mpq_class(0), mpq_class(2), mpq_class(5)}));
    CHECK(bs.kronecker_plus == std::vector<int>{3});
}

TEST_CASE("self-propelled residuals") {
    auto flat = flat_web(2);
    const auto& c = flat.chart;
    for (const auto& r : selfpropelled_residual(flat, Scalar(mpq_class(7, 3)))) CHECK(r.is_zero());
    auto rx = selfpropelled_residual(flat, c.parse("x1"));
    CHECK(rx[0] == c.parse("x1"));
    auto phi = c.parse("(-x2+sqrt(x2^2-4*x1*x3))/(2*x3)");
    for (const auto& r : selfpropelled_residual(flat, phi)) {
        auto v = zero_test(r);
        CHECK(v.zero());
    }
    ZeroPolicy box;
    box.box_lo = 0.5;
    box.box_hi = 1.5;
    auto neg = c.parse("(-x2+sqrt(x2^2+4*x1*x3))/(2*x3)");  // root of x3 p^2 + x2 p - x1 = 0
    auto neg_web = make_web(c, {{"-1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
    for (const auto& r : selfpropelled_residual(neg_web, neg, box)) {
        auto v = zero_test(r, box);
        CHECK(v.zero());
    }
    // d phi ^ alpha^phi = 0.
    auto a = alpha_lambda(neg_web, neg);
    CHECK(zero_test(wedge(Form::differential(c, neg), a), box).zero());
}

TEST_CASE("Newton solves of the implicit equation") {
    const auto& c = R3();
    auto F = c.parse("x1+lambda*x2+lambda^2*x3", {"lambda"});
    auto f = c.parse("lambda", {"lambda"});
    SelfPropelledSolver solver(c, F, f);
    Grid grid{{-1.5L, 0.5L, 0.5L}, {-0.5L, 1.5L, 1.5L}, 7};
    auto field = solve_selfpropelled(solver, grid, 0.5L);
    // Quadratic formula oracle: x3 p^2 + (x2 - 1) p + x1 = 0, the branch through the seed.
    auto center = grid.point(grid.flat_index({3, 3, 3}));
    auto root = [](const std::vector<long double>& x, int s) {
        long double b = x[1] - 1, disc = b * b - 4 * x[2] * x[0];
        return (-b + s * std::sqrt(disc)) / (2 * x[2]);
    };
    int branch = std::fabs(root(center, 1) - field.values[grid.flat_index({3, 3, 3})]) < 1e-9L ? 1 : -1;
    long double worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::fabs(field.values[i] - root(grid.point(i), branch)));
    CHECK(worst <= 1e-12L);

    auto phi = selfpropelled_function(solver, field);
    std::vector<std::vector<long double>> pts{{-1.1L, 0.9L, 1.2L}, {-0.7L, 1.3L, 0.8L}, {-1.3L, 0.6L, 1.4L}};
    CHECK(selfpropelled_fd_residual(flat_web(2), phi, pts) <= 1e-6L);

    // Constant f: phi is constant on the level set, so residuals vanish there too.
    auto x0 = std::vector<mpq_class>{-1, 1, 1};
    std::vector<NumericFunction> fs;
    for (int k = 0; k < 3; ++k) {
        auto s = seeded_solver(c, F, x0, mpq_class(k + 1, 2));
        auto g = solve_selfpropelled(s, grid, static_cast<long double>(k + 1) / 2);
        auto fn = selfpropelled_function(s, g);
        CHECK(std::fabs(fn({-1, 1, 1}) - static_cast<long double>(k + 1) / 2) < 1e-12L);
        CHECK(selfpropelled_fd_residual(flat_web(2), fn, pts) <= 1e-6L);
        fs.push_back(fn);
    }
    CHECK(std::fabs(numeric_jacobian(fs, {-1, 1, 1})) > 1e-3L);

    // F_l - f' vanishes on the discriminant locus.
    CHECK_THROWS_AS(solver.solve_at({0.25L, 0.0L, 1.0L}, 0.5L), WebError);
}

TEST_CASE("Kronecker web data") {
    const auto& c = R3();
    auto e = [](int i, std::size_t n) {
        std::vector<Scalar> r(n, Scalar(0));
        r[static_cast<std::size_t>(i)] = Scalar(1);
        return r;
    };
    KroneckerWebData flat{c, {e(0, 3), e(1, 3)}, {e(1, 3), e(2, 3)}};
    auto p = kronecker_pno_from_data(flat);
    auto q = pno_from_web(flat_web(2));
    CHECK(same_foliations(web_from_pno(p), web_from_pno(q)).proven());
    CHECK(kronecker_surjective(flat));

    KroneckerWebData jordan{c, {e(0, 3), e(1, 3)}, {e(0, 3), e(1, 3)}};
    CHECK_FALSE(kronecker_surjective(jordan));
    KroneckerWebData drop{c, {e(0, 3), e(0, 3)}, {e(1, 3), e(2, 3)}};
    CHECK_THROWS_AS(kronecker_pno_from_data(drop), WebError);

    auto c4 = Chart::standard(4);
    KroneckerWebData two{c4, {e(0, 4), e(1, 4)}, {e(2, 4), e(3, 4)}};
    CHECK(kronecker_surjective(two));
    auto bs = block_structure(pointwise_pencil(kronecker_pno_from_data(two), {1, 2, 3, 4}));
    CHECK(bs.kronecker_plus == std::vector<int>{1, 1});
}
