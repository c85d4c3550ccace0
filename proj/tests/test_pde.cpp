#include "doctest.h"
#include "kronweb/pde.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace kronweb;

namespace {

std::vector<mpq_class> Q(std::initializer_list<long> v) {
    std::vector<mpq_class> out;
    for (auto x : v) out.emplace_back(x);
    return out;
}

const std::vector<std::string>& three_d_symbols() {
    static const std::vector<std::string> s{"A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3", "C0", "C1"};
    return s;
}

Scalar random_poly(std::mt19937_64& rng, const Chart& c, int terms = 3, int max_power = 2) {
    std::uniform_int_distribution<int> coef(-3, 3), pw(0, max_power);
    Scalar out(0);
    for (int t = 0; t < terms; ++t) {
        Scalar m(coef(rng));
        for (std::size_t i = 0; i < c.dim(); ++i) m *= c.coordinate(i).pow(pw(rng));
        out += m;
    }
    return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
    return s;
}

// Symbolic jet with independent symbols f_i and f_ij.
struct SymJet {
    std::vector<std::vector<Scalar>> d1;
    std::vector<std::vector<std::vector<Scalar>>> d2;
};

SymJet symbol_jet(std::size_t dim, std::size_t functions) {
    SymJet j;
    for (std::size_t k = 0; k < functions; ++k) {
        std::vector<Scalar> d1;
        std::vector<std::vector<Scalar>> d2(dim, std::vector<Scalar>(dim));
        for (std::size_t a = 0; a < dim; ++a) {
            d1.push_back(Scalar::symbol(intern_variable("jf" + std::to_string(k) + "_" + std::to_string(a))));
            for (std::size_t b = a; b < dim; ++b)
                d2[a][b] = d2[b][a] = Scalar::symbol(
                    intern_variable("jf" + std::to_string(k) + "_" + std::to_string(a) + std::to_string(b)));
        }
        j.d1.push_back(d1);
        j.d2.push_back(d2);
    }
    return j;
}

// Cofactor transpose of a 3x3 matrix.
RFMatrix adjugate3(const RFMatrix& m) {
    RFMatrix adj(3, std::vector<Scalar>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    return adj;
}

Scalar lam() { return Scalar::symbol(intern_variable("lambda")); }

}  // namespace

TEST_CASE("residual examples") {
    auto h = make_equation("A3", Q({1, 2, 3}));
    CHECK(residual_verdict(h, parse_solution(h, {"x1+x2+x3"})).proven());
    CHECK(residual_verdict(h, parse_solution(h, {"exp(x1+x2+x3)"})).zero());

    auto s = parse_solution(h, {"x1^2+x2*x3"});
    auto r = residual(h, s);
    REQUIRE(r.size() == 1);
    // (l2 - l3) * f1 * f23 = (2 - 3) * 2 x1
    CHECK(r[0] == Scalar(-2) * s.chart.coordinate(0));
    auto v = residual_verdict(h, s);
    CHECK_FALSE(v.zero());
    CHECK_FALSE(v.witness.empty());

    auto k = make_equation("K4DEG", Q({1, 3}));
    auto rk = residual(k, parse_solution(k, {"x1+x3", "x2+x4"}));
    REQUIRE(rk.size() == 2);
    CHECK(rk[0].is_zero());
    CHECK(rk[1].is_zero());

    CHECK_THROWS_AS(residual(h, parse_solution(k, {"x1", "x2"})), PdeError);
    CHECK_THROWS_AS(parse_solution(h, {"x1", "x2"}), PdeError);
}

TEST_CASE("equation validation") {
    CHECK_THROWS_AS(make_equation("A3", Q({1, 1, 3})), PdeError);
    CHECK_THROWS_AS(make_equation("A2", Q({0, 2, 2})), PdeError);
    CHECK_NOTHROW(make_equation("A2", Q({5, 2, 3})));
    CHECK_NOTHROW(make_equation("A0", {}));
    CHECK_THROWS_AS(make_equation("C1", {}), PdeError);
    CHECK_THROWS_AS(make_equation("H", Q({1, 2, 3})), PdeError);
    CHECK_NOTHROW(make_equation("H", Q({1, 2, -3})));
    CHECK_THROWS_AS(make_equation("K4", Q({1, 2, 3})), PdeError);
    CHECK_THROWS_AS(make_equation("K4DEG", Q({2, 2})), PdeError);
    CHECK_THROWS_AS(make_equation("D0", {}), PdeError);
    CHECK(make_equation("K4", Q({1, 2, 3, 4})).dim == 4);
}

TEST_CASE("catalog entries") {
    CHECK(catalog().size() == 13);
    const auto& b1 = catalog_entry("B1");
    CHECK(b1.lambdas == std::vector<std::string>{"l2=x2", "l3=a3"});
    CHECK(catalog_entry("C1").alpha.find("(a3-l)^2") != std::string::npos);
    CHECK(catalog_entry("A0").lambdas.front() == "l1=x1");
    CHECK_THROWS_AS(catalog_entry("Z"), PdeError);
}

TEST_CASE("A3 is the Hirota equation") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-6, 6);
    auto c = Chart::standard(3);
    for (int t = 0; t < 15; ++t) {
        mpq_class l1 = d(rng), l2 = d(rng), l3 = d(rng);
        if (l1 == l2 || l2 == l3 || l1 == l3) continue;
        auto a3 = make_equation("A3", {l1, l2, l3});
        auto hz = make_equation("H", {l2 - l3, l3 - l1, l1 - l2});
        SymbolicSolution s{c, {random_poly(rng, c, 4, 3)}};
        CHECK(residual(a3, s)[0] == residual(hz, s)[0]);
        // The coefficient form realized through its own eigenvalues.
        auto back = make_equation("A3", hirota_lambdas(hz.constants));
        CHECK(residual(back, s)[0] == residual(hz, s)[0]);
    }
}

TEST_CASE("A0 with constant eigenvalues reduces to Hirota") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-9, 9);
    auto j = symbol_jet(3, 1);
    for (int t = 0; t < 10; ++t) {
        mpq_class a1 = d(rng), a2 = d(rng), a3 = d(rng);
        if (a1 == a2 || a2 == a3 || a1 == a3) continue;
        EquationSpec a0{"A0", Q({0, 0, 0}), 3};
        auto hirota = make_equation("A3", {a1, a2, a3});
        std::vector<Scalar> x{Scalar(a1), Scalar(a2), Scalar(a3)};
        auto r0 = residual_from_jet(a0, x, j.d1, j.d2);
        auto r3 = residual_from_jet(hirota, x, j.d1, j.d2);
        CHECK(r0[0] == r3[0]);
        // A1 and A2 reduce the same way.
        CHECK(residual_from_jet(EquationSpec{"A1", {0, 0, a3}, 3}, x, j.d1, j.d2)[0] == r3[0]);
        CHECK(residual_from_jet(EquationSpec{"A2", {0, a2, a3}, 3}, x, j.d1, j.d2)[0] == r3[0]);
    }
}

TEST_CASE("Hirota solutions g(k.x) and equivalence stability") {
    auto h = make_equation("A3", Q({1, 2, 3}));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> k(1, 4);
    const std::vector<std::string> g{"exp(T)", "(T)^3", "1/(T+20)", "sin(T)", "(T)^2*exp(T)"};
    for (int t = 0; t < 10; ++t) {
        std::string arg = std::to_string(k(rng)) + "*x1+" + std::to_string(k(rng)) + "*x2+" + std::to_string(k(rng)) + "*x3";
        std::string text = replace_all(g[t % g.size()], "T", arg);
        auto s = parse_solution(h, {text});
        CHECK_MESSAGE(residual_verdict(h, s).zero(), text);

        // psi(t) = t^3 + t
        SymbolicSolution psi{s.chart, {s.f[0].pow(3) + s.f[0]}};
        CHECK_MESSAGE(residual_verdict(h, psi).zero(), text);

        // x_i -> phi_i(x_i) with polynomial phi_i.
        std::string pre = replace_all(replace_all(replace_all(text, "x1", "(X1^3+X1)"), "x2", "(2*X2-X2^2)"), "x3", "(X3^2+3)");
        pre = replace_all(pre, "X", "x");
        CHECK_MESSAGE(residual_verdict(h, parse_solution(h, {pre})).zero(), pre);
    }
    // A non-solution stays a non-solution after psi.
    auto bad = parse_solution(h, {"x1^2+x2*x3"});
    SymbolicSolution bad_psi{bad.chart, {bad.f[0].pow(3) + bad.f[0]}};
    CHECK_FALSE(residual_verdict(h, bad_psi).zero());
}

TEST_CASE("alpha displays annihilate (N - l) T F") {
    // Oracle: alpha^l = adj(N - l)^t df.
    std::mt19937_64 rng(17);
    auto c = Chart::standard(3);
    auto l = lam();
    std::vector<std::pair<std::string, std::vector<mpq_class>>> cases;
    for (const auto& s : three_d_symbols()) cases.push_back({s, Q({2, -1, 5})});
    cases.push_back({"H", Q({3, -5, 2})});
    for (const auto& [sym, params] : cases) {
        auto eq = make_equation(sym, params);
        auto m = equation_operator(eq).combine(-l, Scalar(1)).matrix();
        auto adj = adjugate3(m);
        for (int t = 0; t < 3; ++t) {
            SymbolicSolution s{c, {random_poly(rng, c)}};
            if (s.f[0].is_constant()) continue;
            auto a = alpha_display(eq, s, l);
            std::vector<Scalar> grad;
            for (std::size_t i = 0; i < 3; ++i) grad.push_back(partial(s.f[0], c, i));
            for (std::size_t i = 0; i < 3; ++i) {
                Scalar expect(0);
                for (std::size_t r = 0; r < 3; ++r) expect += adj[r][i] * grad[r];
                CHECK_MESSAGE(a.components()[i] == expect, sym);
            }
        }
    }
}

TEST_CASE("d alpha ^ alpha is a multiple of the residual") {
    std::mt19937_64 rng(23);
    auto c = Chart::standard(3);
    auto l = lam();
    auto x3 = c.coordinate(2);
    auto a = Q({2, -1, 5});
    auto lm = [&](long v) { return Scalar(mpq_class(v)) - l; };
    std::map<std::string, Scalar> factor{
        {"A3", -((l - Scalar(2)) * (l + Scalar(1)) * (l - Scalar(5)))},
        {"A0", -((l - c.coordinate(0)) * (l - c.coordinate(1)) * (l - x3))},
        {"B3", lm(5) * (l + Scalar(1)) * (l + Scalar(1))},
        {"B0", (x3 - l) * (l - c.coordinate(1)) * (l - c.coordinate(1))},
        {"C0", -((l - x3) * (l - x3) * (l - x3))},
        {"C1", lm(5) * lm(5) * lm(5)},
    };
    for (const auto& [sym, fac] : factor) {
        auto eq = make_equation(sym, a);
        for (int t = 0; t < 4; ++t) {
            SymbolicSolution s{c, {random_poly(rng, c)}};
            auto al = alpha_display(eq, s, l);
            auto w = wedge(exterior_derivative(al), al);
            CHECK_MESSAGE(w.at({0, 1, 2}) == fac * residual(eq, s)[0], sym);
        }
    }
}

TEST_CASE("webs from catalog solutions") {
    auto params = Q({2, -1, 5});
    for (const auto& sym : three_d_symbols()) {
        auto eq = make_equation(sym, params);
        SymbolicSolution s{Chart::standard(3), {normal_form_solution(sym, params)}};
        INFO(sym << " f = " << s.f[0].str());
        REQUIRE(residual_verdict(eq, s).zero());
        REQUIRE(solution_nondegenerate(eq, s));
        auto w = veronese_web_from_solution(eq, s);
        CHECK(web_integrability(w).verdict.zero());
        CHECK(check_distinguished_foliations(eq, s).zero());
        // The web agrees with the one built from the restricted operator.
        auto r = restrict_to_foliation(equation_operator(eq), level_set_fields(s.chart, s.f[0]), Scalar(0));
        REQUIRE(r.ok);
        CHECK(same_foliations(w, web_from_pno(r.pno)).zero());
        CHECK(std::holds_alternative<VeroneseWeb>(web_from_solution(eq, s)));
    }
}

TEST_CASE("Hirota web from exp and degenerate solutions") {
    auto h = make_equation("A3", Q({1, 2, 3}));
    auto s = parse_solution(h, {"exp(x1+x2+x3)"});
    auto w = veronese_web_from_solution(h, s);
    auto v = web_integrability(w);
    CHECK(v.verdict.zero());
    CHECK(v.parts.size() == 5);
    CHECK(solution_nondegenerate(h, s));
    CHECK(solution_nondegeneracy(h, s, Q({0, 1, -1})));
    CHECK(check_distinguished_foliations(h, s).zero());

    CHECK_THROWS_WITH_AS(veronese_web_from_solution(h, parse_solution(h, {"x1*x2"})), "degenerate solution", PdeError);
    CHECK_FALSE(solution_nondegeneracy(h, parse_solution(h, {"x1+x2"}), Q({1, 1, 1})));
    CHECK_THROWS_AS(veronese_web_from_solution(h, parse_solution(h, {"x1^2+x2*x3"})), PdeError);

    // Pointwise degeneracy: f = x1 + x2 + x3^2 has f3 = 0 on x3 = 0.
    auto p = parse_solution(h, {"x1+x2+x3^2"});
    CHECK(residual_verdict(h, p).zero());
    CHECK(solution_nondegeneracy(h, p, Q({1, 1, 1})));
    CHECK_FALSE(solution_nondegeneracy(h, p, Q({1, 1, 0})));
}

TEST_CASE("4D: trivial pair of the degenerate system") {
    auto eq = make_equation("K4DEG", Q({1, 3}));
    auto s = parse_solution(eq, {"x1+x3", "x2+x4"});
    CHECK(residual_verdict(eq, s).proven());
    CHECK(solution_nondegeneracy(eq, s, Q({0, 0, 0, 0})));
    auto k = kronecker_web_from_solution(eq, s);
    CHECK(kronecker_surjective(k));
    CHECK(kronecker_integrability(k).verdict.zero());
    auto bs = block_structure(pointwise_pencil(kronecker_pno_from_data(k), Q({1, 2, 3, 4})));
    CHECK(bs.kronecker_plus.size() == 2);
    CHECK(bs.kronecker_minus.empty());
    CHECK(bs.jordan.empty());
    CHECK(check_distinguished_foliations(eq, s).zero());
    CHECK(std::holds_alternative<KroneckerWebData>(web_from_solution(eq, s)));

    // The leaves of F_{l1} are {x1, x2 = const}: D_{l1} is spanned by d/dx3, d/dx4.
    auto p = kronecker_pno_from_data(k);
    for (std::size_t i = 0; i < 2; ++i) {
        auto d = p.images[i] - Scalar(1) * p.fields[i];
        CHECK(d[0].is_zero());
        CHECK(d[1].is_zero());
    }
}

TEST_CASE("4D: annihilating forms") {
    std::mt19937_64 rng(29);
    auto c = Chart::standard(4);
    auto l = lam();
    for (const auto& eq : {make_equation("K4DEG", Q({1, 3})), make_equation("K4", Q({1, -2, 3, 5}))}) {
        auto n = equation_operator(eq).combine(-l, Scalar(1));
        for (int t = 0; t < 5; ++t) {
            SymbolicSolution s{c, {c.coordinate(0) + c.coordinate(2) + random_poly(rng, c, 2, 1),
                                   c.coordinate(1) + c.coordinate(3) + random_poly(rng, c, 2, 1)}};
            std::vector<VectorField> tf;
            try {
                auto k = kronecker_web_from_solution(eq, s);
                (void)k;
            } catch (const PdeError&) {
            }
            auto forms = annihilator_forms(eq, s, l);
            // Fields spanning the common level sets: kernel of the 2x4 Jacobian.
            std::vector<Scalar> g1, g2;
            for (std::size_t i = 0; i < 4; ++i) {
                g1.push_back(partial(s.f[0], c, i));
                g2.push_back(partial(s.f[1], c, i));
            }
            Scalar det = g1[0] * g2[1] - g1[1] * g2[0];
            if (det.is_zero()) continue;
            for (std::size_t r = 2; r < 4; ++r) {
                std::vector<Scalar> v(4, Scalar(0));
                v[r] = Scalar(1);
                v[0] = (-g1[r] * g2[1] + g1[1] * g2[r]) / det;
                v[1] = (-g1[0] * g2[r] + g1[r] * g2[0]) / det;
                tf.emplace_back(c, v);
            }
            for (const auto& z : tf)
                for (const auto& w : forms) CHECK(pairing(w, n.apply(z)).is_zero());
        }
    }
}

TEST_CASE("4D: K4 reduces to K4DEG on double eigenvalues") {
    auto j = symbol_jet(4, 2);
    std::vector<Scalar> x;
    for (std::size_t i = 0; i < 4; ++i) x.push_back(Chart::standard(4).coordinate(i));
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int t = 0; t < 5; ++t) {
        mpq_class l1 = d(rng), l3 = d(rng);
        EquationSpec k4{"K4", {l1, l1, l3, l3}, 4};
        EquationSpec deg{"K4DEG", {l1, l3}, 4};
        auto a = residual_from_jet(k4, x, j.d1, j.d2);
        auto b = residual_from_jet(deg, x, j.d1, j.d2);
        for (std::size_t i = 0; i < 2; ++i) CHECK(a[i] == Scalar(l3 - l1) * b[i]);
    }
}

TEST_CASE("4D: equivalent pairs solve, generic pairs do not") {
    auto eq = make_equation("K4DEG", Q({1, 3}));
    // psi(g(phi(x1,x2), zeta(x3,x4))) with g the trivial pair.
    auto s = parse_solution(eq, {"(x1+x2^2+x3)+(x2+x4+x3^3)^2", "x2+x4+x3^3"});
    CHECK(residual_verdict(eq, s).zero());
    CHECK(solution_nondegenerate(eq, s));
    auto k = kronecker_web_from_solution(eq, s);
    CHECK(kronecker_integrability(k).verdict.zero());
    CHECK(check_distinguished_foliations(eq, s).zero());

    auto bad = parse_solution(eq, {"x1*x3+x2", "x2+x4+x1*x4"});
    CHECK_FALSE(residual_verdict(eq, bad).zero());
    CHECK_THROWS_AS(kronecker_web_from_solution(eq, bad), PdeError);
    // Without the residual gate the distribution N(T F) is not integrable.
    EquationSpec any = eq;
    auto n = equation_operator(any);
    std::vector<Scalar> g1, g2;
    auto c = bad.chart;
    for (std::size_t i = 0; i < 4; ++i) {
        g1.push_back(partial(bad.f[0], c, i));
        g2.push_back(partial(bad.f[1], c, i));
    }
    Scalar det = g1[0] * g2[1] - g1[1] * g2[0];
    KroneckerWebData data{c, {}, {}};
    for (std::size_t r = 2; r < 4; ++r) {
        std::vector<Scalar> v(4, Scalar(0));
        v[r] = Scalar(1);
        v[0] = (-g1[r] * g2[1] + g1[1] * g2[r]) / det;
        v[1] = (-g1[0] * g2[r] + g1[r] * g2[0]) / det;
        VectorField z(c, v);
        data.phi1.push_back(z.components());
        data.phi2.push_back(n.apply(z).components());
    }
    CHECK_FALSE(kronecker_integrability(data).verdict.zero());

    // K4 with four distinct eigenvalues: the linear pair is a solution.
    auto k4 = make_equation("K4", Q({1, -2, 3, 5}));
    auto lin = parse_solution(k4, {"x1+x2+x3+x4", "x1-x2+2*x3+3*x4"});
    CHECK(residual_verdict(k4, lin).proven());
    auto kd = kronecker_web_from_solution(k4, lin);
    CHECK(kronecker_integrability(kd).verdict.zero());
    CHECK(kronecker_surjective(kd));
}

TEST_CASE("finite-difference residuals converge at second order") {
    auto h = make_equation("A3", Q({1, 2, 3}));
    auto b1 = make_equation("B1", Q({0, 0, 5}));
    std::vector<std::pair<EquationSpec, std::string>> cases{
        {h, "(x1+2*x2+3*x3)^3"}, {h, "log(x1+2*x2+3*x3+10)"}, {b1, "x1+x3/(x2-5)"}};
    for (const auto& [eq, text] : cases) {
        auto s = parse_solution(eq, {text});
        REQUIRE(residual_verdict(eq, s).zero());
        auto st = convergence_study(eq, s, -1, 1, {11, 21, 41});
        REQUIRE(st.orders.size() == 2);
        INFO(text << " errors " << static_cast<double>(st.errors[0]) << " " << static_cast<double>(st.errors[1]) << " "
                  << static_cast<double>(st.errors[2]));
        CHECK(st.errors[2] > 0);
        CHECK(st.orders[0] >= 1.9);
        CHECK(st.orders[1] >= 1.9);
    }
}

TEST_CASE("residual grid boundary and CSV round trip") {
    auto h = make_equation("A3", Q({1, 2, 3}));
    auto s = parse_solution(h, {"(x1+2*x2+3*x3)^3"});
    auto g = sample_solution(h, s, Grid::cube(3, -1, 1, 5));
    auto r = residual_grid(h, g);
    REQUIRE(r.size() == 1);
    std::size_t interior = 0;
    for (auto v : r[0].values) interior += std::isnan(v) ? 0 : 1;
    CHECK(interior == 27);

    std::stringstream io;
    write_grid_csv(io, g);
    auto back = read_grid_csv(io, h);
    CHECK(back.grid.points == 5);
    CHECK(interior_max(residual_grid(h, back)[0]) == doctest::Approx(static_cast<double>(interior_max(r[0]))).epsilon(1e-9));

    std::stringstream bad("x1,x2,x3,f\n0,0,0,1\n1,0,0,1\n3,0,0,1\n");
    CHECK_THROWS_AS(read_grid_csv(bad, h), PdeError);
    std::stringstream short_header("x1,x2,f\n");
    CHECK_THROWS_AS(read_grid_csv(short_header, h), PdeError);
    auto k = make_equation("K4DEG", Q({1, 3}));
    CHECK_THROWS_AS(residual_grid(k, g), PdeError);
}
