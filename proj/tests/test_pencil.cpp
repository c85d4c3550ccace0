#include "doctest.h"

#include "kronweb/pencil.hpp"

#include <chrono>

using namespace kronweb;

namespace {

GMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
    GMatrix m;
    for (auto r : rows) {
        std::vector<Gaussian> v;
        for (long x : r) v.emplace_back(x);
        m.push_back(v);
    }
    return m;
}

BlockStructure jordan_only(const Gaussian& mu, std::vector<int> sizes) {
    BlockStructure s;
    s.jordan.push_back({Eigenvalue::finite(mu), std::move(sizes)});
    return s;
}

// Brute-force oracle: parameters mu in a grid where S2 - mu*S1 loses rank.
std::vector<Gaussian> rank_drops_on_grid(const Pencil& p, std::size_t r) {
    std::vector<Gaussian> out;
    for (long n = -20; n <= 20; ++n)
        for (long d : {1L, 2L, 3L}) {
            mpq_class q(n, d);
            q.canonicalize();
            if (q.get_den() != d) continue;
            if (exact_rank(p.at(Gaussian(q))) < r) out.emplace_back(q);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("Gaussian parsing and printing") {
    CHECK(parse_gaussian("3/2") == Gaussian(mpq_class(3, 2)));
    CHECK(parse_gaussian("3/2+1/4i") == Gaussian(mpq_class(3, 2), mpq_class(1, 4)));
    CHECK(parse_gaussian("-i") == Gaussian(0, -1));
    CHECK(parse_gaussian("0.25-2i") == Gaussian(mpq_class(1, 4), -2));
    CHECK(parse_gaussian("-3/2-1/4i").str() == "-3/2-1/4i");
    CHECK_THROWS(parse_gaussian("1/0"));
    CHECK_THROWS(parse_gaussian("abc"));
}

TEST_CASE("generic rank") {
    CHECK(generic_rank(Pencil(M({{1, 0}, {0, 1}}), M({{0, 0}, {0, 0}}))) == 2);
    CHECK(generic_rank(kronecker_normal_form(2)) == 2);
    CHECK(generic_rank(Pencil(M({{0, 0}, {0, 0}}), M({{0, 0}, {0, 0}}))) == 0);
}

TEST_CASE("exceptional set") {
    Pencil d(M({{1, 0}, {0, 1}}), M({{5, 0}, {0, 7}}));
    auto e = exceptional_set(d);
    REQUIRE(e.size() == 2);
    CHECK(e[0].projective() == "[-5:1]");
    CHECK(e[1].projective() == "[-7:1]");
    std::vector<Gaussian> oracle = rank_drops_on_grid(d, 2);
    REQUIRE(oracle.size() == 2);
    CHECK(oracle[0] == e[0].value);
    CHECK(oracle[1] == e[1].value);
    CHECK(exceptional_set(kronecker_normal_form(2)).empty());
    auto one = exceptional_set(Pencil(M({{1}}), M({{1}})));
    REQUIRE(one.size() == 1);
    CHECK(one[0].projective() == "[-1:1]");  // l1 + l2 = 0
    auto inf = exceptional_set(Pencil(M({{0}}), M({{1}})));
    REQUIRE(inf.size() == 1);
    CHECK(inf[0].kind == Eigenvalue::Kind::Infinite);
    CHECK(inf[0].projective() == "[1:0]");
}

TEST_CASE("block structure of canonical examples") {
    BlockStructure k = block_structure(kronecker_normal_form(3));
    CHECK(k.kronecker_plus == std::vector<int>{3});
    CHECK(k.kronecker_minus.empty());
    CHECK(k.jordan.empty());
    BlockStructure j = block_structure(Pencil(M({{1, 0}, {0, 1}}), M({{5, 1}, {0, 5}})));
    CHECK(j == jordan_only(Gaussian(5), {2}));
    BlockStructure mixed;
    mixed.kronecker_plus = {1};
    mixed.jordan.push_back({Eigenvalue::finite(Gaussian(3)), {2}});
    CHECK(block_structure(synthesize_pencil(mixed, 7)) == mixed);
    // Irrational eigenvalues come back flagged with numeric values.
    BlockStructure irr = block_structure(Pencil(M({{1, 0}, {0, 1}}), M({{0, 2}, {1, 0}})));
    REQUIRE(irr.jordan.size() == 2);
    CHECK(irr.flagged());
    CHECK(std::abs(std::abs(irr.jordan[0].eigenvalue.approx.real()) - std::sqrt(2.0)) < 1e-12);
    CHECK(irr.jordan[0].sizes == std::vector<int>{1});
    // Gaussian eigenvalues are exact.
    BlockStructure gi = block_structure(Pencil(M({{1, 0}, {0, 1}}), M({{0, -1}, {1, 0}})));
    REQUIRE(gi.jordan.size() == 2);
    CHECK(!gi.flagged());
    CHECK(gi.jordan[0].eigenvalue.value == Gaussian(0, -1));
}

TEST_CASE("classification") {
    auto c = classify(kronecker_normal_form(3));
    CHECK(c.kind == PencilKind::Kronecker);
    CHECK(c.generic_type);
    auto j = classify(Pencil(M({{1, 0}, {0, 1}}), M({{0, 1}, {0, 0}})));
    CHECK(j.kind == PencilKind::Jordan);
    CHECK(!j.generic_type);
    BlockStructure m;
    m.kronecker_plus = {1};
    m.jordan.push_back({Eigenvalue::finite(Gaussian(0)), {1}});
    auto mc = classify(synthesize_pencil(m, 3));
    CHECK(mc.kind == PencilKind::Mixed);
    CHECK(!mc.generic_type);
}

TEST_CASE("jordan part") {
    CHECK(jordan_part(kronecker_normal_form(2)).at(0).empty());
    GMatrix full = jordan_part(Pencil(M({{1, 0}, {0, 1}}), M({{5, 0}, {0, 7}})));
    CHECK(exact_rank(full) == 2);
    BlockStructure s;
    s.kronecker_plus = {1};
    s.jordan.push_back({Eigenvalue::finite(Gaussian(5)), {1}});
    Pencil p = synthesize_pencil(s, 11);
    GMatrix vj = jordan_part(p);
    REQUIRE(vj[0].size() == 1);
    // Oracle: the Jordan part is the eigenvector for 5, i.e. the kernel of S2 - 5 S1.
    GMatrix ker = kernel(p.at(Gaussian(5)));
    REQUIRE(ker[0].size() == 1);
    GMatrix both = zero_matrix(p.dimV, 2);
    for (std::size_t i = 0; i < p.dimV; ++i) {
        both[i][0] = vj[i][0];
        both[i][1] = ker[i][0];
    }
    CHECK(exact_rank(both) == 1);
    BlockStructure bad;
    bad.kronecker_minus = {1};
    CHECK_THROWS(jordan_part(synthesize_pencil(bad, 1)));
}

TEST_CASE("synthesized templates") {
    BlockStructure kp;
    kp.kronecker_plus = {2};
    Pencil a = synthesize_pencil(kp, 1);
    CHECK(a.dimW == 3);
    CHECK(a.dimV == 2);
    BlockStructure ji;
    ji.jordan.push_back({Eigenvalue::infinite(), {2}});
    Pencil t = block_template_pencil(ji);
    CHECK(t.S1 == M({{0, 1}, {0, 0}}));
    CHECK(t.S2 == M({{1, 0}, {0, 1}}));
    BlockStructure km;
    km.kronecker_minus = {1};
    Pencil b = block_template_pencil(km);
    CHECK(b.dimW == 1);
    CHECK(b.dimV == 2);
    CHECK(b.S1 == M({{1, 0}}));
    CHECK(b.S2 == M({{0, 1}}));
    CHECK(block_structure(synthesize_pencil(km, 4)) == km);
}

TEST_CASE("round trip and rank consistency on random inventories") {
    std::mt19937_64 rng(2024);
    auto start = std::chrono::steady_clock::now();
    int failures = 0;
    for (int i = 0; i < 200; ++i) {
        BlockStructure s = random_block_structure(rng, 10, i % 4 == 0);
        Pencil p = synthesize_pencil(s, static_cast<std::uint64_t>(i) + 1);
        BlockStructure back = block_structure(p);
        if (!(back == s)) {
            ++failures;
            MESSAGE("expected " << s.str() << " got " << back.str());
        }
        CHECK(generic_rank(p) == s.rank());
        if (back.dim_v() + back.dim_w() > 0)
            CHECK(exceptional_set(p).empty() == (classify(back).kind == PencilKind::Kronecker));
    }
    CHECK(failures == 0);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE("200 round trips in " << secs << " s");
}

TEST_CASE("skew pairs have mirrored Kronecker blocks") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> pick(-3, 3);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 2 + static_cast<std::size_t>(t % 5);
        GMatrix a = zero_matrix(n, n), b = zero_matrix(n, n);
        // Low-rank skew forms so that Kronecker blocks actually occur.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if ((i + j + t) % 3 == 0) continue;
                a[i][j] = Gaussian(pick(rng));
                a[j][i] = -a[i][j];
                b[i][j] = Gaussian(pick(rng));
                b[j][i] = -b[i][j];
            }
        BlockStructure s = block_structure(Pencil(a, b));
        CHECK(s.kronecker_plus == s.kronecker_minus);
    }
}
