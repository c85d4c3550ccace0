#include "kronweb/pde.hpp"

#include <algorithm>
#include <set>

namespace kronweb {

namespace {

const std::vector<std::string> three_d{"A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3", "C0", "C1", "H"};

ZeroVerdict proven(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

template <class T>
T from_q(const mpq_class& v);
template <>
Scalar from_q<Scalar>(const mpq_class& v) {
    return Scalar(v);
}
template <>
long double from_q<long double>(const mpq_class& v) {
    return static_cast<long double>(v.get_num().get_d()) / static_cast<long double>(v.get_den().get_d());
}

// Values and derivatives of the unknowns at one point: d1[k][i] = f^k_i, d2[k][i][j] = f^k_ij.
template <class T>
struct Jet {
    std::vector<T> x;
    std::vector<std::vector<T>> d1;
    std::vector<std::vector<std::vector<T>>> d2;
};

// Whether l_i (0-based) of the A/B/C families is a coordinate function.
bool lambda_is_coordinate(const std::string& sym, std::size_t i) {
    int k = sym.size() == 2 ? sym[1] - '0' : 0;
    switch (sym[0]) {
    case 'A':
        return static_cast<int>(i) < 3 - k;
    case 'B':
        if (i == 1) return k == 0 || k == 1;
        if (i == 2) return k == 0 || k == 2;
        return false;
    case 'C':
        return k == 0 && i == 2;
    default:
        return false;
    }
}

std::vector<mpq_class> effective_constants(const EquationSpec& eq) {
    return eq.symbol == "H" ? hirota_lambdas(eq.constants) : eq.constants;
}

template <class T>
T lambda_at(const EquationSpec& eq, const std::vector<mpq_class>& c, const std::vector<T>& x, std::size_t i) {
    if (lambda_is_coordinate(eq.symbol, i)) return x[i];
    return from_q<T>(c[i]);
}

template <class T>
std::vector<T> residual_formula(const EquationSpec& eq, const Jet<T>& j) {
    const auto& s = eq.symbol;
    if (eq.dim == 4) {
        const auto& l = eq.constants;
        std::vector<T> lam;
        if (s == "K4")
            for (const auto& v : l) lam.push_back(from_q<T>(v));
        std::vector<T> out;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& f = j.d1[i];
            const auto& g = j.d1[1 - i];
            const auto& h = j.d2[i];
            auto w = [&](std::size_t a, std::size_t b) { return f[a] * g[b] - g[a] * f[b]; };
            if (s == "K4") {
                out.push_back((lam[0] - lam[1]) * h[0][1] * w(2, 3) + (lam[2] - lam[0]) * h[0][2] * w(1, 3) +
                              (lam[0] - lam[3]) * h[0][3] * w(1, 2) + (lam[1] - lam[2]) * h[1][2] * w(0, 3) +
                              (lam[3] - lam[1]) * h[1][3] * w(0, 2) + (lam[2] - lam[3]) * h[2][3] * w(0, 1));
            } else {
                out.push_back(h[0][2] * w(1, 3) - h[0][3] * w(1, 2) - h[1][2] * w(0, 3) + h[1][3] * w(0, 2));
            }
        }
        return out;
    }
    const auto& f = j.d1[0];
    const auto& h = j.d2[0];
    if (s == "H") {
        const auto& a = eq.constants;
        return {from_q<T>(a[0]) * f[0] * h[1][2] + from_q<T>(a[1]) * f[1] * h[2][0] + from_q<T>(a[2]) * f[2] * h[0][1]};
    }
    const auto& c = eq.constants;
    switch (s[0]) {
    case 'A': {
        T l1 = lambda_at(eq, c, j.x, 0), l2 = lambda_at(eq, c, j.x, 1), l3 = lambda_at(eq, c, j.x, 2);
        return {(l2 - l3) * f[0] * h[1][2] + (l3 - l1) * f[1] * h[2][0] + (l1 - l2) * f[2] * h[0][1]};
    }
    case 'B': {
        T l2 = lambda_at(eq, c, j.x, 1), l3 = lambda_at(eq, c, j.x, 2);
        T dl2 = lambda_is_coordinate(s, 1) ? T(from_q<T>(1)) : T(from_q<T>(0));
        return {f[0] * h[0][2] - f[2] * h[0][0] + (l2 - l3) * (f[0] * h[1][2] - f[1] * h[0][2]) + dl2 * f[0] * f[2]};
    }
    default:
        if (s == "C0")
            return {(f[0] * h[1][1] - f[1] * h[0][1]) * j.x[1] + f[2] * h[1][1] - f[1] * h[1][2] + f[1] * h[0][0] -
                    f[0] * h[0][1] + f[0] * f[1]};
        return {f[0] * h[2][0] - f[2] * h[0][0] + f[1] * h[0][1] - f[0] * h[1][1]};
    }
}

void check_solution(const EquationSpec& eq, const SymbolicSolution& s) {
    if (s.chart.dim() != eq.dim) throw PdeError("dimension mismatch: equation " + eq.symbol + " lives in dimension " + std::to_string(eq.dim));
    if (s.f.size() != eq.functions())
        throw PdeError(eq.symbol + " needs " + std::to_string(eq.functions()) + " unknown function(s)");
}

Jet<Scalar> symbolic_jet(const SymbolicSolution& s) {
    const auto& c = s.chart;
    Jet<Scalar> j;
    for (std::size_t i = 0; i < c.dim(); ++i) j.x.push_back(c.coordinate(i));
    for (const auto& f : s.f) {
        std::vector<Scalar> d1;
        std::vector<std::vector<Scalar>> d2(c.dim(), std::vector<Scalar>(c.dim()));
        for (std::size_t a = 0; a < c.dim(); ++a) d1.push_back(partial(f, c, a));
        for (std::size_t a = 0; a < c.dim(); ++a)
            for (std::size_t b = a; b < c.dim(); ++b) d2[a][b] = d2[b][a] = partial(d1[a], c, b);
        j.d1.push_back(d1);
        j.d2.push_back(d2);
    }
    return j;
}

std::vector<Scalar> gradient(const SymbolicSolution& s, std::size_t k) {
    std::vector<Scalar> g;
    for (std::size_t i = 0; i < s.chart.dim(); ++i) g.push_back(partial(s.f[k], s.chart, i));
    return g;
}

// 2x2 minors of the Jacobian of (f1, f2) on the coordinate pairs (1,2) and (3,4).
std::pair<Scalar, Scalar> jacobian_minors(const SymbolicSolution& s) {
    auto a = gradient(s, 0), b = gradient(s, 1);
    return {a[0] * b[1] - a[1] * b[0], a[2] * b[3] - a[3] * b[2]};
}

// Fields spanning the common level sets of the unknowns.
std::vector<VectorField> level_fields(const SymbolicSolution& s, const ZeroPolicy& policy) {
    if (s.f.size() == 1) return level_set_fields(s.chart, s.f[0]);
    const std::size_t n = s.chart.dim();
    auto a = gradient(s, 0), b = gradient(s, 1);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
            Scalar det = a[p] * b[q] - a[q] * b[p];
            if (!definitely_nonzero(det, policy)) continue;
            std::vector<VectorField> out;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == p || r == q) continue;
                // Solve [a_p a_q; b_p b_q] c = -(a_r, b_r).
                std::vector<Scalar> v(n, Scalar(0));
                v[r] = Scalar(1);
                v[p] = (-a[r] * b[q] + a[q] * b[r]) / det;
                v[q] = (-a[p] * b[r] + a[r] * b[p]) / det;
                out.emplace_back(s.chart, v);
            }
            return out;
        }
    throw PdeError("the unknowns are functionally dependent");
}

mpq_class eval_at(const Scalar& v, const Chart& c, const std::vector<mpq_class>& point) {
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < c.dim(); ++i) at[c.id(i)] = point.at(i);
    return v.evaluate_exact(at);
}

bool nonzero_at(const Scalar& v, const Chart& c, const std::vector<mpq_class>& point) {
    if (v.has_atoms()) {
        auto r = ScalarEvaluator(v, c).run(PointSampler::to_float(point), 1e-12L);
        if (r.singular || r.domain) return false;
        return std::fabs(r.value) > 1e-9L * std::max<long double>(1, r.scale);
    }
    try {
        return sgn(eval_at(v, c, point)) != 0;
    } catch (const EvalError&) {
        return false;
    }
}

}  // namespace

std::vector<mpq_class> hirota_lambdas(const std::vector<mpq_class>& a) {
    if (a.size() != 3) throw PdeError("the Hirota coefficient form needs three coefficients");
    return {mpq_class(0), -a[2], a[1]};
}

EquationSpec make_equation(const std::string& symbol, const std::vector<mpq_class>& constants) {
    EquationSpec eq{symbol, constants, 3};
    auto distinct = [&](const std::vector<mpq_class>& v) {
        if (std::set<mpq_class>(v.begin(), v.end()).size() != v.size())
            throw PdeError(symbol + " needs pairwise distinct constants");
    };
    if (symbol == "K4" || symbol == "K4DEG") {
        eq.dim = 4;
        std::size_t need = symbol == "K4" ? 4 : 2;
        if (constants.size() != need) throw PdeError(symbol + " needs " + std::to_string(need) + " eigenvalues");
        distinct(constants);
        return eq;
    }
    if (std::find(three_d.begin(), three_d.end(), symbol) == three_d.end()) throw PdeError("unknown equation " + symbol);
    if (constants.size() > 3) throw PdeError(symbol + " takes at most three constants");
    if (symbol == "H") {
        if (constants.size() != 3) throw PdeError("H needs three coefficients");
        if (constants[0] + constants[1] + constants[2] != 0) throw PdeError("Hirota coefficients must sum to zero");
        if (sgn(constants[0]) == 0 || sgn(constants[1]) == 0 || sgn(constants[2]) == 0)
            throw PdeError("Hirota coefficients must be nonzero");
        return eq;
    }
    eq.constants.resize(3, mpq_class(0));
    std::vector<mpq_class> used;
    std::vector<std::size_t> idx = symbol[0] == 'A' ? std::vector<std::size_t>{0, 1, 2}
                                   : symbol[0] == 'B' ? std::vector<std::size_t>{1, 2}
                                                      : std::vector<std::size_t>{};
    std::size_t constant_count = 0;
    for (auto i : idx)
        if (!lambda_is_coordinate(symbol, i)) {
            if (i >= constants.size()) throw PdeError(symbol + " needs constant a" + std::to_string(i + 1));
            used.push_back(constants[i]);
            ++constant_count;
        }
    if (symbol == "C1" && constants.size() < 3) throw PdeError("C1 needs constant a3");
    if (constant_count > 1) distinct(used);
    return eq;
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        const std::string a_eq = "(l2-l3)*f_1*f_23 + (l3-l1)*f_2*f_31 + (l1-l2)*f_3*f_12";
        const std::string a_al = "(l2-l)(l3-l)f_1 dx1 + (l3-l)(l1-l)f_2 dx2 + (l1-l)(l2-l)f_3 dx3";
        const std::string b_eq = "f_1*f_13 - f_3*f_11 + (l2-l3)*(f_1*f_23 - f_2*f_13) + l2'*f_1*f_3";
        const std::string b_al = "(l2-l)(l3-l)(f_1 dx1 + f_2 dx2) + (l2-l)^2 f_3 dx3 - (l3-l) f_1 dx2";
        std::vector<CatalogEntry> e{
            {"A0", 3, 0, a_eq, a_al, {"l1=x1", "l2=x2", "l3=x3"}},
            {"A1", 3, 1, a_eq, a_al, {"l1=x1", "l2=x2", "l3=a3"}},
            {"A2", 3, 2, a_eq, a_al, {"l1=x1", "l2=a2", "l3=a3"}},
            {"A3", 3, 3, a_eq, a_al, {"l1=a1", "l2=a2", "l3=a3"}},
            {"B0", 3, 0, b_eq, b_al, {"l2=x2", "l3=x3"}},
            {"B1", 3, 1, b_eq, b_al, {"l2=x2", "l3=a3"}},
            {"B2", 3, 1, b_eq, b_al, {"l2=a2", "l3=x3"}},
            {"B3", 3, 2, b_eq, b_al, {"l2=a2", "l3=a3"}},
            {"C0", 3, 0, "(f_1*f_22 - f_2*f_12)*x2 + f_3*f_22 - f_2*f_23 + f_2*f_11 - f_1*f_12 + f_1*f_2",
             "f_1((x3-l)^2 dx1 - (x3-l) dx3) + f_2(-(x3-l) dx1 + (x3-l)^2 dx2 + (x2(x3-l)+1) dx3) + f_3 (x3-l)^2 dx3", {}},
            {"C1", 3, 1, "f_1*f_31 - f_3*f_11 + f_2*f_12 - f_1*f_22",
             "f_1((a3-l)^2 dx1 - (a3-l) dx2 + dx3) + f_2((a3-l)^2 dx2 - (a3-l) dx3) + f_3 (a3-l)^2 dx3", {}},
            {"H", 3, 3, "a1*f_1*f_23 + a2*f_2*f_31 + a3*f_3*f_12, a1+a2+a3 = 0",
             "A3 form with l = (0, -a3, a2)", {"l1=0", "l2=-a3", "l3=a2"}},
            {"K4", 4, 4,
             "(l1-l2) f^i_12 W^i_34 + (l3-l1) f^i_13 W^i_24 + (l1-l4) f^i_14 W^i_23 + (l2-l3) f^i_23 W^i_14 + "
             "(l4-l2) f^i_24 W^i_13 + (l3-l4) f^i_34 W^i_12, W^i_ab = f^i_a f^j_b - f^j_a f^i_b",
             "omega_i = sum_j prod_{m != j} (l-lm) f^i_j dx_j", {}},
            {"K4DEG", 4, 2, "f^i_13 W^i_24 - f^i_14 W^i_23 - f^i_23 W^i_14 + f^i_24 W^i_13",
             "omega_i = (l-l3)(f^i_1 dx1 + f^i_2 dx2) + (l-l1)(f^i_3 dx3 + f^i_4 dx4)", {}},
        };
        return e;
    }();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& symbol) {
    for (const auto& e : catalog())
        if (e.symbol == symbol) return e;
    throw PdeError("unknown equation " + symbol);
}

SymbolicSolution parse_solution(const EquationSpec& eq, const std::vector<std::string>& texts) {
    SymbolicSolution s{Chart::standard(eq.dim), {}};
    for (const auto& t : texts) s.f.push_back(s.chart.parse(t));
    check_solution(eq, s);
    return s;
}

std::vector<Scalar> residual(const EquationSpec& eq, const SymbolicSolution& s) {
    check_solution(eq, s);
    return residual_formula(eq, symbolic_jet(s));
}

ZeroVerdict residual_verdict(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    ZeroVerdict v = proven(policy);
    for (const auto& r : residual(eq, s)) merge_verdict(v, zero_test(r, policy));
    return v;
}

OneOneTensor equation_operator(const EquationSpec& eq) {
    if (eq.dim == 3) {
        auto c = effective_constants(eq);
        return normal_form(eq.symbol == "H" ? "A3" : eq.symbol, 'N', c);
    }
    auto chart = Chart::standard(4);
    std::vector<mpq_class> l = eq.constants;
    if (eq.symbol == "K4DEG") l = {eq.constants[0], eq.constants[0], eq.constants[1], eq.constants[1]};
    RFMatrix m(4, std::vector<Scalar>(4, Scalar(0)));
    for (std::size_t i = 0; i < 4; ++i) m[i][i] = Scalar(l[i]);
    return OneOneTensor(chart, m);
}

Form alpha_display(const EquationSpec& eq, const SymbolicSolution& s, const Scalar& l) {
    check_solution(eq, s);
    if (eq.dim != 3) throw PdeError("alpha^l is defined for the 3D equations");
    auto f = gradient(s, 0);
    auto c = effective_constants(eq);
    std::vector<Scalar> x;
    for (std::size_t i = 0; i < 3; ++i) x.push_back(s.chart.coordinate(i));
    std::vector<Scalar> a(3);
    switch (eq.symbol[0]) {
    case 'A':
    case 'H': {
        Scalar m1 = lambda_at(eq, c, x, 0) - l, m2 = lambda_at(eq, c, x, 1) - l, m3 = lambda_at(eq, c, x, 2) - l;
        a = {m2 * m3 * f[0], m3 * m1 * f[1], m1 * m2 * f[2]};
        break;
    }
    case 'B': {
        Scalar mu = lambda_at(eq, c, x, 1) - l, nu = lambda_at(eq, c, x, 2) - l;
        a = {mu * nu * f[0], mu * nu * f[1] - nu * f[0], mu * mu * f[2]};
        break;
    }
    default: {
        Scalar mu = lambda_at(eq, c, x, 2) - l;
        if (eq.symbol == "C0")
            a = {mu * mu * f[0] - mu * f[1], mu * mu * f[1], -mu * f[0] + (x[1] * mu + Scalar(1)) * f[1] + mu * mu * f[2]};
        else
            a = {mu * mu * f[0], -mu * f[0] + mu * mu * f[1], f[0] - mu * f[1] + mu * mu * f[2]};
    }
    }
    return Form::one_form(s.chart, a);
}

std::vector<Form> annihilator_forms(const EquationSpec& eq, const SymbolicSolution& s, const Scalar& l) {
    check_solution(eq, s);
    if (eq.dim != 4) throw PdeError("omega^l is defined for the 4D systems");
    std::vector<Form> out;
    for (std::size_t k = 0; k < 2; ++k) {
        auto f = gradient(s, k);
        std::vector<Scalar> w(4);
        if (eq.symbol == "K4DEG") {
            Scalar p = l - Scalar(eq.constants[1]), q = l - Scalar(eq.constants[0]);
            w = {p * f[0], p * f[1], q * f[2], q * f[3]};
        } else {
            for (std::size_t j = 0; j < 4; ++j) {
                Scalar c(1);
                for (std::size_t m = 0; m < 4; ++m)
                    if (m != j) c *= l - Scalar(eq.constants[m]);
                w[j] = c * f[j];
            }
        }
        out.push_back(Form::one_form(s.chart, w));
    }
    return out;
}

namespace {

// alpha_0, alpha_1, alpha_2 from alpha^l at l = 0, 1, -1.
std::vector<Form> alpha_coefficients(const EquationSpec& eq, const SymbolicSolution& s) {
    Form p0 = alpha_display(eq, s, Scalar(0)), p1 = alpha_display(eq, s, Scalar(1)), m1 = alpha_display(eq, s, Scalar(-1));
    Scalar half(mpq_class(1, 2));
    return {p0, half * (p1 - m1), half * (p1 + m1) - p0};
}

Scalar alpha_determinant(const EquationSpec& eq, const SymbolicSolution& s) {
    RFMatrix m;
    for (const auto& a : alpha_coefficients(eq, s)) m.push_back(a.components());
    return small_determinant(m);
}

}  // namespace

bool solution_nondegeneracy(const EquationSpec& eq, const SymbolicSolution& s, const std::vector<mpq_class>& point) {
    check_solution(eq, s);
    if (eq.dim == 3) return nonzero_at(alpha_determinant(eq, s), s.chart, point);
    auto [j12, j34] = jacobian_minors(s);
    return nonzero_at(j12, s.chart, point) && nonzero_at(j34, s.chart, point);
}

bool solution_nondegenerate(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    check_solution(eq, s);
    if (eq.dim == 3) return definitely_nonzero(alpha_determinant(eq, s), policy);
    auto [j12, j34] = jacobian_minors(s);
    return definitely_nonzero(j12, policy) && definitely_nonzero(j34, policy);
}

namespace {

void require_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    auto v = residual_verdict(eq, s, policy);
    if (!v.zero()) throw PdeError("not a solution of " + eq.symbol + ": " + v.describe());
    if (!solution_nondegenerate(eq, s, policy)) throw PdeError("degenerate solution");
}

}  // namespace

VeroneseWeb veronese_web_from_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    check_solution(eq, s);
    if (eq.dim != 3) throw PdeError("Veronese webs come from the 3D equations");
    require_solution(eq, s, policy);
    return VeroneseWeb{s.chart, alpha_coefficients(eq, s)};
}

KroneckerWebData kronecker_web_from_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    check_solution(eq, s);
    if (eq.dim != 4) throw PdeError("Kronecker web data comes from the 4D systems");
    require_solution(eq, s, policy);
    auto n = equation_operator(eq);
    KroneckerWebData k{s.chart, {}, {}};
    for (const auto& z : level_fields(s, policy)) {
        k.phi1.push_back(z.components());
        k.phi2.push_back(n.apply(z).components());
    }
    return k;
}

SolutionWeb web_from_solution(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    if (eq.dim == 4) return kronecker_web_from_solution(eq, s, policy);
    return veronese_web_from_solution(eq, s, policy);
}

std::vector<DistinguishedFoliation> distinguished_foliations(const EquationSpec& eq) {
    std::vector<DistinguishedFoliation> out;
    if (eq.dim == 4) {
        if (eq.symbol == "K4DEG") return {{Scalar(eq.constants[0]), {0, 1}}, {Scalar(eq.constants[1]), {2, 3}}};
        for (std::size_t i = 0; i < 4; ++i) out.push_back({Scalar(eq.constants[i]), {i}});
        return out;
    }
    auto c = effective_constants(eq);
    std::vector<Scalar> x;
    for (std::size_t i = 0; i < 3; ++i) x.push_back(Chart::standard(3).coordinate(i));
    std::vector<std::size_t> idx = eq.symbol[0] == 'A' || eq.symbol == "H" ? std::vector<std::size_t>{0, 1, 2}
                                   : eq.symbol[0] == 'B'                    ? std::vector<std::size_t>{1, 2}
                                                                            : std::vector<std::size_t>{2};
    for (auto i : idx) out.push_back({lambda_at(eq, c, x, i), {i}});
    return out;
}

ZeroVerdict check_distinguished_foliations(const EquationSpec& eq, const SymbolicSolution& s, const ZeroPolicy& policy) {
    check_solution(eq, s);
    auto n = equation_operator(eq);
    auto tf = level_fields(s, policy);
    ZeroVerdict v = proven(policy);
    for (const auto& d : distinguished_foliations(eq)) {
        auto m = n.combine(-d.eigenvalue, Scalar(1));
        for (const auto& z : tf) {
            auto y = m.apply(z);
            for (auto i : d.coordinates) merge_verdict(v, zero_test(y[i], policy));
        }
    }
    return v;
}

std::vector<long double> residual_from_jet(const EquationSpec& eq, const std::vector<long double>& x,
                                           const std::vector<std::vector<long double>>& d1,
                                           const std::vector<std::vector<std::vector<long double>>>& d2) {
    return residual_formula(eq, Jet<long double>{x, d1, d2});
}

std::vector<Scalar> residual_from_jet(const EquationSpec& eq, const std::vector<Scalar>& x, const std::vector<std::vector<Scalar>>& d1,
                                      const std::vector<std::vector<std::vector<Scalar>>>& d2) {
    return residual_formula(eq, Jet<Scalar>{x, d1, d2});
}

}  // namespace kronweb
