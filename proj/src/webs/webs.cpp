#include "kronweb/webs.hpp"

#include <Eigen/Dense>

#include <complex>

namespace kronweb {

namespace {

ZeroVerdict proven(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

void check_shape(const VeroneseWeb& w) {
    if (w.alpha.size() != w.chart.dim()) throw WebError("a web on a chart of dimension n+1 needs n+1 forms");
    for (const auto& a : w.alpha)
        if (a.degree() != 1 || a.chart() != w.chart) throw WebError("web forms must be one-forms on the web chart");
}

// 0, 1, -1, 2, -2, ...
std::vector<mpq_class> sample_parameters(int m) {
    std::vector<mpq_class> out;
    for (int k = 0; static_cast<int>(out.size()) < m; ++k) {
        out.emplace_back(k);
        if (k != 0 && static_cast<int>(out.size()) < m) out.emplace_back(-k);
    }
    return out;
}

}  // namespace

VeroneseWeb make_web(const Chart& chart, const std::vector<std::vector<std::string>>& rows) {
    VeroneseWeb w{chart, {}};
    for (const auto& r : rows) {
        if (r.size() != chart.dim()) throw WebError("coframe row has the wrong length");
        std::vector<Scalar> comps;
        for (const auto& t : r) comps.push_back(chart.parse(t));
        w.alpha.push_back(Form::one_form(chart, comps));
    }
    check_shape(w);
    return w;
}

VeroneseWeb flat_web(std::size_t n) {
    auto c = Chart::standard(n + 1);
    VeroneseWeb w{c, {}};
    for (std::size_t k = 0; k <= n; ++k) w.alpha.push_back(Form::differential(c, c.coordinate(k)));
    return w;
}

Form alpha_lambda(const VeroneseWeb& w, const Scalar& lambda) {
    check_shape(w);
    Form out(w.chart, 1);
    Scalar power(1);
    for (const auto& a : w.alpha) {
        out = out + power * a;
        power *= lambda;
    }
    return out;
}

RFMatrix coefficient_matrix(const VeroneseWeb& w) {
    check_shape(w);
    RFMatrix m;
    for (const auto& a : w.alpha) m.push_back(a.components());
    return m;
}

bool nondegenerate_at(const VeroneseWeb& w, const std::vector<mpq_class>& point) {
    auto det = small_determinant(coefficient_matrix(w));
    if (det.has_atoms()) return nondegenerate_at(w, PointSampler::to_float(point));
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < w.chart.dim(); ++i) at[w.chart.id(i)] = point.at(i);
    try {
        return sgn(det.evaluate_exact(at)) != 0;
    } catch (const EvalError&) {
        return false;
    }
}

bool nondegenerate_at(const VeroneseWeb& w, const std::vector<long double>& point, double tolerance) {
    auto det = small_determinant(coefficient_matrix(w));
    auto r = ScalarEvaluator(det, w.chart).run(point, 1e-12L);
    if (r.singular || r.domain) return false;
    return std::fabs(r.value) > tolerance * std::max<long double>(1, r.scale);
}

Form integrability_coefficient(const VeroneseWeb& w, std::size_t m) {
    check_shape(w);
    if (w.chart.dim() < 3) return Form(w.chart, 3);
    Form out(w.chart, 3);
    for (std::size_t i = 0; i <= w.n() && i <= m; ++i) {
        std::size_t j = m - i;
        if (j > w.n()) continue;
        out = out + wedge(exterior_derivative(w.alpha[i]), w.alpha[j]);
    }
    return out;
}

WebIntegrability web_integrability(const VeroneseWeb& w, WebMode mode, const ZeroPolicy& policy) {
    check_shape(w);
    WebIntegrability out;
    out.verdict = proven(policy);
    if (mode.kind == WebMode::Kind::Full) {
        for (std::size_t m = 0; m <= 2 * w.n(); ++m) {
            auto v = zero_test(integrability_coefficient(w, m), policy);
            v.note = "lambda^" + std::to_string(m) + (v.note.empty() ? "" : "; " + v.note);
            merge_verdict(out.verdict, v);
            out.parts.push_back(v);
        }
        return out;
    }
    int m = mode.samples > 0 ? mode.samples : static_cast<int>(w.n()) + 3;
    out.s_values = sample_parameters(m);
    for (const auto& s : out.s_values) {
        Form a = alpha_lambda(w, Scalar(s));
        ZeroVerdict v = w.chart.dim() < 3 ? proven(policy) : zero_test(wedge(exterior_derivative(a), a), policy);
        v.note = "s = " + s.get_str() + (v.note.empty() ? "" : "; " + v.note);
        merge_verdict(out.verdict, v);
        out.parts.push_back(v);
    }
    return out;
}

std::vector<VectorField> web_frame(const VeroneseWeb& w, const ZeroPolicy& policy) {
    check_shape(w);
    try {
        return dual_frame(w.alpha, policy);
    } catch (const CalculusError&) {
        throw WebError("degenerate coframe");
    }
}

GeometricPNO pno_from_web(const VeroneseWeb& w, const ZeroPolicy& policy) {
    auto x = web_frame(w, policy);
    GeometricPNO p{w.chart, {}, {}};
    for (std::size_t k = 0; k < w.n(); ++k) {
        p.fields.push_back(x[k]);
        p.images.push_back(x[k + 1]);
    }
    return p;
}

VeroneseWeb web_from_pno(const GeometricPNO& p, const ZeroPolicy& policy) {
    const std::size_t n = p.rank(), dim = p.chart.dim();
    if (n == 0 || n + 1 != dim) throw WebError("not of generic type: the domain must have corank 1");
    std::vector<VectorField> x;
    if (n == 2) {
        try {
            auto f = adapted_frame(p, policy);
            x = {f.X0, f.X1, f.X2};
        } catch (const NijenhuisError& e) {
            throw WebError(std::string("not of generic type: ") + e.what());
        }
    } else {
        // Unknowns c^(0..n-1) in Z-coordinates with sum_i c^(k)_i N Z_i = sum_i c^(k+1)_i Z_i.
        RFMatrix sys;
        for (std::size_t k = 0; k + 1 < n; ++k)
            for (std::size_t r = 0; r < dim; ++r) {
                std::vector<Scalar> row(n * n, Scalar(0));
                for (std::size_t i = 0; i < n; ++i) {
                    row[k * n + i] = p.images[i][r];
                    row[(k + 1) * n + i] = -p.fields[i][r];
                }
                sys.push_back(row);
            }
        std::vector<Scalar> c;
        if (sys.empty()) {
            c.assign(n * n, Scalar(0));
            c[0] = Scalar(1);
        } else {
            auto ker = nullspace(sys, policy);
            if (ker.size() != 1) throw WebError("not of generic type: the chain space has dimension " + std::to_string(ker.size()));
            c = ker[0];
        }
        for (std::size_t k = 0; k < n; ++k) {
            auto v = VectorField::zero(p.chart);
            for (std::size_t i = 0; i < n; ++i) v = v + c[k * n + i] * p.fields[i];
            x.push_back(v);
        }
        std::vector<Scalar> last(c.begin() + static_cast<long>((n - 1) * n), c.end());
        x.push_back(p.apply(last));
    }
    try {
        return VeroneseWeb{p.chart, dual_coframe(x, policy)};
    } catch (const CalculusError&) {
        throw WebError("not of generic type: the chain frame is degenerate");
    }
}

ZeroVerdict same_foliations(const VeroneseWeb& a, const VeroneseWeb& b, const ZeroPolicy& policy) {
    if (a.chart != b.chart) throw WebError("chart mismatch");
    auto l = Scalar::symbol(intern_variable("lambda"));
    return zero_test(wedge(alpha_lambda(a, l), alpha_lambda(b, l)), policy);
}

std::vector<Scalar> selfpropelled_residual(const VeroneseWeb& w, const Scalar& phi, const ZeroPolicy& policy) {
    auto x = web_frame(w, policy);
    std::vector<Scalar> out;
    for (std::size_t k = 0; k < w.n(); ++k) out.push_back(phi * x[k].apply(phi) - x[k + 1].apply(phi));
    return out;
}

GeometricPNO kronecker_pno_from_data(const KroneckerWebData& k, const ZeroPolicy& policy) {
    const auto& c = k.chart;
    if (k.phi1.size() != k.phi2.size()) throw WebError("phi1 and phi2 need the same rank");
    for (const auto* m : {&k.phi1, &k.phi2})
        for (const auto& row : *m)
            if (row.size() != c.dim()) throw WebError("morphism rows must have the chart dimension");
    if (rank(k.phi1, policy) != k.phi1.size()) throw WebError("phi1^t is not injective");
    GeometricPNO p{c, {}, {}};
    for (std::size_t i = 0; i < k.phi1.size(); ++i) {
        p.fields.emplace_back(c, k.phi1[i]);
        p.images.emplace_back(c, k.phi2[i]);
    }
    return p;
}

bool kronecker_surjective(const KroneckerWebData& k, int samples, std::uint64_t seed) {
    using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
    const std::size_t rows = k.phi1.size(), cols = k.chart.dim();
    bool rational = true;
    for (const auto* m : {&k.phi1, &k.phi2})
        for (const auto& row : *m)
            for (const auto& e : row) rational = rational && !e.has_atoms();
    ZeroPolicy policy;
    policy.seed = seed;
    PointSampler sampler(k.chart, policy);

    if (rational) {
        for (int t = 0; t < samples; ++t) {
            auto x = sampler.next_exact();
            std::map<SymId, mpq_class> at;
            for (std::size_t i = 0; i < cols; ++i) at[k.chart.id(i)] = x[i];
            GMatrix a = zero_matrix(cols, rows), b = zero_matrix(cols, rows);
            try {
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < cols; ++j) {
                        a[j][i] = Gaussian(k.phi1[i][j].evaluate_exact(at));
                        b[j][i] = Gaussian(k.phi2[i][j].evaluate_exact(at));
                    }
            } catch (const EvalError&) {
                continue;
            }
            auto bs = block_structure(Pencil(a, b, cols, rows));
            if (!bs.jordan.empty() || !bs.kronecker_minus.empty()) return false;
        }
        return true;
    }

    std::vector<std::vector<ScalarEvaluator>> e1(rows), e2(rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            e1[i].emplace_back(k.phi1[i][j], k.chart);
            e2[i].emplace_back(k.phi2[i][j], k.chart);
        }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (int t = 0; t < samples; ++t) {
        auto x = sampler.next();
        std::complex<double> s1(g(rng), g(rng)), s2(g(rng), g(rng));
        CMat m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = s1 * static_cast<double>(e1[i][j](x)) + s2 * static_cast<double>(e2[i][j](x));
        Eigen::JacobiSVD<CMat> svd(m);
        const auto& sv = svd.singularValues();
        if (sv.size() < static_cast<long>(rows) || sv(sv.size() - 1) <= 1e-9 * std::max(1.0, sv(0))) return false;
    }
    return true;
}

WebIntegrability kronecker_integrability(const KroneckerWebData& k, int samples, const ZeroPolicy& policy) {
    auto p = kronecker_pno_from_data(k, policy);
    WebIntegrability out;
    out.verdict = distribution_integrability(p.fields, policy);
    out.verdict.note = "T F" + (out.verdict.note.empty() ? "" : "; " + out.verdict.note);
    out.parts.push_back(out.verdict);
    out.s_values = sample_parameters(samples);
    for (const auto& s : out.s_values) {
        std::vector<VectorField> d;
        for (std::size_t i = 0; i < p.rank(); ++i) d.push_back(p.images[i] - Scalar(s) * p.fields[i]);
        auto v = distribution_integrability(d, policy);
        v.note = "l = " + s.get_str() + (v.note.empty() ? "" : "; " + v.note);
        merge_verdict(out.verdict, v);
        out.parts.push_back(v);
    }
    return out;
}

}  // namespace kronweb
