#include "kronweb/calculus.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kronweb {

namespace {

void same_chart(const Chart& a, const Chart& b) {
    if (a != b) throw CalculusError("objects live on different charts");
}

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(Form::Index& idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return 0;
    return sign;
}

// All strictly increasing tuples of length k below n.
std::vector<Form::Index> combinations(std::size_t n, std::size_t k) {
    std::vector<Form::Index> out;
    Form::Index cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

Scalar small_determinant(const RFMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return Scalar(1);
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Scalar out(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        RFMatrix minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Scalar> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[i][c]);
            minor.push_back(row);
        }
        Scalar t = m[0][j] * small_determinant(minor);
        out += j % 2 ? -t : t;
    }
    return out;
}

std::vector<Scalar> maximal_minors(const RFMatrix& rows) {
    const std::size_t k = rows.size(), n = k ? rows[0].size() : 0;
    std::vector<Scalar> out;
    for (const auto& cols : combinations(n, k)) {
        RFMatrix sub;
        for (const auto& r : rows) {
            std::vector<Scalar> row;
            for (auto c : cols) row.push_back(r[c]);
            sub.push_back(row);
        }
        out.push_back(small_determinant(sub));
    }
    return out;
}

std::optional<RFMatrix> small_inverse(const RFMatrix& m) {
    const std::size_t n = m.size();
    Scalar det = small_determinant(m);
    if (det.is_zero()) return std::nullopt;
    Scalar inv_det = det.inverse();
    RFMatrix out(n, std::vector<Scalar>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // out[j][i] = (-1)^(i+j) * minor(i, j) / det
            RFMatrix minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<Scalar> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(row);
            }
            Scalar v = small_determinant(minor) * inv_det;
            out[j][i] = (i + j) % 2 ? -v : v;
        }
    return out;
}

namespace {

bool all_zero(const std::vector<Scalar>& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool all_rational(const std::vector<VectorField>& fields) {
    for (const auto& f : fields)
        for (const auto& c : f.components())
            if (c.has_atoms()) return false;
    return true;
}

RFMatrix rows_of(const std::vector<VectorField>& fields) {
    RFMatrix m;
    for (const auto& f : fields) m.push_back(f.components());
    return m;
}

ZeroVerdict proven_zero(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

}  // namespace

Chart::Chart(VarList names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw CalculusError("duplicate chart variable " + n);
        ids_.push_back(intern_variable(n));
    }
}

Chart Chart::standard(std::size_t n, const std::string& prefix) {
    VarList names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
    return Chart(names);
}

Scalar Chart::parse(const std::string& text) const { return canonical(parse_expr(text, names_)); }

Scalar Chart::parse(const std::string& text, const VarList& extra) const {
    VarList all = names_;
    all.insert(all.end(), extra.begin(), extra.end());
    return canonical(parse_expr(text, all));
}

Scalar partial(const Scalar& f, const Chart& chart, std::size_t i) { return f.derivative(chart.id(i)); }

VectorField::VectorField(Chart chart, std::vector<Scalar> components) : chart_(std::move(chart)), c_(std::move(components)) {
    if (c_.size() != chart_.dim()) throw CalculusError("vector field has the wrong number of components");
}

VectorField VectorField::coordinate(const Chart& chart, std::size_t i) {
    std::vector<Scalar> c(chart.dim(), Scalar(0));
    c[i] = Scalar(1);
    return VectorField(chart, c);
}

VectorField VectorField::zero(const Chart& chart) { return VectorField(chart, std::vector<Scalar>(chart.dim(), Scalar(0))); }

Scalar VectorField::apply(const Scalar& f) const {
    Scalar out(0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) out += c_[i] * partial(f, chart_, i);
    return out;
}

std::vector<Expr> VectorField::exprs() const {
    std::vector<Expr> out;
    for (const auto& c : c_) out.push_back(c.to_expr());
    return out;
}

std::string VectorField::str() const {
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + c_[i].str() + ")*d/d" + chart_.name(i);
    }
    return s.empty() ? "0" : s;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    same_chart(a.chart_, b.chart_);
    auto c = a.c_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
    return VectorField(a.chart_, c);
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + (-b); }

VectorField operator*(const Scalar& f, const VectorField& x) {
    auto c = x.c_;
    for (auto& v : c) v = f * v;
    return VectorField(x.chart_, c);
}

VectorField VectorField::operator-() const { return Scalar(-1) * *this; }

bool VectorField::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Scalar& s) { return s.is_zero(); });
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    same_chart(x.chart(), y.chart());
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < x.chart().dim(); ++i) c.push_back(x.apply(y[i]) - y.apply(x[i]));
    return VectorField(x.chart(), c);
}

Form::Form(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (degree < 0 || degree > max_degree) throw CalculusError("forms of degree above 3 are not supported");
}

Form Form::one_form(const Chart& chart, std::vector<Scalar> components) {
    if (components.size() != chart.dim()) throw CalculusError("one-form has the wrong number of components");
    Form f(chart, 1);
    for (std::size_t i = 0; i < components.size(); ++i) f.set({i}, components[i]);
    return f;
}

Form Form::differential(const Chart& chart, const Scalar& f) {
    Form w(chart, 0);
    w.set({}, f);
    return exterior_derivative(w);
}

Scalar Form::at(Index idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw CalculusError("index tuple does not match the form degree");
    int s = sort_sign(idx);
    if (s == 0) return Scalar(0);
    auto it = c_.find(idx);
    if (it == c_.end()) return Scalar(0);
    return s > 0 ? it->second : -it->second;
}

void Form::set(Index idx, const Scalar& v) {
    if (static_cast<int>(idx.size()) != degree_) throw CalculusError("index tuple does not match the form degree");
    for (auto i : idx)
        if (i >= chart_.dim()) throw CalculusError("form index out of range");
    int s = sort_sign(idx);
    if (s == 0) {
        if (!v.is_zero()) throw CalculusError("repeated index needs a zero coefficient");
        return;
    }
    Scalar value = s > 0 ? v : -v;
    if (value.is_zero())
        c_.erase(idx);
    else
        c_[idx] = value;
}

bool Form::is_zero() const { return c_.empty(); }

std::vector<Scalar> Form::components() const {
    if (degree_ != 1) throw CalculusError("components() needs a one-form");
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < chart_.dim(); ++i) out.push_back(at({i}));
    return out;
}

std::string Form::str() const {
    std::string s;
    for (const auto& [idx, v] : c_) {
        if (!s.empty()) s += " + ";
        s += "(" + v.str() + ")";
        for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "^d" : "*d") + chart_.name(idx[k]);
    }
    return s.empty() ? "0" : s;
}

Form operator+(const Form& a, const Form& b) {
    same_chart(a.chart_, b.chart_);
    if (a.degree_ != b.degree_) throw CalculusError("adding forms of different degree");
    Form out = a;
    for (const auto& [idx, v] : b.c_) out.set(idx, out.at(idx) + v);
    return out;
}

Form operator-(const Form& a, const Form& b) { return a + Scalar(-1) * b; }

Form operator*(const Scalar& f, const Form& a) {
    Form out(a.chart_, a.degree_);
    for (const auto& [idx, v] : a.c_) out.set(idx, f * v);
    return out;
}

Form exterior_derivative(const Form& w) {
    Form out(w.chart(), w.degree() + 1);
    for (const auto& [idx, v] : w.coefficients())
        for (std::size_t i = 0; i < w.chart().dim(); ++i) {
            if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
            Form::Index j = idx;
            j.insert(j.begin(), i);
            Scalar d = partial(v, w.chart(), i);
            if (!d.is_zero()) out.set(j, out.at(j) + d);
        }
    return out;
}

Form wedge(const Form& a, const Form& b) {
    same_chart(a.chart(), b.chart());
    int deg = a.degree() + b.degree();
    if (deg > static_cast<int>(a.chart().dim()) || deg > Form::max_degree) throw CalculusError("wedge degree overflow");
    Form out(a.chart(), deg);
    for (const auto& [ia, va] : a.coefficients())
        for (const auto& [ib, vb] : b.coefficients()) {
            Form::Index j = ia;
            j.insert(j.end(), ib.begin(), ib.end());
            Form::Index sorted = j;
            if (sort_sign(sorted) == 0) continue;
            out.set(j, out.at(j) + va * vb);
        }
    return out;
}

Scalar pairing(const Form& alpha, const VectorField& x) {
    same_chart(alpha.chart(), x.chart());
    if (alpha.degree() != 1) throw CalculusError("pairing needs a one-form");
    Scalar out(0);
    for (const auto& [idx, v] : alpha.coefficients()) out += v * x[idx[0]];
    return out;
}

Form interior(const VectorField& x, const Form& w) {
    same_chart(x.chart(), w.chart());
    if (w.degree() == 0) throw CalculusError("interior product of a function");
    Form out(w.chart(), w.degree() - 1);
    for (const auto& [idx, v] : w.coefficients())
        for (std::size_t p = 0; p < idx.size(); ++p) {
            Form::Index rest = idx;
            rest.erase(rest.begin() + static_cast<long>(p));
            Scalar term = x[idx[p]] * v;
            if (p % 2) term = -term;
            out.set(rest, out.at(rest) + term);
        }
    return out;
}

OneOneTensor::OneOneTensor(Chart chart, RFMatrix m) : chart_(std::move(chart)), m_(std::move(m)) {
    if (m_.size() != chart_.dim()) throw CalculusError("tensor matrix has the wrong shape");
    for (const auto& row : m_)
        if (row.size() != chart_.dim()) throw CalculusError("tensor matrix has the wrong shape");
}

OneOneTensor OneOneTensor::identity(const Chart& chart) {
    RFMatrix m(chart.dim(), std::vector<Scalar>(chart.dim(), Scalar(0)));
    for (std::size_t i = 0; i < chart.dim(); ++i) m[i][i] = Scalar(1);
    return OneOneTensor(chart, m);
}

OneOneTensor OneOneTensor::parse(const Chart& chart, const std::vector<std::vector<std::string>>& rows) {
    RFMatrix m;
    for (const auto& r : rows) {
        std::vector<Scalar> row;
        for (const auto& t : r) row.push_back(chart.parse(t));
        m.push_back(row);
    }
    return OneOneTensor(chart, m);
}

VectorField OneOneTensor::apply(const VectorField& x) const {
    same_chart(chart_, x.chart());
    std::vector<Scalar> c(chart_.dim(), Scalar(0));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            if (!m_[i][j].is_zero() && !x[j].is_zero()) c[i] += m_[i][j] * x[j];
    return VectorField(chart_, c);
}

Form OneOneTensor::apply_dual(const Form& a) const {
    auto comps = a.components();
    std::vector<Scalar> c(chart_.dim(), Scalar(0));
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!m_[i][j].is_zero() && !comps[i].is_zero()) c[j] += comps[i] * m_[i][j];
    return Form::one_form(chart_, c);
}

OneOneTensor OneOneTensor::combine(const Scalar& a, const Scalar& b) const {
    RFMatrix m = m_;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) m[i][j] = b * m_[i][j] + (i == j ? a : Scalar(0));
    return OneOneTensor(chart_, m);
}

std::vector<VectorField> dual_frame(const std::vector<Form>& coframe, const ZeroPolicy& policy) {
    if (coframe.empty()) return {};
    const Chart& chart = coframe[0].chart();
    if (coframe.size() != chart.dim()) throw CalculusError("a coframe needs exactly dim one-forms");
    RFMatrix m;
    for (const auto& a : coframe) {
        same_chart(chart, a.chart());
        m.push_back(a.components());
    }
    auto det = zero_test(small_determinant(m), policy);
    if (det.zero()) throw CalculusError("coframe is degenerate: determinant is " + det.tag_name());
    auto inv = small_inverse(m);
    if (!inv) throw CalculusError("coframe matrix could not be inverted");
    std::vector<VectorField> out;
    for (std::size_t j = 0; j < chart.dim(); ++j) {
        std::vector<Scalar> c;
        for (std::size_t i = 0; i < chart.dim(); ++i) c.push_back((*inv)[i][j]);
        out.emplace_back(chart, c);
    }
    return out;
}

std::vector<Form> dual_coframe(const std::vector<VectorField>& frame, const ZeroPolicy& policy) {
    if (frame.empty()) return {};
    const Chart& chart = frame[0].chart();
    if (frame.size() != chart.dim()) throw CalculusError("a frame needs exactly dim vector fields");
    // Columns are the fields; the coframe rows form the inverse.
    RFMatrix m(chart.dim(), std::vector<Scalar>(chart.dim()));
    for (std::size_t j = 0; j < frame.size(); ++j)
        for (std::size_t i = 0; i < chart.dim(); ++i) m[i][j] = frame[j][i];
    auto det = zero_test(small_determinant(m), policy);
    if (det.zero()) throw CalculusError("frame is degenerate: determinant is " + det.tag_name());
    auto inv = small_inverse(m);
    if (!inv) throw CalculusError("frame matrix could not be inverted");
    std::vector<Form> out;
    for (std::size_t i = 0; i < chart.dim(); ++i) out.push_back(Form::one_form(chart, (*inv)[i]));
    return out;
}

PointSampler::PointSampler(const Chart& chart, const ZeroPolicy& policy)
    : n_(chart.dim()), policy_(policy), rng_(policy.seed ^ 0x9e3779b97f4a7c15ULL) {}

std::vector<mpq_class> PointSampler::next_exact() {
    std::vector<mpq_class> x;
    std::uniform_int_distribution<long> den(1, std::max(1L, policy_.max_denominator));
    for (std::size_t i = 0; i < n_; ++i) {
        long d = den(rng_);
        long lo = static_cast<long>(std::ceil(policy_.box_lo * static_cast<double>(d)));
        long hi = static_cast<long>(std::floor(policy_.box_hi * static_cast<double>(d)));
        if (hi < lo) hi = lo;
        mpq_class q(std::uniform_int_distribution<long>(lo, hi)(rng_), d);
        q.canonicalize();
        x.push_back(q);
    }
    return x;
}

std::vector<long double> PointSampler::to_float(const std::vector<mpq_class>& x) {
    std::vector<long double> out;
    for (const auto& q : x) out.push_back(static_cast<long double>(q.get_d()));
    return out;
}

std::vector<long double> PointSampler::next() { return to_float(next_exact()); }

ScalarEvaluator::ScalarEvaluator(const Scalar& f, const Chart& chart) : code_(f.to_expr(), chart.names()) {}

CompiledExpr::Result ScalarEvaluator::run(const std::vector<long double>& x, long double singular_radius) const {
    return code_.run(x.data(), singular_radius);
}

namespace {

struct FieldSample {
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m;
    long double scale = 1;
    bool bad = false;
};

FieldSample sample_fields(const std::vector<std::vector<ScalarEvaluator>>& evals, const std::vector<long double>& x,
                          long double radius) {
    FieldSample s;
    const auto rows = static_cast<Eigen::Index>(evals.size());
    const auto cols = rows ? static_cast<Eigen::Index>(evals[0].size()) : 0;
    s.m.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            auto r = evals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].run(x, radius);
            if (r.singular || r.domain || !std::isfinite(static_cast<double>(r.value))) s.bad = true;
            s.m(i, j) = r.value;
            s.scale = std::max<long double>(s.scale, r.scale);
        }
    return s;
}

int rank_of(const FieldSample& s, double tolerance) {
    if (s.m.rows() == 0 || s.m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> svd(s.m);
    const auto& sv = svd.singularValues();
    long double bound = static_cast<long double>(tolerance) * std::max<long double>(s.scale, sv(0));
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > bound) ++r;
    return r;
}

std::vector<std::vector<ScalarEvaluator>> compile_fields(const std::vector<VectorField>& fields) {
    std::vector<std::vector<ScalarEvaluator>> out;
    for (const auto& f : fields) {
        std::vector<ScalarEvaluator> row;
        for (const auto& c : f.components()) row.emplace_back(c, f.chart());
        out.push_back(std::move(row));
    }
    return out;
}

ZeroVerdict sampled_nonzero(const Chart& chart, const std::vector<mpq_class>& pt, double value, const ZeroPolicy& policy,
                            const std::string& note) {
    ZeroVerdict v;
    v.tag = ZeroVerdict::Tag::NonZero;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    for (std::size_t i = 0; i < pt.size(); ++i) v.witness.emplace_back(chart.name(i), pt[i].get_str());
    v.witness_value = value;
    v.note = note;
    return v;
}

}  // namespace

int numeric_rank(const std::vector<VectorField>& fields, const std::vector<long double>& x, double tolerance) {
    auto s = sample_fields(compile_fields(fields), x, 0);
    if (s.bad) return -1;
    return rank_of(s, tolerance);
}

ZeroVerdict integrability_by_brackets(const std::vector<VectorField>& fields, const ZeroPolicy& policy) {
    if (fields.empty()) return proven_zero(policy);
    const Chart& chart = fields[0].chart();
    for (const auto& f : fields) same_chart(chart, f.chart());
    const int k = static_cast<int>(fields.size());
    const bool exact = all_rational(fields);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<VectorField> brackets;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            pairs.emplace_back(i, j);
            brackets.push_back(lie_bracket(fields[i], fields[j]));
        }

    if (exact) {
        RFMatrix base = rows_of(fields);
        if (all_zero(maximal_minors(base))) throw CalculusError("spanning fields are dependent");
        bool closed = true;
        std::size_t failing = 0;
        for (std::size_t b = 0; b < brackets.size() && closed; ++b) {
            RFMatrix aug = base;
            aug.push_back(brackets[b].components());
            if (aug.size() <= chart.dim() && !all_zero(maximal_minors(aug))) {
                closed = false;
                failing = b;
            }
        }
        if (closed) {
            ZeroVerdict v = proven_zero(policy);
            v.note = "exact rank over rational functions";
            return v;
        }
        // Locate a witness point for the failing pair.
        std::vector<VectorField> aug = fields;
        aug.push_back(brackets[failing]);
        auto evals = compile_fields(aug);
        PointSampler sampler(chart, policy);
        for (int attempt = 0; attempt < 200; ++attempt) {
            auto pt = sampler.next_exact();
            auto s = sample_fields(evals, PointSampler::to_float(pt), policy.singular_radius);
            if (s.bad) continue;
            if (rank_of(s, policy.tolerance) > k) {
                auto [i, j] = pairs[failing];
                return sampled_nonzero(chart, pt, 0.0, policy,
                                       "bracket of fields " + std::to_string(i) + "," + std::to_string(j) + " leaves the span");
            }
        }
        ZeroVerdict v;
        v.tag = ZeroVerdict::Tag::NonZero;
        v.seed = policy.seed;
        v.note = "bracket leaves the span (exact rank)";
        return v;
    }

    std::vector<std::vector<std::vector<ScalarEvaluator>>> evals;
    auto base_eval = compile_fields(fields);
    for (const auto& b : brackets) {
        auto aug = fields;
        aug.push_back(b);
        evals.push_back(compile_fields(aug));
    }
    PointSampler sampler(chart, policy);
    int accepted = 0, independent = 0;
    for (int attempt = 0; attempt < policy.samples * 50 && accepted < policy.samples; ++attempt) {
        auto pt = sampler.next_exact();
        auto x = PointSampler::to_float(pt);
        auto s = sample_fields(base_eval, x, policy.singular_radius);
        if (s.bad) continue;
        bool bad = false;
        std::vector<FieldSample> aug;
        for (const auto& e : evals) {
            aug.push_back(sample_fields(e, x, policy.singular_radius));
            if (aug.back().bad) bad = true;
        }
        if (bad) continue;
        ++accepted;
        if (rank_of(s, policy.tolerance) < k) continue;
        ++independent;
        for (std::size_t b = 0; b < aug.size(); ++b)
            if (rank_of(aug[b], policy.tolerance) > k) {
                auto [i, j] = pairs[b];
                return sampled_nonzero(chart, pt, 0.0, policy,
                                       "bracket of fields " + std::to_string(i) + "," + std::to_string(j) + " leaves the span");
            }
    }
    if (accepted == 0) throw InconclusiveError("no admissible sample point for the bracket test");
    if (independent == 0) throw CalculusError("spanning fields are dependent at every sample point");
    ZeroVerdict v = proven_zero(policy);
    v.tag = ZeroVerdict::Tag::ProbablyZero;
    v.samples = independent;
    v.confidence = 1.0 - std::pow(0.5, independent);
    return v;
}

Form annihilator(const std::vector<VectorField>& fields, const ZeroPolicy&) {
    if (fields.empty()) throw CalculusError("annihilator of an empty distribution");
    const Chart& chart = fields[0].chart();
    if (fields.size() + 1 != chart.dim()) throw CalculusError("distribution does not have corank 1");
    // Generalized cross product: w_i = (-1)^i * minor without column i.
    auto minors = maximal_minors(rows_of(fields));
    std::vector<Scalar> w(chart.dim());
    for (std::size_t i = 0; i < chart.dim(); ++i) {
        const Scalar& m = minors[chart.dim() - 1 - i];
        w[i] = i % 2 ? -m : m;
    }
    if (all_zero(w)) throw CalculusError("spanning fields are dependent");
    return Form::one_form(chart, w);
}

ZeroVerdict integrability_by_wedge(const std::vector<VectorField>& fields, const ZeroPolicy& policy) {
    Form w = annihilator(fields, policy);
    if (w.chart().dim() < 3) {
        ZeroVerdict v = proven_zero(policy);
        v.note = "dw^w vanishes for degree reasons";
        return v;
    }
    return zero_test(wedge(exterior_derivative(w), w), policy);
}

IntegrabilityReport integrability_report(const std::vector<VectorField>& fields, const ZeroPolicy& policy) {
    IntegrabilityReport r;
    r.brackets = integrability_by_brackets(fields, policy);
    if (!fields.empty() && fields.size() + 1 == fields[0].chart().dim()) r.wedge = integrability_by_wedge(fields, policy);
    r.verdict = r.brackets;
    if (r.wedge) {
        if (r.wedge->tag == ZeroVerdict::Tag::NonZero && r.verdict.tag != ZeroVerdict::Tag::NonZero)
            r.verdict = *r.wedge;
        else if (r.wedge->proven() && r.verdict.zero())
            r.verdict = *r.wedge;
    }
    return r;
}

ZeroVerdict distribution_integrability(const std::vector<VectorField>& fields, const ZeroPolicy& policy) {
    return integrability_report(fields, policy).verdict;
}

ZeroVerdict zero_test(const Form& w, const ZeroPolicy& policy) {
    ZeroVerdict acc = proven_zero(policy);
    for (const auto& [idx, v] : w.coefficients()) merge_verdict(acc, zero_test(v, policy));
    return acc;
}

ZeroVerdict zero_test(const VectorField& x, const ZeroPolicy& policy) {
    ZeroVerdict acc = proven_zero(policy);
    for (const auto& c : x.components()) merge_verdict(acc, zero_test(c, policy));
    return acc;
}

}  // namespace kronweb
