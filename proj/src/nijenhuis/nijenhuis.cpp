#include "kronweb/nijenhuis.hpp"

namespace kronweb {

namespace {

void same_chart(const Chart& a, const Chart& b) {
    if (a != b) throw NijenhuisError("chart mismatch");
}

RFMatrix rows_of(const std::vector<VectorField>& fields) {
    RFMatrix m;
    for (const auto& f : fields) m.push_back(f.components());
    return m;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
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

ZeroVerdict proven(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

ZeroVerdict merged(const std::vector<Scalar>& values, const ZeroPolicy& policy) {
    ZeroVerdict acc = proven(policy);
    for (const auto& s : values) merge_verdict(acc, zero_test(s, policy));
    return acc;
}

VectorField n_bracket(const GeometricPNO& p, std::size_t i, std::size_t j, const ZeroPolicy& policy) {
    auto br = lie_bracket(p.fields[i], p.fields[j]);
    auto nbr = p.apply(span_coefficients(p.fields, br, policy));
    return lie_bracket(p.images[i], p.fields[j]) + lie_bracket(p.fields[i], p.images[j]) - nbr;
}

}  // namespace

VectorField tensor_torsion(const OneOneTensor& n, const VectorField& x, const VectorField& y) {
    same_chart(n.chart(), x.chart());
    same_chart(n.chart(), y.chart());
    auto nx = n.apply(x), ny = n.apply(y);
    auto inner = lie_bracket(nx, y) + lie_bracket(x, ny) - n.apply(lie_bracket(x, y));
    return lie_bracket(nx, ny) - n.apply(inner);
}

ZeroVerdict is_nijenhuis(const OneOneTensor& n, const ZeroPolicy& policy) {
    const auto& c = n.chart();
    ZeroVerdict acc = proven(policy);
    for (std::size_t i = 0; i < c.dim(); ++i)
        for (std::size_t j = i + 1; j < c.dim(); ++j)
            merge_verdict(acc, zero_test(tensor_torsion(n, VectorField::coordinate(c, i), VectorField::coordinate(c, j)), policy));
    return acc;
}

VectorField GeometricPNO::apply(const std::vector<Scalar>& coefficients) const {
    if (coefficients.size() != images.size()) throw NijenhuisError("coefficient count does not match the rank");
    auto out = VectorField::zero(chart);
    for (std::size_t i = 0; i < images.size(); ++i) out = out + coefficients[i] * images[i];
    return out;
}

GeometricPNO make_pno(const OneOneTensor& n, const std::vector<VectorField>& fields) {
    GeometricPNO p{n.chart(), fields, {}};
    for (const auto& f : fields) {
        same_chart(n.chart(), f.chart());
        p.images.push_back(n.apply(f));
    }
    return p;
}

ZeroVerdict span_membership(const std::vector<VectorField>& fields, const VectorField& v, const ZeroPolicy& policy) {
    if (fields.empty()) return zero_test(v, policy);
    if (fields.size() >= v.chart().dim()) return proven(policy);
    auto rows = rows_of(fields);
    rows.push_back(v.components());
    return merged(maximal_minors(rows), policy);
}

std::vector<Scalar> span_coefficients(const std::vector<VectorField>& fields, const VectorField& v, const ZeroPolicy& policy) {
    if (fields.empty()) return {};
    const std::size_t k = fields.size(), n = v.chart().dim();
    for (const auto& cols : subsets(n, k)) {
        RFMatrix a(k, std::vector<Scalar>(k));
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t j = 0; j < k; ++j) a[r][j] = fields[j][cols[r]];
        if (!definitely_nonzero(small_determinant(a), policy)) continue;
        auto inv = small_inverse(a);
        if (!inv) continue;
        std::vector<Scalar> c(k, Scalar(0));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < k; ++r) c[j] += (*inv)[j][r] * v[cols[r]];
        return c;
    }
    throw NijenhuisError("spanning fields are dependent");
}

PnoVerdict is_geometric_pno(const GeometricPNO& p, const ZeroPolicy& policy) {
    if (p.images.size() != p.fields.size()) throw NijenhuisError("one image per spanning field is required");
    if (p.fields.size() > 1 && !distribution_integrability(p.fields, policy).zero())
        throw NijenhuisError("spanning fields are not bracket closed");
    PnoVerdict out;
    out.membership = proven(policy);
    out.torsion = proven(policy);
    for (std::size_t i = 0; i < p.rank(); ++i)
        for (std::size_t j = i + 1; j < p.rank(); ++j) {
            auto bn = n_bracket(p, i, j, policy);
            auto mv = span_membership(p.fields, bn, policy);
            merge_verdict(out.membership, mv);
            if (!mv.zero()) {
                out.ok = false;
                out.witness = {i, j};
                out.reason = "[Z" + std::to_string(i + 1) + ",Z" + std::to_string(j + 1) + "]_N leaves the foliation";
                return out;
            }
            auto t = lie_bracket(p.images[i], p.images[j]) - p.apply(span_coefficients(p.fields, bn, policy));
            auto tv = zero_test(t, policy);
            merge_verdict(out.torsion, tv);
            if (!tv.zero()) {
                out.ok = false;
                out.witness = {i, j};
                out.reason = "torsion on (Z" + std::to_string(i + 1) + ",Z" + std::to_string(j + 1) + ") is nonzero";
                return out;
            }
        }
    return out;
}

VectorField pno_torsion(const GeometricPNO& p, std::size_t i, std::size_t j) {
    ZeroPolicy policy;
    auto bn = n_bracket(p, i, j, policy);
    if (!span_membership(p.fields, bn, policy).zero()) throw NijenhuisError("N-bracket leaves the foliation");
    return lie_bracket(p.images[i], p.images[j]) - p.apply(span_coefficients(p.fields, bn, policy));
}

GeometricPNO pno_combination(const GeometricPNO& p, const Scalar& l1, const Scalar& l2) {
    GeometricPNO q{p.chart, p.fields, {}};
    for (std::size_t i = 0; i < p.rank(); ++i) q.images.push_back(l1 * p.fields[i] + l2 * p.images[i]);
    return q;
}

std::vector<VectorField> level_set_fields(const Chart& chart, const Scalar& f) {
    std::vector<Scalar> grad;
    for (std::size_t i = 0; i < chart.dim(); ++i) grad.push_back(partial(f, chart, i));
    std::size_t p = 0;
    while (p < grad.size() && grad[p].is_zero()) ++p;
    if (p == grad.size()) throw NijenhuisError("function is constant");
    std::vector<VectorField> out;
    for (std::size_t j = 0; j < chart.dim(); ++j) {
        if (j == p) continue;
        std::vector<Scalar> c(chart.dim(), Scalar(0));
        c[j] = Scalar(1);
        c[p] = -(grad[j] / grad[p]);
        out.emplace_back(chart, c);
    }
    return out;
}

RestrictionResult restrict_to_foliation(const OneOneTensor& n, const std::vector<VectorField>& fields, const Scalar& lambda,
                                        const ZeroPolicy& policy) {
    if (fields.size() > 1 && !distribution_integrability(fields, policy).zero())
        throw NijenhuisError("foliation fields are not bracket closed");
    const auto& c = n.chart();
    auto m = n.combine(lambda, Scalar(1));
    std::vector<VectorField> image;
    for (const auto& f : fields) image.push_back(m.apply(f));

    // Independent subset of the images.
    std::vector<VectorField> basis;
    for (const auto& v : image) {
        auto trial = basis;
        trial.push_back(v);
        if (rank(rows_of(trial), policy) == trial.size()) basis = trial;
    }

    RestrictionResult out;
    out.image_integrability = basis.size() > 1 ? distribution_integrability(basis, policy) : proven(policy);
    if (!out.image_integrability.zero()) {
        out.failure = "integrability";
        return out;
    }
    // The preimage of B has dimension dim ker(N + lambda) + rank B and contains T F.
    const std::size_t kernel = c.dim() - rank(m.matrix(), policy);
    out.preimage_ok = kernel + basis.size() == fields.size();
    if (!out.preimage_ok) {
        out.failure = "preimage";
        return out;
    }
    out.pno = make_pno(n, fields);
    out.pno_verdict = is_geometric_pno(out.pno, policy);
    out.ok = true;
    return out;
}

Pencil pointwise_pencil(const GeometricPNO& p, const std::vector<mpq_class>& point) {
    const auto& c = p.chart;
    if (point.size() != c.dim()) throw NijenhuisError("point dimension does not match the chart");
    std::map<SymId, mpq_class> at;
    for (std::size_t i = 0; i < c.dim(); ++i) at[c.id(i)] = point[i];
    GMatrix s1 = zero_matrix(c.dim(), p.rank()), s2 = zero_matrix(c.dim(), p.rank());
    for (std::size_t j = 0; j < p.rank(); ++j)
        for (std::size_t i = 0; i < c.dim(); ++i) {
            if (p.fields[j][i].has_atoms() || p.images[j][i].has_atoms())
                throw NijenhuisError("exact pencil needs rational components");
            s1[i][j] = Gaussian(p.fields[j][i].evaluate_exact(at));
            s2[i][j] = Gaussian(p.images[j][i].evaluate_exact(at));
        }
    return Pencil(s1, s2, c.dim(), p.rank());
}

}  // namespace kronweb
