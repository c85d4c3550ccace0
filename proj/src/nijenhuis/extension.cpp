#include "kronweb/nijenhuis.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace kronweb {

namespace {

using Mat3 = Eigen::Matrix<long double, 3, 3>;

ZeroVerdict proven(const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    return v;
}

RFMatrix columns(const std::vector<VectorField>& frame) {
    const std::size_t n = frame.front().chart().dim();
    RFMatrix m(n, std::vector<Scalar>(frame.size()));
    for (std::size_t j = 0; j < frame.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m[i][j] = frame[j][i];
    return m;
}

}  // namespace

AdaptedFrame adapted_frame(const GeometricPNO& p, const ZeroPolicy& policy) {
    if (p.chart.dim() != 3 || p.rank() != 2) throw NijenhuisError("adapted frame needs a rank 2 PNO in 3D");
    const auto& z = p.fields;
    const auto& nz = p.images;
    // Kernel of [Z1 Z2 -NZ1 -NZ2] (3x4) through signed maximal minors.
    RFMatrix m(3, std::vector<Scalar>(4));
    for (std::size_t i = 0; i < 3; ++i) {
        m[i][0] = z[0][i];
        m[i][1] = z[1][i];
        m[i][2] = -nz[0][i];
        m[i][3] = -nz[1][i];
    }
    std::vector<Scalar> k(4);
    for (std::size_t drop = 0; drop < 4; ++drop) {
        RFMatrix sub(3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (j != drop) sub[i].push_back(m[i][j]);
        Scalar d = small_determinant(sub);
        k[drop] = drop % 2 == 0 ? d : -d;
    }
    AdaptedFrame f;
    f.X1 = k[0] * z[0] + k[1] * z[1];
    f.X0 = k[2] * z[0] + k[3] * z[1];
    if (!definitely_nonzero(k[2], policy) && !definitely_nonzero(k[3], policy))
        throw NijenhuisError("T F meets N T F in rank other than 1");
    std::size_t pivot = 0;
    while (pivot < 3 && !definitely_nonzero(f.X1[pivot], policy)) ++pivot;
    if (pivot == 3) throw NijenhuisError("T F meets N T F in rank other than 1");
    Scalar s = f.X1[pivot].inverse();
    f.X1 = s * f.X1;
    f.X0 = s * f.X0;
    f.X2 = p.apply({s * k[0], s * k[1]});

    try {
        f.coframe = dual_coframe({f.X0, f.X1, f.X2}, policy);
    } catch (const CalculusError&) {
        throw NijenhuisError("adapted frame is degenerate; the PNO is not of generic type");
    }
    const auto& th = f.coframe;
    auto b = lie_bracket(f.X0, f.X1);
    auto c = lie_bracket(f.X1, f.X2);
    f.b0 = pairing(th[0], b);
    f.b1 = pairing(th[1], b);
    f.c1 = pairing(th[1], c);
    f.c2 = pairing(th[2], c);
    f.relation_i = zero_test(pairing(th[2], b), policy);
    merge_verdict(f.relation_i, zero_test(pairing(th[0], c), policy));
    auto r = lie_bracket(f.X0, f.X2) - (f.c1 * f.X0 + (f.c2 + f.b0) * f.X1 + f.b1 * f.X2);
    f.relation_ii = zero_test(r, policy);
    return f;
}

Extension extension_from_selfpropelled(const GeometricPNO& p, const std::vector<Scalar>& phis, const ZeroPolicy& policy) {
    if (phis.size() != 3) throw NijenhuisError("three functions are required");
    auto fr = adapted_frame(p, policy);
    Extension out;
    out.selfpropelled = proven(policy);
    for (const auto& phi : phis) {
        merge_verdict(out.selfpropelled, zero_test(phi * fr.X0.apply(phi) - fr.X1.apply(phi), policy));
        merge_verdict(out.selfpropelled, zero_test(phi * fr.X1.apply(phi) - fr.X2.apply(phi), policy));
    }
    if (!out.selfpropelled.zero()) throw NijenhuisError("function is not self-propelled: " + out.selfpropelled.describe());

    auto pm = columns({fr.X0, fr.X1, fr.X2});
    auto pinv = small_inverse(pm);
    if (!pinv) throw NijenhuisError("adapted frame is degenerate");
    auto nbar = multiply(multiply(pm, frobenius_matrix(phis[0], phis[1], phis[2])), *pinv);
    out.tensor = OneOneTensor(p.chart, nbar);
    out.restriction = proven(policy);
    for (std::size_t i = 0; i < p.rank(); ++i)
        merge_verdict(out.restriction, zero_test(out.tensor.apply(p.fields[i]) - p.images[i], policy));
    out.torsion = is_nijenhuis(out.tensor, policy);
    return out;
}

NumericExtension::NumericExtension(const AdaptedFrame& frame, std::vector<NumericFunction> phis) : phis_(std::move(phis)) {
    if (phis_.size() != 3) throw NijenhuisError("three functions are required");
    for (const auto* x : {&frame.X0, &frame.X1, &frame.X2}) {
        std::vector<ScalarEvaluator> comps;
        for (const auto& s : x->components()) comps.emplace_back(s, x->chart());
        frame_.push_back(std::move(comps));
    }
}

std::vector<long double> NumericExtension::matrix_at(const std::vector<long double>& x) const {
    Mat3 p, f = Mat3::Zero();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) p(i, k) = frame_[k][i](x);
    long double a = phis_[0](x), b = phis_[1](x), c = phis_[2](x);
    f(1, 0) = 1;
    f(2, 1) = 1;
    f(0, 2) = a * b * c;
    f(1, 2) = -(a * b + a * c + b * c);
    f(2, 2) = a + b + c;
    Mat3 m = p * f * p.inverse();
    std::vector<long double> out(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[3 * i + j] = m(i, j);
    return out;
}

long double NumericExtension::torsion_at(const std::vector<long double>& x, long double h) const {
    auto n = matrix_at(x);
    // dn[l][k*3+j] = d_l N^k_j
    std::vector<std::vector<long double>> dn(3);
    for (int l = 0; l < 3; ++l) {
        // Five-point central stencil, so the truncation error is O(h^4).
        auto at = [&](long double s) {
            auto y = x;
            y[l] += s;
            return matrix_at(y);
        };
        auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
        dn[l].resize(9);
        for (int e = 0; e < 9; ++e) dn[l][e] = (8 * (p1[e] - m1[e]) - (p2[e] - m2[e])) / (12 * h);
    }
    auto N = [&](int k, int j) { return n[3 * k + j]; };
    auto D = [&](int l, int k, int j) { return dn[l][3 * k + j]; };
    long double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                long double t = 0;
                for (int l = 0; l < 3; ++l) {
                    t += N(l, i) * D(l, k, j) - N(l, j) * D(l, k, i);
                    t -= N(k, l) * (D(i, l, j) - D(j, l, i));
                }
                worst = std::max(worst, std::fabs(t));
            }
    return worst;
}

}  // namespace kronweb
