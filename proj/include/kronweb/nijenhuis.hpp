#pragma once

#include "kronweb/calculus.hpp"
#include "kronweb/pencil.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kronweb {

struct NijenhuisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// T_N(X,Y) = [NX,NY] - N([NX,Y] + [X,NY] - N[X,Y]).
VectorField tensor_torsion(const OneOneTensor& n, const VectorField& x, const VectorField& y);
// Merged verdict over all coordinate-frame pairs.
ZeroVerdict is_nijenhuis(const OneOneTensor& n, const ZeroPolicy& policy = {});

/*
 * Partial operator on a foliation: the spanning fields Z_i of T F and the
 * images N(Z_i), extended to the span by function linearity.
 */
struct GeometricPNO {
    Chart chart;
    std::vector<VectorField> fields;
    std::vector<VectorField> images;

    std::size_t rank() const { return fields.size(); }
    // N applied to sum c_i Z_i.
    VectorField apply(const std::vector<Scalar>& coefficients) const;
};

GeometricPNO make_pno(const OneOneTensor& n, const std::vector<VectorField>& fields);

// Zero verdict of "v lies in span(fields)" via the maximal minors of [fields; v].
ZeroVerdict span_membership(const std::vector<VectorField>& fields, const VectorField& v, const ZeroPolicy& policy = {});
// Coefficients c with v = sum c_i fields_i (Cramer on a nonvanishing minor).
std::vector<Scalar> span_coefficients(const std::vector<VectorField>& fields, const VectorField& v,
                                      const ZeroPolicy& policy = {});

struct PnoVerdict {
    bool ok = true;
    ZeroVerdict membership;  // condition (i)
    ZeroVerdict torsion;     // condition (ii)
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    std::string reason;
};

// Throws NijenhuisError when the spanning fields are not bracket closed.
PnoVerdict is_geometric_pno(const GeometricPNO& p, const ZeroPolicy& policy = {});

// Torsion of l1*I + l2*N on the spanning pair (i, j).
VectorField pno_torsion(const GeometricPNO& p, std::size_t i, std::size_t j);
GeometricPNO pno_combination(const GeometricPNO& p, const Scalar& l1, const Scalar& l2);

// Fields spanning ker df, pivoting on the first coordinate f depends on.
std::vector<VectorField> level_set_fields(const Chart& chart, const Scalar& f);

struct RestrictionResult {
    bool ok = false;
    std::string failure;            // "integrability" or "preimage" when !ok
    ZeroVerdict image_integrability;  // condition (1)
    bool preimage_ok = false;        // condition (2)
    GeometricPNO pno;
    std::optional<PnoVerdict> pno_verdict;
};

RestrictionResult restrict_to_foliation(const OneOneTensor& n, const std::vector<VectorField>& fields, const Scalar& lambda,
                                        const ZeroPolicy& policy = {});

// Exact pencil (S1 = inclusion, S2 = N) of a PNO at a rational point.
Pencil pointwise_pencil(const GeometricPNO& p, const std::vector<mpq_class>& point);

/*
 * Normal forms of cyclic Nijenhuis operators in 3D over the chart x1,x2,x3.
 * variant: 'N' (coordinate form), 'F' (Frobenius form), 'J' (Jordan form).
 */
OneOneTensor normal_form(const std::string& symbol, char variant, const std::vector<mpq_class>& params);
const std::vector<std::string>& normal_form_symbols();
// The self-propelled triple (phi1, phi2, phi3) whose Frobenius matrix gives the F variant.
std::vector<Scalar> frobenius_parameters(const std::string& symbol, const std::vector<mpq_class>& params);
// Companion matrix with f0 = p1 p2 p3, f1 = -(p1p2 + p1p3 + p2p3), f2 = p1 + p2 + p3 in the last column.
RFMatrix frobenius_matrix(const Scalar& p1, const Scalar& p2, const Scalar& p3);
// First integral f whose level sets carry a generic PNO inside the normal form (a known solution of its equation).
Scalar normal_form_solution(const std::string& symbol, const std::vector<mpq_class>& params);

struct AdaptedFrame {
    VectorField X0, X1, X2;
    Scalar b0, b1, c1, c2;
    ZeroVerdict relation_i;   // components of [X0,X1], [X1,X2] outside the expected spans
    ZeroVerdict relation_ii;  // [X0,X2] - (c1 X0 + (c2 + b0) X1 + b1 X2)
    std::vector<Form> coframe;  // dual to (X0, X1, X2)
};

AdaptedFrame adapted_frame(const GeometricPNO& p, const ZeroPolicy& policy = {});

struct Extension {
    OneOneTensor tensor;        // coordinate-frame matrix of the extension
    ZeroVerdict torsion;
    ZeroVerdict restriction;    // extension on T F minus N
    ZeroVerdict selfpropelled;  // residuals of the phi's
};

// Throws NijenhuisError when a phi is not self-propelled.
Extension extension_from_selfpropelled(const GeometricPNO& p, const std::vector<Scalar>& phis, const ZeroPolicy& policy = {});

/*
 * Extension with numerically given phi's: the matrix P F(phi) P^-1 is
 * evaluated pointwise and the torsion is taken by central differences.
 */
using NumericFunction = std::function<long double(const std::vector<long double>&)>;

class NumericExtension {
public:
    NumericExtension(const AdaptedFrame& frame, std::vector<NumericFunction> phis);
    // Row-major 3x3 matrix of the extension in the coordinate frame.
    std::vector<long double> matrix_at(const std::vector<long double>& x) const;
    // Largest absolute torsion component over coordinate pairs.
    long double torsion_at(const std::vector<long double>& x, long double h = 1e-5L) const;

private:
    std::vector<std::vector<ScalarEvaluator>> frame_;  // frame_[k][i] = i-th component of X_k
    std::vector<NumericFunction> phis_;
};

}  // namespace kronweb
