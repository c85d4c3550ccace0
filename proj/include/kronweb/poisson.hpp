#pragma once

#include "kronweb/nijenhuis.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kronweb {

struct PoissonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/*
 * Lie algebroid on a trivial bundle of rank r over a chart:
 * rho(e_i) = sum_j anchor[i][j] d/dx_j, [e_k, e_l] = sum_m c[k][l][m] e_m.
 */
struct AlgebroidData {
    Chart base;
    std::size_t rank = 0;
    RFMatrix anchor;                                // r x n
    std::vector<std::vector<std::vector<Scalar>>> c;  // r x r x r, antisymmetric in the first two indices

    static AlgebroidData zero(const Chart& base, std::size_t rank);
};

// Homomorphism of the anchor and Jacobi for the basis, with Leibniz built in.
ZeroVerdict check_algebroid(const AlgebroidData& a, const ZeroPolicy& policy = {});

class PoissonBivector {
public:
    PoissonBivector() = default;
    explicit PoissonBivector(Chart chart);

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return chart_.dim(); }
    // pi^{ij}, antisymmetric.
    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);
    // Nonzero entries with i < j.
    const std::map<std::pair<std::size_t, std::size_t>, Scalar>& components() const { return c_; }
    // {f, g} = sum pi^{ij} d_i f d_j g.
    Scalar bracket(const Scalar& f, const Scalar& g) const;

    friend PoissonBivector operator+(const PoissonBivector& a, const PoissonBivector& b);
    friend PoissonBivector operator*(const Scalar& s, const PoissonBivector& a);
    friend bool operator==(const PoissonBivector& a, const PoissonBivector& b);

private:
    Chart chart_;
    std::map<std::pair<std::size_t, std::size_t>, Scalar> c_;
};

// Chart (x_1..x_n, xi1..xir) of the dual bundle.
Chart dual_bundle_chart(const Chart& base, std::size_t rank, const std::string& fiber_prefix = "xi");

/*
 * Linear Poisson structure on E*: {x_i, x_j} = 0, {xi_i, x_j} = -b_ij and
 * {xi_k, xi_l} = -c^m_kl xi_m. The bracket sign matches the anchor sign so that
 * Jacobi holds exactly when the algebroid axioms do.
 */
PoissonBivector linear_poisson(const AlgebroidData& a);

// Jacobiator components sum_l (pi^il d_l pi^jk + cyclic) for i < j < k.
std::vector<Scalar> jacobiator(const PoissonBivector& p);
ZeroVerdict check_jacobi(const PoissonBivector& p, const ZeroPolicy& policy = {});
// Mixed term J(p1 + p2) - J(p1) - J(p2).
ZeroVerdict check_compatibility(const PoissonBivector& a, const PoissonBivector& b, const ZeroPolicy& policy = {});

// The canonical algebroid of T F and the algebroid ([,]_N, N) of a PNO.
std::pair<AlgebroidData, AlgebroidData> pno_algebroids(const GeometricPNO& p, const ZeroPolicy& policy = {});
// Throws PoissonError unless the PNO check passes.
std::pair<PoissonBivector, PoissonBivector> up_construction(const GeometricPNO& p, const ZeroPolicy& policy = {});
// Canonical structure of T*M and the structure of (TM, [,]_N, N); throws PoissonError on nonzero torsion.
std::pair<PoissonBivector, PoissonBivector> cotangent_lift(const OneOneTensor& n, const ZeroPolicy& policy = {});

// Skew matrices of both bivectors at an exact point of their chart.
GMatrix bivector_matrix(const PoissonBivector& p, const std::vector<mpq_class>& point);
BlockStructure pointwise_classification(const PoissonBivector& a, const PoissonBivector& b, const std::vector<mpq_class>& point);
/*
 * Intersection of the images of l1 a + l2 b over dim + 1 sampled (l1, l2) of
 * maximal rank; returns a basis in the chart's coordinates.
 */
std::vector<std::vector<mpq_class>> bilagrangian_at(const PoissonBivector& a, const PoissonBivector& b,
                                                    const std::vector<mpq_class>& point, std::uint64_t seed = 1);

/*
 * Algebroid on T*M with basis dx_k: anchor b_kj = pi^{kj} and bracket
 * [dx_k, dx_l] = d pi^{kl}. Throws PoissonError when Jacobi fails.
 */
AlgebroidData algebroid_from_poisson(const PoissonBivector& p, const ZeroPolicy& policy = {});
// l1 a + l2 b on the same bundle.
AlgebroidData combine_algebroids(const AlgebroidData& a, const AlgebroidData& b, const Scalar& l1, const Scalar& l2);

}  // namespace kronweb
