#pragma once

#include "kronweb/field.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace kronweb {

/*
 * A pair of linear maps S1, S2 : V -> W stored as dimW x dimV matrices over
 * the Gaussian rationals. Eigenvalues are the mu with S2 - mu*S1 singular;
 * mu = infinity when S1 drops rank.
 */
struct Pencil {
    GMatrix S1, S2;
    std::size_t dimV = 0, dimW = 0;

    Pencil() = default;
    Pencil(GMatrix s1, GMatrix s2);
    // Explicit shape for matrices with no rows or no columns.
    Pencil(GMatrix s1, GMatrix s2, std::size_t dim_w, std::size_t dim_v);

    bool is_real() const;
    Pencil transposed() const;
    Pencil swapped() const;
    // S2 - mu*S1.
    GMatrix at(const Gaussian& mu) const;
};

Pencil parse_pencil(const std::vector<std::vector<std::string>>& s1,
                    const std::vector<std::vector<std::string>>& s2);

struct Eigenvalue {
    enum class Kind { Finite, Infinite, Algebraic };
    Kind kind = Kind::Finite;
    Gaussian value;                  // exact value for Finite
    std::complex<double> approx;     // numeric value for Finite and Algebraic
    int degree = 1;                  // degree of the defining factor for Algebraic

    static Eigenvalue finite(const Gaussian& g);
    static Eigenvalue infinite();
    bool flagged() const { return kind == Kind::Algebraic; }
    // "5", "1/2-i", "inf", "~1.41421356 (algebraic)".
    std::string str() const;
    // Exceptional point [l1:l2] of l1*S1 + l2*S2, normalized with l2 = 1.
    std::string projective() const;

    friend bool operator==(const Eigenvalue& a, const Eigenvalue& b);
    friend bool operator<(const Eigenvalue& a, const Eigenvalue& b);
};

struct JordanBlocks {
    Eigenvalue eigenvalue;
    std::vector<int> sizes;  // descending
};

struct BlockStructure {
    std::vector<int> kronecker_plus;   // k+(k): V-dim k, W-dim k+1
    std::vector<int> kronecker_minus;  // k-(k): V-dim k+1, W-dim k
    std::vector<JordanBlocks> jordan;

    void normalize();
    std::size_t dim_v() const;
    std::size_t dim_w() const;
    std::size_t rank() const;
    bool flagged() const;
    std::size_t jordan_dimension() const;
    std::string str() const;
    friend bool operator==(const BlockStructure& a, const BlockStructure& b);
};

std::size_t generic_rank(const Pencil& p, std::uint64_t seed = 1);
std::vector<Eigenvalue> exceptional_set(const Pencil& p);
BlockStructure block_structure(const Pencil& p);

enum class PencilKind { Kronecker, Jordan, Mixed };
const char* kind_name(PencilKind k);
struct Classification {
    PencilKind kind;
    bool generic_type;
};
Classification classify(const BlockStructure& s);
Classification classify(const Pencil& p);

// Basis (columns, in V-coordinates) of the Jordan part; requires S1 injective.
GMatrix jordan_part(const Pencil& p, std::uint64_t seed = 1);

// Canonical pair of the single increasing block: S1 = [I; 0], S2 = [0; I], size (n+1) x n.
Pencil kronecker_normal_form(std::size_t n);
Pencil block_template_pencil(const BlockStructure& s);
Pencil synthesize_pencil(const BlockStructure& s, std::uint64_t seed);
// Random inventory with max(dimV, dimW) <= max_dim, eigenvalues small rationals or infinity.
BlockStructure random_block_structure(std::mt19937_64& rng, std::size_t max_dim, bool gaussian = false);

}  // namespace kronweb
