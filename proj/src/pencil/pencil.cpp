#include "kronweb/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace kronweb {

Pencil::Pencil(GMatrix s1, GMatrix s2) : S1(std::move(s1)), S2(std::move(s2)) {
    dimW = S1.size();
    dimV = dimW ? S1[0].size() : 0;
    if (S2.size() != dimW) throw std::invalid_argument("pencil matrices differ in row count");
    for (const auto& row : S1)
        if (row.size() != dimV) throw std::invalid_argument("ragged matrix S1");
    for (const auto& row : S2)
        if (row.size() != dimV) throw std::invalid_argument("S1 and S2 differ in shape");
}

Pencil::Pencil(GMatrix s1, GMatrix s2, std::size_t dim_w, std::size_t dim_v)
    : S1(std::move(s1)), S2(std::move(s2)), dimV(dim_v), dimW(dim_w) {
    if (S1.empty()) S1 = zero_matrix(dim_w, dim_v);
    if (S2.empty()) S2 = zero_matrix(dim_w, dim_v);
    if (S1.size() != dimW || S2.size() != dimW) throw std::invalid_argument("pencil row count mismatch");
    for (std::size_t i = 0; i < dimW; ++i)
        if (S1[i].size() != dimV || S2[i].size() != dimV) throw std::invalid_argument("pencil column count mismatch");
}

bool Pencil::is_real() const {
    for (const auto* m : {&S1, &S2})
        for (const auto& row : *m)
            for (const auto& x : row)
                if (!x.is_real()) return false;
    return true;
}

Pencil Pencil::transposed() const { return Pencil(transpose(S1), transpose(S2), dimV, dimW); }

Pencil Pencil::swapped() const { return Pencil(S2, S1, dimW, dimV); }

GMatrix Pencil::at(const Gaussian& mu) const { return mat_add(S2, S1, -mu); }

Pencil parse_pencil(const std::vector<std::vector<std::string>>& s1,
                    const std::vector<std::vector<std::string>>& s2) {
    auto conv = [](const std::vector<std::vector<std::string>>& m) {
        GMatrix g;
        for (const auto& row : m) {
            std::vector<Gaussian> r;
            for (const auto& x : row) r.push_back(parse_gaussian(x));
            g.push_back(std::move(r));
        }
        return g;
    };
    return Pencil(conv(s1), conv(s2));
}

// ------------------------------------------------------------ Eigenvalue

Eigenvalue Eigenvalue::finite(const Gaussian& g) {
    Eigenvalue e;
    e.kind = Kind::Finite;
    e.value = g;
    e.approx = g.approx();
    return e;
}

Eigenvalue Eigenvalue::infinite() {
    Eigenvalue e;
    e.kind = Kind::Infinite;
    return e;
}

namespace {

std::string complex_str(std::complex<double> z) {
    std::ostringstream os;
    os << std::setprecision(10) << z.real();
    if (z.imag() != 0) os << (z.imag() > 0 ? "+" : "-") << std::fabs(z.imag()) << "i";
    return os.str();
}

}  // namespace

std::string Eigenvalue::str() const {
    switch (kind) {
    case Kind::Finite: return value.str();
    case Kind::Infinite: return "inf";
    case Kind::Algebraic: return "~" + complex_str(approx) + " (algebraic, degree " + std::to_string(degree) + ")";
    }
    return "";
}

std::string Eigenvalue::projective() const {
    switch (kind) {
    case Kind::Finite: return "[" + (-value).str() + ":1]";
    case Kind::Infinite: return "[1:0]";
    case Kind::Algebraic: return "[~" + complex_str(-approx) + ":1]";
    }
    return "";
}

bool operator==(const Eigenvalue& a, const Eigenvalue& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Eigenvalue::Kind::Finite: return a.value == b.value;
    case Eigenvalue::Kind::Infinite: return true;
    case Eigenvalue::Kind::Algebraic: return std::abs(a.approx - b.approx) <= 1e-9 * std::max(1.0, std::abs(a.approx));
    }
    return false;
}

bool operator<(const Eigenvalue& a, const Eigenvalue& b) {
    auto rank = [](Eigenvalue::Kind k) {
        return k == Eigenvalue::Kind::Finite ? 0 : k == Eigenvalue::Kind::Algebraic ? 1 : 2;
    };
    if (a.kind != b.kind) return rank(a.kind) < rank(b.kind);
    if (a.kind == Eigenvalue::Kind::Finite) return a.value < b.value;
    if (a.kind == Eigenvalue::Kind::Algebraic && !(a == b)) {
        if (a.approx.real() != b.approx.real()) return a.approx.real() < b.approx.real();
        return a.approx.imag() < b.approx.imag();
    }
    return false;
}

// ------------------------------------------------------------ BlockStructure

void BlockStructure::normalize() {
    std::sort(kronecker_plus.begin(), kronecker_plus.end());
    std::sort(kronecker_minus.begin(), kronecker_minus.end());
    std::vector<JordanBlocks> merged;
    std::sort(jordan.begin(), jordan.end(),
              [](const JordanBlocks& a, const JordanBlocks& b) { return a.eigenvalue < b.eigenvalue; });
    for (auto& j : jordan) {
        if (j.sizes.empty()) continue;
        if (!merged.empty() && merged.back().eigenvalue == j.eigenvalue)
            merged.back().sizes.insert(merged.back().sizes.end(), j.sizes.begin(), j.sizes.end());
        else
            merged.push_back(j);
    }
    for (auto& j : merged) std::sort(j.sizes.begin(), j.sizes.end(), std::greater<int>());
    jordan = std::move(merged);
}

std::size_t BlockStructure::dim_v() const {
    std::size_t d = 0;
    for (int k : kronecker_plus) d += static_cast<std::size_t>(k);
    for (int k : kronecker_minus) d += static_cast<std::size_t>(k + 1);
    return d + jordan_dimension();
}

std::size_t BlockStructure::dim_w() const {
    std::size_t d = 0;
    for (int k : kronecker_plus) d += static_cast<std::size_t>(k + 1);
    for (int k : kronecker_minus) d += static_cast<std::size_t>(k);
    return d + jordan_dimension();
}

std::size_t BlockStructure::rank() const {
    std::size_t d = 0;
    for (int k : kronecker_plus) d += static_cast<std::size_t>(k);
    for (int k : kronecker_minus) d += static_cast<std::size_t>(k);
    return d + jordan_dimension();
}

std::size_t BlockStructure::jordan_dimension() const {
    std::size_t d = 0;
    for (const auto& j : jordan)
        for (int s : j.sizes) d += static_cast<std::size_t>(s);
    return d;
}

bool BlockStructure::flagged() const {
    for (const auto& j : jordan)
        if (j.eigenvalue.flagged()) return true;
    return false;
}

std::string BlockStructure::str() const {
    std::vector<std::string> parts;
    for (int k : kronecker_plus) parts.push_back("k+(" + std::to_string(k) + ")");
    for (int k : kronecker_minus) parts.push_back("k-(" + std::to_string(k) + ")");
    for (const auto& j : jordan) {
        std::string s = "j[" + j.eigenvalue.str() + "](";
        for (std::size_t i = 0; i < j.sizes.size(); ++i) s += (i ? "," : "") + std::to_string(j.sizes[i]);
        parts.push_back(s + ")");
    }
    if (parts.empty()) return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out + "}";
}

bool operator==(const BlockStructure& a, const BlockStructure& b) {
    BlockStructure x = a, y = b;
    x.normalize();
    y.normalize();
    if (x.kronecker_plus != y.kronecker_plus || x.kronecker_minus != y.kronecker_minus) return false;
    if (x.jordan.size() != y.jordan.size()) return false;
    for (std::size_t i = 0; i < x.jordan.size(); ++i)
        if (!(x.jordan[i].eigenvalue == y.jordan[i].eigenvalue) || x.jordan[i].sizes != y.jordan[i].sizes)
            return false;
    return true;
}

// ------------------------------------------------------------ queries

std::size_t generic_rank(const Pencil& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(-1000, 1000);
    std::size_t best = 0;
    for (int t = 0; t < 3; ++t) best = std::max(best, fast_rank(p.at(Gaussian(pick(rng)))));
    return best;
}

std::vector<Eigenvalue> exceptional_set(const Pencil& p) {
    std::vector<Eigenvalue> out;
    for (const auto& j : block_structure(p).jordan) out.push_back(j.eigenvalue);
    return out;
}

const char* kind_name(PencilKind k) {
    switch (k) {
    case PencilKind::Kronecker: return "Kronecker";
    case PencilKind::Jordan: return "Jordan";
    case PencilKind::Mixed: return "Mixed";
    }
    return "";
}

Classification classify(const BlockStructure& s) {
    Classification c;
    bool kron = !s.kronecker_plus.empty() || !s.kronecker_minus.empty();
    if (s.jordan.empty() && kron)
        c.kind = PencilKind::Kronecker;
    else if (!kron)
        c.kind = PencilKind::Jordan;
    else
        c.kind = PencilKind::Mixed;
    c.generic_type = s.jordan.empty() && s.kronecker_minus.empty() && s.kronecker_plus.size() == 1 &&
                     s.dim_w() == s.dim_v() + 1;
    return c;
}

Classification classify(const Pencil& p) { return classify(block_structure(p)); }

namespace {

// Columns spanning col(a) ∩ col(b).
GMatrix intersect(const GMatrix& a, const GMatrix& b) {
    const std::size_t n = a.size(), ka = n ? a[0].size() : 0, kb = n ? b[0].size() : 0;
    if (ka == 0 || kb == 0) return zero_matrix(n, 0);
    GMatrix m = zero_matrix(n, ka + kb);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < ka; ++j) m[i][j] = a[i][j];
        for (std::size_t j = 0; j < kb; ++j) m[i][ka + j] = b[i][j];
    }
    GMatrix ker = kernel(m);
    GMatrix v = zero_matrix(n, ker.empty() ? 0 : ker[0].size());
    for (std::size_t c = 0; c < v[0].size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < ka; ++j)
                if (!ker[j][c].is_zero()) v[i][c] += a[i][j] * ker[j][c];
    return column_space(v);
}

}  // namespace

GMatrix jordan_part(const Pencil& p, std::uint64_t seed) {
    if (exact_rank(p.S1) != p.dimV) throw std::invalid_argument("jordan_part requires S1 injective");
    std::size_t r = generic_rank(p, seed);
    std::mt19937_64 rng(seed + 17);
    std::uniform_int_distribution<long> pick(-50, 50);
    GMatrix acc = identity_matrix(p.dimW);
    int used = 0;
    for (int attempt = 0; used < static_cast<int>(p.dimV) + 1 && attempt < 100; ++attempt) {
        Gaussian l1(pick(rng)), l2(pick(rng));
        if (l1.is_zero() && l2.is_zero()) continue;
        GMatrix m = mat_add(mat_add(zero_matrix(p.dimW, p.dimV), p.S1, l1), p.S2, l2);
        if (exact_rank(m) != r) continue;  // exceptional parameter
        acc = intersect(acc, column_space(m));
        ++used;
    }
    // Pull back along S1.
    std::size_t k = acc.empty() ? 0 : acc[0].size();
    GMatrix out = zero_matrix(p.dimV, k);
    for (std::size_t c = 0; c < k; ++c) {
        GMatrix aug = zero_matrix(p.dimW, p.dimV + 1);
        for (std::size_t i = 0; i < p.dimW; ++i) {
            for (std::size_t j = 0; j < p.dimV; ++j) aug[i][j] = p.S1[i][j];
            aug[i][p.dimV] = -acc[i][c];
        }
        GMatrix ker = kernel(aug);
        bool found = false;
        for (std::size_t t = 0; t < (ker.empty() ? 0 : ker[0].size()) && !found; ++t) {
            if (ker[p.dimV][t].is_zero()) continue;
            Gaussian s = Gaussian(1) / ker[p.dimV][t];
            for (std::size_t j = 0; j < p.dimV; ++j) out[j][c] = ker[j][t] * s;
            found = true;
        }
        if (!found) throw std::logic_error("Jordan part does not lie in the image of S1");
    }
    return out;
}

Pencil kronecker_normal_form(std::size_t n) {
    GMatrix s1 = zero_matrix(n + 1, n), s2 = zero_matrix(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i][i] = Gaussian(1);
        s2[i + 1][i] = Gaussian(1);
    }
    return Pencil(s1, s2, n + 1, n);
}

}  // namespace kronweb
