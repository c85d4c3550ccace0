#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kronweb {

// Gaussian rational re + im*i.
struct Gaussian {
    mpq_class re = 0;
    mpq_class im = 0;

    Gaussian() = default;
    Gaussian(long v) : re(v) {}
    Gaussian(const mpq_class& r) : re(r) {}
    Gaussian(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    Gaussian conj() const { return {re, -im}; }
    mpq_class norm() const { return re * re + im * im; }
    std::complex<double> approx() const { return {re.get_d(), im.get_d()}; }
    // "3/2", "-1/4i", "3/2+1/4i".
    std::string str() const;

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b);
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b);
    Gaussian operator-() const { return {-re, -im}; }
    Gaussian& operator+=(const Gaussian& b) { return *this = *this + b; }
    Gaussian& operator-=(const Gaussian& b) { return *this = *this - b; }
    Gaussian& operator*=(const Gaussian& b) { return *this = *this * b; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
    friend bool operator<(const Gaussian& a, const Gaussian& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }
};

// Accepts rationals, exact decimals and Gaussian forms like "3/2+1/4i", "-i", "2i".
Gaussian parse_gaussian(const std::string& text);

using GMatrix = std::vector<std::vector<Gaussian>>;

GMatrix zero_matrix(std::size_t rows, std::size_t cols);
GMatrix identity_matrix(std::size_t n);
GMatrix mat_mul(const GMatrix& a, const GMatrix& b);
GMatrix mat_add(const GMatrix& a, const GMatrix& b, const Gaussian& sb = Gaussian(1));
GMatrix transpose(const GMatrix& a);
std::size_t exact_rank(GMatrix a);
Gaussian exact_determinant(GMatrix a);
// Basis of the column space, as columns of the returned matrix.
GMatrix column_space(const GMatrix& a);
// Basis of the kernel, as columns.
GMatrix kernel(const GMatrix& a);

// Univariate polynomials over the Gaussian rationals, low degree first.
struct GPoly {
    std::vector<Gaussian> c;

    GPoly() = default;
    explicit GPoly(std::vector<Gaussian> coeffs) : c(std::move(coeffs)) { trim(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void trim();
    GPoly monic() const;
    Gaussian operator()(const Gaussian& x) const;
    std::complex<long double> operator()(std::complex<long double> x) const;
    GPoly derivative() const;
    friend GPoly operator*(const GPoly& a, const GPoly& b);
    friend GPoly operator-(const GPoly& a, const GPoly& b);
};

// Quotient and remainder.
std::pair<GPoly, GPoly> divmod(const GPoly& a, const GPoly& b);
GPoly gcd(GPoly a, GPoly b);
// Interpolating polynomial through (x_k, y_k).
GPoly interpolate(const std::vector<Gaussian>& xs, const std::vector<Gaussian>& ys);
std::vector<std::complex<long double>> numeric_roots(const GPoly& p);

// Continued-fraction convergents of x with denominators up to max_den.
std::vector<mpq_class> convergents(long double x, long max_den);

/*
 * Rank over a prime field with p = 1 mod 4, mapping i to a square root of -1.
 * The result is a lower bound for the rank over the Gaussian rationals and
 * equals it unless p divides every nonzero maximal minor; callers combine two
 * primes. Returns nullopt when an entry's denominator vanishes mod p.
 */
struct ModularField {
    std::uint64_t p;
    std::uint64_t sqrt_minus_one;
};
const std::vector<ModularField>& rank_primes();
std::optional<std::uint64_t> reduce(const Gaussian& g, const ModularField& f);
using ModMatrix = std::vector<std::vector<std::uint64_t>>;
std::optional<ModMatrix> reduce(const GMatrix& a, const ModularField& f);
std::size_t modular_rank(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p);
// Max over the rank primes; falls back to exact elimination if no prime applies.
std::size_t fast_rank(const GMatrix& a);

}  // namespace kronweb
