#include "kronweb/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace kronweb {

Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    if (a.is_real() && b.is_real()) return Gaussian(a.re * b.re);
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Gaussian operator/(const Gaussian& a, const Gaussian& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (b.is_real()) return {a.re / b.re, a.im / b.re};
    mpq_class n = b.norm();
    Gaussian t = a * b.conj();
    return {t.re / n, t.im / n};
}

std::string Gaussian::str() const {
    if (sgn(im) == 0) return re.get_str();
    std::string ip;
    if (im == 1)
        ip = "i";
    else if (im == -1)
        ip = "-i";
    else
        ip = im.get_str() + "i";
    if (sgn(re) == 0) return ip;
    return re.get_str() + (sgn(im) > 0 ? "+" : "") + ip;
}

namespace {

mpq_class parse_real(const std::string& s, const std::string& whole) {
    if (s.empty()) throw std::invalid_argument("malformed number '" + whole + "'");
    std::string body = s;
    bool neg = false;
    if (body[0] == '+' || body[0] == '-') {
        neg = body[0] == '-';
        body = body.substr(1);
    }
    if (body.empty()) throw std::invalid_argument("malformed number '" + whole + "'");
    mpq_class q;
    auto slash = body.find('/');
    auto dot = body.find('.');
    auto digits = [&](const std::string& d) {
        if (d.empty() || !std::all_of(d.begin(), d.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw std::invalid_argument("malformed number '" + whole + "'");
        return mpz_class(d, 10);
    };
    if (slash != std::string::npos) {
        mpz_class d = digits(body.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator in '" + whole + "'");
        q = mpq_class(digits(body.substr(0, slash)), d);
    } else if (dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        q = mpq_class(digits(ip) * den + digits(fp), den);
    } else {
        q = mpq_class(digits(body));
    }
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

}  // namespace

Gaussian parse_gaussian(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty number");
    if (s.back() != 'i') return Gaussian(parse_real(s, text));
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
            split = k;
            break;
        }
    std::string rp = split == std::string::npos ? "" : s.substr(0, split);
    std::string ip = split == std::string::npos ? s : s.substr(split);
    mpq_class im;
    if (ip.empty() || ip == "+")
        im = 1;
    else if (ip == "-")
        im = -1;
    else
        im = parse_real(ip, text);
    return {rp.empty() ? mpq_class(0) : parse_real(rp, text), im};
}

GMatrix zero_matrix(std::size_t rows, std::size_t cols) {
    return GMatrix(rows, std::vector<Gaussian>(cols));
}

GMatrix identity_matrix(std::size_t n) {
    GMatrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Gaussian(1);
    return m;
}

GMatrix mat_mul(const GMatrix& a, const GMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    GMatrix c = zero_matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[l][j].is_zero()) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

GMatrix mat_add(const GMatrix& a, const GMatrix& b, const Gaussian& sb) {
    GMatrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (!b[i][j].is_zero()) c[i][j] += sb * b[i][j];
    return c;
}

GMatrix transpose(const GMatrix& a) {
    std::size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    GMatrix t = zero_matrix(m, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(GMatrix& a) {
    std::vector<std::size_t> piv;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[r], a[p]);
        Gaussian inv = Gaussian(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Gaussian f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

}  // namespace

std::size_t exact_rank(GMatrix a) { return rref(a).size(); }

Gaussian exact_determinant(GMatrix a) {
    const std::size_t n = a.size();
    Gaussian det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return Gaussian(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        Gaussian inv = Gaussian(1) / a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            Gaussian f = a[i][c] * inv;
            for (std::size_t j = c + 1; j < n; ++j)
                if (!a[c][j].is_zero()) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

GMatrix column_space(const GMatrix& a) {
    GMatrix r = a;
    auto piv = rref(r);
    GMatrix out = zero_matrix(a.size(), piv.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < piv.size(); ++k) out[i][k] = a[i][piv[k]];
    return out;
}

GMatrix kernel(const GMatrix& a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    GMatrix r = a;
    auto piv = rref(r);
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_piv[c]) free.push_back(c);
    GMatrix out = zero_matrix(cols, free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        out[free[k]][k] = Gaussian(1);
        for (std::size_t i = 0; i < piv.size(); ++i) out[piv[i]][k] = -r[i][free[k]];
    }
    return out;
}

// ------------------------------------------------------------------ GPoly

void GPoly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

GPoly GPoly::monic() const {
    if (c.empty()) return *this;
    GPoly r = *this;
    Gaussian inv = Gaussian(1) / c.back();
    for (auto& x : r.c) x *= inv;
    return r;
}

Gaussian GPoly::operator()(const Gaussian& x) const {
    Gaussian v;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

std::complex<long double> GPoly::operator()(std::complex<long double> x) const {
    std::complex<long double> v = 0;
    for (std::size_t k = c.size(); k-- > 0;)
        v = v * x + std::complex<long double>(c[k].re.get_d(), c[k].im.get_d());
    return v;
}

GPoly GPoly::derivative() const {
    std::vector<Gaussian> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * Gaussian(static_cast<long>(k)));
    return GPoly(d);
}

GPoly operator*(const GPoly& a, const GPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Gaussian> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return GPoly(r);
}

GPoly operator-(const GPoly& a, const GPoly& b) {
    std::vector<Gaussian> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return GPoly(r);
}

std::pair<GPoly, GPoly> divmod(const GPoly& a, const GPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Gaussian> r = a.c;
    int db = b.degree();
    if (a.degree() < db) return {GPoly(), a};
    std::vector<Gaussian> q(static_cast<std::size_t>(a.degree() - db + 1));
    Gaussian inv = Gaussian(1) / b.c.back();
    for (int k = a.degree(); k >= db; --k) {
        Gaussian f = r[static_cast<std::size_t>(k)] * inv;
        if (f.is_zero()) continue;
        q[static_cast<std::size_t>(k - db)] = f;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= f * b.c[static_cast<std::size_t>(j)];
    }
    return {GPoly(q), GPoly(r)};
}

GPoly gcd(GPoly a, GPoly b) {
    while (!b.is_zero()) {
        GPoly r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

GPoly interpolate(const std::vector<Gaussian>& xs, const std::vector<Gaussian>& ys) {
    const std::size_t n = xs.size();
    std::vector<Gaussian> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    // Horner expansion of the Newton form.
    GPoly p(std::vector<Gaussian>{dd[n - 1]});
    for (std::size_t k = n - 1; k-- > 0;) {
        p = p * GPoly(std::vector<Gaussian>{-xs[k], Gaussian(1)});
        if (p.c.empty()) p.c.push_back(Gaussian());
        p.c[0] += dd[k];
        p.trim();
    }
    return p;
}

std::vector<std::complex<long double>> numeric_roots(const GPoly& p) {
    std::vector<std::complex<long double>> roots;
    int n = p.degree();
    if (n < 1) return roots;
    GPoly m = p.monic();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        comp(i, n - 1) = -std::complex<double>(m.c[static_cast<std::size_t>(i)].re.get_d(),
                                               m.c[static_cast<std::size_t>(i)].im.get_d());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    GPoly dm = m.derivative();
    for (int i = 0; i < n; ++i) {
        std::complex<long double> z(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
        for (int it = 0; it < 30; ++it) {
            auto d = dm(z);
            if (std::abs(d) == 0) break;
            auto step = m(z) / d;
            z -= step;
            if (std::abs(step) <= 1e-19L * std::max<long double>(1, std::abs(z))) break;
        }
        roots.push_back(z);
    }
    return roots;
}

std::vector<mpq_class> convergents(long double x, long max_den) {
    std::vector<mpq_class> out;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    long double r = x;
    for (int it = 0; it < 64; ++it) {
        long double a = std::floor(r);
        if (std::fabs(a) > 1e18L) break;
        mpz_class ai(static_cast<long>(a));
        mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        out.emplace_back(h2, k2);
        out.back().canonicalize();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        long double frac = r - a;
        if (frac < 1e-18L) break;
        r = 1 / frac;
    }
    return out;
}

// ------------------------------------------------------------ modular rank

const std::vector<ModularField>& rank_primes() {
    static const std::vector<ModularField> primes{{2147483629ULL, 629208553ULL}, {2147483549ULL, 895500278ULL}};
    return primes;
}

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

std::optional<std::uint64_t> reduce_q(const mpq_class& q, std::uint64_t p) {
    std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), p);
    if (d == 0) return std::nullopt;
    std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), p);
    return n * pow_mod(d, p - 2, p) % p;
}

}  // namespace

std::optional<std::uint64_t> reduce(const Gaussian& g, const ModularField& f) {
    auto r = reduce_q(g.re, f.p);
    if (!r) return std::nullopt;
    if (g.is_real()) return r;
    auto i = reduce_q(g.im, f.p);
    if (!i) return std::nullopt;
    return (*r + *i * f.sqrt_minus_one) % f.p;
}

std::optional<ModMatrix> reduce(const GMatrix& a, const ModularField& f) {
    ModMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        m[i].resize(a[i].size());
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j].is_zero()) {
                m[i][j] = 0;
                continue;
            }
            auto v = reduce(a[i][j], f);
            if (!v) return std::nullopt;
            m[i][j] = *v;
        }
    }
    return m;
}

std::size_t modular_rank(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        std::uint64_t inv = pow_mod(a[r][c], p - 2, p);
        for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv % p;
        for (std::size_t i = r + 1; i < rows; ++i) {
            std::uint64_t f = a[i][c];
            if (f == 0) continue;
            std::uint64_t nf = p - f;
            for (std::size_t j = c; j < cols; ++j)
                if (a[r][j]) a[i][j] = (a[i][j] + nf * a[r][j]) % p;
        }
        ++r;
    }
    return r;
}

std::size_t fast_rank(const GMatrix& a) {
    std::size_t best = 0;
    bool any = false;
    for (const auto& f : rank_primes()) {
        auto m = reduce(a, f);
        if (!m) continue;
        any = true;
        best = std::max(best, modular_rank(std::move(*m), f.p));
    }
    return any ? best : exact_rank(a);
}

}  // namespace kronweb
