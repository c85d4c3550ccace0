#include "kronweb/polynomial.hpp"

#include "symbols.hpp"

#include <algorithm>

namespace kronweb {

bool symbol_is_atom(SymId s) { return detail::symbol_table().entry(s).atom; }
const std::string& symbol_name(SymId s) { return detail::symbol_table().entry(s).name; }
Op atom_op(SymId s) { return detail::symbol_table().entry(s).op; }
const Expr& atom_argument(SymId s) { return detail::symbol_table().entry(s).arg; }
const RationalFunction& atom_argument_canonical(SymId s) {
    return *detail::symbol_table().entry(s).arg_canonical;
}
const std::vector<SymId>& atom_variables(SymId s) { return detail::symbol_table().entry(s).vars; }

namespace {

// Lexicographic monomial order with lower symbol ids more significant.
int compare_monomials(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return a[i].second > b[j].second ? 1 : -1;
            ++i;
            ++j;
        } else {
            return a[i].first < b[j].first ? 1 : -1;
        }
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return 0;
}

Monomial multiply(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) r.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

// a / b when every exponent of b is at most that of a.
std::optional<Monomial> divide(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0;
    for (const auto& [s, e] : b) {
        while (i < a.size() && a[i].first < s) r.push_back(a[i++]);
        if (i == a.size() || a[i].first != s || a[i].second < e) return std::nullopt;
        if (a[i].second > e) r.emplace_back(s, a[i].second - e);
        ++i;
    }
    while (i < a.size()) r.push_back(a[i++]);
    return r;
}

struct TermOrder {
    bool operator()(const Term& a, const Term& b) const {
        return compare_monomials(a.mono, b.mono) > 0;
    }
};

Expr symbol_expr(SymId s) {
    if (!symbol_is_atom(s)) return Expr::variable(symbol_name(s));
    return apply_function(atom_op(s), atom_argument(s));
}

// Display order: by symbol name, larger exponents first, constants last.
bool display_before(const Monomial& a, const Monomial& b) {
    auto named = [](const Monomial& m) {
        std::vector<std::pair<std::string, int>> v;
        for (const auto& [s, e] : m) v.emplace_back(symbol_name(s), e);
        std::sort(v.begin(), v.end());
        return v;
    };
    auto na = named(a), nb = named(b);
    std::size_t i = 0;
    while (i < na.size() && i < nb.size()) {
        if (na[i].first != nb[i].first) return na[i].first < nb[i].first;
        if (na[i].second != nb[i].second) return na[i].second > nb[i].second;
        ++i;
    }
    return na.size() > nb.size();
}

}  // namespace

void Polynomial::normalize() {
    std::sort(terms_.begin(), terms_.end(), TermOrder());
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && compare_monomials(out.back().mono, t.mono) == 0) {
            out.back().coef += t.coef;
        } else {
            if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
    terms_ = std::move(out);
}

Polynomial Polynomial::constant(const mpq_class& c) {
    Polynomial p;
    if (sgn(c) != 0) p.terms_.push_back({{}, c});
    return p;
}

Polynomial Polynomial::symbol(SymId s, int power) {
    Polynomial p;
    if (power == 0)
        p.terms_.push_back({{}, 1});
    else
        p.terms_.push_back({{{s, power}}, 1});
    return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
    Polynomial p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

mpq_class Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_[0].coef;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coef = -t.coef;
    return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
        int c = i == a.terms_.size()   ? -1
                : j == b.terms_.size() ? 1
                                       : compare_monomials(a.terms_[i].mono, b.terms_[j].mono);
        if (c > 0) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(b.terms_[j++]);
        } else {
            mpq_class s = a.terms_[i].coef + b.terms_[j].coef;
            if (sgn(s) != 0) r.terms_.push_back({a.terms_[i].mono, s});
            ++i;
            ++j;
        }
    }
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coef);
    if (b.is_constant()) return a.scaled(b.terms_[0].coef);
    Polynomial r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) r.terms_.push_back({multiply(s.mono, t.mono), s.coef * t.coef});
    r.normalize();
    return r;
}

Polynomial Polynomial::scaled(const mpq_class& c) const {
    if (sgn(c) == 0) return {};
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coef *= c;
    return p;
}

Polynomial Polynomial::pow(unsigned n) const {
    Polynomial r = constant(1), b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

int Polynomial::degree_in(SymId s) const {
    int d = 0;
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mono)
            if (v == s) d = std::max(d, e);
    return d;
}

Polynomial Polynomial::coefficient(SymId s, int k) const {
    Polynomial r;
    for (const auto& t : terms_) {
        int e = 0;
        Monomial rest;
        for (const auto& p : t.mono) {
            if (p.first == s)
                e = p.second;
            else
                rest.push_back(p);
        }
        if (e == k) r.terms_.push_back({std::move(rest), t.coef});
    }
    r.normalize();
    return r;
}

bool Polynomial::contains(SymId s) const {
    for (const auto& t : terms_)
        for (const auto& p : t.mono)
            if (p.first == s) return true;
    return false;
}

std::vector<SymId> Polynomial::symbols() const {
    std::vector<SymId> out;
    for (const auto& t : terms_)
        for (const auto& p : t.mono) out.push_back(p.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Polynomial::has_atoms() const {
    for (auto s : symbols())
        if (symbol_is_atom(s)) return true;
    return false;
}

Polynomial::Split Polynomial::split() const {
    Split out;
    if (terms_.empty()) {
        out.content = 0;
        return out;
    }
    mpz_class g = 0, l = 1;
    for (const auto& t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
    }
    mpq_class content(g, l);
    content.canonicalize();
    if (sgn(terms_[0].coef) < 0) content = -content;
    // Monomial content: minimal exponent of symbols common to all terms.
    Monomial m = terms_[0].mono;
    for (const auto& t : terms_) {
        Monomial keep;
        for (const auto& [s, e] : m) {
            for (const auto& [s2, e2] : t.mono)
                if (s2 == s) {
                    keep.emplace_back(s, std::min(e, e2));
                    break;
                }
        }
        m = std::move(keep);
        if (m.empty()) break;
    }
    Polynomial prim;
    prim.terms_.reserve(terms_.size());
    for (const auto& t : terms_) prim.terms_.push_back({*divide(t.mono, m), t.coef / content});
    prim.normalize();
    out.content = content;
    out.monomial = std::move(m);
    out.primitive = std::move(prim);
    return out;
}

std::optional<Polynomial> Polynomial::exact_divide(const Polynomial& d) const {
    if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
    if (is_zero()) return Polynomial();
    if (d.is_constant()) return scaled(1 / d.terms_[0].coef);
    const Term& lt = d.terms_[0];
    Polynomial r = *this, q;
    while (!r.is_zero()) {
        auto m = divide(r.terms_[0].mono, lt.mono);
        if (!m) return std::nullopt;
        Term t{std::move(*m), r.terms_[0].coef / lt.coef};
        Polynomial tp;
        tp.terms_.push_back(t);
        q.terms_.push_back(std::move(t));
        r = r - tp * d;
    }
    q.normalize();
    return q;
}

Polynomial Polynomial::derivative(SymId s) const {
    Polynomial r;
    for (const auto& t : terms_) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (t.mono[i].first != s) continue;
            Monomial m = t.mono;
            int e = m[i].second;
            if (e == 1)
                m.erase(m.begin() + static_cast<long>(i));
            else
                m[i].second = e - 1;
            r.terms_.push_back({std::move(m), t.coef * e});
        }
    }
    r.normalize();
    return r;
}

mpq_class Polynomial::evaluate_exact(const std::map<SymId, mpq_class>& point) const {
    mpq_class total = 0;
    for (const auto& t : terms_) {
        mpq_class v = t.coef;
        for (const auto& [s, e] : t.mono) {
            auto it = point.find(s);
            if (it == point.end()) throw EvalError(EvalError::Kind::Unbound, "unbound symbol " + symbol_name(s));
            mpq_class p = 1;
            for (int k = 0; k < (e < 0 ? -e : e); ++k) p *= it->second;
            v *= p;
        }
        total += v;
    }
    return total;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].coef != b.terms_[i].coef) return false;
        if (compare_monomials(a.terms_[i].mono, b.terms_[i].mono) != 0) return false;
    }
    return true;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_monomials(a.terms_[i].mono, b.terms_[i].mono);
        if (c != 0) return c > 0;
        if (a.terms_[i].coef != b.terms_[i].coef) return a.terms_[i].coef < b.terms_[i].coef;
    }
    return a.terms_.size() < b.terms_.size();
}

Expr Polynomial::to_expr() const {
    std::vector<const Term*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Term* a, const Term* b) { return display_before(a->mono, b->mono); });
    std::vector<Expr> ts;
    for (const Term* t : order) {
        std::vector<std::pair<std::string, std::pair<SymId, int>>> fs;
        for (const auto& p : t->mono) fs.push_back({symbol_name(p.first), p});
        std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Expr> f{Expr(t->coef)};
        for (const auto& [name, p] : fs) f.push_back(kronweb::pow(symbol_expr(p.first), p.second));
        ts.push_back(product(f));
    }
    return sum(ts);
}

// ------------------------------------------------------------ RationalFunction

RationalFunction::RationalFunction(const mpq_class& c) : num_(Polynomial::constant(c)) {}
RationalFunction::RationalFunction(const Polynomial& p) : num_(p) {}

RationalFunction RationalFunction::symbol(SymId s) { return RationalFunction(Polynomial::symbol(s)); }

Polynomial RationalFunction::denominator_product() const {
    Polynomial p = Polynomial::constant(1);
    for (const auto& [f, e] : den_) p = p * f.pow(static_cast<unsigned>(e));
    return p;
}

bool RationalFunction::has_atoms() const {
    if (num_.has_atoms()) return true;
    for (const auto& [f, e] : den_)
        if (f.has_atoms()) return true;
    return false;
}

bool RationalFunction::contains(SymId s) const {
    if (num_.contains(s)) return true;
    for (const auto& [f, e] : den_)
        if (f.contains(s)) return true;
    return false;
}

std::vector<SymId> RationalFunction::variables() const {
    std::vector<SymId> syms = num_.symbols(), out;
    for (const auto& [f, e] : den_) {
        auto fs = f.symbols();
        syms.insert(syms.end(), fs.begin(), fs.end());
    }
    for (auto s : syms) {
        if (symbol_is_atom(s)) {
            const auto& vs = atom_variables(s);
            out.insert(out.end(), vs.begin(), vs.end());
        } else {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void RationalFunction::add_factor(const Polynomial& f, int e) {
    if (e == 0) return;
    auto sp = f.split();
    if (sgn(sp.content) == 0) throw std::domain_error("division by zero");
    mpq_class c = 1;
    for (int k = 0; k < e; ++k) c *= sp.content;
    num_ = num_.scaled(1 / c);
    auto insert = [&](const Polynomial& p, int k) {
        auto it = std::lower_bound(den_.begin(), den_.end(), p,
                                   [](const auto& a, const Polynomial& b) { return a.first < b; });
        if (it != den_.end() && it->first == p)
            it->second += k;
        else
            den_.insert(it, {p, k});
    };
    for (const auto& [s, k] : sp.monomial) insert(Polynomial::symbol(s), k * e);
    if (!sp.primitive.is_constant()) insert(sp.primitive, e);
}

void RationalFunction::cancel() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto& [f, e] : den_) {
        while (e > 0) {
            auto q = num_.exact_divide(f);
            if (!q) break;
            num_ = std::move(*q);
            --e;
        }
    }
    den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& p) { return p.second == 0; }),
               den_.end());
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

namespace {

using FactorList = std::vector<std::pair<Polynomial, int>>;

// Merge two sorted factor lists with a combining rule on exponents.
template <class F>
FactorList merge_factors(const FactorList& a, const FactorList& b, F&& combine) {
    FactorList r;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.emplace_back(a[i].first, combine(a[i].second, 0));
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.emplace_back(b[j].first, combine(0, b[j].second));
            ++j;
        } else {
            r.emplace_back(a[i].first, combine(a[i].second, b[j].second));
            ++i;
            ++j;
        }
    }
    return r;
}

Polynomial cofactor(const FactorList& lcd, const FactorList& part) {
    Polynomial p = Polynomial::constant(1);
    std::size_t j = 0;
    for (const auto& [f, e] : lcd) {
        int have = 0;
        if (j < part.size() && part[j].first == f) have = part[j++].second;
        if (e > have) p = p * f.pow(static_cast<unsigned>(e - have));
    }
    return p;
}

}  // namespace

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    RationalFunction r;
    if (a.den_.empty() && b.den_.empty()) {
        r.num_ = a.num_ + b.num_;
        return r;
    }
    if (a.den_ == b.den_) {
        r.num_ = a.num_ + b.num_;
        r.den_ = a.den_;
    } else {
        r.den_ = merge_factors(a.den_, b.den_, [](int x, int y) { return std::max(x, y); });
        r.num_ = a.num_ * cofactor(r.den_, a.den_) + b.num_ * cofactor(r.den_, b.den_);
    }
    r.cancel();
    return r;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    RationalFunction r;
    r.num_ = a.num_ * b.num_;
    if (r.num_.is_zero()) return r;
    if (a.den_.empty() && b.den_.empty()) return r;
    r.den_ = merge_factors(a.den_, b.den_, [](int x, int y) { return x + y; });
    if (!a.den_.empty() && !b.den_.empty()) r.cancel();
    else if (!(a.num_.is_constant() || b.num_.is_constant())) r.cancel();
    return r;
}

RationalFunction RationalFunction::inverse() const {
    if (num_.is_zero()) throw std::domain_error("division by zero");
    RationalFunction r;
    r.num_ = denominator_product();
    r.add_factor(num_, 1);
    r.cancel();
    return r;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (b.is_constant()) {
        RationalFunction r = a;
        r.num_ = r.num_.scaled(1 / b.constant_value());
        return r;
    }
    RationalFunction r;
    r.num_ = a.num_ * b.denominator_product();
    r.den_ = a.den_;
    r.add_factor(b.num_, 1);
    r.cancel();
    return r;
}

RationalFunction RationalFunction::pow(long n) const {
    if (n == 0) return RationalFunction(1);
    if (n < 0) return inverse().pow(-n);
    RationalFunction r = *this;
    r.num_ = num_.pow(static_cast<unsigned>(n));
    for (auto& [f, e] : r.den_) e *= static_cast<int>(n);
    return r;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
}

mpq_class RationalFunction::evaluate_exact(const std::map<SymId, mpq_class>& point) const {
    mpq_class v = num_.evaluate_exact(point);
    for (const auto& [f, e] : den_) {
        mpq_class d = f.evaluate_exact(point);
        if (sgn(d) == 0) throw EvalError(EvalError::Kind::DivisionByZero, "denominator vanishes");
        for (int k = 0; k < e; ++k) v /= d;
    }
    return v;
}

Expr RationalFunction::to_expr() const {
    Expr n = num_.to_expr();
    if (den_.empty()) return n;
    std::vector<Expr> fs;
    std::vector<const std::pair<Polynomial, int>*> order;
    for (const auto& p : den_) order.push_back(&p);
    std::vector<std::pair<std::string, Expr>> rendered;
    for (const auto* p : order) {
        Expr f = kronweb::pow(p->first.to_expr(), p->second);
        rendered.emplace_back(f.str(), f);
    }
    std::sort(rendered.begin(), rendered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [s, f] : rendered) fs.push_back(f);
    return n / product(fs);
}

}  // namespace kronweb
