#include "kronweb/expr.hpp"

#include "symbols.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <unordered_map>

namespace kronweb {

namespace detail {

SymId SymbolTable::intern_variable(const std::string& name) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (entries_[it->second].atom) throw std::logic_error("symbol clash: " + name);
        return it->second;
    }
    SymId id = static_cast<SymId>(entries_.size());
    SymbolEntry e;
    e.name = name;
    e.vars = {id};
    entries_.push_back(std::move(e));
    index_.emplace(name, id);
    return id;
}

SymId SymbolTable::intern_atom(const std::string& key, Op op, const Expr& arg,
                               std::shared_ptr<const RationalFunction> argc,
                               std::vector<SymId> vars) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    SymId id = static_cast<SymId>(entries_.size());
    SymbolEntry e;
    e.name = key;
    e.atom = true;
    e.op = op;
    e.arg = arg;
    e.arg_canonical = std::move(argc);
    e.vars = std::move(vars);
    entries_.push_back(std::move(e));
    index_.emplace(key, id);
    return id;
}

const SymbolEntry& SymbolTable::entry(SymId id) const {
    std::lock_guard lock(mutex_);
    return entries_.at(id);
}

SymbolTable& symbol_table() {
    static SymbolTable table;
    return table;
}

}  // namespace detail

std::uint32_t intern_variable(const std::string& name) {
    return detail::symbol_table().intern_variable(name);
}

const std::string& variable_name(std::uint32_t id) { return detail::symbol_table().entry(id).name; }

bool is_function(Op op) {
    return op == Op::Exp || op == Op::Log || op == Op::Sin || op == Op::Cos || op == Op::Sqrt;
}

const char* function_name(Op op) {
    switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    default: return "";
    }
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const mpq_class& q) {
    std::size_t h = std::hash<long>()(mpz_get_si(q.get_num_mpz_t()));
    h = mix(h, mpz_size(q.get_num_mpz_t()));
    h = mix(h, std::hash<long>()(mpz_get_si(q.get_den_mpz_t())));
    return mix(h, static_cast<std::size_t>(mpz_sgn(q.get_num_mpz_t()) + 1));
}

}  // namespace

struct ExprFactory {
    static Expr make(ExprNode&& n) {
        std::size_t h = static_cast<std::size_t>(n.op) * 1315423911u;
        switch (n.op) {
        case Op::Const: h = mix(h, hash_rational(n.value)); break;
        case Op::Var: h = mix(h, n.var); break;
        case Op::Pow: h = mix(h, static_cast<std::size_t>(n.exponent)); break;
        default: break;
        }
        bool rational = !is_function(n.op);
        for (const auto& a : n.args) {
            h = mix(h, a.hash());
            rational = rational && a.is_rational();
        }
        n.hash = h;
        n.rational = rational;
        return Expr(std::make_shared<const ExprNode>(std::move(n)));
    }

    static Expr constant(const mpq_class& v) {
        ExprNode n;
        n.op = Op::Const;
        n.value = v;
        n.value.canonicalize();
        return make(std::move(n));
    }

    static Expr node(Op op, std::vector<Expr> args, long exponent = 0) {
        ExprNode n;
        n.op = op;
        n.args = std::move(args);
        n.exponent = exponent;
        return make(std::move(n));
    }
};

static const Expr& zero_expr() {
    static const Expr z = ExprFactory::constant(0);
    return z;
}

Expr::Expr() : n_(zero_expr().n_) {}
Expr::Expr(const mpq_class& v) : n_(ExprFactory::constant(v).n_) {}

Expr Expr::variable(const std::string& name) {
    ExprNode n;
    n.op = Op::Var;
    n.var = intern_variable(name);
    return ExprFactory::make(std::move(n));
}

Op Expr::op() const { return n_->op; }
const mpq_class& Expr::value() const { return n_->value; }
const std::string& Expr::name() const { return variable_name(n_->var); }
std::uint32_t Expr::var_id() const { return n_->var; }
const std::vector<Expr>& Expr::args() const { return n_->args; }
long Expr::exponent() const { return n_->exponent; }
bool Expr::is_const() const { return n_->op == Op::Const; }
bool Expr::is_zero() const { return is_const() && sgn(n_->value) == 0; }
bool Expr::is_one() const { return is_const() && n_->value == 1; }
bool Expr::is_rational() const { return n_->rational; }
std::size_t Expr::hash() const { return n_->hash; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.n_ == b.n_) return true;
    if (a.hash() != b.hash() || a.op() != b.op()) return false;
    switch (a.op()) {
    case Op::Const: return a.value() == b.value();
    case Op::Var: return a.var_id() == b.var_id();
    default: break;
    }
    if (a.exponent() != b.exponent() || a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!(a.args()[i] == b.args()[i])) return false;
    return true;
}

Expr sum(const std::vector<Expr>& terms) {
    std::vector<Expr> out;
    mpq_class c = 0;
    std::function<void(const Expr&)> push = [&](const Expr& t) {
        if (t.op() == Op::Add) {
            for (const auto& a : t.args()) push(a);
        } else if (t.is_const()) {
            c += t.value();
        } else {
            out.push_back(t);
        }
    };
    for (const auto& t : terms) push(t);
    if (sgn(c) != 0) out.push_back(ExprFactory::constant(c));
    if (out.empty()) return Expr();
    if (out.size() == 1) return out[0];
    return ExprFactory::node(Op::Add, std::move(out));
}

Expr product(const std::vector<Expr>& factors) {
    std::vector<Expr> out;
    mpq_class c = 1;
    std::function<void(const Expr&)> push = [&](const Expr& f) {
        if (f.op() == Op::Mul) {
            for (const auto& a : f.args()) push(a);
        } else if (f.is_const()) {
            c *= f.value();
        } else {
            out.push_back(f);
        }
    };
    for (const auto& f : factors) push(f);
    if (sgn(c) == 0) return Expr();
    if (out.empty()) return ExprFactory::constant(c);
    if (c == 1 && out.size() == 1) return out[0];
    if (c != 1) out.insert(out.begin(), ExprFactory::constant(c));
    return ExprFactory::node(Op::Mul, std::move(out));
}

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
Expr operator-(const Expr& a) { return product({ExprFactory::constant(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_const()) {
        if (sgn(b.value()) == 0) throw std::domain_error("division by the constant 0");
        return a * ExprFactory::constant(1 / b.value());
    }
    if (a.is_zero()) return Expr();
    return ExprFactory::node(Op::Div, {a, b});
}

Expr pow(const Expr& base, long n) {
    if (n == 0) return Expr(1);
    if (n == 1) return base;
    if (base.is_const()) {
        const mpq_class& v = base.value();
        if (sgn(v) == 0) {
            if (n < 0) throw std::domain_error("negative power of 0");
            return Expr();
        }
        mpz_class num = v.get_num(), den = v.get_den();
        unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
        mpz_class pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), k);
        mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), k);
        mpq_class r = n < 0 ? mpq_class(pd, pn) : mpq_class(pn, pd);
        r.canonicalize();
        return ExprFactory::constant(r);
    }
    if (base.op() == Op::Pow) return pow(base.args()[0], base.exponent() * n);
    return ExprFactory::node(Op::Pow, {base}, n);
}

Expr apply_function(Op op, const Expr& a) {
    if (!is_function(op)) throw std::invalid_argument("not an elementary function");
    return ExprFactory::node(op, {a});
}

Expr exp(const Expr& a) { return apply_function(Op::Exp, a); }
Expr log(const Expr& a) { return apply_function(Op::Log, a); }
Expr sin(const Expr& a) { return apply_function(Op::Sin, a); }
Expr cos(const Expr& a) { return apply_function(Op::Cos, a); }
Expr sqrt(const Expr& a) { return apply_function(Op::Sqrt, a); }

// ---------------------------------------------------------------- printing

namespace {

std::string const_str(const mpq_class& q) { return q.get_str(); }

bool negative_coefficient(const Expr& t) {
    if (t.is_const()) return sgn(t.value()) < 0;
    return t.op() == Op::Mul && t.args()[0].is_const() && sgn(t.args()[0].value()) < 0;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e.op()) {
    case Op::Const: out += const_str(e.value()); return;
    case Op::Var: out += e.name(); return;
    case Op::Add: {
        const auto& ts = e.args();
        print(ts[0], out);
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const Expr& t = ts[i];
            if (negative_coefficient(t)) {
                out += " - ";
                Expr m = -t;
                print_wrapped(m, m.op() == Op::Add, out);
            } else {
                out += " + ";
                print(t, out);
            }
        }
        return;
    }
    case Op::Mul: {
        const auto& fs = e.args();
        std::size_t start = 0;
        if (fs[0].is_const()) {
            start = 1;
            if (fs[0].value() == -1)
                out += '-';
            else
                out += const_str(fs[0].value()) + "*";
        }
        for (std::size_t i = start; i < fs.size(); ++i) {
            if (i > start) out += '*';
            const Expr& f = fs[i];
            print_wrapped(f, f.op() == Op::Add || f.op() == Op::Div || f.is_const(), out);
        }
        return;
    }
    case Op::Pow: {
        const Expr& b = e.args()[0];
        print_wrapped(b, !(b.op() == Op::Var || is_function(b.op())), out);
        out += '^';
        if (e.exponent() < 0)
            out += "(" + std::to_string(e.exponent()) + ")";
        else
            out += std::to_string(e.exponent());
        return;
    }
    case Op::Div: {
        const Expr& a = e.args()[0];
        const Expr& b = e.args()[1];
        print_wrapped(a, a.op() == Op::Add, out);
        out += '/';
        print_wrapped(b, !(b.op() == Op::Var || is_function(b.op()) || b.op() == Op::Pow), out);
        return;
    }
    default:
        out += function_name(e.op());
        out += '(';
        print(e.args()[0], out);
        out += ')';
        return;
    }
}

}  // namespace

std::string Expr::str() const {
    std::string s;
    print(*this, s);
    return s;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

// ------------------------------------------------------- tree transformations

namespace {

struct NodeHash {
    std::size_t operator()(const ExprNode* p) const { return std::hash<const void*>()(p); }
};

class Differentiator {
public:
    explicit Differentiator(std::uint32_t v) : var_(v) {}

    Expr d(const Expr& e) {
        auto it = memo_.find(e.node());
        if (it != memo_.end()) return it->second;
        Expr r = compute(e);
        memo_.emplace(e.node(), r);
        keep_.push_back(e);
        return r;
    }

private:
    std::uint32_t var_;
    std::unordered_map<const ExprNode*, Expr, NodeHash> memo_;
    std::vector<Expr> keep_;

    Expr compute(const Expr& e) {
        switch (e.op()) {
        case Op::Const: return Expr();
        case Op::Var: return e.var_id() == var_ ? Expr(1) : Expr();
        case Op::Add: {
            std::vector<Expr> ts;
            for (const auto& a : e.args()) ts.push_back(d(a));
            return sum(ts);
        }
        case Op::Mul: {
            std::vector<Expr> ts;
            const auto& fs = e.args();
            for (std::size_t i = 0; i < fs.size(); ++i) {
                Expr di = d(fs[i]);
                if (di.is_zero()) continue;
                std::vector<Expr> p;
                for (std::size_t j = 0; j < fs.size(); ++j) p.push_back(j == i ? di : fs[j]);
                ts.push_back(product(p));
            }
            return sum(ts);
        }
        case Op::Pow: {
            const Expr& b = e.args()[0];
            Expr db = d(b);
            if (db.is_zero()) return Expr();
            return product({Expr(e.exponent()), pow(b, e.exponent() - 1), db});
        }
        case Op::Div: {
            const Expr& a = e.args()[0];
            const Expr& b = e.args()[1];
            Expr da = d(a), db = d(b);
            if (db.is_zero()) return da / b;
            return (da * b - a * db) / pow(b, 2);
        }
        case Op::Exp: return e * d(e.args()[0]);
        case Op::Log: return d(e.args()[0]) / e.args()[0];
        case Op::Sin: return cos(e.args()[0]) * d(e.args()[0]);
        case Op::Cos: return -(sin(e.args()[0]) * d(e.args()[0]));
        case Op::Sqrt: return d(e.args()[0]) / (Expr(2) * e);
        }
        return Expr();
    }
};

template <class F>
Expr rebuild(const Expr& e, F&& leaf, std::unordered_map<const ExprNode*, Expr, NodeHash>& memo,
             std::vector<Expr>& keep) {
    auto it = memo.find(e.node());
    if (it != memo.end()) return it->second;
    Expr r;
    switch (e.op()) {
    case Op::Const: r = e; break;
    case Op::Var: r = leaf(e); break;
    case Op::Add:
    case Op::Mul: {
        std::vector<Expr> as;
        for (const auto& a : e.args()) as.push_back(rebuild(a, leaf, memo, keep));
        r = e.op() == Op::Add ? sum(as) : product(as);
        break;
    }
    case Op::Pow: r = pow(rebuild(e.args()[0], leaf, memo, keep), e.exponent()); break;
    case Op::Div:
        r = rebuild(e.args()[0], leaf, memo, keep) / rebuild(e.args()[1], leaf, memo, keep);
        break;
    default: r = apply_function(e.op(), rebuild(e.args()[0], leaf, memo, keep)); break;
    }
    memo.emplace(e.node(), r);
    keep.push_back(e);
    return r;
}

void collect_vars(const Expr& e, std::set<std::uint32_t>& seen_vars,
                  std::unordered_map<const ExprNode*, bool, NodeHash>& seen) {
    if (!seen.emplace(e.node(), true).second) return;
    if (e.op() == Op::Var) seen_vars.insert(e.var_id());
    for (const auto& a : e.args()) collect_vars(a, seen_vars, seen);
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
    Differentiator d(intern_variable(var));
    return d.d(e);
}

Expr differentiate(const Expr& e, const std::string& var, const VarList& chart) {
    if (std::find(chart.begin(), chart.end(), var) == chart.end())
        throw std::invalid_argument("variable " + var + " is not declared in the chart");
    return differentiate(e, var);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values) {
    std::unordered_map<std::uint32_t, Expr> by_id;
    for (const auto& [k, v] : values) by_id.emplace(intern_variable(k), v);
    std::unordered_map<const ExprNode*, Expr, NodeHash> memo;
    std::vector<Expr> keep;
    return rebuild(
        e,
        [&](const Expr& v) {
            auto it = by_id.find(v.var_id());
            return it == by_id.end() ? v : it->second;
        },
        memo, keep);
}

std::vector<std::string> free_variables(const Expr& e) {
    std::set<std::uint32_t> ids;
    std::unordered_map<const ExprNode*, bool, NodeHash> seen;
    collect_vars(e, ids, seen);
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(variable_name(id));
    std::sort(out.begin(), out.end());
    return out;
}

bool depends_on(const Expr& e, const std::string& var) {
    auto vs = free_variables(e);
    return std::find(vs.begin(), vs.end(), var) != vs.end();
}

}  // namespace kronweb
