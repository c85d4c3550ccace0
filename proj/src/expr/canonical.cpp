#include "kronweb/polynomial.hpp"

#include "symbols.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace kronweb {

namespace {

// exp/log/sin/cos/sqrt of a canonical argument, with exact constant cases folded.
RationalFunction apply_canonical(Op op, const RationalFunction& arg) {
    if (arg.is_constant()) {
        mpq_class c = arg.constant_value();
        switch (op) {
        case Op::Exp:
            if (sgn(c) == 0) return RationalFunction(1);
            break;
        case Op::Log:
            if (c == 1) return RationalFunction(0);
            if (sgn(c) <= 0) throw EvalError(EvalError::Kind::Domain, "log of a non-positive constant");
            break;
        case Op::Sin:
            if (sgn(c) == 0) return RationalFunction(0);
            break;
        case Op::Cos:
            if (sgn(c) == 0) return RationalFunction(1);
            break;
        case Op::Sqrt:
            if (sgn(c) < 0) throw EvalError(EvalError::Kind::Domain, "sqrt of a negative constant");
            if (mpz_perfect_square_p(c.get_num_mpz_t()) && mpz_perfect_square_p(c.get_den_mpz_t())) {
                mpz_class n, d;
                mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
                mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
                return RationalFunction(mpq_class(n, d));
            }
            break;
        default: break;
        }
    }
    return RationalFunction::symbol(intern_atom(op, arg));
}

struct NodeHash {
    std::size_t operator()(const ExprNode* p) const { return std::hash<const void*>()(p); }
};

class Canonicalizer {
public:
    RationalFunction run(const Expr& e) {
        auto it = memo_.find(e.node());
        if (it != memo_.end()) return it->second;
        RationalFunction r = compute(e);
        memo_.emplace(e.node(), r);
        keep_.push_back(e);
        return r;
    }

private:
    std::unordered_map<const ExprNode*, RationalFunction, NodeHash> memo_;
    std::vector<Expr> keep_;

    RationalFunction compute(const Expr& e) {
        switch (e.op()) {
        case Op::Const: return RationalFunction(e.value());
        case Op::Var: return RationalFunction::symbol(e.var_id());
        case Op::Add: {
            RationalFunction r;
            for (const auto& a : e.args()) r += run(a);
            return r;
        }
        case Op::Mul: {
            RationalFunction r(1);
            for (const auto& a : e.args()) {
                r *= run(a);
                if (r.is_zero()) break;
            }
            return r;
        }
        case Op::Pow: return run(e.args()[0]).pow(e.exponent());
        case Op::Div: {
            RationalFunction d = run(e.args()[1]);
            if (d.is_zero()) throw EvalError(EvalError::Kind::DivisionByZero, "denominator simplifies to zero");
            return run(e.args()[0]) / d;
        }
        default: return apply_canonical(e.op(), run(e.args()[0]));
        }
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<SymId, SymId>& p) const {
        return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
};

std::mutex derivative_mutex;
std::unordered_map<std::pair<SymId, SymId>, RationalFunction, PairHash> derivative_cache;

bool atom_depends_on(SymId atom, SymId var) {
    const auto& vs = atom_variables(atom);
    return std::find(vs.begin(), vs.end(), var) != vs.end();
}

RationalFunction atom_derivative(SymId atom, SymId var) {
    {
        std::lock_guard lock(derivative_mutex);
        auto it = derivative_cache.find({atom, var});
        if (it != derivative_cache.end()) return it->second;
    }
    const RationalFunction& arg = atom_argument_canonical(atom);
    RationalFunction du = arg.derivative(var);
    RationalFunction r;
    if (!du.is_zero()) {
        switch (atom_op(atom)) {
        case Op::Exp: r = RationalFunction::symbol(atom) * du; break;
        case Op::Log: r = du / arg; break;
        case Op::Sin: r = apply_canonical(Op::Cos, arg) * du; break;
        case Op::Cos: r = -(apply_canonical(Op::Sin, arg) * du); break;
        case Op::Sqrt: r = du / (RationalFunction(2) * RationalFunction::symbol(atom)); break;
        default: throw std::logic_error("unexpected atom operator");
        }
    }
    std::lock_guard lock(derivative_mutex);
    derivative_cache.emplace(std::make_pair(atom, var), r);
    return r;
}

// Total derivative of a polynomial whose symbols may include atoms.
RationalFunction total_derivative(const Polynomial& p, SymId var) {
    RationalFunction r(p.derivative(var));
    for (SymId s : p.symbols()) {
        if (!symbol_is_atom(s) || !atom_depends_on(s, var)) continue;
        RationalFunction da = atom_derivative(s, var);
        if (!da.is_zero()) r += RationalFunction(p.derivative(s)) * da;
    }
    return r;
}

}  // namespace

SymId intern_atom(Op op, const RationalFunction& arg) {
    std::string key = std::string(function_name(op)) + "(" + arg.str() + ")";
    auto argc = std::make_shared<const RationalFunction>(arg);
    return detail::symbol_table().intern_atom(key, op, arg.to_expr(), argc, arg.variables());
}

RationalFunction canonical(const Expr& e) { return Canonicalizer().run(e); }

RationalFunction RationalFunction::derivative(SymId var) const {
    if (den_.empty()) return total_derivative(num_, var);
    RationalFunction inv;
    inv.num_ = Polynomial::constant(1);
    inv.den_ = den_;
    RationalFunction r = total_derivative(num_, var) * inv;
    for (std::size_t i = 0; i < den_.size(); ++i) {
        RationalFunction df = total_derivative(den_[i].first, var);
        if (df.is_zero()) continue;
        RationalFunction g;
        g.num_ = num_.scaled(-den_[i].second);
        g.den_ = den_;
        g.den_[i].second += 1;
        r += g * df;
    }
    return r;
}

Expr derivative(const Expr& e, const std::string& var) {
    return canonical(e).derivative(intern_variable(var)).to_expr();
}

Expr simplify(const Expr& e) { return canonical(e).to_expr(); }

std::vector<Expr> lambda_poly_coeffs(const Expr& e, const std::string& param, int max_deg) {
    SymId p = intern_variable(param);
    RationalFunction r = canonical(e);
    for (const auto& [f, k] : r.denominator()) {
        auto vs = RationalFunction(f).variables();
        if (std::find(vs.begin(), vs.end(), p) != vs.end())
            throw std::domain_error("expression is not polynomial in " + param);
    }
    for (SymId s : r.numerator().symbols())
        if (symbol_is_atom(s) && atom_depends_on(s, p))
            throw std::domain_error("expression is not polynomial in " + param);
    int deg = r.numerator().degree_in(p);
    if (deg > max_deg)
        throw std::domain_error("degree " + std::to_string(deg) + " in " + param + " exceeds " +
                                std::to_string(max_deg));
    RationalFunction inv(1);
    inv = inv / RationalFunction(r.denominator_product());
    std::vector<Expr> out;
    for (int k = 0; k <= max_deg; ++k) out.push_back((RationalFunction(r.numerator().coefficient(p, k)) * inv).to_expr());
    return out;
}

}  // namespace kronweb
