#include "kronweb/expr.hpp"

#include <cmath>
#include <unordered_map>

namespace kronweb {

namespace {

struct NodeHash {
    std::size_t operator()(const ExprNode* p) const { return std::hash<const void*>()(p); }
};

class ExactEvaluator {
public:
    explicit ExactEvaluator(const ExactPoint& pt) {
        for (const auto& [k, v] : pt) values_.emplace(intern_variable(k), v);
    }

    mpq_class run(const Expr& e) {
        auto it = memo_.find(e.node());
        if (it != memo_.end()) return it->second;
        mpq_class v = compute(e);
        memo_.emplace(e.node(), v);
        return v;
    }

private:
    std::unordered_map<std::uint32_t, mpq_class> values_;
    std::unordered_map<const ExprNode*, mpq_class, NodeHash> memo_;

    static mpq_class power(const mpq_class& b, long n) {
        if (n < 0) {
            if (sgn(b) == 0) throw EvalError(EvalError::Kind::DivisionByZero, "negative power of zero");
            return power(1 / b, -n);
        }
        mpq_class r = 1, base = b;
        while (n) {
            if (n & 1) r *= base;
            n >>= 1;
            if (n) base *= base;
        }
        return r;
    }

    mpq_class compute(const Expr& e) {
        switch (e.op()) {
        case Op::Const: return e.value();
        case Op::Var: {
            auto it = values_.find(e.var_id());
            if (it == values_.end()) throw EvalError(EvalError::Kind::Unbound, "unbound variable " + e.name());
            return it->second;
        }
        case Op::Add: {
            mpq_class s = 0;
            for (const auto& a : e.args()) s += run(a);
            return s;
        }
        case Op::Mul: {
            mpq_class p = 1;
            for (const auto& a : e.args()) p *= run(a);
            return p;
        }
        case Op::Pow: return power(run(e.args()[0]), e.exponent());
        case Op::Div: {
            mpq_class d = run(e.args()[1]);
            if (sgn(d) == 0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
            return run(e.args()[0]) / d;
        }
        default: break;
        }
        mpq_class a = run(e.args()[0]);
        switch (e.op()) {
        case Op::Exp:
            if (sgn(a) == 0) return 1;
            break;
        case Op::Log:
            if (sgn(a) <= 0) throw EvalError(EvalError::Kind::Domain, "log of a non-positive value");
            if (a == 1) return 0;
            break;
        case Op::Sin:
            if (sgn(a) == 0) return 0;
            break;
        case Op::Cos:
            if (sgn(a) == 0) return 1;
            break;
        case Op::Sqrt:
            if (sgn(a) < 0) throw EvalError(EvalError::Kind::Domain, "sqrt of a negative value");
            if (mpz_perfect_square_p(a.get_num_mpz_t()) && mpz_perfect_square_p(a.get_den_mpz_t())) {
                mpz_class n, d;
                mpz_sqrt(n.get_mpz_t(), a.get_num_mpz_t());
                mpz_sqrt(d.get_mpz_t(), a.get_den_mpz_t());
                return mpq_class(n, d);
            }
            break;
        default: break;
        }
        throw EvalError(EvalError::Kind::Transcendental,
                        std::string("exact evaluation of ") + function_name(e.op()) + " at a non-special value");
    }
};

}  // namespace

mpq_class evaluate_exact(const Expr& e, const ExactPoint& point) { return ExactEvaluator(point).run(e); }

double evaluate_float(const Expr& e, const FloatPoint& point) {
    VarList slots;
    std::vector<long double> x;
    for (const auto& [k, v] : point) {
        slots.push_back(k);
        x.push_back(v);
    }
    CompiledExpr c(e, slots);
    auto r = c.run(x.data(), 0);
    if (r.singular) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
    if (r.domain) throw EvalError(EvalError::Kind::Domain, "log/sqrt outside the real domain");
    return static_cast<double>(r.value);
}

CompiledExpr::CompiledExpr(const Expr& e, const VarList& slots) {
    std::unordered_map<std::uint32_t, std::uint32_t> slot_of;
    for (std::size_t i = 0; i < slots.size(); ++i) slot_of.emplace(intern_variable(slots[i]), static_cast<std::uint32_t>(i));
    std::unordered_map<const ExprNode*, std::uint32_t, NodeHash> index;
    // Iterative post-order so deep trees do not exhaust the stack.
    std::vector<std::pair<Expr, bool>> stack{{e, false}};
    while (!stack.empty()) {
        auto [cur, expanded] = stack.back();
        stack.pop_back();
        if (index.count(cur.node())) continue;
        if (!expanded) {
            stack.push_back({cur, true});
            for (const auto& a : cur.args())
                if (!index.count(a.node())) stack.push_back({a, false});
            continue;
        }
        Instr ins;
        ins.op = cur.op();
        if (cur.op() == Op::Const) {
            ins.c = cur.value().get_d();
            // Small numerator and denominator divide in long double for extra accuracy.
            const mpz_class& n = cur.value().get_num();
            const mpz_class& d = cur.value().get_den();
            if (n.fits_slong_p() && d.fits_slong_p())
                ins.c = static_cast<long double>(n.get_si()) / static_cast<long double>(d.get_si());
        }
        if (cur.op() == Op::Var) {
            auto it = slot_of.find(cur.var_id());
            if (it == slot_of.end()) throw EvalError(EvalError::Kind::Unbound, "unbound variable " + cur.name());
            ins.slot = it->second;
        }
        ins.exponent = cur.exponent();
        for (const auto& a : cur.args()) ins.args.push_back(index.at(a.node()));
        index.emplace(cur.node(), static_cast<std::uint32_t>(tape_.size()));
        tape_.push_back(std::move(ins));
    }
}

CompiledExpr::Result CompiledExpr::run(const long double* x, long double radius) const {
    Result res;
    if (tape_.empty()) return res;
    std::vector<long double> v(tape_.size()), s(tape_.size());
    for (std::size_t i = 0; i < tape_.size(); ++i) {
        const Instr& in = tape_[i];
        long double val = 0, sc = 0;
        switch (in.op) {
        case Op::Const:
            val = in.c;
            sc = std::fabs(val);
            break;
        case Op::Var:
            val = x[in.slot];
            sc = std::fabs(val);
            break;
        case Op::Add:
            for (auto a : in.args) {
                val += v[a];
                sc += s[a];
            }
            break;
        case Op::Mul:
            val = 1;
            sc = 1;
            for (auto a : in.args) {
                val *= v[a];
                sc *= s[a];
            }
            break;
        case Op::Pow: {
            long double b = v[in.args[0]];
            long n = in.exponent;
            if (n < 0) {
                if (std::fabs(b) <= radius || b == 0) res.singular = true;
                val = std::pow(b, static_cast<long double>(n));
                long double rel = b == 0 ? 1 : s[in.args[0]] / std::fabs(b);
                sc = std::fabs(val) * std::pow(rel, static_cast<long double>(-n));
            } else {
                val = std::pow(b, static_cast<long double>(n));
                sc = std::pow(s[in.args[0]], static_cast<long double>(n));
            }
            break;
        }
        case Op::Div: {
            long double a = v[in.args[0]], b = v[in.args[1]];
            if (std::fabs(b) <= radius || b == 0) res.singular = true;
            val = a / b;
            long double ab = std::fabs(b);
            sc = ab == 0 ? 0 : s[in.args[0]] / ab + std::fabs(val) * s[in.args[1]] / ab;
            break;
        }
        case Op::Exp: {
            long double a = v[in.args[0]];
            val = std::exp(a);
            sc = std::fabs(val) * std::max<long double>(1, s[in.args[0]]);
            break;
        }
        case Op::Log: {
            long double a = v[in.args[0]];
            if (a <= 0) res.domain = true;
            if (std::fabs(a) <= radius) res.singular = true;
            val = std::log(a);
            sc = std::max(std::fabs(val), a == 0 ? 0 : s[in.args[0]] / std::fabs(a));
            break;
        }
        case Op::Sin:
            val = std::sin(v[in.args[0]]);
            sc = std::max<long double>(1, s[in.args[0]]);
            break;
        case Op::Cos:
            val = std::cos(v[in.args[0]]);
            sc = std::max<long double>(1, s[in.args[0]]);
            break;
        case Op::Sqrt: {
            long double a = v[in.args[0]];
            if (a < 0) res.domain = true;
            val = std::sqrt(a);
            sc = std::sqrt(s[in.args[0]]);
            break;
        }
        }
        v[i] = val;
        s[i] = sc;
    }
    res.value = v.back();
    res.scale = s.back();
    return res;
}

long double CompiledExpr::operator()(const long double* x) const { return run(x, 0).value; }

}  // namespace kronweb
