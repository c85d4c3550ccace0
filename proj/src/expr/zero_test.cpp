#include "kronweb/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace kronweb {

std::string ZeroVerdict::tag_name() const {
    switch (tag) {
    case Tag::ProvenZero: return "ProvenZero";
    case Tag::ProbablyZero: return "ProbablyZero";
    case Tag::NonZero: return "NonZero";
    }
    return "";
}

std::string ZeroVerdict::describe() const {
    std::ostringstream os;
    os << tag_name();
    if (tag == Tag::ProbablyZero)
        os << " (samples=" << samples << ", tol=" << tolerance << ", seed=" << seed << ")";
    if (tag == Tag::NonZero) {
        os << " at (";
        for (std::size_t i = 0; i < witness.size(); ++i)
            os << (i ? ", " : "") << witness[i].first << "=" << witness[i].second;
        os << ") value " << witness_value;
    }
    if (!note.empty()) os << " [" << note << "]";
    return os.str();
}

void merge_verdict(ZeroVerdict& acc, const ZeroVerdict& v) {
    if (acc.tag == ZeroVerdict::Tag::NonZero) return;
    if (v.tag == ZeroVerdict::Tag::NonZero) {
        acc = v;
        return;
    }
    if (v.tag == ZeroVerdict::Tag::ProbablyZero) {
        if (acc.tag == ZeroVerdict::Tag::ProvenZero || v.confidence < acc.confidence) {
            std::string note = acc.note;
            acc = v;
            if (acc.note.empty()) acc.note = note;
        }
    }
}

namespace {

std::vector<SymId> sorted_by_name(std::vector<SymId> vars) {
    std::sort(vars.begin(), vars.end(), [](SymId a, SymId b) { return symbol_name(a) < symbol_name(b); });
    return vars;
}

// Exact value, or nullopt when a denominator factor vanishes.
std::optional<mpq_class> exact_value(const RationalFunction& r, const std::map<SymId, mpq_class>& pt) {
    mpq_class n = r.numerator().evaluate_exact(pt);
    mpq_class d = 1;
    for (const auto& [f, e] : r.denominator()) {
        mpq_class fv = f.evaluate_exact(pt);
        if (sgn(fv) == 0) return std::nullopt;
        for (int k = 0; k < e; ++k) d *= fv;
    }
    return n / d;
}

mpq_class lattice_value(std::size_t index) {
    // 0, 1, -1, 2, -2, ...
    long k = static_cast<long>((index + 1) / 2);
    return index % 2 == 1 ? mpq_class(k) : mpq_class(-k);
}

ZeroVerdict nonzero_verdict(const std::vector<SymId>& vars, const std::map<SymId, mpq_class>& pt, double value,
                            const ZeroPolicy& policy) {
    ZeroVerdict v;
    v.tag = ZeroVerdict::Tag::NonZero;
    v.confidence = 1.0;
    v.seed = policy.seed;
    v.tolerance = policy.tolerance;
    for (SymId s : vars) v.witness.emplace_back(symbol_name(s), pt.at(s).get_str());
    v.witness_value = value;
    return v;
}

mpq_class random_coordinate(std::mt19937_64& rng, const ZeroPolicy& policy) {
    std::uniform_int_distribution<long> den(1, std::max(1L, policy.max_denominator));
    long d = den(rng);
    long lo = static_cast<long>(std::ceil(policy.box_lo * static_cast<double>(d)));
    long hi = static_cast<long>(std::floor(policy.box_hi * static_cast<double>(d)));
    lo = std::max(lo, -policy.max_denominator);
    hi = std::min(hi, policy.max_denominator);
    if (hi < lo) hi = lo;
    std::uniform_int_distribution<long> num(lo, hi);
    mpq_class q(num(rng), d);
    q.canonicalize();
    return q;
}

ZeroVerdict exact_witness(const RationalFunction& r, const ZeroPolicy& policy) {
    auto vars = sorted_by_name(r.variables());
    std::map<SymId, mpq_class> pt;
    if (vars.empty()) return nonzero_verdict(vars, pt, r.constant_value().get_d(), policy);
    // Small lattice points first, shell by shell, first coordinate fastest.
    const std::size_t n = vars.size();
    std::size_t visited = 0;
    for (std::size_t K = 1; K <= 9 && visited < 20000; ++K) {
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            if (*std::max_element(idx.begin(), idx.end()) == K - 1) {
                for (std::size_t i = 0; i < n; ++i) pt[vars[i]] = lattice_value(idx[i]);
                ++visited;
                auto v = exact_value(r, pt);
                if (v && sgn(*v) != 0) return nonzero_verdict(vars, pt, v->get_d(), policy);
            }
            std::size_t i = 0;
            while (i < n && ++idx[i] == K) idx[i++] = 0;
            if (i == n) break;
        }
    }
    std::mt19937_64 rng(policy.seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (SymId s : vars) pt[s] = random_coordinate(rng, policy);
        auto v = exact_value(r, pt);
        if (v && sgn(*v) != 0) return nonzero_verdict(vars, pt, v->get_d(), policy);
    }
    throw InconclusiveError("no nonvanishing point found for a nonzero rational function");
}

}  // namespace

ZeroVerdict zero_test(const RationalFunction& r, const ZeroPolicy& policy) {
    ZeroVerdict verdict;
    verdict.seed = policy.seed;
    verdict.tolerance = policy.tolerance;
    if (r.is_zero()) return verdict;
    if (!r.has_atoms()) return exact_witness(r, policy);

    auto vars = sorted_by_name(r.variables());
    VarList names;
    for (SymId s : vars) names.push_back(symbol_name(s));
    CompiledExpr num(r.numerator().to_expr(), names);
    std::vector<CompiledExpr> dens;
    for (const auto& [f, e] : r.denominator()) dens.emplace_back(f.to_expr(), names);

    std::mt19937_64 rng(policy.seed);
    std::vector<long double> x(vars.size());
    std::map<SymId, mpq_class> pt;
    int accepted = 0;
    const int max_attempts = std::max(1, policy.samples) * 50;
    for (int attempt = 0; attempt < max_attempts && accepted < policy.samples; ++attempt) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
            pt[vars[i]] = random_coordinate(rng, policy);
            x[i] = static_cast<long double>(pt[vars[i]].get_d());
        }
        bool reject = false;
        long double den = 1;
        for (const auto& d : dens) {
            auto dr = d.run(x.data(), policy.singular_radius);
            if (dr.singular || dr.domain || std::fabs(dr.value) <= policy.singular_radius) reject = true;
            den *= dr.value;
        }
        auto nr = num.run(x.data(), policy.singular_radius);
        if (reject || nr.singular || nr.domain || !std::isfinite(static_cast<double>(nr.value))) continue;
        ++accepted;
        long double bound = static_cast<long double>(policy.tolerance) * std::max<long double>(1, nr.scale);
        if (std::fabs(nr.value) > bound)
            return nonzero_verdict(vars, pt, static_cast<double>(nr.value / den), policy);
    }
    if (accepted == 0) throw InconclusiveError("every sample point hit a singularity or domain violation");
    verdict.tag = ZeroVerdict::Tag::ProbablyZero;
    verdict.samples = accepted;
    verdict.confidence = 1.0 - std::pow(0.5, accepted);
    return verdict;
}

ZeroVerdict zero_test(const Expr& e, const ZeroPolicy& policy) { return zero_test(canonical(e), policy); }

}  // namespace kronweb
