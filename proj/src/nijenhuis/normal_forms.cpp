#include "kronweb/nijenhuis.hpp"

#include <set>

namespace kronweb {

namespace {

const Chart& chart3() {
    static Chart c = Chart::standard(3);
    return c;
}

Scalar x(std::size_t i) { return chart3().coordinate(i); }

mpq_class param(const std::vector<mpq_class>& params, std::size_t i, const std::string& symbol) {
    if (i >= params.size()) throw NijenhuisError(symbol + " needs parameter a" + std::to_string(i + 1));
    return params[i];
}

void require_distinct(const std::vector<mpq_class>& used, const std::string& symbol) {
    std::set<mpq_class> seen(used.begin(), used.end());
    if (seen.size() != used.size()) throw NijenhuisError(symbol + " needs pairwise distinct parameters");
}

RFMatrix diag3(const Scalar& a, const Scalar& b, const Scalar& c) {
    return {{a, Scalar(0), Scalar(0)}, {Scalar(0), b, Scalar(0)}, {Scalar(0), Scalar(0), c}};
}

RFMatrix b_block(const Scalar& e2, const Scalar& e3) {
    return {{e2, Scalar(1), Scalar(0)}, {Scalar(0), e2, Scalar(0)}, {Scalar(0), Scalar(0), e3}};
}

RFMatrix jordan3(const Scalar& e) {
    return {{e, Scalar(1), Scalar(0)}, {Scalar(0), e, Scalar(1)}, {Scalar(0), Scalar(0), e}};
}

}  // namespace

const std::vector<std::string>& normal_form_symbols() {
    static const std::vector<std::string> s{"A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3", "C0", "C1"};
    return s;
}

std::vector<Scalar> frobenius_parameters(const std::string& symbol, const std::vector<mpq_class>& params) {
    auto a = [&](std::size_t i) { return Scalar(param(params, i - 1, symbol)); };
    auto distinct = [&](std::vector<std::size_t> idx) {
        std::vector<mpq_class> used;
        for (auto i : idx) used.push_back(param(params, i - 1, symbol));
        require_distinct(used, symbol);
    };
    if (symbol == "A0") return {x(0), x(1), x(2)};
    if (symbol == "A1") return {x(0), x(1), a(3)};
    if (symbol == "A2") {
        distinct({2, 3});
        return {x(0), a(2), a(3)};
    }
    if (symbol == "A3") {
        distinct({1, 2, 3});
        return {a(1), a(2), a(3)};
    }
    if (symbol == "B0") return {x(1), x(1), x(2)};
    if (symbol == "B1") return {x(1), x(1), a(3)};
    if (symbol == "B2") return {a(2), a(2), x(2)};
    if (symbol == "B3") {
        distinct({2, 3});
        return {a(2), a(2), a(3)};
    }
    if (symbol == "C0") return {x(2), x(2), x(2)};
    if (symbol == "C1") return {a(3), a(3), a(3)};
    throw NijenhuisError("unknown normal form " + symbol);
}

RFMatrix frobenius_matrix(const Scalar& p1, const Scalar& p2, const Scalar& p3) {
    Scalar f0 = p1 * p2 * p3;
    Scalar f1 = -(p1 * p2 + p1 * p3 + p2 * p3);
    Scalar f2 = p1 + p2 + p3;
    return {{Scalar(0), Scalar(0), f0}, {Scalar(1), Scalar(0), f1}, {Scalar(0), Scalar(1), f2}};
}

OneOneTensor normal_form(const std::string& symbol, char variant, const std::vector<mpq_class>& params) {
    auto phi = frobenius_parameters(symbol, params);
    const auto& c = chart3();
    switch (variant) {
    case 'F':
        return OneOneTensor(c, frobenius_matrix(phi[0], phi[1], phi[2]));
    case 'N':
        if (symbol == "C0")
            return OneOneTensor(c, {{x(2), Scalar(0), Scalar(1)}, {Scalar(1), x(2), -x(1)}, {Scalar(0), Scalar(0), x(2)}});
        [[fallthrough]];
    case 'J':
        switch (symbol[0]) {
        case 'A':
            return OneOneTensor(c, diag3(phi[0], phi[1], phi[2]));
        case 'B':
            return OneOneTensor(c, b_block(phi[0], phi[2]));
        default:
            return OneOneTensor(c, jordan3(phi[0]));
        }
    default:
        throw NijenhuisError(std::string("unknown normal form variant ") + variant);
    }
}

Scalar normal_form_solution(const std::string& symbol, const std::vector<mpq_class>& params) {
    frobenius_parameters(symbol, params);
    const auto& c = chart3();
    if (symbol == "B0") return c.parse("x2-2*x3+x1*(x3-x2)");
    if (symbol == "B1") return x(0) + x(2) / (x(1) - Scalar(params[2]));
    if (symbol == "C0") return c.parse("x1+x2*x3+x2+x3");
    return c.parse("x1+x2+x3");
}

}  // namespace kronweb
