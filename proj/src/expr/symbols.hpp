#pragma once

#include "kronweb/polynomial.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace kronweb::detail {

struct SymbolEntry {
    std::string name;
    bool atom = false;
    Op op = Op::Var;
    Expr arg;
    std::shared_ptr<const RationalFunction> arg_canonical;
    std::vector<SymId> vars;
};

class SymbolTable {
public:
    SymId intern_variable(const std::string& name);
    // Returns the existing id when an atom with the same key is present.
    SymId intern_atom(const std::string& key, Op op, const Expr& arg,
                      std::shared_ptr<const RationalFunction> argc, std::vector<SymId> vars);
    const SymbolEntry& entry(SymId id) const;

private:
    mutable std::mutex mutex_;
    std::deque<SymbolEntry> entries_;
    std::unordered_map<std::string, SymId> index_;
};

SymbolTable& symbol_table();

}  // namespace kronweb::detail
