#include "kronweb/expr.hpp"

#include <algorithm>
#include <cctype>

namespace kronweb {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}

UnknownIdentifier::UnknownIdentifier(const std::string& ident, std::size_t pos)
    : ParseError("unknown identifier '" + ident + "'", pos), identifier(ident) {}

namespace {

class Parser {
public:
    Parser(const std::string& text, const VarList& vars) : s_(text), vars_(vars) {}

    Expr parse() {
        Expr e = expression();
        skip();
        if (i_ != s_.size()) fail("unexpected character '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    const VarList& vars_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                std::size_t at = i_;
                Expr d = unary();
                if (d.is_zero()) throw ParseError("division by zero", at);
                e = e / d;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        bool paren = accept('(');
        bool neg = accept('-');
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("integer exponent expected");
        if (i_ < s_.size() && s_[i_] == '.') fail("exponent must be an integer");
        long n = std::stol(s_.substr(start, i_ - start));
        if (paren && !accept(')')) fail("')' expected");
        if (neg) n = -n;
        if (base.is_zero() && n < 0) throw ParseError("negative power of zero", start);
        return pow(base, n);
    }

    Expr number() {
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::string digits = s_.substr(start, i_ - start);
        mpz_class den = 1;
        if (i_ < s_.size() && s_[i_] == '.') {
            ++i_;
            std::size_t fs = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string frac = s_.substr(fs, i_ - fs);
            if (digits.empty() && frac.empty()) fail("malformed number");
            digits += frac;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        }
        if (digits.empty()) fail("malformed number");
        mpq_class q(mpz_class(digits, 10), den);
        q.canonicalize();
        return Expr(q);
    }

    Expr primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            Expr e = expression();
            if (!accept(')')) fail("')' expected");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            std::string id = s_.substr(start, i_ - start);
            static const std::pair<const char*, Op> fns[] = {
                {"exp", Op::Exp}, {"log", Op::Log}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"sqrt", Op::Sqrt}};
            for (const auto& [name, op] : fns) {
                if (id == name) {
                    if (!accept('(')) fail("'(' expected after " + id);
                    Expr a = expression();
                    if (!accept(')')) fail("')' expected");
                    return apply_function(op, a);
                }
            }
            if (std::find(vars_.begin(), vars_.end(), id) == vars_.end())
                throw UnknownIdentifier(id, start);
            return Expr::variable(id);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }
};

}  // namespace

Expr parse_expr(const std::string& text, const VarList& vars) { return Parser(text, vars).parse(); }

}  // namespace kronweb
