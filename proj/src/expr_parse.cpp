#include "derham/error.hpp"
#include "derham/expr.hpp"

#include <cctype>

namespace derham {

namespace {

/*
 * Recursive-descent parser:
 *
 *   sum     := product (('+' | '-') product)*
 *   product := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' integer)?
 *   primary := integer | identifier | identifier '(' sum ')' | '(' sum ')'
 */
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        Expr e = sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr sum() {
        Expr e = product();
        for (;;) {
            if (accept('+')) {
                e = e + product();
            } else if (accept('-')) {
                e = e - product();
            } else {
                return e;
            }
        }
    }

    Expr product() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Expr den = unary();
                if (den.is_constant(0)) throw ParseError("division by the constant 0", at);
                e = e / den;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) {
            skip_space();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("expected a non-negative integer exponent");
            }
            unsigned long n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                n = n * 10 + static_cast<unsigned long>(text_[pos_] - '0');
                if (n > 1000000) fail("exponent too large");
                ++pos_;
            }
            return pow(base, static_cast<unsigned>(n));
        }
        return base;
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not supported");
            return Expr(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string ident(text_.substr(start, pos_ - start));
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                if (ident != "sin" && ident != "cos" && ident != "exp") {
                    pos_ = start;
                    fail("unknown function '" + ident + "'");
                }
                ++pos_;
                Expr arg = sum();
                if (!accept(')')) fail("expected ')'");
                if (ident == "sin") return sin(arg);
                if (ident == "cos") return cos(arg);
                return exp(arg);
            }
            if (ident == "pi") return Expr::pi();
            if (ident == "sin" || ident == "cos" || ident == "exp") {
                fail("function '" + ident + "' requires an argument");
            }
            return Expr::variable(std::move(ident));
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace derham
