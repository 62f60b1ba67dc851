#ifndef INTWIST_EXPR_HPP
#define INTWIST_EXPR_HPP

#include <cctype>
#include <string>

#include "ratfunc.hpp"

namespace intwist {

// Recursive-descent parser for rational expressions over a registry.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' exponent)?
//   base   := integer | name | '(' expr ')'
//   exponent := integer | '-' integer | '(' expr ')'   (must be an integer)
//
// Whitespace is insignificant. Names must be declared in the registry.
class ExprParser {
public:
    ExprParser(RegistryPtr reg, std::string text, int line = 1)
        : reg_(std::move(reg)), text_(std::move(text)), line_(line) {}

    RatFunc parse() {
        RatFunc r = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    RatFunc parse_expr() {
        RatFunc r = parse_term();
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                r += parse_term();
            } else if (peek() == '-') {
                ++pos_;
                r -= parse_term();
            } else {
                return r;
            }
        }
    }

    RatFunc parse_term() {
        RatFunc r = parse_factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                r *= parse_factor();
            } else if (peek() == '/') {
                ++pos_;
                RatFunc d = parse_factor();
                if (d.is_zero()) fail("division by zero");
                r /= d;
            } else {
                return r;
            }
        }
    }

    RatFunc parse_factor() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -parse_factor();
        }
        RatFunc base = parse_base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            return base.pow(parse_int_exponent());
        }
        return base;
    }

    RatFunc parse_base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            RatFunc r = parse_expr();
            expect(')');
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return RatFunc::constant(reg_, Rat(parse_integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return RatFunc::variable(reg_, parse_name());
        fail(c ? std::string("unexpected character '") + c + "'"
               : std::string("unexpected end of expression"));
    }

    int parse_int_exponent() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
            skip_ws();
        }
        if (peek() == '(') {
            ++pos_;
            RatFunc r = parse_expr();
            expect(')');
            if (!r.is_constant() || !rat_is_integer(r.constant_value()))
                fail("exponent must be an integer");
            long e = r.constant_value().get_num().get_si();
            return neg ? -static_cast<int>(e) : static_cast<int>(e);
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected integer exponent");
        long e = std::stol(parse_integer());
        return neg ? -static_cast<int>(e) : static_cast<int>(e);
    }

    std::string parse_integer() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string n = text_.substr(start, pos_ - start);
        if (reg_->find(n) < 0)
            throw ParseError("undeclared name '" + n + "'", line_,
                             static_cast<int>(start) + 1);
        return n;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
    }

    RegistryPtr reg_;
    std::string text_;
    std::size_t pos_ = 0;
    int line_;
};

inline RatFunc parse_ratfunc(const RegistryPtr& reg, const std::string& text,
                             int line = 1) {
    return ExprParser(reg, text, line).parse();
}

inline MultiPoly parse_poly(const RegistryPtr& reg, const std::string& text,
                            int line = 1) {
    RatFunc r = parse_ratfunc(reg, text, line);
    if (!r.is_polynomial())
        throw ParseError("expected a polynomial expression", line, 1);
    return r.num();
}

}  // namespace intwist

#endif
