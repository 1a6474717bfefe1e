#pragma once

#include <memory>
#include <string>

#include "focalis/jet.hpp"

namespace focalis {

// One-parameter real expression: literals, `t`, named constants pi and e,
// + - * / ^ (right associative, binds tighter than unary minus), and the
// functions sin cos tan exp log sqrt atan.
class Expr {
public:
    Expr() = default;

    Jet eval(const Jet& t) const;
    double eval(double t) const;
    bool depends_on_parameter() const;
    std::string print() const;
    bool empty() const { return node_ == nullptr; }

    static Expr number(double v);
    static Expr parameter();
    static Expr negate(Expr e);
    static Expr binary(char op, Expr lhs, Expr rhs);  // one of + - * / ^
    static Expr call(const std::string& fn, Expr arg);

    struct Node;  // defined in expr.cpp

private:
    std::shared_ptr<const Node> node_;
};

// Parses a complete expression; the whole string must be consumed.
Expr parse_expression(const std::string& source);

namespace detail {

struct Token {
    enum class Kind { Number, Ident, String, Symbol, End } kind = Kind::End;
    double number = 0.0;
    std::string text;  // identifier, string body, or single-character symbol
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src);
    const Token& peek() const { return tok_; }
    Token next();  // returns current token and advances
    [[noreturn]] void fail(const std::string& expected) const;

private:
    void advance();
    std::string src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// Parses one expression from the token stream, stopping at the first token
// that cannot extend it (the curve-file parser reads its ';' afterwards).
Expr parse_expression(Lexer& lx);

}  // namespace detail

}  // namespace focalis
