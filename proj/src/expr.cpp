#include "focalis/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace focalis {

namespace {

enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Atan };

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Atan: return "atan";
    }
    return "?";
}

bool fn_from_name(const std::string& s, Fn& out) {
    if (s == "sin") out = Fn::Sin;
    else if (s == "cos") out = Fn::Cos;
    else if (s == "tan") out = Fn::Tan;
    else if (s == "exp") out = Fn::Exp;
    else if (s == "log") out = Fn::Log;
    else if (s == "sqrt") out = Fn::Sqrt;
    else if (s == "atan") out = Fn::Atan;
    else return false;
    return true;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

struct Expr::Node {
    enum class Kind { Number, Param, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double number = 0.0;
    Fn fn = Fn::Sin;
    std::shared_ptr<const Node> a, b;
};

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    Expr e;
    e.node_ = n;
    return e;
}

Expr Expr::parameter() {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Param;
    Expr e;
    e.node_ = n;
    return e;
}

Expr Expr::negate(Expr e) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Neg;
    n->a = e.node_;
    Expr r;
    r.node_ = n;
    return r;
}

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    switch (op) {
        case '+': n->kind = Node::Kind::Add; break;
        case '-': n->kind = Node::Kind::Sub; break;
        case '*': n->kind = Node::Kind::Mul; break;
        case '/': n->kind = Node::Kind::Div; break;
        case '^': n->kind = Node::Kind::Pow; break;
        default: throw DomainError(std::string("unknown operator ") + op);
    }
    n->a = lhs.node_;
    n->b = rhs.node_;
    Expr r;
    r.node_ = n;
    return r;
}

Expr Expr::call(const std::string& fname, Expr arg) {
    Fn f;
    if (!fn_from_name(fname, f)) throw DomainError("unknown function " + fname);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->fn = f;
    n->a = arg.node_;
    Expr r;
    r.node_ = n;
    return r;
}

namespace {

bool node_depends(const Expr::Node* n);

Jet eval_node(const Expr::Node* n, const Jet& t) {
    using K = Expr::Node::Kind;
    switch (n->kind) {
        case K::Number: return Jet::constant(n->number, t.order());
        case K::Param: return t;
        case K::Neg: return -eval_node(n->a.get(), t);
        case K::Add: return eval_node(n->a.get(), t) + eval_node(n->b.get(), t);
        case K::Sub: return eval_node(n->a.get(), t) - eval_node(n->b.get(), t);
        case K::Mul: return eval_node(n->a.get(), t) * eval_node(n->b.get(), t);
        case K::Div: return eval_node(n->a.get(), t) / eval_node(n->b.get(), t);
        case K::Pow: {
            const Jet base = eval_node(n->a.get(), t);
            if (!node_depends(n->b.get())) {
                const double p = eval_node(n->b.get(), Jet::constant(0.0, 0)).value();
                return pow(base, p);
            }
            // variable exponent: a^b = exp(b log a)
            return exp(eval_node(n->b.get(), t) * log(base));
        }
        case K::Call: {
            const Jet a = eval_node(n->a.get(), t);
            switch (n->fn) {
                case Fn::Sin: return sin(a);
                case Fn::Cos: return cos(a);
                case Fn::Tan: return tan(a);
                case Fn::Exp: return exp(a);
                case Fn::Log: return log(a);
                case Fn::Sqrt: return sqrt(a);
                case Fn::Atan: return atan(a);
            }
        }
    }
    throw DomainError("malformed expression node");
}

bool node_depends(const Expr::Node* n) {
    using K = Expr::Node::Kind;
    switch (n->kind) {
        case K::Number: return false;
        case K::Param: return true;
        case K::Neg:
        case K::Call: return node_depends(n->a.get());
        default: return node_depends(n->a.get()) || node_depends(n->b.get());
    }
}

// Precedence levels for printing: additive 1, multiplicative 2, unary 3, power 4.
int node_prec(const Expr::Node* n) {
    using K = Expr::Node::Kind;
    switch (n->kind) {
        case K::Add:
        case K::Sub: return 1;
        case K::Mul:
        case K::Div: return 2;
        case K::Neg: return 3;
        case K::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Expr::Node* n, std::string& out, int parent_prec) {
    using K = Expr::Node::Kind;
    const int prec = node_prec(n);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n->kind) {
        case K::Number: {
            const double v = n->number;
            if (v < 0.0) {
                out += '(';
                out += format_number(v);
                out += ')';
            } else {
                out += format_number(v);
            }
            break;
        }
        case K::Param: out += 't'; break;
        case K::Neg:
            out += '-';
            print_node(n->a.get(), out, 4);
            break;
        case K::Add:
        case K::Sub:
            print_node(n->a.get(), out, 1);
            out += (n->kind == K::Add) ? " + " : " - ";
            print_node(n->b.get(), out, 2);
            break;
        case K::Mul:
        case K::Div:
            print_node(n->a.get(), out, 2);
            out += (n->kind == K::Mul) ? "*" : "/";
            print_node(n->b.get(), out, 3);
            break;
        case K::Pow:
            print_node(n->a.get(), out, 5);
            out += '^';
            print_node(n->b.get(), out, 4);
            break;
        case K::Call:
            out += fn_name(n->fn);
            out += '(';
            print_node(n->a.get(), out, 0);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

}  // namespace

Jet Expr::eval(const Jet& t) const {
    if (!node_) throw DomainError("empty expression");
    return eval_node(node_.get(), t);
}

double Expr::eval(double t) const { return eval(Jet::constant(t, 0)).value(); }

bool Expr::depends_on_parameter() const { return node_ && node_depends(node_.get()); }

std::string Expr::print() const {
    if (!node_) return "";
    std::string out;
    print_node(node_.get(), out, 0);
    return out;
}

namespace detail {

Lexer::Lexer(const std::string& src) : src_(src) { advance(); }

Token Lexer::next() {
    Token t = tok_;
    advance();
    return t;
}

void Lexer::fail(const std::string& expected) const {
    std::string got;
    switch (tok_.kind) {
        case Token::Kind::Number: got = "number"; break;
        case Token::Kind::Ident: got = "'" + tok_.text + "'"; break;
        case Token::Kind::String: got = "string"; break;
        case Token::Kind::Symbol: got = "'" + tok_.text + "'"; break;
        case Token::Kind::End: got = "end of input"; break;
    }
    throw ParseError(tok_.line, tok_.col, "expected " + expected + ", got " + got);
}

void Lexer::advance() {
    while (pos_ < src_.size()) {
        const char c = src_[pos_];
        if (c == '\n') {
            ++line_;
            col_ = 1;
            ++pos_;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++col_;
            ++pos_;
        } else if (c == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        } else {
            break;
        }
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
        tok_.kind = Token::Kind::End;
        return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        const char* start = src_.c_str() + pos_;
        char* end = nullptr;
        tok_.number = std::strtod(start, &end);
        const size_t len = static_cast<size_t>(end - start);
        tok_.kind = Token::Kind::Number;
        tok_.text = src_.substr(pos_, len);
        pos_ += len;
        col_ += static_cast<int>(len);
        return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t p = pos_;
        while (p < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
            ++p;
        tok_.kind = Token::Kind::Ident;
        tok_.text = src_.substr(pos_, p - pos_);
        col_ += static_cast<int>(p - pos_);
        pos_ = p;
        return;
    }
    if (c == '"') {
        size_t p = pos_ + 1;
        while (p < src_.size() && src_[p] != '"' && src_[p] != '\n') ++p;
        if (p >= src_.size() || src_[p] != '"')
            throw ParseError(line_, col_, "unterminated string literal");
        tok_.kind = Token::Kind::String;
        tok_.text = src_.substr(pos_ + 1, p - pos_ - 1);
        col_ += static_cast<int>(p + 1 - pos_);
        pos_ = p + 1;
        return;
    }
    tok_.kind = Token::Kind::Symbol;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
}

namespace {

bool is_symbol(const Token& t, char c) {
    return t.kind == Token::Kind::Symbol && t.text.size() == 1 && t.text[0] == c;
}

Expr parse_additive(Lexer& lx);

Expr parse_atom(Lexer& lx) {
    const Token t = lx.peek();
    if (t.kind == Token::Kind::Number) {
        lx.next();
        return Expr::number(t.number);
    }
    if (t.kind == Token::Kind::Ident) {
        if (t.text == "t") {
            lx.next();
            return Expr::parameter();
        }
        if (t.text == "pi") {
            lx.next();
            return Expr::number(3.14159265358979323846);
        }
        if (t.text == "e") {
            lx.next();
            return Expr::number(2.71828182845904523536);
        }
        Fn f;
        if (fn_from_name(t.text, f)) {
            lx.next();
            if (!is_symbol(lx.peek(), '(')) lx.fail("'(' after function name");
            lx.next();
            Expr arg = parse_additive(lx);
            if (!is_symbol(lx.peek(), ')')) lx.fail("')'");
            lx.next();
            return Expr::call(t.text, arg);
        }
        lx.fail("a number, 't', 'pi', 'e', a function, or '('");
    }
    if (is_symbol(t, '(')) {
        lx.next();
        Expr e = parse_additive(lx);
        if (!is_symbol(lx.peek(), ')')) lx.fail("')'");
        lx.next();
        return e;
    }
    lx.fail("a number, 't', 'pi', 'e', a function, or '('");
}

Expr parse_unary(Lexer& lx);

// '^' binds tighter than unary minus and is right associative, so -x^2 is
// -(x^2) and x^-2 parses.
Expr parse_power(Lexer& lx) {
    Expr base = parse_atom(lx);
    if (is_symbol(lx.peek(), '^')) {
        lx.next();
        return Expr::binary('^', base, parse_unary(lx));
    }
    return base;
}

Expr parse_unary(Lexer& lx) {
    if (is_symbol(lx.peek(), '-')) {
        lx.next();
        return Expr::negate(parse_unary(lx));
    }
    if (is_symbol(lx.peek(), '+')) {
        lx.next();
        return parse_unary(lx);
    }
    return parse_power(lx);
}

Expr parse_multiplicative(Lexer& lx) {
    Expr e = parse_unary(lx);
    while (true) {
        if (is_symbol(lx.peek(), '*')) {
            lx.next();
            e = Expr::binary('*', e, parse_unary(lx));
        } else if (is_symbol(lx.peek(), '/')) {
            lx.next();
            e = Expr::binary('/', e, parse_unary(lx));
        } else {
            return e;
        }
    }
}

Expr parse_additive(Lexer& lx) {
    Expr e = parse_multiplicative(lx);
    while (true) {
        if (is_symbol(lx.peek(), '+')) {
            lx.next();
            e = Expr::binary('+', e, parse_multiplicative(lx));
        } else if (is_symbol(lx.peek(), '-')) {
            lx.next();
            e = Expr::binary('-', e, parse_multiplicative(lx));
        } else {
            return e;
        }
    }
}

}  // namespace

Expr parse_expression(Lexer& lx) { return parse_additive(lx); }

}  // namespace detail

Expr parse_expression(const std::string& source) {
    detail::Lexer lx(source);
    Expr e = detail::parse_expression(lx);
    if (lx.peek().kind != detail::Token::Kind::End) lx.fail("end of expression");
    return e;
}

}  // namespace focalis
