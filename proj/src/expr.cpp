#include "atlas/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

#include "atlas/errors.hpp"

namespace atlas {

struct Expr::Node {
    enum class Kind { Const, VarX, VarY, Param, Unary, Binary };
    Kind kind;
    double value = 0.0;                  // Const
    std::string name;                    // Param
    char op = 0;                         // Binary: + - * / ^
    double (*fn)(double) = nullptr;      // Unary
    std::unique_ptr<Node> lhs, rhs;

    double eval(double x, double y, const std::map<std::string, double>& params) const {
        switch (kind) {
            case Kind::Const: return value;
            case Kind::VarX: return x;
            case Kind::VarY: return y;
            case Kind::Param: {
                auto it = params.find(name);
                if (it == params.end())
                    throw ParseError("unknown parameter '" + name + "' at eval time");
                return it->second;
            }
            case Kind::Unary: return fn(lhs->eval(x, y, params));
            case Kind::Binary: {
                double a = lhs->eval(x, y, params);
                double b = rhs->eval(x, y, params);
                switch (op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/': return a / b;
                    case '^': return std::pow(a, b);
                }
            }
        }
        return 0.0;
    }
};

namespace {

using Node = Expr::Node;
using NodePtr = std::unique_ptr<Node>;

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& src) : s(src) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError("expected '" + std::string(1, c) + "' at position " +
                             std::to_string(pos) + " in '" + s + "'");
    }

    NodePtr make(Node::Kind k) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        return n;
    }

    NodePtr binary(char op, NodePtr l, NodePtr r) {
        auto n = make(Node::Kind::Binary);
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    // expr := term (('+'|'-') term)*
    NodePtr expr() {
        auto n = term();
        for (;;) {
            if (accept('+')) n = binary('+', std::move(n), term());
            else if (accept('-')) n = binary('-', std::move(n), term());
            else return n;
        }
    }
    // term := factor (('*'|'/') factor)*
    NodePtr term() {
        auto n = factor();
        for (;;) {
            if (accept('*')) n = binary('*', std::move(n), factor());
            else if (accept('/')) n = binary('/', std::move(n), factor());
            else return n;
        }
    }
    // factor := ('-')* power
    NodePtr factor() {
        if (accept('-')) {
            auto n = make(Node::Kind::Binary);
            auto zero = make(Node::Kind::Const);
            zero->value = 0.0;
            return binary('-', std::move(zero), factor());
        }
        return power();
    }
    // power := atom ('^' factor)?   (right associative)
    NodePtr power() {
        auto n = atom();
        if (accept('^')) return binary('^', std::move(n), factor());
        return n;
    }

    NodePtr atom() {
        skip_ws();
        if (pos >= s.size())
            throw ParseError("unexpected end of expression '" + s + "'");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = std::stod(s.substr(pos), &used);
            pos += used;
            auto n = make(Node::Kind::Const);
            n->value = v;
            return n;
        }
        if (accept('(')) {
            auto n = expr();
            expect(')');
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string id = s.substr(start, pos - start);
            if (id == "x") return make(Node::Kind::VarX);
            if (id == "y") return make(Node::Kind::VarY);
            if (id == "pi") {
                auto n = make(Node::Kind::Const);
                n->value = M_PI;
                return n;
            }
            static const std::map<std::string, double (*)(double)> fns = {
                {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
                {"asin", std::asin}, {"acos", std::acos}, {"atan", std::atan},
                {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
                {"abs", std::fabs},  {"sinh", std::sinh}, {"cosh", std::cosh},
                {"tanh", std::tanh}};
            auto it = fns.find(id);
            if (it != fns.end()) {
                expect('(');
                auto arg = expr();
                expect(')');
                auto n = make(Node::Kind::Unary);
                n->fn = it->second;
                n->lhs = std::move(arg);
                return n;
            }
            auto n = make(Node::Kind::Param);
            n->name = id;
            return n;
        }
        throw ParseError("unexpected character '" + std::string(1, c) +
                         "' at position " + std::to_string(pos) + " in '" + s + "'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& source) {
    Parser p(source);
    auto root = p.expr();
    p.skip_ws();
    if (p.pos != source.size())
        throw ParseError("trailing input at position " + std::to_string(p.pos) +
                         " in '" + source + "'");
    return Expr(source, std::move(root));
}

double Expr::eval(double x, double y, const std::map<std::string, double>& params) const {
    return root_->eval(x, y, params);
}

Expr::Expr(std::string src, std::unique_ptr<Node> root)
    : source_(std::move(src)), root_(std::move(root)) {}
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::~Expr() = default;

}  // namespace atlas
