#include "rte/io/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rte::io {

struct Expression::Node {
    enum class Op { Number, Var, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos } op;
    double value = 0.0;
    double Variables::*var = nullptr;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = {}, NodePtr b = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression \"" + s_ + "\": " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Op::Add, n, term());
            else if (accept('-')) n = make(Op::Sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Op::Mul, n, unary());
            else if (accept('/')) n = make(Op::Div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return primary();
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos_ += used;
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Number;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "exp" || name == "sin" || name == "cos") {
                if (!accept('(')) fail("expected '(' after " + name);
                NodePtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                return make(name == "exp" ? Op::Exp : name == "sin" ? Op::Sin : Op::Cos, arg);
            }
            auto n = std::make_shared<Expression::Node>();
            if (name == "pi") {
                n->op = Op::Number;
                n->value = std::numbers::pi;
                return n;
            }
            n->op = Op::Var;
            if (name == "x1") n->var = &Variables::x1;
            else if (name == "x2") n->var = &Variables::x2;
            else if (name == "x3") n->var = &Variables::x3;
            else if (name == "t") n->var = &Variables::t;
            else if (name == "theta") n->var = &Variables::theta;
            else if (name == "phi") n->var = &Variables::phi;
            else fail("unknown name '" + name + "'");
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const Variables& v) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return v.*(n.var);
        case Op::Add: return eval(*n.lhs, v) + eval(*n.rhs, v);
        case Op::Sub: return eval(*n.lhs, v) - eval(*n.rhs, v);
        case Op::Mul: return eval(*n.lhs, v) * eval(*n.rhs, v);
        case Op::Div: return eval(*n.lhs, v) / eval(*n.rhs, v);
        case Op::Neg: return -eval(*n.lhs, v);
        case Op::Exp: return std::exp(eval(*n.lhs, v));
        case Op::Sin: return std::sin(eval(*n.lhs, v));
        case Op::Cos: return std::cos(eval(*n.lhs, v));
    }
    return 0.0;
}

bool mentions(const Expression::Node& n, double Variables::*var) {
    if (n.op == Op::Var) return n.var == var;
    return (n.lhs && mentions(*n.lhs, var)) || (n.rhs && mentions(*n.rhs, var));
}

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

double Expression::operator()(const Variables& v) const { return eval(*root_, v); }

bool Expression::uses(const std::string& name) const {
    double Variables::*var = nullptr;
    if (name == "x1") var = &Variables::x1;
    else if (name == "x2") var = &Variables::x2;
    else if (name == "x3") var = &Variables::x3;
    else if (name == "t") var = &Variables::t;
    else if (name == "theta") var = &Variables::theta;
    else if (name == "phi") var = &Variables::phi;
    else return false;
    return mentions(*root_, var);
}

}  // namespace rte::io
