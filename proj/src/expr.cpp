#include "gridsing/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "gridsing/error.hpp"

namespace gridsing {

struct Expr::Node {
    enum class Kind { Number, Rho, Dim, Neg, Add, Sub, Mul, Div, Pow, Ln, Exp, Sqrt };
    Kind kind;
    double value = 0.0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double v = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->value = v;
    n->args = std::move(args);
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ParseError, "expression '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (eat('+')) lhs = make(Kind::Add, {lhs, term()});
            else if (eat('-')) lhs = make(Kind::Sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (eat('*')) lhs = make(Kind::Mul, {lhs, unary()});
            else if (eat('/')) lhs = make(Kind::Div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Kind::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Kind::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
                (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+')) {
                pos_ += 2;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            std::string lit(s_.substr(start, pos_ - start));
            try {
                return make(Kind::Number, {}, std::stod(lit));
            } catch (const std::exception&) {
                fail("bad number '" + lit + "'");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            if (id == "rho") return make(Kind::Rho);
            if (id == "n") return make(Kind::Dim);
            if (id == "e") return make(Kind::Number, {}, std::numbers::e);
            if (id == "pi") return make(Kind::Number, {}, std::numbers::pi);
            Kind k;
            if (id == "ln") k = Kind::Ln;
            else if (id == "exp") k = Kind::Exp;
            else if (id == "sqrt") k = Kind::Sqrt;
            else fail("unknown identifier '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            NodePtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            return make(k, {arg});
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& node, double rho, double n) {
    auto a = [&](std::size_t i) { return eval_node(*node.args[i], rho, n); };
    switch (node.kind) {
        case Kind::Number: return node.value;
        case Kind::Rho: return rho;
        case Kind::Dim: return n;
        case Kind::Neg: return -a(0);
        case Kind::Add: return a(0) + a(1);
        case Kind::Sub: return a(0) - a(1);
        case Kind::Mul: return a(0) * a(1);
        case Kind::Div: return a(0) / a(1);
        case Kind::Pow: return std::pow(a(0), a(1));
        case Kind::Ln: return std::log(a(0));
        case Kind::Exp: return std::exp(a(0));
        case Kind::Sqrt: return std::sqrt(a(0));
    }
    return std::nan("");
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Expr e;
    e.root_ = Parser(text).parse();
    e.source_ = std::string(text);
    return e;
}

double Expr::eval(double rho, double n) const { return eval_node(*root_, rho, n); }

}  // namespace gridsing
