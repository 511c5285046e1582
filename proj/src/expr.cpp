#include "certify/expr.hpp"

#include "certify/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace certify {

struct Expr::Node {
    enum class Kind { Const, VarX, VarY, VarTheta, Add, Sub, Mul, Div, Pow, Neg, Func };
    Kind kind = Kind::Const;
    double value = 0.0;
    int func = 0; // index into the function table
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

struct FuncDef {
    const char* name;
    double (*fn)(double);
};

const FuncDef kFuncs[] = {
    {"sin", std::sin},   {"cos", std::cos}, {"tan", std::tan},
    {"exp", std::exp},   {"log", std::log}, {"sqrt", std::sqrt},
    {"abs", std::fabs},
};

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->value = v;
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError("expression error at position " + std::to_string(pos_) + " in \"" +
                        text_ + "\": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_sum() {
        NodePtr e = parse_product();
        for (;;) {
            if (consume('+'))
                e = make(Kind::Add, e, parse_product());
            else if (consume('-'))
                e = make(Kind::Sub, e, parse_product());
            else
                return e;
        }
    }

    NodePtr parse_product() {
        NodePtr e = parse_unary();
        for (;;) {
            if (consume('*'))
                e = make(Kind::Mul, e, parse_unary());
            else if (consume('/'))
                e = make(Kind::Div, e, parse_unary());
            else
                return e;
        }
    }

    NodePtr parse_unary() {
        if (consume('-'))
            return make(Kind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^')) {
            // right associative; exponent may itself be a unary minus
            NodePtr exp = parse_unary_power();
            return make(Kind::Pow, base, exp);
        }
        return base;
    }

    NodePtr parse_unary_power() {
        if (consume('-'))
            return make(Kind::Neg, parse_unary_power());
        return parse_power();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("expected operand");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!consume(')'))
                fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            double v = std::strtod(text_.c_str() + pos_, &end);
            if (end == text_.c_str() + pos_)
                fail("bad number");
            pos_ = static_cast<size_t>(end - text_.c_str());
            return make_const(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "x")
                return make(Kind::VarX);
            if (name == "y")
                return make(Kind::VarY);
            if (name == "theta")
                return make(Kind::VarTheta);
            if (name == "pi")
                return make_const(3.14159265358979323846);
            if (name == "e")
                return make_const(2.71828182845904523536);
            for (int i = 0; i < static_cast<int>(std::size(kFuncs)); ++i) {
                if (name == kFuncs[i].name) {
                    if (!consume('('))
                        fail("expected '(' after " + name);
                    NodePtr arg = parse_sum();
                    if (!consume(')'))
                        fail("missing ')' after argument of " + name);
                    auto n = std::make_shared<Expr::Node>();
                    n->kind = Kind::Func;
                    n->func = i;
                    n->lhs = arg;
                    return n;
                }
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval_node(const Expr::Node& n, const ExprEnv& env) {
    switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::VarX: return env.x;
    case Kind::VarY: return env.y;
    case Kind::VarTheta: return env.theta;
    case Kind::Add: return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
    case Kind::Sub: return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
    case Kind::Mul: return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
    case Kind::Div: return eval_node(*n.lhs, env) / eval_node(*n.rhs, env);
    case Kind::Pow: return std::pow(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
    case Kind::Neg: return -eval_node(*n.lhs, env);
    case Kind::Func: return kFuncs[n.func].fn(eval_node(*n.lhs, env));
    }
    return 0.0;
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.root_ = Parser(text).run();
    e.text_ = text;
    return e;
}

double Expr::eval(const ExprEnv& env) const {
    if (!root_)
        throw ExprError("evaluating empty expression");
    return eval_node(*root_, env);
}

} // namespace certify
