#include "stochlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace stochlab {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double r) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Num : Node {
    double v;
    explicit Num(double x) : v(x) {}
    double eval(double) const override { return v; }
};
struct Var : Node {
    double eval(double r) const override { return r; }
};
struct Bin : Node {
    char op;
    NodePtr l, r;
    Bin(char o, NodePtr a, NodePtr b) : op(o), l(std::move(a)), r(std::move(b)) {}
    double eval(double x) const override {
        double a = l->eval(x), b = r->eval(x);
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return a / b;
            default: return std::pow(a, b);
        }
    }
};
struct Call : Node {
    int fn;  // 0 exp, 1 log, 2 sqrt, 3 sinh, 4 cosh, 5 neg
    NodePtr arg;
    Call(int f, NodePtr a) : fn(f), arg(std::move(a)) {}
    double eval(double x) const override {
        double a = arg->eval(x);
        switch (fn) {
            case 0: return std::exp(a);
            case 1: return std::log(a);
            case 2: return std::sqrt(a);
            case 3: return std::sinh(a);
            case 4: return std::cosh(a);
            default: return -a;
        }
    }
};

class Parser {
public:
    explicit Parser(const std::string& s) : src_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression parse error at position " + std::to_string(pos_) +
                          ": " + msg + " in \"" + src_ + "\"");
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+')) e = std::make_shared<Bin>('+', e, term());
            else if (eat('-')) e = std::make_shared<Bin>('-', e, term());
            else return e;
        }
    }
    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (eat('*')) e = std::make_shared<Bin>('*', e, unary());
            else if (eat('/')) e = std::make_shared<Bin>('/', e, unary());
            else return e;
        }
    }
    NodePtr unary() {
        if (eat('-')) return std::make_shared<Call>(5, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return std::make_shared<Bin>('^', base, unary());  // right-assoc
        return base;
    }
    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return ident();
        fail("unexpected character");
    }
    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                src_[pos_] == 'e' || src_[pos_] == 'E' ||
                ((src_[pos_] == '+' || src_[pos_] == '-') && pos_ > start &&
                 (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
            ++pos_;
        try {
            return std::make_shared<Num>(std::stod(src_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            fail("bad number literal");
        }
    }
    NodePtr ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (name == "r") return std::make_shared<Var>();
        int fn = -1;
        if (name == "exp") fn = 0;
        else if (name == "log") fn = 1;
        else if (name == "sqrt") fn = 2;
        else if (name == "sinh") fn = 3;
        else if (name == "cosh") fn = 4;
        if (fn < 0) fail("unknown identifier '" + name + "'");
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr a = expr();
        if (!eat(')')) fail("missing ')'");
        return std::make_shared<Call>(fn, a);
    }
};

}  // namespace

RealFn parse_expr(const std::string& text) {
    NodePtr root = Parser(text).parse();
    return [root](double r) { return root->eval(r); };
}

double eval_expr(const std::string& text, double r) { return parse_expr(text)(r); }

}  // namespace stochlab
