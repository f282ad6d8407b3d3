#include "fracobs/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fracobs {

class ExprParser {
public:
    explicit ExprParser(const std::string& text, Expr& out)
        : text_(text), out_(out) {}

    void run() {
        out_.root_ = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected character");
        }
        if (out_.nodes_.empty()) {
            fail("empty expression");
        }
    }

private:
    // expr  := term  { (+|-) term }
    // term  := unary { (*|/) unary }
    // unary := (+|-) unary | power
    // power := primary [ ^ unary ]
    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            if (consume('+')) {
                lhs = add_node(Expr::Op::Add, lhs, parse_term());
            } else if (consume('-')) {
                lhs = add_node(Expr::Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (consume('*')) {
                lhs = add_node(Expr::Op::Mul, lhs, parse_unary());
            } else if (consume('/')) {
                lhs = add_node(Expr::Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    int parse_unary() {
        skip_ws();
        if (consume('+')) return parse_unary();
        if (consume('-')) return add_node(Expr::Op::Neg, parse_unary(), -1);
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        skip_ws();
        if (consume('^')) {
            return add_node(Expr::Op::Pow, base, parse_unary());
        }
        return base;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a value");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_expr();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            return add_leaf(Expr::Op::Var, 0.0);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{}) fail("malformed number");
            pos_ += static_cast<std::size_t>(ptr - begin);
            return add_leaf(Expr::Op::Num, value);
        }
        fail("expected a number, x, or '('");
        return -1;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add_leaf(Expr::Op op, double value) {
        out_.nodes_.push_back({op, value, -1, -1});
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int add_node(Expr::Op op, int lhs, int rhs) {
        out_.nodes_.push_back({op, 0.0, lhs, rhs});
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("Expr::parse: " + why + " at offset " +
                                    std::to_string(pos_) + " in '" + text_ + "'");
    }

    const std::string& text_;
    Expr& out_;
    std::size_t pos_ = 0;
};

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.text_ = text;
    ExprParser(text, e).run();
    return e;
}

double Expr::eval(double x) const {
    return eval_node(root_, x);
}

double Expr::eval_node(int idx, double x) const {
    const Node& n = nodes_[idx];
    switch (n.op) {
        case Op::Num: return n.value;
        case Op::Var: return x;
        case Op::Add: return eval_node(n.lhs, x) + eval_node(n.rhs, x);
        case Op::Sub: return eval_node(n.lhs, x) - eval_node(n.rhs, x);
        case Op::Mul: return eval_node(n.lhs, x) * eval_node(n.rhs, x);
        case Op::Div: return eval_node(n.lhs, x) / eval_node(n.rhs, x);
        case Op::Pow: return std::pow(eval_node(n.lhs, x), eval_node(n.rhs, x));
        case Op::Neg: return -eval_node(n.lhs, x);
    }
    return 0.0;
}

}  // namespace fracobs
