#pragma once

#include <string>
#include <vector>

namespace fracobs {

// Arithmetic expression in one variable x: numbers, x, + - * / ^, parentheses,
// unary sign. '^' binds tighter than unary minus on its left and is
// right-associative, so -x^2 is -(x^2) and 2^-1 is 0.5.
class Expr {
public:
    static Expr parse(const std::string& text);

    double eval(double x) const;
    const std::string& text() const { return text_; }

private:
    enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg };
    struct Node {
        Op op = Op::Num;
        double value = 0.0;
        int lhs = -1;
        int rhs = -1;
    };

    double eval_node(int idx, double x) const;

    std::string text_;
    std::vector<Node> nodes_;
    int root_ = -1;

    friend class ExprParser;
};

}  // namespace fracobs
