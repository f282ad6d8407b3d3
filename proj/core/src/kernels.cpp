#include "fracobs/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fracobs {

double gamma_one_plus(double x) {
    if (!(x > -1.0 && x <= 1.0)) {
        throw std::invalid_argument("gamma_one_plus: argument must lie in (-1, 1]");
    }
    return std::tgamma(1.0 + x);
}

namespace {

void check_alpha(double alpha, const char* who) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument(std::string(who) + ": alpha must lie in [0, 1]");
    }
}

// pow_table[r] = r^(1-alpha) with the 0^0 := 0 convention baked into entry 0.
void extend_pow_table(std::vector<double>& table, double alpha, int up_to) {
    const double p = 1.0 - alpha;
    if (table.empty()) table.push_back(0.0);
    for (int r = static_cast<int>(table.size()); r <= up_to; ++r) {
        table.push_back(std::pow(static_cast<double>(r), p));
    }
}

L1Weights weights_from_table(const std::vector<double>& table, double alpha,
                             double g, int m) {
    L1Weights w;
    w.alpha = alpha;
    w.m = m;
    w.g = g;
    w.weights.resize(m);
    auto f = [&table](int r) { return table[r] - table[r - 1]; };
    w.weights[0] = f(m);
    for (int k = 1; k < m; ++k) {
        w.weights[k] = f(m - k) - f(m - k + 1);
    }
    return w;
}

}  // namespace

L1Weights l1_weights(double alpha, int m) {
    check_alpha(alpha, "l1_weights");
    if (m < 1) {
        throw std::invalid_argument("l1_weights: m must be >= 1");
    }
    std::vector<double> table;
    extend_pow_table(table, alpha, m);
    return weights_from_table(table, alpha, gamma_one_plus(1.0 - alpha), m);
}

CQWeights cq_weights(double alpha, int count) {
    check_alpha(alpha, "cq_weights");
    if (count < 0) {
        throw std::invalid_argument("cq_weights: count must be >= 0");
    }
    CQWeights cq;
    cq.alpha = alpha;
    cq.weights.resize(count + 1);
    cq.weights[0] = 1.0;
    for (int j = 1; j <= count; ++j) {
        cq.weights[j] = -((alpha - j + 1.0) / j) * cq.weights[j - 1];
    }
    return cq;
}

}  // namespace fracobs
