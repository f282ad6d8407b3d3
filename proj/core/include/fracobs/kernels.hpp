#pragma once

#include <vector>

namespace fracobs {

// Gamma(1 + x) for x in (-1, 1].
double gamma_one_plus(double x);

// Weights of the piecewise-linear quadrature for the order-alpha Caputo
// derivative at step m. With f(r) = r^(1-alpha) - (r-1)^(1-alpha),
//
//   C_{m,0} = f(m),   C_{m,k} = f(m-k) - f(m-k+1)  for k = 1..m-1,
//
// the discrete derivative reads (u^m - sum_k C_{m,k} u^k) / (g tau^alpha)
// with g = Gamma(2-alpha). The sum telescopes to f(1) = 1, so the weights
// form a convex combination of the history. 0^0 counts as 0 here, which
// keeps f(1) = 1 at alpha = 1 and collapses the weights to (0,..,0,1).
struct L1Weights {
    double alpha = 0.0;
    int m = 0;
    std::vector<double> weights;  // C_{m,0} .. C_{m,m-1}
    double g = 1.0;               // Gamma(2-alpha)
};

// The step-m weights are not a prefix of the step-(m+1) weights, so they are
// regenerated per step: O(m) each, O(M^2) over a run, which is the scheme's
// intrinsic cost anyway.
L1Weights l1_weights(double alpha, int m);

// Convolution quadrature weights c_j = (-1)^j binom(alpha, j), generated by
// c_0 = 1, c_j = -((alpha - j + 1) / j) c_{j-1}. c_0 = 1 > 0 and c_j <= 0 for
// j >= 1; partial sums over j >= 1 stay in (-1, 0].
struct CQWeights {
    double alpha = 0.0;
    std::vector<double> weights;  // c_0 .. c_count
};

CQWeights cq_weights(double alpha, int count);

}  // namespace fracobs
