#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fracobs/grid.hpp"
#include "fracobs/schemes.hpp"

namespace fracobs {

struct StationaryRef {
    std::vector<double> u_bar;
    // Largest |x_i| over the nodes of the final contact set, if any.
    std::optional<double> contact_extremum;
    double solver_tol = 0.0;
};

// Reference stationary state of the obstacle problem on spec's grid: runs the
// alpha = 1 positivity-set iteration until the stop test fires at ref_tol.
// The limit state is step-size independent; only the approach speed is not.
StationaryRef stationary_solve(const ProblemSpec& spec, double ref_tol);

// Projected Gauss-Seidel for the stationary complementarity system
// (A u)_i = 0 off contact, u >= psi. Independent of the time-stepping path;
// kept as a cross-check oracle. Sweeps toward a 1e-13 complementarity
// residual as long as the budget allows and throws if even the 1e-10
// contract floor is not reached within max_sweeps.
std::vector<double> psor_oracle(const TriDiag& stencil, const std::vector<double>& psi,
                                int max_sweeps);

// h * sum_i |u_i - u_bar_i|
double l1_error(const std::vector<double>& u, const std::vector<double>& u_bar,
                double h);

// Power-law relaxation tail t^(-alpha) / (C * Gamma(1-alpha)); alpha in (0,1).
double j_decay(double t, double alpha, double c_constant);

// Least-squares fit of C in err ~ t^(-alpha) / (C Gamma(1-alpha)), linear in
// 1/C. Throws when every error sits below 1e-14 (exponential regime, nothing
// to fit).
double fit_decay_constant(const std::vector<std::pair<double, double>>& samples,
                          double alpha);

// First time the contact set reaches its final shape: tau * min{ m >= 1 :
// contact_masks[k] == contact_masks.back() for all k in [m, last] }. Empty
// final contact set -> nullopt.
std::optional<double> fc_time(const SolveState& state, double tau);

// Max over the unmasked (off-contact) nodes of |(I + A/h^2) u1 - u0|, the
// residual of the memoryless limit step.
double alpha_zero_check(const std::vector<double>& u1, const std::vector<double>& u0,
                        const TriDiag& stencil, double h, const Mask& mask);

struct DecaySample {
    double t = 0.0;
    double l1 = 0.0;  // distance from the stationary state
    double j = 0.0;   // fitted power-law value at t
};

struct DecayCurve {
    double alpha = 0.0;
    double c_constant = 0.0;
    std::vector<DecaySample> samples;  // times strictly increasing
};

// count log-spaced points in [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, int count);

// (t_m, l1 distance to the reference) at the accepted steps nearest to the
// requested times; duplicate steps are dropped.
std::vector<std::pair<double, double>> sample_errors(const SolveState& state,
                                                     const StationaryRef& ref,
                                                     double tau, double h,
                                                     const std::vector<double>& times);

// Fits C over the samples and tabulates the law alongside them.
DecayCurve decay_curve(double alpha,
                       const std::vector<std::pair<double, double>>& err_samples);

}  // namespace fracobs
