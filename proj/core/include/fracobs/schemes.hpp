#pragma once

#include <utility>
#include <vector>

#include "fracobs/grid.hpp"
#include "fracobs/kernels.hpp"
#include "fracobs/tridiag.hpp"

namespace fracobs {

std::vector<double> project_onto_obstacle(std::vector<double> u,
                                          const std::vector<double>& psi);

// Memory-weighted right-hand sides. s1_rhs forms sum_k C_{m,k} u^k from the
// stored history; s2_rhs forms u0 - sum_{j=1..m-1} c_j (u^{m-j} - u0).
std::vector<double> s1_rhs(const SolveState& state, const L1Weights& weights);
std::vector<double> s2_rhs(const SolveState& state, const CQWeights& cq,
                           const std::vector<double>& u0);

// Anti-rebound correction: wherever the previous iterate touches the obstacle
// the history average is replaced by the previous value, so the memory of the
// pre-contact past cannot pull the solution off the obstacle again.
std::vector<double> memory_truncate(std::vector<double> b, const Mask& prev_mask,
                                    const std::vector<double>& u_prev);

struct PicardTrace {
    int iterations = 0;  // number of linear solves
    Mask final_mask;     // positivity pattern at convergence
    bool converged = false;
};

// One time step. state.current_step must equal step_index - 1; the accepted
// iterate is appended to the state. cq carries the run-level weight table for
// S2 (steps without it rebuild the slice they need).
struct StepInput {
    const ProblemSpec& spec;
    SolveState& state;
    int step_index;                // m >= 1
    const CQWeights* cq = nullptr;  // S2, needs at least step_index entries
    bool truncate_memory = true;    // S1 / S2
    bool validate = false;          // per-step admissibility checks
};

std::vector<double> step_s1(const StepInput& in);
std::vector<double> step_s2(const StepInput& in);
std::pair<std::vector<double>, PicardTrace> step_s3(const StepInput& in);

// max(||u_m - u_prev||_inf, ||(u_m - psi) .* (A u_m)||_inf) < tol, where A is
// the bare stencil (no 1/h^2) and .* is the componentwise product.
bool stop_criterion(const std::vector<double>& u_m, const std::vector<double>& u_prev,
                    const std::vector<double>& psi, const TriDiag& stencil, double tol);

struct RunOptions {
    bool truncate_memory = true;
    bool validate = false;
};

// Time-steps spec.scheme from m = 1 until the stop test fires or the step
// budget time.m_steps runs out. fc_time is left unset; it is a post-run
// quantity (see analysis.hpp).
std::pair<SolveState, RunReport> run(const ProblemSpec& spec,
                                     const RunOptions& opts = {});

}  // namespace fracobs
