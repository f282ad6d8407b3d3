#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fracobs {

// Uniform mesh on (a,b). Only the interior nodes x_i = a + i*h, i = 1..N-1,
// are stored; the boundary values are pinned to zero by the schemes.
struct Grid1D {
    double a = 0.0;
    double b = 0.0;
    int n_intervals = 0;
    double h = 0.0;
    std::vector<double> nodes;

    int n_nodes() const { return n_intervals - 1; }
};

Grid1D make_grid(double a, double b, int n_intervals);

struct TimeGrid {
    double tau = 0.0;
    std::int64_t m_steps = 0;
    double horizon = 0.0;  // tau * m_steps
};

TimeGrid make_time_grid(double tau, std::int64_t m_steps);

enum class SchemeKind { S1, S2, S3 };

const char* scheme_name(SchemeKind k);

// Contact bookkeeping: a node counts as touching the obstacle when
// u_i - psi_i <= 1e-12 * max(1, |psi_i|).
bool in_contact(double u, double psi);
std::vector<bool> contact_mask(const std::vector<double>& u,
                               const std::vector<double>& psi);

struct ProblemSpec {
    double alpha = 0.0;  // order of the time derivative, in [0,1]
    Grid1D grid;
    TimeGrid time;
    std::vector<double> u0;   // initial datum at the interior nodes
    std::vector<double> psi;  // obstacle at the interior nodes
    std::array<double, 2> psi_boundary{0.0, 0.0};
    SchemeKind scheme = SchemeKind::S1;
    double tol = 1e-4;
    double gamma_alpha = 0.0;  // tau^alpha / h^2
};

// Builds a ProblemSpec from already-sampled nodal values, enforcing the
// admissibility hypotheses: u0 > psi at every interior node and psi <= 0 at
// both endpoints.
ProblemSpec make_problem_spec(double alpha, const Grid1D& grid, const TimeGrid& time,
                              std::vector<double> u0, std::vector<double> psi,
                              std::array<double, 2> psi_boundary,
                              SchemeKind scheme, double tol);

// Same, sampling u0/psi at the interior nodes and psi at the endpoints.
ProblemSpec sample_problem(double alpha, const Grid1D& grid, const TimeGrid& time,
                           const std::function<double(double)>& u0_fn,
                           const std::function<double(double)>& psi_fn,
                           SchemeKind scheme, double tol);

// Full trajectory of a run. Every fractional step needs the whole history,
// so it is kept dense. contact_masks[k] flags the nodes where history[k]
// touches the obstacle.
struct SolveState {
    std::vector<std::vector<double>> history;  // u^0 .. u^m
    std::vector<std::vector<bool>> contact_masks;
    int current_step = 0;  // m
    std::int64_t ls_count = 0;
    std::vector<int> picard_counts;  // per accepted step, S3 only
};

SolveState init_state(const ProblemSpec& spec);

struct RunReport {
    std::optional<double> fc_time;    // formation time of the final contact set
    std::optional<double> stop_time;  // set when the stop test fires
    std::int64_t n_iterations = 0;
    std::optional<double> avg_picard;  // S3 only
    std::int64_t n_linear_systems = 0;
    bool converged = false;
    std::vector<double> final_solution;
};

}  // namespace fracobs
