#include "fracobs/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracobs {

namespace {

void check_step_input(const StepInput& in) {
    if (in.step_index < 1) {
        throw std::invalid_argument("step: step_index must be >= 1");
    }
    if (in.state.current_step != in.step_index - 1) {
        throw std::invalid_argument("step: state is not positioned at step_index - 1");
    }
    if (static_cast<int>(in.state.history.size()) != in.step_index) {
        throw std::invalid_argument("step: history length does not match step_index");
    }
}

void commit(SolveState& state, const ProblemSpec& spec, std::vector<double> u,
            int step_index, std::int64_t solves, int picard) {
    state.history.push_back(std::move(u));
    state.contact_masks.push_back(contact_mask(state.history.back(), spec.psi));
    state.current_step = step_index;
    state.ls_count += solves;
    if (picard >= 0) state.picard_counts.push_back(picard);
}

void check_admissible(const std::vector<double>& u, const std::vector<double>& psi,
                      const char* who) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < psi[i] - 1e-12) {
            throw std::runtime_error(std::string(who) +
                                     ": iterate dipped below the obstacle");
        }
    }
}

}  // namespace

std::vector<double> project_onto_obstacle(std::vector<double> u,
                                          const std::vector<double>& psi) {
    if (u.size() != psi.size()) {
        throw std::invalid_argument("project_onto_obstacle: size mismatch");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::max(u[i], psi[i]);
    }
    return u;
}

std::vector<double> s1_rhs(const SolveState& state, const L1Weights& weights) {
    const int m = weights.m;
    if (state.current_step != m - 1 ||
        static_cast<int>(state.history.size()) != m) {
        throw std::invalid_argument("s1_rhs: weights do not match the history length");
    }
    const std::size_t n = state.history.front().size();
    std::vector<double> b(n, 0.0);
    for (int k = 0; k < m; ++k) {
        const double c = weights.weights[k];
        const std::vector<double>& uk = state.history[k];
        for (std::size_t i = 0; i < n; ++i) {
            b[i] += c * uk[i];
        }
    }
    return b;
}

std::vector<double> s2_rhs(const SolveState& state, const CQWeights& cq,
                           const std::vector<double>& u0) {
    const int m = state.current_step + 1;
    if (static_cast<int>(cq.weights.size()) < m) {
        throw std::invalid_argument("s2_rhs: not enough convolution weights for this step");
    }
    if (u0.size() != state.history.front().size()) {
        throw std::invalid_argument("s2_rhs: u0 size mismatch");
    }
    std::vector<double> b = u0;
    for (int j = 1; j < m; ++j) {
        const double c = cq.weights[j];
        const std::vector<double>& u = state.history[m - j];
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] -= c * (u[i] - u0[i]);
        }
    }
    return b;
}

std::vector<double> memory_truncate(std::vector<double> b, const Mask& prev_mask,
                                    const std::vector<double>& u_prev) {
    if (b.size() != u_prev.size() ||
        prev_mask.size() != static_cast<int>(b.size())) {
        throw std::invalid_argument("memory_truncate: size mismatch");
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!prev_mask.bits[i]) b[i] = u_prev[i];
    }
    return b;
}

std::vector<double> step_s1(const StepInput& in) {
    check_step_input(in);
    const ProblemSpec& spec = in.spec;
    const int m = in.step_index;

    const L1Weights w = l1_weights(spec.alpha, m);
    std::vector<double> b = s1_rhs(in.state, w);

    const std::vector<double>& u_prev = in.state.history.back();
    const Mask mask = heaviside_mask(u_prev, spec.psi);
    if (in.truncate_memory) {
        b = memory_truncate(std::move(b), mask, u_prev);
    }

    const TriDiag a = laplacian_stencil(spec.grid.n_nodes());
    const TriDiag sys = masked_system(mask, w.g * spec.gamma_alpha, a);
    std::vector<double> u = thomas_solve(sys, b);
    u = project_onto_obstacle(std::move(u), spec.psi);

    if (in.validate) check_admissible(u, spec.psi, "step_s1");
    commit(in.state, spec, std::move(u), m, 1, -1);
    return in.state.history.back();
}

std::vector<double> step_s2(const StepInput& in) {
    check_step_input(in);
    const ProblemSpec& spec = in.spec;
    const int m = in.step_index;

    CQWeights local;
    const CQWeights* cq = in.cq;
    if (!cq) {
        local = cq_weights(spec.alpha, m);
        cq = &local;
    }
    std::vector<double> b = s2_rhs(in.state, *cq, in.state.history.front());

    const std::vector<double>& u_prev = in.state.history.back();
    const Mask mask = heaviside_mask(u_prev, spec.psi);
    if (in.truncate_memory) {
        b = memory_truncate(std::move(b), mask, u_prev);
    }

    const TriDiag a = laplacian_stencil(spec.grid.n_nodes());
    const TriDiag sys = masked_system(mask, spec.gamma_alpha, a);
    std::vector<double> u = thomas_solve(sys, b);
    u = project_onto_obstacle(std::move(u), spec.psi);

    if (in.validate) check_admissible(u, spec.psi, "step_s2");
    commit(in.state, spec, std::move(u), m, 1, -1);
    return in.state.history.back();
}

std::pair<std::vector<double>, PicardTrace> step_s3(const StepInput& in) {
    check_step_input(in);
    const ProblemSpec& spec = in.spec;
    const int m = in.step_index;
    const int n = spec.grid.n_nodes();

    const L1Weights w = l1_weights(spec.alpha, m);
    const double scale = w.g * spec.gamma_alpha;

    // Absorb the shift y = u - psi into the right-hand side: the weights sum
    // to one, so sum_k C_{m,k} u^k - psi - scale * A psi.
    const TriDiag a = laplacian_stencil(n);
    std::vector<double> b = s1_rhs(in.state, w);
    const std::vector<double> a_psi = fracobs::apply(a, spec.psi);
    for (int i = 0; i < n; ++i) {
        b[i] -= spec.psi[i] + scale * a_psi[i];
    }

    // Positivity-set iteration on (I + scale * A * P) x = b. P starts empty;
    // each pass re-reads the sign pattern of x until it reproduces itself.
    Mask active;
    active.bits.assign(n, false);
    const int max_picard = 10 * spec.grid.n_intervals;
    PicardTrace trace;
    std::vector<double> x;
    for (;;) {
        x = thomas_solve(column_masked_system(active, scale, a), b);
        ++trace.iterations;
        Mask next;
        next.bits.resize(n);
        for (int i = 0; i < n; ++i) next.bits[i] = x[i] > 0.0;
        if (next == active) break;
        if (trace.iterations >= max_picard) {
            throw std::runtime_error("step_s3: positivity iteration still moving after " +
                                     std::to_string(max_picard) + " solves");
        }
        active = std::move(next);
    }
    trace.final_mask = active;
    trace.converged = true;

    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        u[i] = spec.psi[i] + std::max(0.0, x[i]);
    }

    if (in.validate) {
        check_admissible(u, spec.psi, "step_s3");
        // Complementarity residual of the accepted step: with y = max(0, x),
        // r = y + scale * A y - b must satisfy min(y_i, r_i) ~ 0.
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = std::max(0.0, x[i]);
        const std::vector<double> ay = fracobs::apply(a, y);
        double bmax = 1.0;
        for (int i = 0; i < n; ++i) bmax = std::max(bmax, std::fabs(b[i]));
        for (int i = 0; i < n; ++i) {
            const double r = y[i] + scale * ay[i] - b[i];
            if (std::fabs(std::min(y[i], r)) > 1e-10 * bmax) {
                throw std::runtime_error("step_s3: complementarity residual out of bounds");
            }
        }
    }
    commit(in.state, spec, std::move(u), m, trace.iterations, trace.iterations);
    return {in.state.history.back(), trace};
}

bool stop_criterion(const std::vector<double>& u_m, const std::vector<double>& u_prev,
                    const std::vector<double>& psi, const TriDiag& stencil,
                    double tol) {
    const std::size_t n = u_m.size();
    if (u_prev.size() != n || psi.size() != n ||
        stencil.size() != static_cast<int>(n)) {
        throw std::invalid_argument("stop_criterion: size mismatch");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("stop_criterion: tol must be positive");
    }
    double inc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        inc = std::max(inc, std::fabs(u_m[i] - u_prev[i]));
    }
    if (inc >= tol) return false;
    const std::vector<double> au = fracobs::apply(stencil, u_m);
    double comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        comp = std::max(comp, std::fabs((u_m[i] - psi[i]) * au[i]));
    }
    return std::max(inc, comp) < tol;
}

std::pair<SolveState, RunReport> run(const ProblemSpec& spec, const RunOptions& opts) {
    const std::int64_t m_total = spec.time.m_steps;
    SolveState state = init_state(spec);
    const std::size_t reserve = static_cast<std::size_t>(
        std::min<std::int64_t>(m_total, 1000000) + 1);
    state.history.reserve(reserve);
    state.contact_masks.reserve(reserve);

    const TriDiag a = laplacian_stencil(spec.grid.n_nodes());
    // CQ weights are step-independent, so the whole table is built once and
    // sliced per step.
    CQWeights cq;
    if (spec.scheme == SchemeKind::S2 && m_total > 0) {
        cq = cq_weights(spec.alpha, static_cast<int>(m_total));
    }

    RunReport report;
    for (std::int64_t m = 1; m <= m_total; ++m) {
        StepInput in{spec,
                     state,
                     static_cast<int>(m),
                     spec.scheme == SchemeKind::S2 ? &cq : nullptr,
                     opts.truncate_memory,
                     opts.validate};
        switch (spec.scheme) {
            case SchemeKind::S1: step_s1(in); break;
            case SchemeKind::S2: step_s2(in); break;
            case SchemeKind::S3: step_s3(in); break;
        }
        report.n_iterations = m;
        if (stop_criterion(state.history[m], state.history[m - 1], spec.psi, a,
                           spec.tol)) {
            report.converged = true;
            report.stop_time = static_cast<double>(m) * spec.time.tau;
            break;
        }
    }

    report.n_linear_systems = state.ls_count;
    if (spec.scheme == SchemeKind::S3) {
        double total = 0.0;
        for (int p : state.picard_counts) total += p;
        report.avg_picard = state.picard_counts.empty()
                                ? 0.0
                                : total / static_cast<double>(state.picard_counts.size());
    }
    report.final_solution = state.history.back();
    return {std::move(state), std::move(report)};
}

}  // namespace fracobs
