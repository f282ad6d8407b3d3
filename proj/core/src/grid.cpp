#include "fracobs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fracobs {

Grid1D make_grid(double a, double b, int n_intervals) {
    if (!(b > a)) {
        throw std::invalid_argument("make_grid: domain requires b > a");
    }
    if (n_intervals < 2) {
        throw std::invalid_argument("make_grid: need at least 2 intervals");
    }
    Grid1D g;
    g.a = a;
    g.b = b;
    g.n_intervals = n_intervals;
    g.h = (b - a) / n_intervals;
    g.nodes.resize(n_intervals - 1);
    for (int i = 1; i < n_intervals; ++i) {
        g.nodes[i - 1] = a + i * g.h;
    }
    return g;
}

TimeGrid make_time_grid(double tau, std::int64_t m_steps) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("make_time_grid: tau must be positive");
    }
    if (m_steps < 0) {
        throw std::invalid_argument("make_time_grid: m_steps must be >= 0");
    }
    return TimeGrid{tau, m_steps, tau * static_cast<double>(m_steps)};
}

const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::S1: return "S1";
        case SchemeKind::S2: return "S2";
        case SchemeKind::S3: return "S3";
    }
    return "?";
}

bool in_contact(double u, double psi) {
    return u - psi <= 1e-12 * std::max(1.0, std::fabs(psi));
}

std::vector<bool> contact_mask(const std::vector<double>& u,
                               const std::vector<double>& psi) {
    if (u.size() != psi.size()) {
        throw std::invalid_argument("contact_mask: size mismatch");
    }
    std::vector<bool> mask(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        mask[i] = in_contact(u[i], psi[i]);
    }
    return mask;
}

ProblemSpec make_problem_spec(double alpha, const Grid1D& grid, const TimeGrid& time,
                              std::vector<double> u0, std::vector<double> psi,
                              std::array<double, 2> psi_boundary,
                              SchemeKind scheme, double tol) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("make_problem_spec: alpha must lie in [0, 1]");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("make_problem_spec: tol must be positive");
    }
    const std::size_t n = static_cast<std::size_t>(grid.n_nodes());
    if (u0.size() != n || psi.size() != n) {
        throw std::invalid_argument("make_problem_spec: u0/psi must hold one value per interior node");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(u0[i] > psi[i])) {
            throw std::invalid_argument(
                "make_problem_spec: initial datum must sit strictly above the obstacle");
        }
    }
    if (psi_boundary[0] > 0.0 || psi_boundary[1] > 0.0) {
        throw std::invalid_argument(
            "make_problem_spec: obstacle must be <= 0 at the boundary");
    }
    ProblemSpec spec;
    spec.alpha = alpha;
    spec.grid = grid;
    spec.time = time;
    spec.u0 = std::move(u0);
    spec.psi = std::move(psi);
    spec.psi_boundary = psi_boundary;
    spec.scheme = scheme;
    spec.tol = tol;
    spec.gamma_alpha = std::pow(time.tau, alpha) / (grid.h * grid.h);
    return spec;
}

ProblemSpec sample_problem(double alpha, const Grid1D& grid, const TimeGrid& time,
                           const std::function<double(double)>& u0_fn,
                           const std::function<double(double)>& psi_fn,
                           SchemeKind scheme, double tol) {
    std::vector<double> u0(grid.nodes.size()), psi(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        u0[i] = u0_fn(grid.nodes[i]);
        psi[i] = psi_fn(grid.nodes[i]);
    }
    return make_problem_spec(alpha, grid, time, std::move(u0), std::move(psi),
                             {psi_fn(grid.a), psi_fn(grid.b)}, scheme, tol);
}

SolveState init_state(const ProblemSpec& spec) {
    SolveState st;
    st.history.push_back(spec.u0);
    st.contact_masks.push_back(contact_mask(spec.u0, spec.psi));
    st.current_step = 0;
    return st;
}

}  // namespace fracobs
