#include "fracobs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracobs/kernels.hpp"

namespace fracobs {

StationaryRef stationary_solve(const ProblemSpec& spec, double ref_tol) {
    if (!(ref_tol > 0.0)) {
        throw std::invalid_argument("stationary_solve: ref_tol must be positive");
    }
    // alpha = 1 forgets the history, so the iteration relaxes geometrically to
    // the constrained equilibrium; the mesh ratio only sets the pace.
    constexpr double gamma_ref = 50.0;
    constexpr std::int64_t budget = 200000;
    const double h = spec.grid.h;
    const double tau = gamma_ref * h * h;

    ProblemSpec stat = spec;
    stat.alpha = 1.0;
    stat.scheme = SchemeKind::S3;
    stat.tol = ref_tol;
    stat.time = make_time_grid(tau, budget);
    stat.gamma_alpha = std::pow(tau, 1.0) / (h * h);

    auto [state, report] = run(stat);
    if (!report.converged) {
        throw std::runtime_error("stationary_solve: no convergence within the step budget");
    }

    StationaryRef ref;
    ref.u_bar = report.final_solution;
    ref.solver_tol = ref_tol;
    const std::vector<bool>& mask = state.contact_masks.back();
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) {
            const double x = std::fabs(spec.grid.nodes[i]);
            if (!ref.contact_extremum || x > *ref.contact_extremum) {
                ref.contact_extremum = x;
            }
        }
    }
    return ref;
}

std::vector<double> psor_oracle(const TriDiag& stencil, const std::vector<double>& psi,
                                int max_sweeps) {
    const int n = stencil.size();
    if (static_cast<int>(psi.size()) != n) {
        throw std::invalid_argument("psor_oracle: size mismatch");
    }
    if (max_sweeps < 1) {
        throw std::invalid_argument("psor_oracle: max_sweeps must be >= 1");
    }
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = std::max(psi[i], 0.0);

    // The complementarity residual only bounds the iterate error through the
    // smallest stencil eigenvalue, so the sweeps push well past the 1e-10
    // contract floor while the budget lasts.
    double res = 1.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int i = 0; i < n; ++i) {
            double rhs = 0.0;
            if (i > 0) rhs -= stencil.sub[i - 1] * u[i - 1];
            if (i + 1 < n) rhs -= stencil.sup[i] * u[i + 1];
            u[i] = std::max(psi[i], rhs / stencil.diag[i]);
        }
        const std::vector<double> au = fracobs::apply(stencil, u);
        res = 0.0;
        for (int i = 0; i < n; ++i) {
            res = std::max(res, std::fabs(std::min(u[i] - psi[i], au[i])));
        }
        if (res <= 1e-13) return u;
    }
    if (res <= 1e-10) return u;
    throw std::runtime_error("psor_oracle: residual floor not reached within max_sweeps");
}

double l1_error(const std::vector<double>& u, const std::vector<double>& u_bar,
                double h) {
    if (u.size() != u_bar.size()) {
        throw std::invalid_argument("l1_error: size mismatch");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("l1_error: h must be positive");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += std::fabs(u[i] - u_bar[i]);
    }
    return h * s;
}

double j_decay(double t, double alpha, double c_constant) {
    if (!(t > 0.0)) {
        throw std::invalid_argument("j_decay: t must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("j_decay: alpha must lie in (0, 1)");
    }
    if (!(c_constant > 0.0)) {
        throw std::invalid_argument("j_decay: C must be positive");
    }
    return std::pow(t, -alpha) / (c_constant * gamma_one_plus(-alpha));
}

double fit_decay_constant(const std::vector<std::pair<double, double>>& samples,
                          double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("fit_decay_constant: alpha must lie in (0, 1)");
    }
    if (samples.empty()) {
        throw std::invalid_argument("fit_decay_constant: no samples");
    }
    bool has_signal = false;
    for (const auto& [t, err] : samples) {
        if (!(t > 0.0) || !(err >= 0.0)) {
            throw std::invalid_argument("fit_decay_constant: samples need t > 0, err >= 0");
        }
        if (err > 1e-14) has_signal = true;
    }
    if (!has_signal) {
        throw std::runtime_error(
            "fit_decay_constant: errors are at rounding level, nothing to fit");
    }
    // err ~ beta * phi(t) with phi = t^-alpha / Gamma(1-alpha); least squares
    // in beta = 1/C.
    const double gamma = gamma_one_plus(-alpha);
    double num = 0.0, den = 0.0;
    for (const auto& [t, err] : samples) {
        const double phi = std::pow(t, -alpha) / gamma;
        num += err * phi;
        den += phi * phi;
    }
    return den / num;
}

std::optional<double> fc_time(const SolveState& state, double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("fc_time: tau must be positive");
    }
    const auto& masks = state.contact_masks;
    if (masks.empty()) {
        throw std::invalid_argument("fc_time: empty state");
    }
    const std::vector<bool>& last = masks.back();
    if (std::none_of(last.begin(), last.end(), [](bool b) { return b; })) {
        return std::nullopt;
    }
    std::size_t m = masks.size() - 1;
    while (m > 1 && masks[m - 1] == last) --m;
    if (m < 1) m = 1;
    return static_cast<double>(m) * tau;
}

double alpha_zero_check(const std::vector<double>& u1, const std::vector<double>& u0,
                        const TriDiag& stencil, double h, const Mask& mask) {
    const int n = stencil.size();
    if (static_cast<int>(u1.size()) != n || static_cast<int>(u0.size()) != n ||
        mask.size() != n) {
        throw std::invalid_argument("alpha_zero_check: size mismatch");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("alpha_zero_check: h must be positive");
    }
    const std::vector<double> au = fracobs::apply(stencil, u1);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!mask.bits[i]) continue;
        res = std::max(res, std::fabs(u1[i] + au[i] / (h * h) - u0[i]));
    }
    return res;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo)) {
        throw std::invalid_argument("log_spaced: need 0 < lo < hi");
    }
    if (count < 2) {
        throw std::invalid_argument("log_spaced: need at least 2 points");
    }
    std::vector<double> t(count);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i) {
        t[i] = std::exp(la + (lb - la) * i / (count - 1));
    }
    t.front() = lo;
    t.back() = hi;
    return t;
}

std::vector<std::pair<double, double>> sample_errors(const SolveState& state,
                                                     const StationaryRef& ref,
                                                     double tau, double h,
                                                     const std::vector<double>& times) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("sample_errors: tau must be positive");
    }
    const std::int64_t last = state.current_step;
    if (last < 1) {
        throw std::invalid_argument("sample_errors: state holds no accepted steps");
    }
    std::vector<std::pair<double, double>> out;
    std::int64_t prev_m = 0;
    for (double t : times) {
        std::int64_t m = std::llround(t / tau);
        m = std::clamp<std::int64_t>(m, 1, last);
        if (m == prev_m) continue;
        prev_m = m;
        out.emplace_back(static_cast<double>(m) * tau,
                         l1_error(state.history[m], ref.u_bar, h));
    }
    return out;
}

DecayCurve decay_curve(double alpha,
                       const std::vector<std::pair<double, double>>& err_samples) {
    DecayCurve curve;
    curve.alpha = alpha;
    curve.c_constant = fit_decay_constant(err_samples, alpha);
    curve.samples.reserve(err_samples.size());
    for (const auto& [t, err] : err_samples) {
        curve.samples.push_back({t, err, j_decay(t, alpha, curve.c_constant)});
    }
    return curve;
}

}  // namespace fracobs
