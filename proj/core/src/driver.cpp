#include "fracobs/driver.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "fracobs/analysis.hpp"

namespace fs = std::filesystem;

namespace fracobs {

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 9);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_real: unrepresentable value");
    }
    return std::string(buf, ptr);
}

namespace {

// Shortest round-trip form, used in filenames and metadata.
std::string compact_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

struct RunItem {
    double alpha = 0.0;
    int n = 0;
    double gamma_requested = 0.0;
    SchemeKind scheme = SchemeKind::S1;
};

struct Derived {
    double h = 0.0;
    double gamma_eff = 0.0;
    double tau = 0.0;
    std::int64_t m_requested = 0;
    std::int64_t m_run = 0;
    bool budget_truncated = false;
};

std::vector<RunItem> expand(const RunConfig& cfg) {
    std::vector<RunItem> items;
    for (double alpha : cfg.alphas) {
        for (int n : cfg.n_intervals) {
            for (double gamma : cfg.gammas) {
                for (SchemeKind s : cfg.schemes) {
                    items.push_back({alpha, n, gamma, s});
                }
            }
        }
    }
    return items;
}

Derived derive(const RunConfig& cfg, const RunItem& item, std::int64_t budget) {
    Derived d;
    d.h = (cfg.domain_b - cfg.domain_a) / item.n;
    if (item.alpha == 0.0) {
        // The memoryless limit forces gamma to 1/h^2 and makes tau a pure
        // iteration counter.
        d.gamma_eff = 1.0 / (d.h * d.h);
        d.tau = 1.0;
    } else {
        d.gamma_eff = item.gamma_requested;
        d.tau = std::pow(item.gamma_requested * d.h * d.h, 1.0 / item.alpha);
    }
    if (cfg.horizon) {
        d.m_requested = std::max<std::int64_t>(1, std::llround(*cfg.horizon / d.tau));
    } else {
        d.m_requested = budget;
    }
    d.m_run = std::min(d.m_requested, budget);
    d.budget_truncated = d.m_requested > budget;
    return d;
}

ProblemSpec build_spec(const RunConfig& cfg, const RunItem& item, const Derived& d,
                       double tol) {
    const Grid1D grid = make_grid(cfg.domain_a, cfg.domain_b, item.n);
    const TimeGrid time = make_time_grid(d.tau, d.m_run);
    switch (cfg.example) {
        case ExampleKind::Example1:
            return sample_problem(item.alpha, grid, time, example1_u0, example1_psi,
                                  item.scheme, tol);
        case ExampleKind::Example2:
            return sample_problem(item.alpha, grid, time, example2_u0, example2_psi,
                                  item.scheme, tol);
        case ExampleKind::Custom: break;
    }
    std::vector<double> u0(grid.nodes.size()), psi(grid.nodes.size());
    if (cfg.u0_expr) {
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            u0[i] = cfg.u0_expr->eval(grid.nodes[i]);
        }
    } else {
        u0 = cfg.u0_values;
    }
    std::array<double, 2> boundary = cfg.psi_boundary;
    if (cfg.psi_expr) {
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            psi[i] = cfg.psi_expr->eval(grid.nodes[i]);
        }
        boundary = {cfg.psi_expr->eval(grid.a), cfg.psi_expr->eval(grid.b)};
    } else {
        psi = cfg.psi_values;
    }
    return make_problem_spec(item.alpha, grid, time, std::move(u0), std::move(psi),
                             boundary, item.scheme, tol);
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string{};
}

struct SweepOutcome {
    RunItem item;
    Derived derived;
    RunReport report;
    std::optional<double> run_fc_time;
    bool error = false;
    std::string error_msg;
};

std::string traj_filename(const RunItem& item) {
    return "traj_a" + compact_real(item.alpha) + "_N" + std::to_string(item.n) +
           "_g" + compact_real(item.gamma_requested) + "_" +
           scheme_name(item.scheme) + ".csv";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void write_trajectory(const fs::path& dir, const RunItem& item, const Derived& d,
                      const SolveState& state, int every) {
    std::string csv = "m,t";
    const std::size_t n = state.history.front().size();
    for (std::size_t i = 1; i <= n; ++i) {
        csv += ",u" + std::to_string(i);
    }
    csv += "\n";
    const int last = state.current_step;
    for (int m = 0; m <= last; ++m) {
        if (m % every != 0 && m != last) continue;
        csv += std::to_string(m) + "," + format_real(m * d.tau);
        for (double v : state.history[m]) {
            csv += "," + format_real(v);
        }
        csv += "\n";
    }
    write_file(dir / traj_filename(item), csv);
}

int effective_workers(const DriverOptions& opts, std::size_t n_items) {
    int w = opts.workers > 0 ? opts.workers
                             : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    return std::min<int>(w, std::max<std::size_t>(n_items, 1));
}

void check_options(const DriverOptions& opts) {
    if (opts.budget < 1) {
        throw std::invalid_argument("budget must be >= 1");
    }
    if (opts.traj_every && *opts.traj_every < 1) {
        throw std::invalid_argument("traj-every must be >= 1");
    }
}

fs::path prepare_out_dir(const RunConfig& cfg, const DriverOptions& opts) {
    fs::path dir = opts.out_dir.empty() ? fs::path(cfg.output_dir)
                                        : fs::path(opts.out_dir);
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

// Pulls work items off a shared counter until none remain.
template <typename Fn>
void run_pool(int workers, std::size_t count, Fn&& body) {
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= count) return;
            body(k);
        }
    };
    if (workers <= 1) {
        loop();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
}

std::vector<SweepOutcome> execute_sweep(const RunConfig& cfg, const DriverOptions& opts,
                                        const std::vector<RunItem>& items,
                                        const fs::path& dir) {
    const bool truncate = opts.truncate_memory.value_or(cfg.truncate_memory);
    std::vector<SweepOutcome> results(items.size());
    run_pool(effective_workers(opts, items.size()), items.size(), [&](std::size_t k) {
        SweepOutcome& out = results[k];
        out.item = items[k];
        out.derived = derive(cfg, items[k], opts.budget);
        try {
            const ProblemSpec spec = build_spec(cfg, items[k], out.derived, cfg.tol);
            auto [state, report] = run(spec, {truncate, false});
            out.run_fc_time = fc_time(state, out.derived.tau);
            if (opts.traj_every) {
                write_trajectory(dir, items[k], out.derived, state, *opts.traj_every);
            }
            out.report = std::move(report);
        } catch (const std::exception& e) {
            out.error = true;
            out.error_msg = e.what();
        }
    });
    return results;
}

std::string summary_csv(const std::vector<SweepOutcome>& results) {
    std::string csv =
        "alpha,N,gamma,tau,fc_time,stop_time,n_iter,avg_picard,n_ls,converged\n";
    for (const auto& r : results) {
        csv += format_real(r.item.alpha);
        csv += "," + std::to_string(r.item.n);
        csv += "," + format_real(r.derived.gamma_eff);
        csv += "," + format_real(r.derived.tau);
        csv += "," + csv_cell(r.run_fc_time);
        csv += "," + csv_cell(r.report.stop_time);
        csv += "," + std::to_string(r.report.n_iterations);
        csv += "," + csv_cell(r.report.avg_picard);
        csv += "," + std::to_string(r.report.n_linear_systems);
        csv += r.report.converged ? ",true" : ",false";
        csv += "\n";
    }
    return csv;
}

nlohmann::json sweep_meta(const RunConfig& cfg, const DriverOptions& opts,
                          const std::vector<SweepOutcome>& results,
                          const char* subcommand) {
    nlohmann::json meta;
    meta["subcommand"] = subcommand;
    meta["example"] = example_name(cfg.example);
    meta["tol"] = cfg.tol;
    meta["budget"] = opts.budget;
    meta["truncate_memory"] = opts.truncate_memory.value_or(cfg.truncate_memory);
    auto& runs = meta["runs"] = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j;
        j["alpha"] = r.item.alpha;
        j["N"] = r.item.n;
        j["gamma_requested"] = r.item.gamma_requested;
        j["gamma_effective"] = r.derived.gamma_eff;
        j["tau"] = r.derived.tau;
        j["scheme"] = scheme_name(r.item.scheme);
        j["m_requested"] = r.derived.m_requested;
        j["m_run"] = r.derived.m_run;
        j["t_effective"] = r.derived.tau * static_cast<double>(r.derived.m_run);
        j["budget_truncated"] = r.derived.budget_truncated;
        j["converged"] = r.report.converged;
        if (r.error) j["error"] = r.error_msg;
        runs.push_back(std::move(j));
    }
    return meta;
}

void log_sweep(const std::vector<SweepOutcome>& results, std::ostream& log) {
    for (const auto& r : results) {
        log << "[run] alpha=" << compact_real(r.item.alpha) << " N=" << r.item.n
            << " gamma=" << compact_real(r.derived.gamma_eff)
            << " scheme=" << scheme_name(r.item.scheme);
        if (r.error) {
            log << " error=\"" << r.error_msg << "\"\n";
            continue;
        }
        log << " converged=" << (r.report.converged ? "true" : "false");
        if (r.report.stop_time) log << " stop_time=" << format_real(*r.report.stop_time);
        if (r.run_fc_time) log << " fc_time=" << format_real(*r.run_fc_time);
        log << " n_iter=" << r.report.n_iterations;
        if (r.report.avg_picard) log << " avg_picard=" << format_real(*r.report.avg_picard);
        log << " n_ls=" << r.report.n_linear_systems;
        if (r.derived.budget_truncated) log << " budget_truncated=true";
        log << "\n";
    }
}

int sweep_exit_code(const std::vector<SweepOutcome>& results) {
    bool partial = false;
    for (const auto& r : results) {
        if (r.error) return exit_error;
        if (!r.report.converged && !r.derived.budget_truncated) partial = true;
    }
    return partial ? exit_partial : exit_ok;
}

int run_items(const RunConfig& cfg, const DriverOptions& opts, std::ostream& log,
              const char* subcommand, const std::vector<RunItem>& items) {
    check_options(opts);
    const fs::path dir = prepare_out_dir(cfg, opts);
    const auto results = execute_sweep(cfg, opts, items, dir);
    write_file(dir / "summary.csv", summary_csv(results));
    write_file(dir / "summary.meta.json",
               sweep_meta(cfg, opts, results, subcommand).dump(2) + "\n");
    log_sweep(results, log);
    return sweep_exit_code(results);
}

// Decay pipeline pieces.

struct DecayRow {
    double alpha = 0.0;
    double t = 0.0;
    double l1 = 0.0;
    std::optional<double> j;
    std::optional<double> ratio;
    std::string note;
};

struct DecayOutcome {
    RunItem item;
    Derived derived;
    std::vector<DecayRow> rows;
    std::optional<double> c_fit;
    bool error = false;
    std::string error_msg;
};

void require_scalar(std::size_t size, const char* key, const char* subcommand) {
    if (size != 1) {
        throw std::invalid_argument(std::string(subcommand) + " needs a single '" +
                                    key + "' value");
    }
}

}  // namespace

int run_single(const RunConfig& cfg, const DriverOptions& opts, std::ostream& log) {
    try {
        const auto items = expand(cfg);
        if (items.size() != 1) {
            throw std::invalid_argument(
                "run handles a single configuration; use sweep for lists");
        }
        return run_items(cfg, opts, log, "run", items);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
}

int run_sweep(const RunConfig& cfg, const DriverOptions& opts, std::ostream& log) {
    try {
        return run_items(cfg, opts, log, "sweep", expand(cfg));
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
}

int run_decay(const RunConfig& cfg, const DriverOptions& opts, std::ostream& log) {
    try {
        check_options(opts);
        require_scalar(cfg.n_intervals.size(), "N", "decay");
        require_scalar(cfg.gammas.size(), "gamma", "decay");
        require_scalar(cfg.schemes.size(), "scheme", "decay");
        const fs::path dir = prepare_out_dir(cfg, opts);
        const bool truncate = opts.truncate_memory.value_or(cfg.truncate_memory);

        // One stationary reference per mesh; every alpha is compared to it.
        const RunItem ref_item{1.0, cfg.n_intervals[0], cfg.gammas[0],
                               SchemeKind::S3};
        const Derived ref_d = derive(cfg, ref_item, opts.budget);
        const ProblemSpec ref_spec = build_spec(cfg, ref_item, ref_d, cfg.tol);
        const StationaryRef ref = stationary_solve(ref_spec, 1e-10);
        const double h = ref_spec.grid.h;

        std::vector<DecayOutcome> results(cfg.alphas.size());
        run_pool(effective_workers(opts, cfg.alphas.size()), cfg.alphas.size(),
                 [&](std::size_t k) {
                     DecayOutcome& out = results[k];
                     out.item = {cfg.alphas[k], cfg.n_intervals[0], cfg.gammas[0],
                                 cfg.schemes[0]};
                     try {
                         if (out.item.alpha == 0.0) {
                             throw std::invalid_argument(
                                 "decay requires alpha > 0 (no power law at alpha=0)");
                         }
                         out.derived = derive(cfg, out.item, opts.budget);
                         // The run must reach the horizon: the stop test is
                         // disabled by an unreachable tolerance.
                         const ProblemSpec spec =
                             build_spec(cfg, out.item, out.derived, 1e-300);
                         auto [state, report] = run(spec, {truncate, false});
                         const double alpha = out.item.alpha;
                         if (out.derived.budget_truncated) {
                             const double t_reach =
                                 out.derived.tau * static_cast<double>(out.derived.m_run);
                             out.rows.push_back(
                                 {alpha, t_reach,
                                  l1_error(report.final_solution, ref.u_bar, h),
                                  std::nullopt, std::nullopt, "estimate"});
                             return;
                         }
                         const auto samples = sample_errors(
                             state, ref, out.derived.tau, h, log_spaced(1.0, 20.0, 10));
                         if (alpha == 1.0) {
                             for (const auto& [t, err] : samples) {
                                 out.rows.push_back(
                                     {alpha, t, err, 0.0, std::nullopt, "exp"});
                             }
                             return;
                         }
                         const double c = fit_decay_constant(samples, alpha);
                         out.c_fit = c;
                         for (const auto& [t, err] : samples) {
                             const double j = j_decay(t, alpha, c);
                             out.rows.push_back({alpha, t, err, j, err / j, ""});
                         }
                     } catch (const std::exception& e) {
                         out.error = true;
                         out.error_msg = e.what();
                     }
                 });

        std::string csv = "alpha,t,l1_error,j_value,ratio,note\n";
        for (const auto& r : results) {
            for (const auto& row : r.rows) {
                csv += format_real(row.alpha);
                csv += "," + format_real(row.t);
                csv += "," + format_real(row.l1);
                csv += "," + csv_cell(row.j);
                csv += "," + csv_cell(row.ratio);
                csv += "," + row.note + "\n";
            }
        }
        write_file(dir / "decay.csv", csv);

        nlohmann::json meta;
        meta["subcommand"] = "decay";
        meta["example"] = example_name(cfg.example);
        meta["budget"] = opts.budget;
        meta["ref_tol"] = ref.solver_tol;
        if (ref.contact_extremum) meta["contact_extremum"] = *ref.contact_extremum;
        auto& runs = meta["runs"] = nlohmann::json::array();
        for (const auto& r : results) {
            nlohmann::json j;
            j["alpha"] = r.item.alpha;
            j["N"] = r.item.n;
            j["gamma_effective"] = r.derived.gamma_eff;
            j["tau"] = r.derived.tau;
            j["scheme"] = scheme_name(r.item.scheme);
            j["m_run"] = r.derived.m_run;
            j["budget_truncated"] = r.derived.budget_truncated;
            if (r.c_fit) j["c_fit"] = *r.c_fit;
            if (r.error) j["error"] = r.error_msg;
            runs.push_back(std::move(j));
        }
        write_file(dir / "decay.meta.json", meta.dump(2) + "\n");

        bool any_error = false;
        for (const auto& r : results) {
            if (r.error) {
                any_error = true;
                log << "[decay] alpha=" << compact_real(r.item.alpha) << " error=\""
                    << r.error_msg << "\"\n";
                continue;
            }
            log << "[decay] alpha=" << compact_real(r.item.alpha)
                << " rows=" << r.rows.size();
            if (r.c_fit) log << " c_fit=" << format_real(*r.c_fit);
            if (r.derived.budget_truncated) log << " budget_truncated=true";
            log << "\n";
        }
        return any_error ? exit_error : exit_ok;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
}

int run_stationary(const RunConfig& cfg, const DriverOptions& opts, std::ostream& log) {
    try {
        check_options(opts);
        require_scalar(cfg.n_intervals.size(), "N", "stationary");
        require_scalar(cfg.gammas.size(), "gamma", "stationary");
        const fs::path dir = prepare_out_dir(cfg, opts);

        const RunItem item{1.0, cfg.n_intervals[0], cfg.gammas[0], SchemeKind::S3};
        const Derived d = derive(cfg, item, opts.budget);
        const ProblemSpec spec = build_spec(cfg, item, d, cfg.tol);
        const StationaryRef ref = stationary_solve(spec, 1e-10);

        std::string csv = "x,psi,u_bar,contact\n";
        for (std::size_t i = 0; i < ref.u_bar.size(); ++i) {
            csv += format_real(spec.grid.nodes[i]);
            csv += "," + format_real(spec.psi[i]);
            csv += "," + format_real(ref.u_bar[i]);
            csv += in_contact(ref.u_bar[i], spec.psi[i]) ? ",true\n" : ",false\n";
        }
        write_file(dir / "stationary.csv", csv);

        nlohmann::json meta;
        meta["subcommand"] = "stationary";
        meta["example"] = example_name(cfg.example);
        meta["N"] = item.n;
        meta["ref_tol"] = ref.solver_tol;
        if (ref.contact_extremum) meta["contact_extremum"] = *ref.contact_extremum;
        write_file(dir / "stationary.meta.json", meta.dump(2) + "\n");

        log << "[stationary] N=" << item.n;
        if (ref.contact_extremum) {
            log << " contact_extremum=" << format_real(*ref.contact_extremum);
        } else {
            log << " contact_extremum=none";
        }
        log << "\n";
        return exit_ok;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_error;
    }
}

}  // namespace fracobs
