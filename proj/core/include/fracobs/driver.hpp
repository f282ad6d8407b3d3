#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fracobs/config.hpp"

namespace fracobs {

struct DriverOptions {
    std::string out_dir;           // empty: use config.output_dir
    int workers = 0;               // <= 0: hardware concurrency
    std::int64_t budget = 100000;  // per-run step cap
    std::optional<int> traj_every;  // write every k-th accepted iterate
    std::optional<bool> truncate_memory;  // overrides the config when set
};

// Exit status shared by the entry points: 0 when every run reached its goal,
// 2 when all runs completed but some fell short (no convergence within the
// budget, or a decay horizon cut off early), 1 on hard errors.
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_partial = 2;

// run: one configuration end to end, summary.csv plus a report line.
// sweep: the full cartesian sweep of the config, summary.csv, parallel over
//        workers with config-ordered output.
// decay: distance-to-stationary sampling per alpha, decay.csv.
// stationary: the reference state and its contact set, stationary.csv.
int run_single(const RunConfig& config, const DriverOptions& opts, std::ostream& log);
int run_sweep(const RunConfig& config, const DriverOptions& opts, std::ostream& log);
int run_decay(const RunConfig& config, const DriverOptions& opts, std::ostream& log);
int run_stationary(const RunConfig& config, const DriverOptions& opts, std::ostream& log);

// Locale-free scientific form with 10 significant digits, used for all CSV
// payloads so identical runs serialize identically.
std::string format_real(double v);

}  // namespace fracobs
