#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fracobs/expr.hpp"
#include "fracobs/grid.hpp"

namespace fracobs {

enum class ExampleKind { Example1, Example2, Custom };

// Parsed run configuration. Vector-valued entries span a sweep; single runs
// are one-element sweeps. Accepted documents: flat "key = value" lines or a
// JSON object with the same keys. Unknown keys are rejected.
struct RunConfig {
    ExampleKind example = ExampleKind::Example1;

    // Custom problems: either closed-form expressions in x or tabulated
    // interior values (which pin N to values.size() + 1).
    std::optional<Expr> u0_expr;
    std::optional<Expr> psi_expr;
    std::vector<double> u0_values;
    std::vector<double> psi_values;
    std::array<double, 2> psi_boundary{0.0, 0.0};

    double domain_a = -1.0;
    double domain_b = 1.0;

    std::vector<double> alphas;
    std::vector<int> n_intervals;
    std::vector<double> gammas;
    std::vector<SchemeKind> schemes;

    std::optional<double> horizon;  // absent: run to the step budget
    double tol = 1e-4;
    bool truncate_memory = true;
    std::string output_dir = ".";
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

const char* example_name(ExampleKind k);

// Closed forms of the two built-in problems on (-1, 1).
double example1_u0(double x);
double example1_psi(double x);
double example2_u0(double x);
double example2_psi(double x);

}  // namespace fracobs
