#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpo/config.hpp"
#include "mpo/noise.hpp"
#include "mpo/steady_state.hpp"

namespace mpo {

struct SweepRow {
    double alpha = 0.0;
    double e_over_ed = 0.0;
    double analytic = 0.0;  // closed-form amplitude over E_d
    double residual = 0.0;
    std::string branch;     // zero | oscillating | failed | out_of_validity
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int failures = 0;         // non-convergence and other solver errors
    int out_of_validity = 0;  // depletion guard
    std::optional<SteadyState> insert;
    double insert_alpha = 0.0;
};

std::vector<double> sweep_grid(const SweepConfig& s);

SweepResult run_sweep(const RunConfig& c);

// Steady state at the coupling where E/E_d hits the target (secant on alpha).
SteadyState solve_at_amplitude(const RunConfig& c, double e_over_ed, double* alpha_out = nullptr);

// Output power used by the linewidth commands: configured, or from |E1(L)|.
double resolve_output_power(const RunConfig& c, const SteadyState& s);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Named checks: conservation, threshold, locking, bridge, semianalytic, mc.
std::vector<std::string> validate_check_names();

std::vector<CheckResult> run_validate(const RunConfig& c, const std::set<std::string>& skip,
                                      const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace mpo
