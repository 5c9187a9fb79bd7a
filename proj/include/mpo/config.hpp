#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mpo/medium.hpp"
#include "mpo/steady_state.hpp"
#include "mpo/threshold.hpp"

namespace mpo {

struct SweepConfig {
    double alpha_min = 1.0;
    double alpha_max = 4.0;
    int n_points = 61;
    double insert_e_over_ed = 0.2;  // profile insert target, 0 disables
};

struct McConfig {
    double omega_lo = 1e-4;  // fractions of E_d
    double omega_hi = 1e-2;
    int n_omega = 8;
    int n_realizations = 1000;
    std::uint64_t master_seed = 20240601;
    unsigned threads = 0;
};

struct LinewidthConfig {
    double p_out_w = 0.0;  // 0: from |E1(L)| of the steady state
};

struct ThresholdConfig {
    double ed2_max_factor = 1e6;
    ThresholdCondition condition = ThresholdCondition::boundary_determinant;
    double flux_prefactor = 1.0;
};

struct OutputConfig {
    std::string format = "csv";  // csv | json
    std::string path = "-";  // "-" is stdout
    bool emit_svg = false;
};

struct RunConfig {
    MediumParams medium;
    PumpBoundary pumps{cplx(5e7, 0.0), cplx(5e7, 0.0)};
    bool match_two_photon_detuning = true;   // delta from the phase-matching root
    bool lock_phase_mismatch = false;        // Delta k = -2 (omega0 - delta) / c
    SweepConfig sweep;
    McConfig mc;
    SolverOptions solver;
    ThresholdConfig threshold;
    LinewidthConfig linewidth;
    OutputConfig output;

    // Medium with matched/locked options applied.
    MediumParams resolved_medium() const;
    // Same config at a different coupling alpha (cell length rescaled).
    RunConfig with_alpha(double alpha) const;
};

// Shipped desk-scale defaults: Rb D1 line, E/E_d ~ 0.02 just above threshold.
RunConfig default_config();

// Strict JSON; unknown keys rejected. Throws ConfigError with line/column for
// parse errors and "field: constraint" for invalid values.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

// Always emits rad/s, cell_length_m and explicit delta/Delta k modes.
std::string serialize_config(const RunConfig& c);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace mpo
