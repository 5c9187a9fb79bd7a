#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mpo/field_equations.hpp"
#include "mpo/medium.hpp"

namespace mpo {

enum class Branch { zero, oscillating };

std::string_view to_string(Branch b);

// Converged (or analytic) classical field configuration on a z-grid.
//
// Gauge: pumps real and positive at their entry faces, E2(0) real and
// nonnegative. Solutions computed from complex pump inputs are rotated back
// so that Ef(0) and Eb(L) equal the supplied values.
struct SteadyState {
    double amplitude = 0.0;          // E, rad/s; E^2 = |E1|^2 + |E2|^2
    double drive_amplitude = 0.0;    // E_d = |Ef_in|, rad/s
    double two_photon_detuning = 0.0;// self-consistent delta of the oscillating solution, rad/s
    std::vector<double> z;           // m
    std::vector<double> theta;       // atan2(|E1|, |E2|), rad
    std::vector<FieldState> fields;
    double residual_norm = 0.0;      // shooting residual / E_d
    int iterations = 0;
    Branch branch = Branch::zero;
};

// E = sqrt(2) Ef0 sqrt(1 - pi / (2 alpha)) above alpha = pi/2, otherwise 0.
double analytic_amplitude(double alpha, double ef0);

// Second-order analytic profile at the given amplitude on normalized
// positions z/L in [0, 1]. Positions are scaled by cell_length in the result.
SteadyState analytic_profile(double amplitude, double ef0, double alpha, std::span<const double> z_over_l,
                             double cell_length = 1.0);

std::vector<double> uniform_grid(int nodes);

struct SolverOptions {
    double rtol = 1e-10;
    double atol_factor = 1e-12;         // absolute tolerance in units of E_d
    int grid_nodes = 257;
    int max_iterations = 50;
    double damping = 0.5;               // backtracking factor for Newton steps
    double continuation_step = 0.02;    // in alpha
    double tolerance = 1e-10;           // shooting residual in units of E_d
    double noise_floor = 1e-8;          // E / E_d below this is reported as the zero branch
    double depletion_limit = 0.25;      // abort when |Ef|^2 < limit * E_d^2
    double probe_amplitude = 1e-6;      // E2(0)/E_d used by the small-signal branch probe
};

// Two-point boundary problem for the four propagation equations with
// E1(0)=0, Ef(0)=Ef_in, E2(L)=0, Eb(L)=Eb_in; damped Newton shooting with
// alpha continuation. Requires alpha = kappa L / Delta > 0 and equal pump
// magnitudes. Throws DomainError, ValidityError or ConvergenceError.
SteadyState solve_steady_state(const MediumParams& p, const PumpBoundary& pumps, const SolverOptions& opt = {});

// Small-signal probe: Re E2(L) / E2(0) of the integrated equations at a
// tiny seed, after rotating out the seed phase. Negative means the zero
// branch has lost stability (a phase-matched mode fits the boundaries).
double small_signal_gain(const MediumParams& p, const PumpBoundary& pumps, const SolverOptions& opt = {});

// Linear stability of E = 0 from the homogeneous boundary determinant.
bool zero_branch_stable(const MediumParams& p, const PumpBoundary& pumps);

struct ConservationAudit {
    std::vector<double> gen_sum;    // |E1|^2 + |E2|^2
    std::vector<double> pump_sum;   // |Ef|^2 + |Eb|^2
    std::vector<double> quartic;    // Re[Ef* Eb* E1 E2]
    std::vector<double> mixed;      // |Ef|^2 + |E1|^2
    double gen_drift = 0.0;
    double pump_drift = 0.0;
    double quartic_drift = 0.0;
    double mixed_drift = 0.0;
    double floor = 0.0;             // 1e-30 E_d^4
};

// Max over the grid of |Q(z) - Q(0)| / max(|Q(0)|, floor) for each quantity.
ConservationAudit conserved_quantities(const SteadyState& s);

// Max |Q(z) - Q(0)| without normalization.
double max_abs_drift(std::span<const double> q);

// CSV: z_m, reE1, imE1, reE2, imE2, reEf, imEf, reEb, imEb (one row per node).
void write_profile_csv(std::ostream& os, const SteadyState& s);

}  // namespace mpo
