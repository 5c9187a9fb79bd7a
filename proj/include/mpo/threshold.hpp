#pragma once

#include <string_view>

#include "mpo/medium.hpp"

namespace mpo {

// Which zero condition locates the lossy threshold.
//   quoted:               cos(xi L) + (gamma0 Delta / 2 E_d^2) sin(xi L)
//   boundary_determinant: cos(xi L) + (kappa gamma0 / (2 E_d^2 xi)) sin(xi L)
// The second is the exact determinant of the field equations linearized about
// E = 0; both reduce to cos(kappa L / Delta) at gamma0 = 0.
enum class ThresholdCondition { boundary_determinant, quoted };

std::string_view to_string(ThresholdCondition c);
ThresholdCondition threshold_condition_from_string(std::string_view s);

// Quoted form, with cosh/sinh continuation when xi is imaginary.
double threshold_residual(double ed2, const MediumParams& p);

// Exact linearized boundary determinant (E2(L)/E2(0) of the small-signal
// solution), same continuation.
double boundary_determinant(double ed2, const MediumParams& p);

double threshold_condition(double ed2, const MediumParams& p, ThresholdCondition c);

// Lowest kappa L / Delta at which the chosen condition vanishes for this pump
// intensity. +inf when E_d^2 <= gamma0 |Delta| / 2.
double critical_coupling(double ed2, const MediumParams& p, ThresholdCondition c);

struct ThresholdOptions {
    double ed2_max_factor = 1e6;  // bracket top, in units of gamma0 |Delta| / 2
    ThresholdCondition condition = ThresholdCondition::boundary_determinant;
};

struct ThresholdResult {
    double alpha_critical = 0.0;
    double pump_intensity_threshold = 0.0;  // E_d^2, rad^2/s^2
    double residual_at_root = 0.0;
    bool feasible = false;
    double floor = 0.0;                     // gamma0 |Delta| / 2, rad^2/s^2
    ThresholdCondition condition = ThresholdCondition::boundary_determinant;
};

ThresholdResult threshold_pump_intensity(const MediumParams& p, const ThresholdOptions& opt = {});

// f * N A L * gamma0, photons/s.
double threshold_photon_flux(const MediumParams& p, double prefactor = 1.0);

// P_out tau_gr / (2 hbar nu).
double photons_in_cell(double p_out, double tau_gr, double nu);

}  // namespace mpo
