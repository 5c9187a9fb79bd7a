#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mpo/medium.hpp"
#include "mpo/steady_state.hpp"

namespace mpo {

inline constexpr std::string_view correlator_model_tag =
    "symmetric-split cross-correlation <Im f1 Re f2> = <Re f1 Im f2> = (D/2) sgn(Delta) delta(z-z'), "
    "autocorrelations zero";

// Linearized fluctuation equations at one small frequency omega:
// d/dz (dE1*, dE2) = M (dE1*, dE2) + forces.
struct FluctuationSystem {
    double omega = 0.0;
    Eigen::Matrix2cd matrix;       // i [[-kappa w/E_d^2 - w/c, kappa/Delta], [kappa/Delta, w/c]]
    double noise_coefficient = 0.0;// D = kappa^2 L / (N_atoms |Delta|)
    double noise_sign = 1.0;       // sgn(Delta)
};

// |omega| <= band_fraction * E_d, else ValidityError.
FluctuationSystem fluctuation_system(double omega, const MediumParams& p, const PumpBoundary& pumps,
                                     double band_fraction = 0.01);

// 2 E_d^4 / Delta^2 * hbar nu / P_out.
double linewidth_closed_form(const MediumParams& p, const PumpBoundary& pumps, double p_out);

// (pi^2/8) tau^-1 (tau^-1 + 2 gamma0) hbar nu / P_out. gamma0 = 0 gives the ideal-laser form.
double linewidth_group_delay_form(double tau_gr, double gamma0, double nu, double p_out);

// Photon-flux bookkeeping for the generated Rabi frequency: |E1|^2 = kappa L P / (N_atoms hbar nu).
double output_power_from_rabi(double e1_abs, const MediumParams& p);
double rabi_from_output_power(double p_out, const MediumParams& p);

// Phase-diffusion linewidth from the z-integral of sin(theta) cos(theta) over
// the steady profile (composite Simpson). Zero branch is rejected.
double phase_variance_semianalytic(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                   double p_out);

std::vector<double> default_omega_grid(double drive_amplitude, double lo = 1e-4, double hi = 1e-2, int n = 8);

struct MonteCarloOptions {
    int n_realizations = 1000;
    std::uint64_t master_seed = 20240601;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct MonteCarloResult {
    double estimate = 0.0;        // rad/s
    double standard_error = 0.0;  // rad/s
    std::vector<double> omega;
    std::vector<double> omega2_s_phi;  // per omega, mean over realizations
    std::vector<double> stderr_;       // per omega
    int n_realizations = 0;
    std::uint64_t master_seed = 0;
};

MonteCarloResult monte_carlo_linewidth(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                       double p_out, const std::vector<double>& omega_grid,
                                       const MonteCarloOptions& opt = {});

struct LinewidthReport {
    double eta = 0.0;
    double tau_gr = 0.0;
    double p_out = 0.0;
    double dnu_closed = 0.0;
    double dnu_group_delay = 0.0;
    double dnu_lossy = 0.0;
    double dnu_semianalytic = 0.0;
    bool has_monte_carlo = false;
    MonteCarloResult monte_carlo;
    std::vector<double> omega_band;
};

// Closed forms and the semi-analytic value; Monte-Carlo only when requested.
LinewidthReport linewidth_report(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                 double p_out, const std::vector<double>& omega_grid,
                                 const MonteCarloOptions* mc = nullptr);

}  // namespace mpo
