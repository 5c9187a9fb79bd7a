#include "mpo/noise.hpp"

#include <cmath>
#include <numbers>

#include "mpo/errors.hpp"
#include "mpo/units.hpp"

namespace mpo {

FluctuationSystem fluctuation_system(double omega, const MediumParams& p, const PumpBoundary& pumps,
                                     double band_fraction)
{
    validate(p);
    const double ed = pumps.drive_amplitude();
    if (std::abs(omega) > band_fraction * ed) {
        throw ValidityError("fluctuation_system: |omega| exceeds " + std::to_string(band_fraction) + " E_d");
    }
    const double atoms = atom_count(p);
    const double kappa = coupling_constant(p);
    const double c = units::speed_of_light;
    const double g = kappa / p.one_photon_detuning;
    const cplx i(0.0, 1.0);

    FluctuationSystem s;
    s.omega = omega;
    s.matrix << i * (-kappa * omega / pumps.drive_intensity() - omega / c), i * g, i * g, i * (omega / c);
    // D is linear in N (kappa^2 / N); empty cell -> 0
    s.noise_coefficient =
        atoms > 0.0 ? kappa * kappa * p.cell_length / (atoms * std::abs(p.one_photon_detuning)) : 0.0;
    s.noise_sign = p.one_photon_detuning > 0.0 ? 1.0 : -1.0;
    return s;
}

double linewidth_closed_form(const MediumParams& p, const PumpBoundary& pumps, double p_out)
{
    if (!(p_out > 0.0)) {
        throw DomainError("linewidth_closed_form: P_out must be > 0");
    }
    const double ed2 = pumps.drive_intensity();
    const double d = p.one_photon_detuning;
    return 2.0 * ed2 * ed2 / (d * d) * units::hbar * p.optical_frequency / p_out;
}

double linewidth_group_delay_form(double tau_gr, double gamma0, double nu, double p_out)
{
    if (!(tau_gr > 0.0)) {
        throw DomainError("linewidth_group_delay_form: tau_gr must be > 0");
    }
    if (!(p_out > 0.0)) {
        throw DomainError("linewidth_group_delay_form: P_out must be > 0");
    }
    constexpr double pi2_8 = std::numbers::pi * std::numbers::pi / 8.0;
    return pi2_8 / tau_gr * (1.0 / tau_gr + 2.0 * gamma0) * units::hbar * nu / p_out;
}

double output_power_from_rabi(double e1_abs, const MediumParams& p)
{
    const double k = coupling_constant(p);
    if (!(k > 0.0)) {
        throw DomainError("output_power_from_rabi: kappa must be > 0");
    }
    return e1_abs * e1_abs * atom_count(p) * units::hbar * p.optical_frequency / (k * p.cell_length);
}

double rabi_from_output_power(double p_out, const MediumParams& p)
{
    if (p_out < 0.0) {
        throw DomainError("rabi_from_output_power: P_out must be >= 0");
    }
    const double atoms = atom_count(p);
    if (!(atoms > 0.0) || !(p.optical_frequency > 0.0)) {
        throw DomainError("rabi_from_output_power: N A L and nu must be > 0");
    }
    return std::sqrt(coupling_constant(p) * p.cell_length * p_out / (atoms * units::hbar * p.optical_frequency));
}

namespace {

// Composite Simpson on a (possibly nonuniform) grid; trailing odd interval by trapezoid.
double simpson(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double sum = 0.0;
    std::size_t k = 0;
    for (; k + 2 < n; k += 2) {
        const double h0 = x[k + 1] - x[k];
        const double h1 = x[k + 2] - x[k + 1];
        const double h = h0 + h1;
        sum += h / 6.0 *
               ((2.0 - h1 / h0) * y[k] + h * h / (h0 * h1) * y[k + 1] + (2.0 - h0 / h1) * y[k + 2]);
    }
    if (k + 1 < n) {
        sum += 0.5 * (x[k + 1] - x[k]) * (y[k] + y[k + 1]);
    }
    return sum;
}

}  // namespace

double phase_variance_semianalytic(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                   double p_out)
{
    if (steady.branch != Branch::oscillating) {
        throw DomainError("phase_variance_semianalytic: requires the oscillating branch");
    }
    if (steady.z.size() < 2) {
        throw DomainError("phase_variance_semianalytic: profile needs >= 2 nodes");
    }
    if (!(p_out > 0.0)) {
        throw DomainError("phase_variance_semianalytic: P_out must be > 0");
    }
    const FluctuationSystem fs = fluctuation_system(0.0, p, pumps);
    if (fs.noise_coefficient == 0.0) {
        return 0.0;
    }
    std::vector<double> sc(steady.theta.size());
    for (std::size_t k = 0; k < sc.size(); ++k) {
        sc[k] = std::sin(steady.theta[k]) * std::cos(steady.theta[k]);
    }
    const double integral = simpson(steady.z, sc);

    const double kappa = coupling_constant(p);
    const double eta = dispersion_report(p, pumps).eta;
    const double e1 = rabi_from_output_power(p_out, p);
    const double pre = kappa * units::speed_of_light / (p.one_photon_detuning * e1 * (1.0 + eta));
    return pre * pre * fs.noise_coefficient * fs.noise_sign * integral;
}

std::vector<double> default_omega_grid(double drive_amplitude, double lo, double hi, int n)
{
    if (n < 1 || !(lo > 0.0) || !(hi >= lo) || !(drive_amplitude > 0.0)) {
        throw DomainError("default_omega_grid: need n >= 1, 0 < lo <= hi, E_d > 0");
    }
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) {
        const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        w[k] = drive_amplitude * lo * std::pow(hi / lo, t);
    }
    return w;
}

LinewidthReport linewidth_report(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                 double p_out, const std::vector<double>& omega_grid, const MonteCarloOptions* mc)
{
    LinewidthReport r;
    const DispersionReport disp = dispersion_report(p, pumps);
    r.eta = disp.eta;
    r.tau_gr = disp.group_delay;
    r.p_out = p_out;
    r.omega_band = omega_grid;
    r.dnu_closed = linewidth_closed_form(p, pumps, p_out);
    r.dnu_group_delay = linewidth_group_delay_form(r.tau_gr, 0.0, p.optical_frequency, p_out);
    r.dnu_lossy = linewidth_group_delay_form(r.tau_gr, p.ground_decay, p.optical_frequency, p_out);
    r.dnu_semianalytic = phase_variance_semianalytic(p, pumps, steady, p_out);
    if (mc != nullptr) {
        r.monte_carlo = monte_carlo_linewidth(p, pumps, steady, p_out, omega_grid, *mc);
        r.has_monte_carlo = true;
    }
    return r;
}

}  // namespace mpo
