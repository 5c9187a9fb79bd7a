#include "mpo/app.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "mpo/errors.hpp"
#include "mpo/threshold.hpp"
#include "mpo/units.hpp"

namespace mpo {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double amplitude_ratio(const SteadyState& s)
{
    return s.amplitude / s.drive_amplitude;
}

}  // namespace

std::vector<double> sweep_grid(const SweepConfig& s)
{
    std::vector<double> a(s.n_points);
    for (int k = 0; k < s.n_points; ++k) {
        a[k] = s.alpha_min + (s.alpha_max - s.alpha_min) * k / (s.n_points - 1);
    }
    return a;
}

SteadyState solve_at_amplitude(const RunConfig& c, double e_over_ed, double* alpha_out)
{
    if (!(e_over_ed > 0.0 && e_over_ed < 0.6)) {
        throw DomainError("solve_at_amplitude: target E/E_d must be in (0, 0.6)");
    }
    auto solve = [&](double a) { return solve_steady_state(c.with_alpha(a).resolved_medium(), c.pumps, c.solver); };
    // closed-form inverse as the first two secant points
    double a0 = std::numbers::pi / (2.0 * (1.0 - 0.5 * e_over_ed * e_over_ed));
    double a1 = a0 * 1.01;
    SteadyState s0 = solve(a0);
    SteadyState s1 = solve(a1);
    double f0 = amplitude_ratio(s0) - e_over_ed;
    double f1 = amplitude_ratio(s1) - e_over_ed;
    for (int it = 0; it < 30 && std::abs(f1) > 1e-9; ++it) {
        const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        a0 = a1;
        f0 = f1;
        a1 = a2;
        s1 = solve(a1);
        f1 = amplitude_ratio(s1) - e_over_ed;
    }
    if (alpha_out != nullptr) {
        *alpha_out = a1;
    }
    return s1;
}

SweepResult run_sweep(const RunConfig& c)
{
    SweepResult out;
    const double ed = c.pumps.drive_amplitude();
    for (double a : sweep_grid(c.sweep)) {
        SweepRow row;
        row.alpha = a;
        row.analytic = analytic_amplitude(a, 1.0);
        try {
            const SteadyState s = solve_steady_state(c.with_alpha(a).resolved_medium(), c.pumps, c.solver);
            row.e_over_ed = s.amplitude / ed;
            row.residual = s.residual_norm;
            row.branch = std::string(to_string(s.branch));
        } catch (const ValidityError& e) {
            row.branch = "out_of_validity";
            row.error = e.what();
            row.e_over_ed = std::nan("");
            ++out.out_of_validity;
        } catch (const std::exception& e) {
            row.branch = "failed";
            row.error = e.what();
            row.e_over_ed = std::nan("");
            ++out.failures;
        }
        out.rows.push_back(row);
    }
    if (c.sweep.insert_e_over_ed > 0.0) {
        try {
            out.insert = solve_at_amplitude(c, c.sweep.insert_e_over_ed, &out.insert_alpha);
        } catch (const std::exception&) {
            out.insert.reset();
        }
    }
    return out;
}

double resolve_output_power(const RunConfig& c, const SteadyState& s)
{
    if (c.linewidth.p_out_w > 0.0) {
        return c.linewidth.p_out_w;
    }
    if (s.branch != Branch::oscillating) {
        throw DomainError("output power: zero branch has no output; set linewidth.p_out_w");
    }
    return output_power_from_rabi(std::abs(s.fields.back().e1), c.resolved_medium());
}

std::vector<std::string> validate_check_names()
{
    return {"conservation", "threshold", "locking", "bridge", "semianalytic", "mc"};
}

namespace {

CheckResult check_conservation(const RunConfig& c)
{
    CheckResult r{"conservation", false, ""};
    const SteadyState s = solve_steady_state(c.resolved_medium(), c.pumps, c.solver);
    if (s.branch != Branch::oscillating) {
        r.detail = "default point is on the zero branch";
        return r;
    }
    const ConservationAudit a = conserved_quantities(s);
    const double ed2 = s.drive_amplitude * s.drive_amplitude;
    const double quartic = max_abs_drift(a.quartic) / (ed2 * s.amplitude * s.amplitude);
    r.passed = a.gen_drift <= 1e-6 && a.pump_drift <= 1e-6 && quartic <= 1e-4 && a.mixed_drift <= 1e-4;
    r.detail = fmt("E/E_d=%.4g gen=%.2e pump=%.2e", s.amplitude / s.drive_amplitude, a.gen_drift, a.pump_drift) +
               fmt(" quartic/(E_d^2 E^2)=%.2e mixed=%.2e", quartic, a.mixed_drift);
    return r;
}

CheckResult check_threshold(const RunConfig& c)
{
    CheckResult r{"threshold", false, ""};
    const RunConfig ideal = c.with_alpha(std::numbers::pi / 2.0);
    MediumParams p0 = ideal.resolved_medium();
    p0.ground_decay = 0.0;
    const double ideal_res = threshold_residual(c.pumps.drive_intensity(), p0);

    MediumParams p = c.with_alpha(std::numbers::pi).resolved_medium();
    if (p.ground_decay == 0.0) {
        p.ground_decay = 100.0;
    }
    ThresholdOptions topt;
    topt.ed2_max_factor = c.threshold.ed2_max_factor;
    topt.condition = c.threshold.condition;
    const ThresholdResult th = threshold_pump_intensity(p, topt);
    bool flip = false;
    if (th.feasible) {
        const double lo = std::sqrt(0.99 * th.pump_intensity_threshold);
        const double hi = std::sqrt(1.01 * th.pump_intensity_threshold);
        const Branch below = solve_steady_state(p, PumpBoundary(lo, lo), c.solver).branch;
        const Branch above = solve_steady_state(p, PumpBoundary(hi, hi), c.solver).branch;
        flip = below == Branch::zero && above == Branch::oscillating;
    }
    r.passed = std::abs(ideal_res) <= 1e-12 && th.feasible && std::abs(th.residual_at_root) <= 1e-10 &&
               th.pump_intensity_threshold >= th.floor && flip;
    r.detail = fmt("ideal residual=%.1e, lossy E_d^2=%.6e (floor %.3e)", ideal_res, th.pump_intensity_threshold,
                   th.floor) +
               fmt(" residual=%.1e, BVP flip across +-1%%: %s", th.residual_at_root) + (flip ? "yes" : "no");
    return r;
}

CheckResult check_locking(const RunConfig& c)
{
    CheckResult r{"locking", false, ""};
    std::mt19937_64 gen(c.mc.master_seed ^ 0x6c6f636bULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(gen)); };
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        MediumParams p = c.medium;
        p.atom_density = logu(1e14, 1e19);
        p.wavelength = 400e-9 + 600e-9 * u(gen);
        p.radiative_decay = logu(1e6, 1e9);
        p.one_photon_detuning = (u(gen) < 0.5 ? -1.0 : 1.0) * logu(1e7, 1e11);
        p.raman_splitting = logu(1e8, 1e11);
        const double eta = logu(1e-2, 1e8);
        const double ef2 = units::speed_of_light * coupling_constant(p) / (2.0 * eta);
        const double ef = std::sqrt(ef2);
        // ac-Stark shift below 10% of omega0 and |Eb|^2 kept positive
        const double shift = (2.0 * u(gen) - 1.0) *
                             std::min(0.1 * p.raman_splitting, 0.9 * ef2 / std::abs(p.one_photon_detuning));
        const double eb2 = ef2 + shift * p.one_photon_detuning;
        const PumpBoundary pumps(ef, std::sqrt(eb2));
        const double beat = self_consistent_beat(p, pumps);
        const double locked = dispersion_report(p, pumps).locked_beat;
        worst = std::max(worst, std::abs(beat - locked) / std::abs(locked));
    }
    r.passed = worst <= 1e-10;
    r.detail = fmt("1000 draws, worst relative mismatch %.2e", worst);
    return r;
}

CheckResult check_bridge(const RunConfig& c)
{
    CheckResult r{"bridge", false, ""};
    const MediumParams p = c.with_alpha(std::numbers::pi / 2.0).resolved_medium();
    const double p_out = 1e-12;
    const DispersionReport d = dispersion_report(p, c.pumps);
    const double closed = linewidth_closed_form(p, c.pumps, p_out);
    const double gd = linewidth_group_delay_form(d.group_delay, 0.0, p.optical_frequency, p_out);
    const double lossy = linewidth_group_delay_form(d.group_delay, p.ground_decay, p.optical_frequency, p_out);
    const double rel = std::abs(gd / closed - 1.0);
    // group-delay and closed forms differ by (eta/(1+eta))^2, i.e. ~2/eta
    const double tol = 2.5 / d.eta;
    const bool exact = p.ground_decay != 0.0 || lossy == gd;
    r.passed = rel <= tol && exact;
    r.detail = fmt("eta=%.4g |group-delay/closed - 1|=%.3e (tol 2.5/eta=%.3e)", d.eta, rel, tol);
    return r;
}

CheckResult check_semianalytic(const RunConfig& c, const SteadyState& s)
{
    CheckResult r{"semianalytic", false, ""};
    const MediumParams p = c.resolved_medium();
    const double p_out = resolve_output_power(c, s);
    const double semi = phase_variance_semianalytic(p, c.pumps, s, p_out);
    const double closed = linewidth_closed_form(p, c.pumps, p_out);
    const double rel = std::abs(semi / closed - 1.0);
    r.passed = rel <= 1e-3;
    r.detail = fmt("semi-analytic=%.6e closed=%.6e rad/s, rel=%.2e", semi, closed, rel);
    return r;
}

CheckResult check_mc(const RunConfig& c, const SteadyState& s)
{
    CheckResult r{"mc", false, ""};
    const MediumParams p = c.resolved_medium();
    const double p_out = resolve_output_power(c, s);
    const double semi = phase_variance_semianalytic(p, c.pumps, s, p_out);
    MonteCarloOptions o{c.mc.n_realizations, c.mc.master_seed, c.mc.threads};
    const auto grid = default_omega_grid(c.pumps.drive_amplitude(), c.mc.omega_lo, c.mc.omega_hi, c.mc.n_omega);
    const MonteCarloResult mc = monte_carlo_linewidth(p, c.pumps, s, p_out, grid, o);
    const double diff = std::abs(mc.estimate - semi);
    double mean = 0.0;
    for (double v : mc.omega2_s_phi) {
        mean += v;
    }
    mean /= static_cast<double>(mc.omega2_s_phi.size());
    double flat = 0.0;
    for (std::size_t k = 0; k < mc.omega2_s_phi.size(); ++k) {
        flat = std::max(flat, std::abs(mc.omega2_s_phi[k] - mean) / mc.stderr_[k]);
    }
    r.passed = diff <= 0.15 * std::abs(semi) && diff <= 3.0 * mc.standard_error && flat <= 5.0;
    r.detail = fmt("MC=%.5e +- %.2e vs semi-analytic %.5e", mc.estimate, mc.standard_error, semi) +
               fmt(" (%.2f sigma), flatness %.2f sigma", diff / mc.standard_error, flat);
    return r;
}

}  // namespace

std::vector<CheckResult> run_validate(const RunConfig& c, const std::set<std::string>& skip,
                                      const std::function<void(const CheckResult&)>& on_result)
{
    std::vector<CheckResult> out;
    std::optional<SteadyState> steady;
    auto get_steady = [&]() -> const SteadyState& {
        if (!steady) {
            steady = solve_steady_state(c.resolved_medium(), c.pumps, c.solver);
        }
        return *steady;
    };
    for (const std::string& name : validate_check_names()) {
        if (skip.count(name)) {
            continue;
        }
        CheckResult r{name, false, ""};
        try {
            if (name == "conservation") {
                r = check_conservation(c);
            } else if (name == "threshold") {
                r = check_threshold(c);
            } else if (name == "locking") {
                r = check_locking(c);
            } else if (name == "bridge") {
                r = check_bridge(c);
            } else if (name == "semianalytic") {
                r = check_semianalytic(c, get_steady());
            } else if (name == "mc") {
                r = check_mc(c, get_steady());
            }
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        if (on_result) {
            on_result(r);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace mpo
