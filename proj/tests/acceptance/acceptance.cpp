// One line per criterion: "[PASS|FAIL] N name: detail". Exit 1 if any fails.
// --only N runs a single criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "mpo/app.hpp"
#include "mpo/config.hpp"
#include "mpo/noise.hpp"
#include "mpo/steady_state.hpp"
#include "mpo/threshold.hpp"
#include "mpo/units.hpp"

using namespace mpo;

namespace {

// tolerances
constexpr double zero_tol = 1e-8;          // E/E_d below pi/2
constexpr double branch_rel = 0.02;        // vs closed-form amplitude, E/E_d <= 0.2
constexpr double insert_alpha = 1.60285;
constexpr double insert_target = 0.200;
constexpr double insert_tol = 0.004;
constexpr double exact_drift = 1e-6;
constexpr double leading_drift = 1e-4;
constexpr double ideal_residual_tol = 1e-12;
constexpr double root_residual_tol = 1e-10;
constexpr double slope_tol = 0.05;
constexpr double locking_tol = 1e-10;
constexpr double bridge_tol_low = 1e-2;   // eta = 1e2
constexpr double bridge_tol_high = 1e-6;  // eta = 1e6
constexpr double semi_tol = 1e-3;
constexpr double mc_rel = 0.15;
constexpr double mc_sigma = 3.0;
constexpr double flat_sigma = 5.0;

struct Outcome {
    bool pass = false;
    std::string detail;
    double budget_s = 0.0;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome bifurcation()
{
    Outcome o{false, "", 60.0};
    const RunConfig c = default_config();
    SweepConfig s;  // [1, 4], 61 points
    s.insert_e_over_ed = 0.0;
    RunConfig sc = c;
    sc.sweep = s;
    const SweepResult r = run_sweep(sc);

    double worst_zero = 0.0;
    double worst_branch = 0.0;
    int compared = 0;
    bool all_ok = r.failures == 0;
    for (const SweepRow& row : r.rows) {
        if (row.alpha < std::numbers::pi / 2.0) {
            worst_zero = std::max(worst_zero, row.e_over_ed);
        } else if (row.e_over_ed > 0.0 && row.e_over_ed <= 0.2) {
            worst_branch = std::max(worst_branch, std::abs(row.e_over_ed / row.analytic - 1.0));
            ++compared;
        }
    }
    const SteadyState ins = solve_steady_state(c.with_alpha(insert_alpha).resolved_medium(), c.pumps, c.solver);
    const double e_ins = ins.amplitude / ins.drive_amplitude;
    o.pass = all_ok && worst_zero <= zero_tol && compared > 0 && worst_branch <= branch_rel &&
             std::abs(e_ins - insert_target) <= insert_tol;
    o.detail = fmt("zero side max E/E_d=%.1e; %.0f branch points, worst rel %.2e; ", worst_zero, compared,
                   worst_branch) +
               fmt("alpha=1.60285 E/E_d=%.5f (want 0.200+-0.004)", e_ins);
    return o;
}

Outcome conservation()
{
    Outcome o{false, "", 5.0};
    const RunConfig c = default_config();  // gamma0 = 0, matched, 257 nodes
    double alpha = 0.0;
    const SteadyState s = solve_at_amplitude(c, 0.2, &alpha);
    const ConservationAudit a = conserved_quantities(s);
    const double e2 = s.amplitude * s.amplitude;
    const double quartic = max_abs_drift(a.quartic) / (s.drive_amplitude * s.drive_amplitude * e2);
    o.pass = a.gen_drift <= exact_drift && a.pump_drift <= exact_drift && quartic <= leading_drift &&
             a.mixed_drift <= leading_drift;
    o.detail = fmt("E/E_d=%.4f nodes=%.0f gen=%.1e pump=%.1e ", s.amplitude / s.drive_amplitude,
                   static_cast<double>(s.z.size()), a.gen_drift, a.pump_drift) +
               fmt("quartic/(E_d^2 E^2)=%.1e mixed=%.1e", quartic, a.mixed_drift);
    return o;
}

Outcome threshold()
{
    Outcome o{false, "", 30.0};
    const RunConfig c = default_config();
    MediumParams ideal = c.with_alpha(std::numbers::pi / 2.0).resolved_medium();
    ideal.ground_decay = 0.0;
    const double ideal_res = std::abs(threshold_residual(c.pumps.drive_intensity(), ideal));

    MediumParams p = c.with_alpha(std::numbers::pi).resolved_medium();
    std::vector<double> lg, le;
    bool roots_ok = true;
    ThresholdResult at100;
    for (double g0 : {1.0, 10.0, 100.0}) {
        p.ground_decay = g0;
        const ThresholdResult t = threshold_pump_intensity(p);
        roots_ok = roots_ok && t.feasible && std::abs(t.residual_at_root) <= root_residual_tol &&
                   t.pump_intensity_threshold > t.floor;
        lg.push_back(std::log(g0));
        le.push_back(std::log(t.pump_intensity_threshold));
        at100 = t;
    }
    const double slope = (le.back() - le.front()) / (lg.back() - lg.front());
    const double lo = std::sqrt(0.99 * at100.pump_intensity_threshold);
    const double hi = std::sqrt(1.01 * at100.pump_intensity_threshold);
    const bool flip = solve_steady_state(p, PumpBoundary(lo, lo)).branch == Branch::zero &&
                      solve_steady_state(p, PumpBoundary(hi, hi)).branch == Branch::oscillating;

    ThresholdOptions q;
    q.condition = ThresholdCondition::quoted;
    const ThresholdResult quoted = threshold_pump_intensity(p, q);
    o.pass = ideal_res <= ideal_residual_tol && roots_ok && std::abs(slope - 1.0) <= slope_tol && flip;
    o.detail = fmt("ideal residual=%.1e; slope=%.4f; E_d^2(100/s)=%.5e; flip=", ideal_res, slope,
                   at100.pump_intensity_threshold) +
               (flip ? "yes" : "no") +
               fmt("; quoted-form E_d^2=%.5e (%+.2f%%)", quoted.pump_intensity_threshold,
                   100.0 * (quoted.pump_intensity_threshold / at100.pump_intensity_threshold - 1.0));
    return o;
}

Outcome locking()
{
    Outcome o{false, "", 5.0};
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(gen)); };
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        MediumParams p = default_config().medium;
        p.atom_density = logu(1e14, 1e19);
        p.wavelength = 400e-9 + 600e-9 * u(gen);
        p.radiative_decay = logu(1e6, 1e9);
        p.one_photon_detuning = (u(gen) < 0.5 ? -1.0 : 1.0) * logu(1e7, 1e11);
        p.raman_splitting = logu(1e8, 1e11);
        const double ef2 = units::speed_of_light * coupling_constant(p) / (2.0 * logu(1e-2, 1e8));
        const double shift = (2.0 * u(gen) - 1.0) *
                             std::min(0.1 * p.raman_splitting, 0.9 * ef2 / std::abs(p.one_photon_detuning));
        const PumpBoundary b(std::sqrt(ef2), std::sqrt(ef2 + shift * p.one_photon_detuning));
        const double locked = dispersion_report(p, b).locked_beat;
        worst = std::max(worst, std::abs(self_consistent_beat(p, b) - locked) / std::abs(locked));
    }

    MediumParams p = default_config().medium;
    const double eta = 5e6;
    const double ef = std::sqrt(units::speed_of_light * coupling_constant(p) / (2.0 * eta));
    const PumpBoundary b(ef, ef);
    const DispersionReport d = dispersion_report(p, b);
    const double pull = std::abs(d.locked_beat - p.raman_splitting) / p.raman_splitting;
    const bool pull_ok = std::abs(pull * (1.0 + d.eta) - 1.0) <= 1e-6 && std::abs(pull - 2.0e-7) <= 0.05e-7;
    o.pass = worst <= locking_tol && pull_ok;
    o.detail = fmt("1000 draws worst rel %.1e; eta=%.3g pulling %.4e (1/(1+eta)=%.4e)", worst, d.eta, pull,
                   1.0 / (1.0 + d.eta));
    return o;
}

Outcome bridge()
{
    Outcome o{false, "", 1.0};
    const RunConfig c = default_config();
    const MediumParams p = c.with_alpha(std::numbers::pi / 2.0).resolved_medium();
    std::string detail;
    bool pass = true;
    for (auto [eta, tol] : {std::pair{1e2, bridge_tol_low}, std::pair{1e6, bridge_tol_high}}) {
        const double ef = std::sqrt(units::speed_of_light * coupling_constant(p) / (2.0 * eta));
        const PumpBoundary b(ef, ef);
        const DispersionReport d = dispersion_report(p, b);
        const double closed = linewidth_closed_form(p, b, 1e-9);
        const double gd = linewidth_group_delay_form(d.group_delay, 0.0, p.optical_frequency, 1e-9);
        const double rel = std::abs(gd / closed - 1.0);
        pass = pass && rel <= tol;
        detail += fmt("eta=%.0e rel=%.3e (tol %.0e, 2/eta=%.1e); ", eta, rel, tol, 2.0 / eta);
    }
    const double tau = 3.7e-5;
    const bool same = linewidth_group_delay_form(tau, 0.0, 2.4e15, 1e-9) ==
                      std::numbers::pi * std::numbers::pi / 8.0 / tau * (1.0 / tau) * units::hbar * 2.4e15 / 1e-9;
    o.pass = pass && same;
    o.detail = detail + "lossy form at gamma0=0 identical: " + (same ? "yes" : "no");
    return o;
}

Outcome noise_chain()
{
    Outcome o{false, "", 600.0};
    const RunConfig c = default_config();
    const MediumParams p = c.resolved_medium();
    const SteadyState s = solve_steady_state(p, c.pumps, c.solver);
    const double p_out = resolve_output_power(c, s);
    const double semi = phase_variance_semianalytic(p, c.pumps, s, p_out);
    const double closed = linewidth_closed_form(p, c.pumps, p_out);
    const double semi_rel = std::abs(semi / closed - 1.0);

    MonteCarloOptions mo;
    mo.n_realizations = 1000;
    mo.master_seed = 20240601;
    const auto grid = default_omega_grid(c.pumps.drive_amplitude());
    const MonteCarloResult mc = monte_carlo_linewidth(p, c.pumps, s, p_out, grid, mo);
    const double diff = std::abs(mc.estimate - semi);
    double mean = 0.0;
    for (double v : mc.omega2_s_phi) {
        mean += v / static_cast<double>(mc.omega2_s_phi.size());
    }
    double flat = 0.0;
    for (std::size_t k = 0; k < mc.omega.size(); ++k) {
        flat = std::max(flat, std::abs(mc.omega2_s_phi[k] - mean) / mc.stderr_[k]);
    }
    o.pass = s.z.size() == 257 && grid.size() == 8 && semi_rel <= semi_tol && diff <= mc_rel * semi &&
             diff <= mc_sigma * mc.standard_error && flat <= flat_sigma;
    o.detail = fmt("semi/closed-1=%.1e; MC=%.4g+-%.2g vs %.4g rad/s ", semi_rel, mc.estimate, mc.standard_error,
                   semi) +
               fmt("(%.1f%%, %.2f sigma); flatness %.2f sigma", 100.0 * diff / semi, diff / mc.standard_error, flat);
    return o;
}

std::string slurp(const std::filesystem::path& f)
{
    std::ifstream in(f, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string("\"") + MPO_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome determinism()
{
    Outcome o{false, "", 600.0};
    const auto dir = std::filesystem::temp_directory_path() / ("mpo_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string cfg = std::string("--config \"") + MPO_DEFAULT_CONFIG + "\"";
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const int ra = run_cli(cfg + " --seed 31 --out \"" + a.string() + "\" mc-linewidth");
    const int rb = run_cli(cfg + " --seed 31 --out \"" + b.string() + "\" mc-linewidth");
    const std::string sa = slurp(a);
    const bool identical = ra == 0 && rb == 0 && !sa.empty() && sa == slurp(b);
    const int rv = run_cli(cfg + " validate");
    std::filesystem::remove_all(dir);
    o.pass = identical && rv == 0;
    o.detail = std::string("mc-linewidth runs byte-identical: ") + (identical ? "yes" : "no") +
               fmt(" (%.0f bytes); validate exit %.0f", static_cast<double>(sa.size()), rv);
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::string(argv[k]) == "--only" && k + 1 < argc) {
            only = std::atoi(argv[++k]);
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"bifurcation", bifurcation}, {"conservation", conservation}, {"threshold", threshold},
        {"locking", locking},         {"bridge", bridge},             {"noise-chain", noise_chain},
        {"determinism", determinism},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int n = static_cast<int>(k) + 1;
        if (only != 0 && only != n) {
            continue;
        }
        Outcome r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r = criteria[k].second();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = r.budget_s == 0.0 || dt <= r.budget_s;
        const bool ok = r.pass && in_time;
        all = all && ok;
        std::printf("[%s] %d %s: %s; %.2f s (budget %.0f s)\n", ok ? "PASS" : "FAIL", n, criteria[k].first.c_str(),
                    r.detail.c_str(), dt, r.budget_s);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
