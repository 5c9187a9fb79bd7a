#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "mpo/errors.hpp"
#include "mpo/noise.hpp"
#include "mpo/steady_state.hpp"

using namespace mpo;
using testing::desk_medium;
using testing::rel;

namespace {

constexpr double ed = 5e7;
const PumpBoundary pumps(ed, ed);
constexpr double near_alpha = 1.5711104;  // E/E_d ~ 0.02

const SteadyState& near_threshold()
{
    static const SteadyState s = solve_steady_state(desk_medium(near_alpha), pumps);
    return s;
}

double power_of(const SteadyState& s, const MediumParams& p)
{
    return output_power_from_rabi(std::abs(s.fields.back().e1), p);
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("fluctuation system")
{
    const MediumParams p = desk_medium();
    const double kappa = coupling_constant(p);
    const FluctuationSystem f0 = fluctuation_system(0.0, p, pumps);
    CHECK(f0.matrix(0, 0) == cplx(0.0));
    CHECK(f0.matrix(1, 1) == cplx(0.0));
    CHECK(f0.matrix(0, 1) == cplx(0.0, kappa / p.one_photon_detuning));
    CHECK(f0.matrix(1, 0) == f0.matrix(0, 1));

    const double w = 1e-3 * ed;
    const FluctuationSystem f = fluctuation_system(w, p, pumps);
    CHECK(f.matrix(0, 1) == f.matrix(1, 0));
    const double eta = units::speed_of_light * kappa / (2.0 * ed * ed);
    const double dispersion = kappa * w / (ed * ed);
    const double vacuum = w / units::speed_of_light;
    CHECK(dispersion / vacuum == doctest::Approx(2.0 * eta).epsilon(1e-13));
    CHECK(std::abs(f.matrix(0, 0).imag() + dispersion + vacuum) <= 1e-14 * dispersion);

    MediumParams half = p;
    half.beam_area /= 2.0;
    CHECK(fluctuation_system(w, half, pumps).noise_coefficient ==
          doctest::Approx(2.0 * f.noise_coefficient).epsilon(1e-14));

    CHECK_THROWS_AS(fluctuation_system(0.02 * ed, p, pumps), ValidityError);
}

TEST_CASE("closed-form linewidth")
{
    MediumParams p = desk_medium();
    p.optical_frequency = 2.4e15;
    const double e = 1e6;  // E_d^2 = 1e12
    const PumpBoundary b(e, e);
    const double v = linewidth_closed_form(p, b, 1e-12);
    CHECK(v == doctest::Approx(2.0 * (1e24 / 1e18) * (units::hbar * 2.4e15) / 1e-12).epsilon(1e-12));
    CHECK(v == doctest::Approx(5.06e-1).epsilon(2e-3));
    CHECK(linewidth_closed_form(p, b, 2e-12) == doctest::Approx(v / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(linewidth_closed_form(p, b, 0.0), DomainError);
}

TEST_CASE("group-delay form")
{
    const double tau = 2e-4;
    const double nu = 2.4e15;
    const double ideal = std::numbers::pi * std::numbers::pi / 8.0 / (tau * tau) * units::hbar * nu / 1e-12;
    CHECK(linewidth_group_delay_form(tau, 0.0, nu, 1e-12) == doctest::Approx(ideal).epsilon(1e-15));
    CHECK(linewidth_group_delay_form(tau, 10.0 / tau, nu, 1e-12) / ideal == doctest::Approx(21.0).epsilon(1e-14));
    const double g0 = 1e6 / tau;
    const double limit = std::numbers::pi * std::numbers::pi / 4.0 * g0 / tau * units::hbar * nu / 1e-12;
    CHECK(linewidth_group_delay_form(tau, g0, nu, 1e-12) == doctest::Approx(limit).epsilon(1e-5));
    CHECK_THROWS_AS(linewidth_group_delay_form(0.0, 0.0, nu, 1.0), DomainError);
    CHECK_THROWS_AS(linewidth_group_delay_form(1.0, 0.0, nu, -1.0), DomainError);
}

TEST_CASE("loss penalty ratio is exact")
{
    for (double tau : {1e-7, 3e-5, 2e-3}) {
        for (double g0 : {0.0, 1.0, 1e3, 1e7}) {
            const double lossy = linewidth_group_delay_form(tau, g0, 2.4e15, 1e-9);
            const double ideal = linewidth_group_delay_form(tau, 0.0, 2.4e15, 1e-9);
            CHECK(rel(lossy / ideal, 1.0 + 2.0 * g0 * tau) <= 1e-14);
            CHECK(lossy >= ideal);
        }
    }
}

TEST_CASE("linewidths decrease with output power")
{
    const MediumParams p = desk_medium();
    const SteadyState& s = near_threshold();
    double last[3] = {1e300, 1e300, 1e300};
    for (double pw : {1e-12, 1e-10, 1e-8}) {
        const double v[3] = {linewidth_closed_form(p, pumps, pw), linewidth_group_delay_form(1e-6, 10.0, 2.4e15, pw),
                             phase_variance_semianalytic(desk_medium(near_alpha), pumps, s, pw)};
        for (int k = 0; k < 3; ++k) {
            CHECK(v[k] < last[k]);
            last[k] = v[k];
        }
    }
}

TEST_CASE("closed-form vs group-delay form at critical coupling")
{
    // (pi^2/8) tau^-2 with tau = (L/c)(1+eta), kappa L = (pi/2) Delta, equals
    // 2 E_d^4/Delta^2 times (eta/(1+eta))^2
    for (double eta : {1e2, 1e4, 1e6}) {
        const MediumParams p = desk_medium(std::numbers::pi / 2.0);
        const double e2 = units::speed_of_light * coupling_constant(p) / (2.0 * eta);
        const PumpBoundary b(std::sqrt(e2), std::sqrt(e2));
        const DispersionReport d = dispersion_report(p, b);
        const double ratio = linewidth_group_delay_form(d.group_delay, 0.0, p.optical_frequency, 1e-9) /
                             linewidth_closed_form(p, b, 1e-9);
        const double eta_actual = d.eta;
        CHECK(rel(ratio, std::pow(eta_actual / (1.0 + eta_actual), 2)) <= 1e-12);
    }
}

TEST_CASE("rabi <-> power")
{
    const MediumParams p = desk_medium();
    const double e1 = 1.234e6;
    CHECK(rabi_from_output_power(output_power_from_rabi(e1, p), p) == doctest::Approx(e1).epsilon(1e-14));
}

TEST_CASE("semi-analytic linewidth")
{
    const MediumParams p = desk_medium(near_alpha);
    const SteadyState& s = near_threshold();
    const double pw = power_of(s, p);
    const double semi = phase_variance_semianalytic(p, pumps, s, pw);
    CHECK(rel(semi, linewidth_closed_form(p, pumps, pw)) <= 1e-3);

    // integral oracle: Delta/(2 kappa) (1 - E^2/2E_d^2)^-1 (sin theta cos theta over a quarter turn)
    const double kappa = coupling_constant(p);
    const double eta = dispersion_report(p, pumps).eta;
    const double e1 = rabi_from_output_power(pw, p);
    const double d = kappa * kappa * p.cell_length / (atom_count(p) * p.one_photon_detuning);
    const double x = s.amplitude * s.amplitude / (2.0 * ed * ed);
    const double oracle = std::pow(kappa * units::speed_of_light / (p.one_photon_detuning * e1 * (1.0 + eta)), 2) *
                          d * p.one_photon_detuning / (2.0 * kappa) / (1.0 - x);
    CHECK(rel(semi, oracle) <= 1e-5);

    MediumParams empty = p;
    empty.atom_density = 0.0;
    CHECK(phase_variance_semianalytic(empty, pumps, s, pw) == 0.0);

    const SteadyState zero = solve_steady_state(desk_medium(1.0), pumps);
    CHECK_THROWS_AS(phase_variance_semianalytic(p, pumps, zero, pw), DomainError);
}

TEST_CASE("default omega grid")
{
    const auto g = default_omega_grid(ed);
    REQUIRE(g.size() == 8);
    CHECK(g.front() == doctest::Approx(1e-4 * ed));
    CHECK(g.back() == doctest::Approx(1e-2 * ed));
    for (std::size_t k = 1; k < g.size(); ++k) {
        CHECK(g[k] / g[k - 1] == doctest::Approx(std::pow(100.0, 1.0 / 7.0)));
    }
}

TEST_CASE("Monte-Carlo contract")
{
    const MediumParams p = desk_medium(near_alpha);
    const SteadyState& s = near_threshold();
    const double pw = power_of(s, p);
    const auto grid = default_omega_grid(ed);

    MonteCarloOptions opt;
    opt.n_realizations = 200;
    opt.master_seed = 99;
    opt.threads = 1;
    const MonteCarloResult a = monte_carlo_linewidth(p, pumps, s, pw, grid, opt);
    const MonteCarloResult b = monte_carlo_linewidth(p, pumps, s, pw, grid, opt);
    opt.threads = 3;
    const MonteCarloResult c = monte_carlo_linewidth(p, pumps, s, pw, grid, opt);
    CHECK(a.estimate == b.estimate);
    CHECK(a.estimate == c.estimate);
    CHECK(a.standard_error == c.standard_error);
    CHECK(a.omega2_s_phi == c.omega2_s_phi);

    opt.master_seed = 100;
    CHECK(monte_carlo_linewidth(p, pumps, s, pw, grid, opt).estimate != a.estimate);

    MediumParams empty = p;
    empty.atom_density = 0.0;
    const MonteCarloResult z = monte_carlo_linewidth(empty, pumps, s, pw, grid, opt);
    CHECK(z.estimate == 0.0);
    CHECK(z.standard_error == 0.0);

    opt.n_realizations = 99;
    CHECK_THROWS_AS(monte_carlo_linewidth(p, pumps, s, pw, grid, opt), DomainError);
    opt.n_realizations = 200;
    CHECK_THROWS_AS(monte_carlo_linewidth(p, pumps, s, pw, {0.5 * ed}, opt), ValidityError);
    const SteadyState zero = solve_steady_state(desk_medium(1.0), pumps);
    CHECK_THROWS_AS(monte_carlo_linewidth(p, pumps, zero, pw, grid, opt), DomainError);
}

TEST_CASE("Monte-Carlo agrees with the semi-analytic value and is white")
{
    const MediumParams p = desk_medium(near_alpha);
    const SteadyState& s = near_threshold();
    const double pw = power_of(s, p);
    const double semi = phase_variance_semianalytic(p, pumps, s, pw);
    MonteCarloOptions opt;
    opt.n_realizations = 1000;
    opt.master_seed = 4242;
    const MonteCarloResult r = monte_carlo_linewidth(p, pumps, s, pw, default_omega_grid(ed), opt);
    CHECK(std::abs(r.estimate - semi) <= 0.15 * semi);
    CHECK(std::abs(r.estimate - semi) <= 3.0 * r.standard_error);
    double mean = 0.0;
    for (double v : r.omega2_s_phi) {
        mean += v / static_cast<double>(r.omega2_s_phi.size());
    }
    for (std::size_t k = 0; k < r.omega.size(); ++k) {
        CHECK(std::abs(r.omega2_s_phi[k] - mean) <= 5.0 * r.stderr_[k]);
    }
}

TEST_CASE("Monte-Carlo scaling laws")
{
    const SteadyState& s = near_threshold();
    const MediumParams p = desk_medium(near_alpha);
    const double pw = power_of(s, p);
    const auto grid = default_omega_grid(ed);
    MonteCarloOptions opt;
    opt.n_realizations = 200;
    const MonteCarloResult base = monte_carlo_linewidth(p, pumps, s, pw, grid, opt);

    // same draws: 10x power -> 1/10
    const MonteCarloResult more_power = monte_carlo_linewidth(p, pumps, s, 10.0 * pw, grid, opt);
    CHECK(std::log10(more_power.estimate / base.estimate) == doctest::Approx(-1.0).epsilon(1e-9));

    // 10x atoms at the same generated Rabi frequency -> 1/10
    MediumParams wide = p;
    wide.beam_area *= 10.0;
    const MonteCarloResult more_atoms = monte_carlo_linewidth(wide, pumps, s, 10.0 * pw, grid, opt);
    CHECK(rabi_from_output_power(10.0 * pw, wide) == doctest::Approx(rabi_from_output_power(pw, p)).epsilon(1e-14));
    CHECK(std::log10(more_atoms.estimate / base.estimate) == doctest::Approx(-1.0).epsilon(1e-9));
}

}
