#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mpo/errors.hpp"
#include "mpo/field_equations.hpp"

using namespace mpo;
using testing::desk_medium;

TEST_SUITE("field_equations") {

TEST_CASE("pump-only fixed point")
{
    const MediumParams p = desk_medium();
    const FieldState s{0.0, 0.0, cplx(3e7, 1e7), cplx(-2e7, 2.5e7)};
    const FieldState d = field_derivatives(0.0, s, p, 5e7);
    CHECK(d.e1 == cplx(0.0));
    CHECK(d.e2 == cplx(0.0));
    CHECK(d.ef == cplx(0.0));
    CHECK(d.eb == cplx(0.0));
}

TEST_CASE("leading coupling independent of the common pump amplitude")
{
    const MediumParams p = desk_medium();
    const double kappa = coupling_constant(p);
    const cplx e2(3e-3, -1e-3);
    for (double f : {1e6, 2e6, 5e7}) {
        const FieldState s{0.0, e2, f, f};
        const FieldState d = field_derivatives(0.0, s, p, f);
        // -i kappa / Delta conj(E2)
        const cplx oracle = cplx(0.0, -kappa / p.one_photon_detuning) * std::conj(e2);
        CHECK(std::abs(d.e1 - oracle) <= 1e-14 * std::abs(oracle));
    }
}

TEST_CASE("ground-state loss term")
{
    MediumParams p = desk_medium();
    p.ground_decay = 250.0;
    const double f = 4e7;
    const double x = 1e-3;
    const FieldState s{x, 0.0, f, f};
    const FieldState d = field_derivatives(0.0, s, p, f);
    const double oracle = -coupling_constant(p) * p.ground_decay / (f * f) * x;
    CHECK(d.e1.real() == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(d.e1.imag()) <= 1e-9 * std::abs(oracle));
}

TEST_CASE("constants of motion are stationary for arbitrary states")
{
    MediumParams p = desk_medium();
    p.ground_decay = 0.0;
    p.two_photon_detuning = 1.3e5;
    p.phase_mismatch = 0.7;
    std::mt19937_64 gen(11);
    std::normal_distribution<double> n(0.0, 1.0);
    auto c = [&](double scale) { return cplx(n(gen), n(gen)) * scale; };
    for (int k = 0; k < 200; ++k) {
        const FieldState s{c(1e7), c(1e7), c(5e7), c(5e7)};
        const FieldState d = field_derivatives(0.0, s, p, 5e7);
        const double g = 2.0 * (std::conj(s.e1) * d.e1 + std::conj(s.e2) * d.e2).real();
        const double q = 2.0 * (std::conj(s.ef) * d.ef + std::conj(s.eb) * d.eb).real();
        // |Ef|^2 exp(|E1|^2/|Ef|^2)
        const double ef2 = std::norm(s.ef);
        const double x = std::norm(s.e1) / ef2;
        const double def2 = 2.0 * (std::conj(s.ef) * d.ef).real();
        const double de12 = 2.0 * (std::conj(s.e1) * d.e1).real();
        const double dexp = std::exp(x) * (def2 + de12 - x * def2);
        const double scale = std::abs((std::conj(s.e1) * d.e1).real()) + std::abs((std::conj(s.ef) * d.ef).real()) +
                             std::abs((std::conj(s.e2) * d.e2).real()) + 1.0;
        CHECK(std::abs(g) <= 1e-12 * scale);
        CHECK(std::abs(q) <= 1e-12 * scale);
        CHECK(std::abs(dexp) <= 1e-12 * scale * std::exp(x));
    }
}

TEST_CASE("singular guard")
{
    const MediumParams p = desk_medium();
    const FieldState s{1.0, 1.0, 1e-6, 5e7};
    CHECK_THROWS_AS(field_derivatives(0.0, s, p, 5e7), SingularStateError);
}

}
