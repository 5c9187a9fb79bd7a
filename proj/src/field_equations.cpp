#include "mpo/field_equations.hpp"

#include <cmath>
#include <string>

#include "mpo/errors.hpp"

namespace mpo {

FieldCoefficients FieldCoefficients::from(const MediumParams& p, double drive_amplitude)
{
    FieldCoefficients c;
    c.kappa = coupling_constant(p);
    c.one_photon_detuning = p.one_photon_detuning;
    c.ground_decay = p.ground_decay;
    c.two_photon_detuning = p.two_photon_detuning;
    c.phase_mismatch = p.phase_mismatch;
    c.singular_floor = 1e-12 * drive_amplitude;
    return c;
}

FieldState field_derivatives(const FieldState& s, const FieldCoefficients& c)
{
    constexpr cplx i{0.0, 1.0};
    const double ef2 = std::norm(s.ef);
    if (!(std::sqrt(ef2) > c.singular_floor)) {
        throw SingularStateError("field_derivatives: |Ef| = " + std::to_string(std::sqrt(ef2))
                                 + " below singular floor");
    }
    const double ef4 = ef2 * ef2;
    const double e1_2 = std::norm(s.e1);
    const double eb2 = std::norm(s.eb);
    const double k_over = c.kappa / (c.one_photon_detuning * ef4);

    const cplx ef_c = std::conj(s.ef);
    const cplx eb_c = std::conj(s.eb);
    const cplx e1_c = std::conj(s.e1);
    const cplx e2_c = std::conj(s.e2);

    FieldState d;
    d.e1 = i * k_over * (s.e1 * s.e1 * s.e2 * ef_c * eb_c + s.ef * s.eb * e2_c * (2.0 * e1_2 - ef2))
           + i * (c.kappa * cplx(-c.two_photon_detuning, c.ground_decay) / ef2
                  - c.kappa * (eb2 - ef2) / (c.one_photon_detuning * ef2) - c.phase_mismatch)
                 * s.e1;

    const cplx de2_c = i * k_over * (e1_2 - ef2) * ef_c * eb_c * s.e1;
    d.e2 = std::conj(de2_c);

    d.ef = i * k_over * e1_c * e2_c * s.eb * s.ef * s.ef;

    const cplx deb_c = -i * k_over * e1_c * e2_c * s.ef * ef2;
    d.eb = std::conj(deb_c);
    return d;
}

FieldState field_derivatives(double /*z*/, const FieldState& s, const MediumParams& p, double drive_amplitude)
{
    return field_derivatives(s, FieldCoefficients::from(p, drive_amplitude));
}

}  // namespace mpo
