#include "mpo/medium.hpp"

#include <cmath>
#include <string>

#include "mpo/errors.hpp"
#include "mpo/units.hpp"

namespace mpo {

namespace {

void require(bool ok, const char* field, const char* constraint)
{
    if (!ok) {
        throw DomainError(std::string(field) + ": " + constraint);
    }
}

}  // namespace

void validate(const MediumParams& p)
{
    require(std::isfinite(p.atom_density) && p.atom_density >= 0.0, "atom_density", "must be >= 0");
    require(std::isfinite(p.wavelength) && p.wavelength > 0.0, "wavelength", "must be > 0");
    require(std::isfinite(p.radiative_decay) && p.radiative_decay > 0.0, "radiative_decay", "must be > 0");
    require(std::isfinite(p.ground_decay) && p.ground_decay >= 0.0, "ground_decay", "must be >= 0");
    require(std::isfinite(p.one_photon_detuning) && p.one_photon_detuning != 0.0, "one_photon_detuning",
            "must be nonzero");
    require(std::isfinite(p.two_photon_detuning), "two_photon_detuning", "must be finite");
    require(std::isfinite(p.raman_splitting), "raman_splitting", "must be finite");
    require(std::isfinite(p.cell_length) && p.cell_length > 0.0, "cell_length", "must be > 0");
    require(std::isfinite(p.phase_mismatch), "phase_mismatch", "must be finite");
    require(std::isfinite(p.beam_area) && p.beam_area > 0.0, "beam_area", "must be > 0");
    require(std::isfinite(p.optical_frequency) && p.optical_frequency > 0.0, "optical_frequency", "must be > 0");
}

MediumParams validated(MediumParams p)
{
    validate(p);
    return p;
}

PumpBoundary::PumpBoundary(cplx forward, cplx backward) : forward_(forward), backward_(backward)
{
    if (!(std::abs(forward) > 0.0) || !std::isfinite(std::abs(forward))) {
        throw DomainError("pumps.forward: |Ef_in| must be > 0");
    }
    if (!std::isfinite(std::abs(backward))) {
        throw DomainError("pumps.backward: must be finite");
    }
}

bool PumpBoundary::equal_magnitudes(double rel_tol) const noexcept
{
    double f = std::abs(forward_);
    return std::abs(std::abs(backward_) - f) <= rel_tol * f;
}

double coupling_constant(const MediumParams& p)
{
    return 3.0 / (8.0 * units::pi) * p.atom_density * p.wavelength * p.wavelength * p.radiative_decay;
}

double coupling_ratio(const MediumParams& p)
{
    return coupling_constant(p) * p.cell_length / p.one_photon_detuning;
}

double atom_count(const MediumParams& p)
{
    return p.atom_density * p.beam_area * p.cell_length;
}

DispersionReport dispersion_report(const MediumParams& p, const PumpBoundary& pumps)
{
    constexpr double c = units::speed_of_light;
    const double kappa = coupling_constant(p);
    const double ef2 = pumps.drive_intensity();

    DispersionReport r;
    r.eta = c * kappa / (2.0 * ef2);
    r.group_velocity = c / (1.0 + r.eta);
    r.group_delay = p.cell_length / c * (1.0 + r.eta);
    r.stark_shift = pumps.intensity_difference() / p.one_photon_detuning;
    r.locked_beat = r.eta * (p.raman_splitting + r.stark_shift) / (1.0 + r.eta);
    if (kappa > 0.0) {
        r.matched_detuning = matched_detuning(p, pumps);
    }
    return r;
}

double phase_matching_residual(const MediumParams& p, const PumpBoundary& pumps)
{
    const double kappa = coupling_constant(p);
    const double ef2 = pumps.drive_intensity();
    return kappa * p.two_photon_detuning / ef2
           + kappa * pumps.intensity_difference() / (p.one_photon_detuning * ef2)
           + p.phase_mismatch;
}

double matched_detuning(const MediumParams& p, const PumpBoundary& pumps)
{
    const double kappa = coupling_constant(p);
    if (!(kappa > 0.0)) {
        throw DomainError("matched_detuning: kappa = 0, delta drops out of the phase-matching condition");
    }
    return -pumps.intensity_difference() / p.one_photon_detuning
           - p.phase_mismatch * pumps.drive_intensity() / kappa;
}

double locked_phase_mismatch(double raman_splitting, double two_photon_detuning)
{
    return -2.0 * (raman_splitting - two_photon_detuning) / units::speed_of_light;
}

double self_consistent_beat(const MediumParams& p, const PumpBoundary& pumps)
{
    // The residual is affine in delta once Delta k follows delta; solve it from
    // two evaluations instead of the closed-form pulling formula.
    auto residual_at = [&](double delta) {
        MediumParams q = p;
        q.two_photon_detuning = delta;
        q.phase_mismatch = locked_phase_mismatch(p.raman_splitting, delta);
        return phase_matching_residual(q, pumps);
    };
    const double r0 = residual_at(0.0);
    const double slope = coupling_constant(p) / pumps.drive_intensity() + 2.0 / units::speed_of_light;
    if (!(slope > 0.0)) {
        throw DomainError("self_consistent_beat: residual independent of delta");
    }
    const double delta = -r0 / slope;
    return p.raman_splitting - delta;
}

}  // namespace mpo
