#pragma once

#include <complex>
#include <optional>

namespace mpo {

using cplx = std::complex<double>;

// Atomic and geometric constants of the double-Lambda cell, SI units,
// frequencies angular (rad/s).
struct MediumParams {
    double atom_density = 0.0;         // N, 1/m^3
    double wavelength = 795e-9;        // lambda, m
    double radiative_decay = 0.0;      // gamma_a, rad/s
    double ground_decay = 0.0;         // gamma_0, rad/s
    double one_photon_detuning = 0.0;  // Delta, rad/s (nonzero)
    double two_photon_detuning = 0.0;  // delta, rad/s
    double raman_splitting = 0.0;      // omega_0, rad/s
    double cell_length = 0.0;          // L, m
    double phase_mismatch = 0.0;       // Delta k = k2 - k1, rad/m
    double beam_area = 0.0;            // A, m^2
    double optical_frequency = 0.0;    // nu, rad/s (photon-energy carrier)
};

// Throws DomainError naming the first field that violates its invariant.
void validate(const MediumParams& p);

// Returns p after validate(p).
MediumParams validated(MediumParams p);

// Complex pump Rabi frequencies at their entry faces: forward at z=0,
// backward at z=L.
class PumpBoundary {
public:
    PumpBoundary(cplx forward, cplx backward);

    cplx forward() const noexcept { return forward_; }
    cplx backward() const noexcept { return backward_; }

    // E_d^2 = |Ef_in|^2.
    double drive_intensity() const noexcept { return std::norm(forward_); }
    double drive_amplitude() const noexcept { return std::abs(forward_); }

    // |Ef_in| == |Eb_in| up to a relative tolerance.
    bool equal_magnitudes(double rel_tol = 1e-12) const noexcept;

    // |Eb_in|^2 - |Ef_in|^2.
    double intensity_difference() const noexcept { return std::norm(backward_) - std::norm(forward_); }

private:
    cplx forward_;
    cplx backward_;
};

struct DispersionReport {
    double eta = 0.0;             // frequency stabilisation factor c kappa / 2|Ef|^2
    double group_velocity = 0.0;  // m/s
    double group_delay = 0.0;     // s
    double locked_beat = 0.0;     // nu_1 - nu_d, rad/s
    double stark_shift = 0.0;     // (|Eb|^2 - |Ef|^2)/Delta, rad/s
    std::optional<double> matched_detuning;  // absent when kappa == 0
};

// kappa = (3 / 8 pi) N lambda^2 gamma_a, rad/(m s).
double coupling_constant(const MediumParams& p);

// kappa L / Delta.
double coupling_ratio(const MediumParams& p);

// N A L.
double atom_count(const MediumParams& p);

DispersionReport dispersion_report(const MediumParams& p, const PumpBoundary& pumps);

// kappa delta/|Ef|^2 + kappa (|Eb|^2 - |Ef|^2)/(Delta |Ef|^2) + Delta k.
double phase_matching_residual(const MediumParams& p, const PumpBoundary& pumps);

// Unique root in delta of the phase-matching residual. Throws DomainError for kappa == 0.
double matched_detuning(const MediumParams& p, const PumpBoundary& pumps);

// Delta k = -2 (omega_0 - delta) / c.
double locked_phase_mismatch(double raman_splitting, double two_photon_detuning);

// Root in delta of the phase-matching residual with Delta k tied to delta via
// locked_phase_mismatch. Returns the resulting nu_1 - nu_d = omega_0 - delta.
// Throws DomainError when the residual does not depend on delta.
double self_consistent_beat(const MediumParams& p, const PumpBoundary& pumps);

}  // namespace mpo
