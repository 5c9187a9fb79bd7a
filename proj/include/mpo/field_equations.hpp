#pragma once

#include "mpo/medium.hpp"

namespace mpo {

// Slowly varying complex Rabi frequencies at one z. e1 and eb are the
// rotated (tilde) variables of the propagation equations.
struct FieldState {
    cplx e1{};
    cplx e2{};
    cplx ef{};
    cplx eb{};
};

// Constant coefficients of the propagation equations, precomputed once per solve.
struct FieldCoefficients {
    double kappa = 0.0;
    double one_photon_detuning = 1.0;
    double ground_decay = 0.0;
    double two_photon_detuning = 0.0;
    double phase_mismatch = 0.0;
    double singular_floor = 0.0;  // |Ef| below this raises SingularStateError

    static FieldCoefficients from(const MediumParams& p, double drive_amplitude);
};

// d/dz of all four fields (autonomous in z). The conjugated forms of the
// E2 and Eb equations are conjugated back before returning.
FieldState field_derivatives(const FieldState& s, const FieldCoefficients& c);

FieldState field_derivatives(double z, const FieldState& s, const MediumParams& p, double drive_amplitude);

}  // namespace mpo
