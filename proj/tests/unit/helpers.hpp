#pragma once

#include <cmath>
#include <numbers>

#include "mpo/medium.hpp"
#include "mpo/units.hpp"

namespace testing {

// Desk-scale Rb cell used across the suites; L set from alpha.
inline mpo::MediumParams desk_medium(double alpha = std::numbers::pi / 2.0)
{
    mpo::MediumParams p;
    p.atom_density = 3e16;
    p.wavelength = 795e-9;
    p.radiative_decay = 3.58e7;
    p.one_photon_detuning = 1e9;
    p.raman_splitting = 2.0 * std::numbers::pi * 6.834682610904e9;
    p.beam_area = 1e-6;
    p.optical_frequency = 2.0 * std::numbers::pi * mpo::units::speed_of_light / p.wavelength;
    // kappa by hand, not through the library
    const double kappa = 3.0 / (8.0 * std::numbers::pi) * p.atom_density * p.wavelength * p.wavelength *
                         p.radiative_decay;
    p.cell_length = alpha * p.one_photon_detuning / kappa;
    return p;
}

inline double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

}  // namespace testing
