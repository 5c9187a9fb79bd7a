#include "mpo/threshold.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mpo/errors.hpp"
#include "mpo/units.hpp"

namespace mpo {

namespace {

struct Reduced {
    double alpha;  // |kappa L / Delta|
    double r;      // gamma0 Delta / (2 E_d^2)
};

Reduced reduce(double ed2, const MediumParams& p, const char* who)
{
    if (!(ed2 > 0.0)) {
        throw DomainError(std::string(who) + ": Ed2 must be > 0");
    }
    return {std::abs(coupling_ratio(p)), p.ground_decay * p.one_photon_detuning / (2.0 * ed2)};
}

// cos(a s) + c(s) sin(a s) with s = sqrt(1 - r^2); c = r (quoted) or r/s (determinant).
double evaluate(const Reduced& x, bool exact)
{
    const double r = x.r;
    const double a = x.alpha;
    const double d = 1.0 - r * r;
    if (d > 0.0) {
        const double s = std::sqrt(d);
        if (!exact) {
            return std::cos(a * s) + r * std::sin(a * s);
        }
        // sin(a s)/s -> a as s -> 0
        const double sinc = (a * s < 1e-8) ? a : std::sin(a * s) / s;
        return std::cos(a * s) + r * sinc;
    }
    const double s = std::sqrt(-d);
    if (!exact) {
        return std::cosh(a * s) + r * std::sinh(a * s);
    }
    const double sinhc = (a * s < 1e-8) ? a : std::sinh(a * s) / s;
    return std::cosh(a * s) + r * sinhc;
}

}  // namespace

std::string_view to_string(ThresholdCondition c)
{
    return c == ThresholdCondition::quoted ? "quoted" : "boundary_determinant";
}

ThresholdCondition threshold_condition_from_string(std::string_view s)
{
    if (s == "quoted") {
        return ThresholdCondition::quoted;
    }
    if (s == "boundary_determinant" || s == "determinant") {
        return ThresholdCondition::boundary_determinant;
    }
    throw DomainError("threshold condition: expected quoted|boundary_determinant, got '" + std::string(s) + "'");
}

double threshold_residual(double ed2, const MediumParams& p)
{
    return evaluate(reduce(ed2, p, "threshold_residual"), false);
}

double boundary_determinant(double ed2, const MediumParams& p)
{
    return evaluate(reduce(ed2, p, "boundary_determinant"), true);
}

double threshold_condition(double ed2, const MediumParams& p, ThresholdCondition c)
{
    return c == ThresholdCondition::quoted ? threshold_residual(ed2, p) : boundary_determinant(ed2, p);
}

double critical_coupling(double ed2, const MediumParams& p, ThresholdCondition c)
{
    const Reduced x = reduce(ed2, p, "critical_coupling");
    if (x.r >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double s = std::sqrt(1.0 - x.r * x.r);
    const double phase = c == ThresholdCondition::quoted ? std::numbers::pi - std::atan2(1.0, x.r)
                                                         : std::numbers::pi - std::atan2(s, x.r);
    return phase / s;
}

ThresholdResult threshold_pump_intensity(const MediumParams& p, const ThresholdOptions& opt)
{
    const double alpha = coupling_ratio(p);
    if (!(alpha > 0.0)) {
        throw DomainError("threshold_pump_intensity: alpha = kappa L / Delta must be > 0");
    }
    ThresholdResult res;
    res.condition = opt.condition;
    res.floor = p.ground_decay * std::abs(p.one_photon_detuning) / 2.0;

    if (p.ground_decay == 0.0) {
        res.alpha_critical = std::numbers::pi / 2.0;
        res.feasible = alpha >= res.alpha_critical;
        res.pump_intensity_threshold = 0.0;
        res.residual_at_root = std::cos(res.alpha_critical);
        return res;
    }

    auto f = [&](double ed2) { return threshold_condition(ed2, p, opt.condition); };
    const double lo0 = res.floor * (1.0 + 1e-12);
    const double hi0 = res.floor * opt.ed2_max_factor;
    constexpr int scan = 2000;
    const double ratio = std::pow(hi0 / lo0, 1.0 / scan);

    double lo = lo0;
    double f_lo = f(lo);
    double hi = 0.0;
    double f_hi = 0.0;
    bool bracket = false;
    for (int k = 1; k <= scan; ++k) {
        const double x = (k == scan) ? hi0 : lo0 * std::pow(ratio, k);
        const double fx = f(x);
        if ((fx <= 0.0) != (f_lo <= 0.0)) {
            hi = x;
            f_hi = fx;
            bracket = true;
            break;
        }
        lo = x;
        f_lo = fx;
    }
    if (!bracket) {
        res.feasible = false;
        res.residual_at_root = f_lo;
        res.alpha_critical = alpha;
        res.pump_intensity_threshold = std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    double mid = hi;
    double f_mid = f_hi;
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        f_mid = f(mid);
        if (std::abs(f_mid) <= 1e-13 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            break;
        }
        if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    res.pump_intensity_threshold = mid;
    res.residual_at_root = f_mid;
    res.feasible = std::abs(f_mid) <= 1e-10;
    res.alpha_critical = critical_coupling(mid, p, opt.condition);
    return res;
}

double threshold_photon_flux(const MediumParams& p, double prefactor)
{
    if (!(prefactor > 0.0)) {
        throw DomainError("threshold_photon_flux: prefactor must be > 0");
    }
    return prefactor * atom_count(p) * p.ground_decay;
}

double photons_in_cell(double p_out, double tau_gr, double nu)
{
    if (!(nu > 0.0)) {
        throw DomainError("photons_in_cell: nu must be > 0");
    }
    if (p_out < 0.0 || tau_gr < 0.0) {
        throw DomainError("photons_in_cell: P_out and tau_gr must be >= 0");
    }
    return p_out * tau_gr / (2.0 * units::hbar * nu);
}

}  // namespace mpo
