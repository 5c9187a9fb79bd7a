#include <cmath>
#include <numbers>

#include "mpo/errors.hpp"
#include "mpo/steady_state.hpp"

namespace mpo {

std::string_view to_string(Branch b)
{
    return b == Branch::zero ? "zero" : "oscillating";
}

double analytic_amplitude(double alpha, double ef0)
{
    if (!(alpha > 0.0)) {
        throw DomainError("analytic_amplitude: alpha must be > 0");
    }
    constexpr double critical = std::numbers::pi / 2.0;
    if (alpha <= critical) {
        return 0.0;
    }
    return std::sqrt(2.0) * ef0 * std::sqrt(1.0 - critical / alpha);
}

std::vector<double> uniform_grid(int nodes)
{
    if (nodes < 2) {
        throw DomainError("uniform_grid: need at least 2 nodes");
    }
    std::vector<double> g(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        g[static_cast<std::size_t>(k)] = static_cast<double>(k) / (nodes - 1);
    }
    g.back() = 1.0;
    return g;
}

SteadyState analytic_profile(double amplitude, double ef0, double alpha, std::span<const double> z_over_l,
                             double cell_length)
{
    if (!(ef0 > 0.0) || !(amplitude >= 0.0)) {
        throw DomainError("analytic_profile: need Ef0 > 0 and E >= 0");
    }
    if (amplitude > std::sqrt(2.0) * ef0) {
        throw DomainError("analytic_profile: E exceeds sqrt(2) Ef0");
    }
    const double e2 = amplitude * amplitude;
    const double ef02 = ef0 * ef0;
    const double rate = alpha * (1.0 - e2 / (2.0 * ef02));

    SteadyState s;
    s.amplitude = amplitude;
    s.drive_amplitude = ef0;
    s.branch = amplitude > 0.0 ? Branch::oscillating : Branch::zero;
    s.z.reserve(z_over_l.size());
    s.theta.reserve(z_over_l.size());
    s.fields.reserve(z_over_l.size());
    for (double x : z_over_l) {
        const double th = rate * x;
        const double sn = std::sin(th);
        const double cs = std::cos(th);
        const double rf = ef02 - e2 * sn * sn;
        const double rb = ef02 - e2 * cs * cs;
        if (rf < 0.0 || rb < 0.0) {
            throw DomainError("analytic_profile: pump radicand negative at z/L = " + std::to_string(x));
        }
        FieldState f;
        f.e1 = cplx(0.0, -amplitude * sn);
        f.e2 = cplx(amplitude * cs, 0.0);
        f.ef = cplx(std::sqrt(rf), 0.0);
        f.eb = cplx(std::sqrt(rb), 0.0);
        s.z.push_back(x * cell_length);
        s.theta.push_back(th);
        s.fields.push_back(f);
    }
    return s;
}

}  // namespace mpo
