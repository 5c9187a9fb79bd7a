#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mpo/steady_state.hpp"

namespace mpo {

double max_abs_drift(std::span<const double> q)
{
    double m = 0.0;
    for (double v : q) {
        m = std::max(m, std::abs(v - q.front()));
    }
    return m;
}

ConservationAudit conserved_quantities(const SteadyState& s)
{
    ConservationAudit a;
    const double ed2 = s.drive_amplitude * s.drive_amplitude;
    a.floor = 1e-30 * ed2 * ed2;
    for (const FieldState& f : s.fields) {
        a.gen_sum.push_back(std::norm(f.e1) + std::norm(f.e2));
        a.pump_sum.push_back(std::norm(f.ef) + std::norm(f.eb));
        a.quartic.push_back((std::conj(f.ef) * std::conj(f.eb) * f.e1 * f.e2).real());
        a.mixed.push_back(std::norm(f.ef) + std::norm(f.e1));
    }
    auto rel = [&a](const std::vector<double>& q) {
        if (q.empty()) {
            return 0.0;
        }
        return max_abs_drift(q) / std::max(std::abs(q.front()), a.floor);
    };
    a.gen_drift = rel(a.gen_sum);
    a.pump_drift = rel(a.pump_sum);
    a.quartic_drift = rel(a.quartic);
    a.mixed_drift = rel(a.mixed);
    return a;
}

void write_profile_csv(std::ostream& os, const SteadyState& s)
{
    os << "z_m,reE1,imE1,reE2,imE2,reEf,imEf,reEb,imEb\n";
    char buf[512];
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        const FieldState& f = s.fields[k];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.z[k],
                      f.e1.real(), f.e1.imag(), f.e2.real(), f.e2.imag(), f.ef.real(), f.ef.imag(), f.eb.real(),
                      f.eb.imag());
        os << buf;
    }
}

}  // namespace mpo
