#include "mpo/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "mpo/errors.hpp"
#include "mpo/threshold.hpp"

namespace mpo {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::array<double, 8>;
using Stepper = odeint::runge_kutta_dopri5<State>;

State pack(const FieldState& f)
{
    return {f.e1.real(), f.e1.imag(), f.e2.real(), f.e2.imag(),
            f.ef.real(), f.ef.imag(), f.eb.real(), f.eb.imag()};
}

FieldState unpack(const State& y)
{
    return {cplx(y[0], y[1]), cplx(y[2], y[3]), cplx(y[4], y[5]), cplx(y[6], y[7])};
}

// Integrates the propagation equations from z=0 for a trial set of entry
// values. Unknowns are normalized: u = (E2(0)/E_d, Re Eb(0)/E_d, Im Eb(0)/E_d,
// delta kappa L / E_d^2).
class Shooter {
public:
    Shooter(const MediumParams& p, double drive, double eb_target, const SolverOptions& opt)
        : params_(p), drive_(drive), eb_target_(eb_target), opt_(opt)
    {
        coeffs_ = FieldCoefficients::from(p, drive);
    }

    void set_cell_length(double length) { params_.cell_length = length; }
    double cell_length() const { return params_.cell_length; }
    double detuning_scale() const { return drive_ * drive_ / (coeffs_.kappa * params_.cell_length); }

    FieldState entry(const Eigen::Vector4d& u) const
    {
        FieldState f;
        f.e1 = 0.0;
        f.e2 = cplx(u[0] * drive_, 0.0);
        f.ef = cplx(drive_, 0.0);
        f.eb = cplx(u[1] * drive_, u[2] * drive_);
        return f;
    }

    FieldCoefficients coefficients(const Eigen::Vector4d& u) const
    {
        FieldCoefficients c = coeffs_;
        c.two_photon_detuning = u[3] * detuning_scale();
        return c;
    }

    FieldState exit(const Eigen::Vector4d& u, double atol) const
    {
        const FieldCoefficients c = coefficients(u);
        State y = pack(entry(u));
        auto rhs = [&c](const State& x, State& dxdz, double) {
            const FieldState d = field_derivatives(unpack(x), c);
            dxdz = pack(d);
        };
        const double length = params_.cell_length;
        odeint::integrate_adaptive(odeint::make_controlled(atol, opt_.rtol, Stepper()), rhs, y, 0.0, length,
                                   length / 64.0);
        return unpack(y);
    }

    Eigen::Vector4d residual(const Eigen::Vector4d& u) const
    {
        const FieldState out = exit(u, opt_.atol_factor * drive_);
        Eigen::Vector4d r;
        r << out.e2.real() / drive_, out.e2.imag() / drive_, (out.eb.real() - eb_target_) / drive_,
            out.eb.imag() / drive_;
        return r;
    }

    std::vector<FieldState> profile(const Eigen::Vector4d& u, const std::vector<double>& z) const
    {
        const FieldCoefficients c = coefficients(u);
        State y = pack(entry(u));
        auto rhs = [&c](const State& x, State& dxdz, double) { dxdz = pack(field_derivatives(unpack(x), c)); };
        std::vector<FieldState> out;
        out.reserve(z.size());
        auto observer = [&out](const State& x, double) { out.push_back(unpack(x)); };
        odeint::integrate_times(odeint::make_dense_output(opt_.atol_factor * drive_, opt_.rtol, Stepper()), rhs, y,
                                z.begin(), z.end(), params_.cell_length / 64.0, observer);
        return out;
    }

private:
    MediumParams params_;
    FieldCoefficients coeffs_;
    double drive_;
    double eb_target_;
    SolverOptions opt_;
};

struct NewtonOutcome {
    Eigen::Vector4d u;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

std::optional<Eigen::Vector4d> safe_residual(const Shooter& sh, const Eigen::Vector4d& u)
{
    try {
        Eigen::Vector4d r = sh.residual(u);
        if (!r.allFinite()) {
            return std::nullopt;
        }
        return r;
    } catch (const SingularStateError&) {
        return std::nullopt;
    } catch (const odeint::step_adjustment_error&) {
        return std::nullopt;
    } catch (const odeint::no_progress_error&) {
        return std::nullopt;
    }
}

NewtonOutcome newton(const Shooter& sh, Eigen::Vector4d u, const SolverOptions& opt)
{
    NewtonOutcome out;
    auto r0 = safe_residual(sh, u);
    if (!r0) {
        out.u = u;
        out.residual = std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::Vector4d r = *r0;
    double norm = r.norm();
    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it;
        if (norm <= opt.tolerance) {
            out.converged = true;
            break;
        }
        Eigen::Matrix4d jac;
        bool jac_ok = true;
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(u[k]));
            Eigen::Vector4d up = u;
            Eigen::Vector4d um = u;
            up[k] += h;
            um[k] -= h;
            auto rp = safe_residual(sh, up);
            auto rm = safe_residual(sh, um);
            if (!rp || !rm) {
                jac_ok = false;
                break;
            }
            jac.col(k) = (*rp - *rm) / (2.0 * h);
        }
        if (!jac_ok) {
            break;
        }
        const Eigen::Vector4d du = jac.fullPivLu().solve(-r);
        if (!du.allFinite()) {
            break;
        }

        double step = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, step *= opt.damping) {
            Eigen::Vector4d trial = u + step * du;
            if (trial[0] < 0.0) {
                continue;
            }
            auto rt = safe_residual(sh, trial);
            if (rt && rt->norm() < norm) {
                u = trial;
                r = *rt;
                norm = r.norm();
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Residual is at the integration noise level; keep the last iterate.
            out.converged = norm <= 100.0 * opt.tolerance;
            break;
        }
        out.iterations = it + 1;
    }
    if (norm <= opt.tolerance) {
        out.converged = true;
    }
    out.u = u;
    out.residual = norm;
    return out;
}

double matched_phase(const MediumParams& p, double drive)
{
    // Equal pump magnitudes: the ac-Stark term vanishes at the entry faces.
    const double kappa = coupling_constant(p);
    const double delta = -p.phase_mismatch * drive * drive / kappa;
    return delta * kappa * p.cell_length / (drive * drive);
}

double probe_gain_at(const MediumParams& p, double drive, double alpha, const SolverOptions& opt)
{
    MediumParams q = p;
    q.cell_length = alpha * p.one_photon_detuning / coupling_constant(p);
    Shooter sh(q, drive, drive, opt);
    Eigen::Vector4d u;
    u << opt.probe_amplitude, 1.0, 0.0, matched_phase(q, drive);
    const FieldState out = sh.exit(u, opt.atol_factor * opt.probe_amplitude * drive);
    return out.e2.real() / (opt.probe_amplitude * drive);
}

// Lowest alpha' in (0, alpha] at which the small-signal gain changes sign.
std::optional<double> probe_threshold(const MediumParams& p, double drive, double alpha, const SolverOptions& opt)
{
    constexpr double scan = 0.05;
    double lo = 0.0;
    double g_lo = 1.0;
    for (double a = std::min(scan, alpha);; a = std::min(a + scan, alpha)) {
        const double g = probe_gain_at(p, drive, a, opt);
        if (g <= 0.0) {
            double hi = a;
            (void)g_lo;
            for (int k = 0; k < 60 && hi - lo > 1e-12 * hi; ++k) {
                const double mid = 0.5 * (lo + hi);
                if (probe_gain_at(p, drive, mid, opt) <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        lo = a;
        g_lo = g;
        if (a >= alpha) {
            return std::nullopt;
        }
    }
}

SteadyState zero_state(const MediumParams& p, const PumpBoundary& pumps, const std::vector<double>& grid)
{
    SteadyState s;
    s.drive_amplitude = pumps.drive_amplitude();
    s.two_photon_detuning = p.two_photon_detuning;
    s.branch = Branch::zero;
    for (double x : grid) {
        s.z.push_back(x * p.cell_length);
        s.theta.push_back(0.0);
        s.fields.push_back(FieldState{0.0, 0.0, pumps.forward(), pumps.backward()});
    }
    return s;
}

}  // namespace

double small_signal_gain(const MediumParams& p, const PumpBoundary& pumps, const SolverOptions& opt)
{
    validate(p);
    const double alpha = coupling_ratio(p);
    if (!(alpha > 0.0)) {
        throw DomainError("small_signal_gain: alpha = kappa L / Delta must be > 0");
    }
    return probe_gain_at(p, pumps.drive_amplitude(), alpha, opt);
}

SteadyState solve_steady_state(const MediumParams& p, const PumpBoundary& pumps, const SolverOptions& opt)
{
    validate(p);
    const double alpha = coupling_ratio(p);
    if (!(alpha > 0.0)) {
        throw DomainError("solve_steady_state: alpha = kappa L / Delta must be > 0");
    }
    if (!pumps.equal_magnitudes(1e-9)) {
        throw DomainError("solve_steady_state: requires |Ef_in| == |Eb_in|");
    }
    const double drive = pumps.drive_amplitude();
    const std::vector<double> grid = uniform_grid(opt.grid_nodes);

    const auto onset = probe_threshold(p, drive, alpha, opt);
    if (!onset) {
        return zero_state(p, pumps, grid);
    }
    const double alpha_th = *onset;
    const double kappa = coupling_constant(p);
    auto length_for = [&](double a) { return a * p.one_photon_detuning / kappa; };

    Shooter sh(p, drive, drive, opt);

    // Continuation in alpha (via the cell length) from just above the onset.
    double a = std::min(alpha, alpha_th + opt.continuation_step);
    sh.set_cell_length(length_for(a));
    Eigen::Vector4d u;
    {
        const double b = std::sqrt(2.0 * std::max(0.0, 1.0 - alpha_th / a));
        MediumParams q = p;
        q.cell_length = length_for(a);
        u << b, std::sqrt(std::max(0.0, 1.0 - b * b)), 0.0, matched_phase(q, drive);
    }
    NewtonOutcome sol;
    while (true) {
        sol = newton(sh, u, opt);
        if (!sol.converged) {
            std::ostringstream msg;
            msg << "solve_steady_state: Newton did not converge at alpha = " << a << " (residual " << sol.residual
                << " after " << sol.iterations << " iterations)";
            throw ConvergenceError(msg.str(), sol.residual, sol.iterations);
        }
        const FieldState out = sh.exit(sol.u, opt.atol_factor * drive);
        if (std::norm(out.ef) < opt.depletion_limit * drive * drive) {
            std::ostringstream msg;
            msg << "solve_steady_state: pump depletion |Ef(L)|^2/E_d^2 = " << std::norm(out.ef) / (drive * drive)
                << " below " << opt.depletion_limit << " at alpha = " << a;
            throw ValidityError(msg.str());
        }
        if (a >= alpha) {
            break;
        }
        const double next = std::min(alpha, a + opt.continuation_step);
        // Carry the phase variable (delta kappa L / E_d^2) across the length change.
        u = sol.u;
        u[3] *= next / a;
        a = next;
        sh.set_cell_length(length_for(a));
    }

    if (sol.u[0] < opt.noise_floor) {
        return zero_state(p, pumps, grid);
    }

    std::vector<double> z(grid.size());
    std::transform(grid.begin(), grid.end(), z.begin(), [&](double x) { return x * p.cell_length; });
    std::vector<FieldState> fields = sh.profile(sol.u, z);

    const double phase_f = std::arg(pumps.forward());
    const double phase_b = std::arg(pumps.backward());
    const cplx rot_f = std::polar(1.0, phase_f);
    const cplx rot_b = std::polar(1.0, phase_b);
    const cplx rot_1 = std::polar(1.0, phase_f + phase_b);

    SteadyState s;
    s.drive_amplitude = drive;
    s.amplitude = sol.u[0] * drive;
    s.two_photon_detuning = sol.u[3] * sh.detuning_scale();
    s.residual_norm = sol.residual;
    s.iterations = sol.iterations;
    s.branch = Branch::oscillating;
    s.z = std::move(z);
    s.fields.reserve(fields.size());
    s.theta.reserve(fields.size());
    for (FieldState f : fields) {
        if (std::norm(f.ef) < opt.depletion_limit * drive * drive) {
            throw ValidityError("solve_steady_state: pump depletion beyond validity limit inside the cell");
        }
        s.theta.push_back(std::atan2(std::abs(f.e1), std::abs(f.e2)));
        f.e1 *= rot_1;
        f.ef *= rot_f;
        f.eb *= rot_b;
        s.fields.push_back(f);
    }
    return s;
}

bool zero_branch_stable(const MediumParams& p, const PumpBoundary& pumps)
{
    const double alpha = coupling_ratio(p);
    if (!(alpha > 0.0)) {
        throw DomainError("zero_branch_stable: alpha must be > 0");
    }
    const double ed2 = pumps.drive_intensity();
    const double det = boundary_determinant(ed2, p);
    if (det <= 1e-12) {
        return false;
    }
    // Positive determinant beyond a higher-order root still means an earlier
    // mode has crossed; compare against the lowest critical coupling.
    return alpha < critical_coupling(ed2, p, ThresholdCondition::boundary_determinant);
}

}  // namespace mpo
