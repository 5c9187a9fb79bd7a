#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpo/errors.hpp"
#include "mpo/noise.hpp"
#include "mpo/units.hpp"

namespace mpo {

namespace {

using Row4 = std::array<cplx, 4>;  // weights on (Re f1, Im f1, Re f2, Im f2) of one cell

// Response of dE1*(L) to a unit force in each quadrature of each cell, for the
// boundary conditions dE1*(0) = 0, dE2(L) = 0. Forces are constant over a cell
// and the cell transfer matrix is exact.
std::vector<Row4> response(double omega, const std::vector<double>& z, const std::vector<double>& slope,
                           double kappa, double ed2)
{
    const double c = units::speed_of_light;
    const std::size_t cells = z.size() - 1;
    std::vector<Eigen::Matrix2cd> t_cell(cells);
    std::vector<Eigen::Matrix2cd> g_cell(cells);
    const cplx i(0.0, 1.0);
    for (std::size_t j = 0; j < cells; ++j) {
        const double dz = z[j + 1] - z[j];
        Eigen::Matrix2cd a;
        a << -kappa * omega / ed2 - omega / c, slope[j], slope[j], omega / c;
        // exp([[M, dz I], [0, 0]]) carries exp(M) and M^-1 (exp(M) - I) dz together
        Eigen::Matrix4cd aug = Eigen::Matrix4cd::Zero();
        aug.topLeftCorner<2, 2>() = i * a * dz;
        aug.topRightCorner<2, 2>() = Eigen::Matrix2cd::Identity() * dz;
        const Eigen::Matrix4cd e = aug.exp();
        t_cell[j] = e.topLeftCorner<2, 2>();
        g_cell[j] = e.topRightCorner<2, 2>();
    }
    // tail[j] = T(L, z_{j+1})
    std::vector<Eigen::Matrix2cd> tail(cells);
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
    for (std::size_t j = cells; j-- > 0;) {
        tail[j] = acc;
        acc = acc * t_cell[j];
    }
    const Eigen::Matrix2cd total = acc;
    if (std::abs(total(1, 1)) < 1e-300) {
        throw SingularStateError("monte_carlo_linewidth: degenerate transfer matrix at omega = " +
                                 std::to_string(omega));
    }
    const cplx ratio = total(0, 1) / total(1, 1);
    std::vector<Row4> rows(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        const Eigen::Matrix2cd pj = tail[j] * g_cell[j];
        const cplx h0 = pj(0, 0) - ratio * pj(1, 0);
        const cplx h1 = pj(0, 1) - ratio * pj(1, 1);
        rows[j] = {h0, -i * h0, h1, i * h1};
    }
    return rows;
}

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t k)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

MonteCarloResult monte_carlo_linewidth(const MediumParams& p, const PumpBoundary& pumps, const SteadyState& steady,
                                       double p_out, const std::vector<double>& omega_grid,
                                       const MonteCarloOptions& opt)
{
    if (opt.n_realizations < 100) {
        throw DomainError("monte_carlo_linewidth: n_realizations must be >= 100");
    }
    if (steady.branch != Branch::oscillating || steady.z.size() < 2) {
        throw DomainError("monte_carlo_linewidth: requires an oscillating steady state with >= 2 nodes");
    }
    if (omega_grid.empty()) {
        throw DomainError("monte_carlo_linewidth: empty omega grid");
    }
    if (!(p_out > 0.0)) {
        throw DomainError("monte_carlo_linewidth: P_out must be > 0");
    }
    for (double w : omega_grid) {
        if (w == 0.0) {
            throw DomainError("monte_carlo_linewidth: omega = 0 carries no phase-diffusion signal");
        }
        fluctuation_system(w, p, pumps);  // band check
    }

    MonteCarloResult res;
    res.omega = omega_grid;
    res.n_realizations = opt.n_realizations;
    res.master_seed = opt.master_seed;
    const std::size_t nw = omega_grid.size();
    res.omega2_s_phi.assign(nw, 0.0);
    res.stderr_.assign(nw, 0.0);

    const FluctuationSystem fs = fluctuation_system(omega_grid.front(), p, pumps);
    if (fs.noise_coefficient == 0.0) {
        return res;
    }

    const double kappa = coupling_constant(p);
    const double ed2 = pumps.drive_intensity();
    const std::vector<double>& z = steady.z;
    const std::size_t cells = z.size() - 1;
    std::vector<double> slope(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        slope[j] = (steady.theta[j + 1] - steady.theta[j]) / (z[j + 1] - z[j]);
    }

    // E1(L) in the solver gauge (pumps real at their entry faces).
    const FieldState& in = steady.fields.front();
    const FieldState& out = steady.fields.back();
    const double gauge = std::arg(out.e1) - std::arg(in.ef) - std::arg(out.eb);
    const cplx e1l = std::polar(rabi_from_output_power(p_out, p), gauge);

    // dphi(w) = Im[dE1(w) / E1(L)], dE1(w) = conj(response of dE1* at -w).
    std::vector<std::vector<Row4>> weights(nw);
    for (std::size_t k = 0; k < nw; ++k) {
        const auto plus = response(omega_grid[k], z, slope, kappa, ed2);
        const auto minus = response(-omega_grid[k], z, slope, kappa, ed2);
        weights[k].resize(cells);
        for (std::size_t j = 0; j < cells; ++j) {
            for (int q = 0; q < 4; ++q) {
                const cplx w = (std::conj(minus[j][q]) / e1l - plus[j][q] / std::conj(e1l)) / cplx(0.0, 2.0);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    throw SingularStateError("monte_carlo_linewidth: non-finite response weight");
                }
                weights[k][j][q] = w;
            }
        }
    }

    // Cross-correlated pairs (Re f1, Im f2) and (Im f1, Re f2) with covariance c0 and zero
    // variances are drawn as complex samples x = s(g1 + i g2), y = s(g1 - i g2).
    std::vector<cplx> amp(cells);
    for (std::size_t j = 0; j < cells; ++j) {
        const double c0 = fs.noise_sign * fs.noise_coefficient / (2.0 * (z[j + 1] - z[j]));
        amp[j] = std::sqrt(cplx(c0 / 2.0, 0.0));
    }

    const int n = opt.n_realizations;
    std::vector<double> slots(static_cast<std::size_t>(n) * nw);
    auto run = [&](int first, int last) {
        std::vector<std::array<cplx, 4>> a(cells);
        for (int r = first; r < last; ++r) {
            std::mt19937_64 gen(realization_seed(opt.master_seed, static_cast<std::uint64_t>(r)));
            std::normal_distribution<double> normal(0.0, 1.0);
            for (std::size_t j = 0; j < cells; ++j) {
                const double g1 = normal(gen);
                const double g2 = normal(gen);
                const double g3 = normal(gen);
                const double g4 = normal(gen);
                const cplx s = amp[j];
                a[j][0] = s * cplx(g1, g2);   // Re f1
                a[j][3] = s * cplx(g1, -g2);  // Im f2
                a[j][1] = s * cplx(g3, g4);   // Im f1
                a[j][2] = s * cplx(g3, -g4);  // Re f2
            }
            for (std::size_t k = 0; k < nw; ++k) {
                cplx plus = 0.0;
                cplx minus = 0.0;
                for (std::size_t j = 0; j < cells; ++j) {
                    for (int q = 0; q < 4; ++q) {
                        plus += weights[k][j][q] * a[j][q];
                        minus += std::conj(weights[k][j][q]) * a[j][q];
                    }
                }
                const double w = omega_grid[k];
                slots[static_cast<std::size_t>(r) * nw + k] = w * w * (plus * minus).real();
            }
        }
    };

    unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        run(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + static_cast<int>(threads) - 1) / static_cast<int>(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const int first = static_cast<int>(t) * chunk;
            const int last = std::min(n, first + chunk);
            if (first < last) {
                pool.emplace_back(run, first, last);
            }
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    // Ordered reduction.
    std::vector<double> per_real(n, 0.0);
    for (std::size_t k = 0; k < nw; ++k) {
        double sum = 0.0;
        for (int r = 0; r < n; ++r) {
            sum += slots[static_cast<std::size_t>(r) * nw + k];
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (int r = 0; r < n; ++r) {
            const double d = slots[static_cast<std::size_t>(r) * nw + k] - mean;
            ss += d * d;
        }
        res.omega2_s_phi[k] = mean;
        res.stderr_[k] = std::sqrt(ss / (n - 1) / n);
    }
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < nw; ++k) {
            s += slots[static_cast<std::size_t>(r) * nw + k];
        }
        per_real[r] = s / static_cast<double>(nw);
    }
    double sum = 0.0;
    for (double v : per_real) {
        sum += v;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : per_real) {
        ss += (v - mean) * (v - mean);
    }
    res.estimate = mean;
    res.standard_error = std::sqrt(ss / (n - 1) / n);
    return res;
}

}  // namespace mpo
