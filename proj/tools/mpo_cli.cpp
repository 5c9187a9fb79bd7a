// Command-line front end: threshold, steady, sweep, linewidth, mc-linewidth,
// validate, config show.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mpo/app.hpp"
#include "mpo/config.hpp"
#include "mpo/errors.hpp"
#include "mpo/noise.hpp"
#include "mpo/output.hpp"
#include "mpo/threshold.hpp"

namespace fs = std::filesystem;
using namespace mpo;

namespace {

enum Exit { ok = 0, check_failed = 1, bad_input = 2, no_convergence = 3 };

struct Globals {
    std::string config_path;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> skip;
    std::string condition;
};

RunConfig load(const Globals& g)
{
    RunConfig c = g.config_path.empty() ? default_config() : load_config(g.config_path);
    if (!g.out.empty()) {
        c.output.path = g.out;
    }
    if (!g.format.empty()) {
        if (g.format != "csv" && g.format != "json") {
            throw ConfigError("--format: must be csv or json");
        }
        c.output.format = g.format;
    }
    if (g.seed) {
        c.mc.master_seed = *g.seed;
    }
    if (!g.condition.empty()) {
        try {
            c.threshold.condition = threshold_condition_from_string(g.condition);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("--condition: ") + e.what());
        }
    }
    return c;
}

// "-" is stdout; relative paths go under $MPO_OUTPUT_DIR when it is set.
std::optional<fs::path> target(const RunConfig& c)
{
    if (c.output.path == "-") {
        return std::nullopt;
    }
    fs::path p(c.output.path);
    if (const char* dir = std::getenv("MPO_OUTPUT_DIR"); dir != nullptr && *dir != '\0' && p.is_relative()) {
        p = fs::path(dir) / p;
    }
    return p;
}

void emit(const RunConfig& c, const std::string& text)
{
    const auto path = target(c);
    if (!path) {
        std::cout << text;
        return;
    }
    if (path->has_parent_path()) {
        fs::create_directories(path->parent_path());
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        throw ConfigError("output.path: cannot write " + path->string());
    }
    out << text;
}

void emit_beside(const RunConfig& c, const std::string& suffix, const std::string& text)
{
    const auto path = target(c);
    if (!path) {
        std::cerr << "note: " << suffix << " needs a file output path (--out), skipped\n";
        return;
    }
    fs::path side = *path;
    side.replace_extension("");
    side += suffix;
    std::ofstream(side, std::ios::binary) << text;
}

Metadata base_meta(const RunConfig& c, const std::string& command)
{
    const MediumParams p = c.resolved_medium();
    return {{"command", "mpo_cli " + command},
            {"units", "frequencies rad/s, lengths m, powers W"},
            {"coupling_alpha", format_double(coupling_ratio(p))},
            {"drive_amplitude_rad_s", format_double(c.pumps.drive_amplitude())},
            {"ground_decay_rad_s", format_double(p.ground_decay)},
            {"two_photon_detuning_rad_s", format_double(p.two_photon_detuning)},
            {"phase_mismatch_rad_m", format_double(p.phase_mismatch)}};
}

int cmd_threshold(const RunConfig& c)
{
    const MediumParams p = c.resolved_medium();
    ThresholdOptions opt;
    opt.ed2_max_factor = c.threshold.ed2_max_factor;
    opt.condition = c.threshold.condition;
    const ThresholdResult t = threshold_pump_intensity(p, opt);
    if (c.output.format == "json") {
        emit(c, threshold_json(t));
        emit_beside(c, ".schema.json", threshold_schema_json());
    } else {
        Metadata meta = base_meta(c, "threshold");
        meta.emplace_back("threshold_photon_flux_per_s",
                          format_double(threshold_photon_flux(p, c.threshold.flux_prefactor)));
        std::ostringstream os;
        write_threshold_csv(os, t, meta);
        emit(c, os.str());
    }
    return ok;
}

int cmd_steady(const RunConfig& c)
{
    const SteadyState s = solve_steady_state(c.resolved_medium(), c.pumps, c.solver);
    const Metadata meta = base_meta(c, "steady");
    if (c.output.format == "json") {
        emit(c, steady_json(s, meta));
    } else {
        std::ostringstream os;
        write_steady_csv(os, s, meta);
        emit(c, os.str());
    }
    if (c.output.emit_svg) {
        emit_beside(c, ".svg", profile_svg(s));
    }
    return ok;
}

int cmd_sweep(const RunConfig& c)
{
    const SweepResult r = run_sweep(c);
    Metadata meta = base_meta(c, "sweep");
    meta.emplace_back("failures", std::to_string(r.failures));
    meta.emplace_back("out_of_validity", std::to_string(r.out_of_validity));
    if (c.output.format == "json") {
        emit(c, sweep_json(r, meta));
    } else {
        std::ostringstream os;
        write_sweep_csv(os, r, meta);
        emit(c, os.str());
    }
    if (c.output.emit_svg) {
        emit_beside(c, ".svg", sweep_svg(r));
        if (r.insert) {
            emit_beside(c, "_insert.svg", profile_svg(*r.insert));
        }
    }
    const double fail_fraction = static_cast<double>(r.failures) / static_cast<double>(r.rows.size());
    if (fail_fraction > 0.10) {
        std::cerr << "sweep: " << r.failures << " of " << r.rows.size() << " points failed\n";
        return no_convergence;
    }
    return ok;
}

LinewidthReport linewidth(const RunConfig& c, bool with_mc)
{
    const MediumParams p = c.resolved_medium();
    const SteadyState s = solve_steady_state(p, c.pumps, c.solver);
    const double p_out = resolve_output_power(c, s);
    const auto grid = default_omega_grid(c.pumps.drive_amplitude(), c.mc.omega_lo, c.mc.omega_hi, c.mc.n_omega);
    MonteCarloOptions mc{c.mc.n_realizations, c.mc.master_seed, c.mc.threads};
    return linewidth_report(p, c.pumps, s, p_out, grid, with_mc ? &mc : nullptr);
}

int cmd_linewidth(const RunConfig& c)
{
    const LinewidthReport r = linewidth(c, false);
    const Metadata meta = base_meta(c, "linewidth");
    if (c.output.format == "json") {
        emit(c, linewidth_json(r, meta));
    } else {
        std::ostringstream os;
        write_linewidth_csv(os, r, meta);
        emit(c, os.str());
    }
    return ok;
}

int cmd_mc_linewidth(const RunConfig& c)
{
    const LinewidthReport r = linewidth(c, true);
    Metadata meta = base_meta(c, "mc-linewidth");
    meta.emplace_back("dnu_semianalytic_rad_s", format_double(r.dnu_semianalytic));
    meta.emplace_back("dnu_closed_rad_s", format_double(r.dnu_closed));
    if (c.output.format == "json") {
        emit(c, linewidth_json(r, meta));
    } else {
        std::ostringstream os;
        write_spectrum_csv(os, r.monte_carlo, meta);
        emit(c, os.str());
    }
    return ok;
}

int cmd_validate(const RunConfig& c, const std::vector<std::string>& skip_list)
{
    std::set<std::string> skip(skip_list.begin(), skip_list.end());
    const auto names = validate_check_names();
    for (const std::string& s : skip) {
        if (std::find(names.begin(), names.end(), s) == names.end()) {
            throw ConfigError("--skip: unknown check '" + s + "'");
        }
    }
    bool all = true;
    run_validate(c, skip, [&all](const CheckResult& r) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
        all = all && r.passed;
    });
    for (const std::string& s : skip) {
        std::cout << "SKIP " << s << std::endl;
    }
    return all ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mirrorless parametric oscillator: steady states, thresholds and linewidths"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output file ('-' for stdout)");
    app.add_option("--format", g.format, "csv|json");
    auto* seed_opt = app.add_option("--seed", seed, "Monte-Carlo master seed");
    app.add_option("--skip", g.skip, "validate: checks to skip (conservation, threshold, locking, bridge, "
                                     "semianalytic, mc)");
    app.add_option("--condition", g.condition, "threshold condition: boundary_determinant|quoted");

    auto* threshold = app.add_subcommand("threshold", "lossy threshold pump intensity");
    auto* steady = app.add_subcommand("steady", "steady-state profile at the configured point");
    auto* sweep = app.add_subcommand("sweep", "bifurcation sweep over kappa L / Delta");
    auto* lw = app.add_subcommand("linewidth", "closed-form and semi-analytic linewidths");
    auto* mc = app.add_subcommand("mc-linewidth", "Monte-Carlo phase-noise spectrum and linewidth");
    auto* validate = app.add_subcommand("validate", "run the check suite");
    auto* config = app.add_subcommand("config", "configuration utilities");
    auto* show = config->add_subcommand("show", "print the effective configuration");
    config->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_input;
    }
    if (*seed_opt) {
        g.seed = seed;
    }

    try {
        const RunConfig c = load(g);
        if (*threshold) return cmd_threshold(c);
        if (*steady) return cmd_steady(c);
        if (*sweep) return cmd_sweep(c);
        if (*lw) return cmd_linewidth(c);
        if (*mc) return cmd_mc_linewidth(c);
        if (*validate) return cmd_validate(c, g.skip);
        if (*show) {
            emit(c, serialize_config(c));
            return ok;
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
        return no_convergence;
    } catch (const SingularStateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return no_convergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    }
    return bad_input;
}
