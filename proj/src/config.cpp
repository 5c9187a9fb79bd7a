#include "mpo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mpo/errors.hpp"
#include "mpo/units.hpp"

namespace mpo {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ConfigError(field + ": " + what);
}

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) {
        fail(section, "must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            fail(section.empty() ? key : section + "." + key, "unknown key");
        }
    }
}

double number(const json& v, const std::string& field)
{
    if (!v.is_number()) {
        fail(field, "must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(field, "must be finite");
    }
    return x;
}

int integer(const json& v, const std::string& field)
{
    if (!v.is_number_integer()) {
        fail(field, "must be an integer");
    }
    return v.get<int>();
}

template <class T>
void read(const json& obj, const char* key, const std::string& section, T& out)
{
    if (!obj.contains(key)) {
        return;
    }
    const std::string field = section + "." + key;
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, double>) {
        out = number(v, field);
    } else if constexpr (std::is_same_v<T, int>) {
        out = integer(v, field);
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) {
            fail(field, "must be true or false");
        }
        out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) {
            fail(field, "must be a string");
        }
        out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned()) {
            fail(field, "must be a nonnegative integer");
        }
        out = v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, unsigned>) {
        if (!v.is_number_unsigned()) {
            fail(field, "must be a nonnegative integer");
        }
        out = v.get<unsigned>();
    }
}

// "<name>_rad_s" or "<name>_hz", at most one of them.
bool read_frequency(const json& obj, const std::string& name, const std::string& section, double& out)
{
    const std::string rad = name + "_rad_s";
    const std::string hz = name + "_hz";
    const bool has_rad = obj.contains(rad);
    const bool has_hz = obj.contains(hz);
    if (has_rad && has_hz) {
        fail(section + "." + name, "give either _rad_s or _hz, not both");
    }
    if (has_rad) {
        out = number(obj.at(rad), section + "." + rad);
    } else if (has_hz) {
        out = units::hz_to_rad_s(number(obj.at(hz), section + "." + hz));
    }
    return has_rad || has_hz;
}

cplx complex_value(const json& v, const std::string& field, double scale)
{
    if (v.is_number()) {
        return cplx(number(v, field) * scale, 0.0);
    }
    if (v.is_array() && v.size() == 2) {
        return cplx(number(v[0], field + "[0]") * scale, number(v[1], field + "[1]") * scale);
    }
    fail(field, "must be a number or [re, im]");
}

bool read_pump(const json& obj, const std::string& name, cplx& out)
{
    const std::string rad = name + "_rad_s";
    const std::string hz = name + "_hz";
    if (obj.contains(rad) && obj.contains(hz)) {
        fail("pumps." + name, "give either _rad_s or _hz, not both");
    }
    if (obj.contains(rad)) {
        out = complex_value(obj.at(rad), "pumps." + rad, 1.0);
        return true;
    }
    if (obj.contains(hz)) {
        out = complex_value(obj.at(hz), "pumps." + hz, 2.0 * units::pi);
        return true;
    }
    return false;
}

std::set<std::string> with_units(std::initializer_list<const char*> freq, std::initializer_list<const char*> other)
{
    std::set<std::string> s;
    for (const char* f : freq) {
        s.insert(std::string(f) + "_rad_s");
        s.insert(std::string(f) + "_hz");
    }
    for (const char* o : other) {
        s.insert(o);
    }
    return s;
}

void parse_medium(const json& m, RunConfig& c)
{
    check_keys(m, "medium",
               with_units({"radiative_decay", "ground_decay", "one_photon_detuning", "two_photon_detuning",
                           "raman_splitting", "optical_frequency"},
                          {"atom_density_m3", "wavelength_m", "cell_length_m", "coupling_alpha", "phase_mismatch_rad_m",
                           "beam_area_m2"}));
    MediumParams& p = c.medium;
    read(m, "atom_density_m3", "medium", p.atom_density);
    const double old_wavelength = p.wavelength;
    read(m, "wavelength_m", "medium", p.wavelength);
    read_frequency(m, "radiative_decay", "medium", p.radiative_decay);
    read_frequency(m, "ground_decay", "medium", p.ground_decay);
    read_frequency(m, "one_photon_detuning", "medium", p.one_photon_detuning);
    read_frequency(m, "raman_splitting", "medium", p.raman_splitting);

    if (m.contains("two_photon_detuning_rad_s") && m.at("two_photon_detuning_rad_s").is_string()) {
        if (m.at("two_photon_detuning_rad_s") != "matched") {
            fail("medium.two_photon_detuning_rad_s", "must be a number or \"matched\"");
        }
        if (m.contains("two_photon_detuning_hz")) {
            fail("medium.two_photon_detuning", "give either _rad_s or _hz, not both");
        }
        c.match_two_photon_detuning = true;
    } else if (read_frequency(m, "two_photon_detuning", "medium", p.two_photon_detuning)) {
        c.match_two_photon_detuning = false;
    }

    if (m.contains("phase_mismatch_rad_m")) {
        const json& v = m.at("phase_mismatch_rad_m");
        if (v.is_string()) {
            if (v != "locked") {
                fail("medium.phase_mismatch_rad_m", "must be a number or \"locked\"");
            }
            c.lock_phase_mismatch = true;
        } else {
            p.phase_mismatch = number(v, "medium.phase_mismatch_rad_m");
            c.lock_phase_mismatch = false;
        }
    }
    read(m, "beam_area_m2", "medium", p.beam_area);

    if (!read_frequency(m, "optical_frequency", "medium", p.optical_frequency) && p.wavelength != old_wavelength) {
        p.optical_frequency = 2.0 * units::pi * units::speed_of_light / p.wavelength;
    }

    if (m.contains("cell_length_m") && m.contains("coupling_alpha")) {
        fail("medium.cell_length_m", "give either cell_length_m or coupling_alpha, not both");
    }
    if (m.contains("cell_length_m")) {
        p.cell_length = number(m.at("cell_length_m"), "medium.cell_length_m");
    } else if (m.contains("coupling_alpha")) {
        const double alpha = number(m.at("coupling_alpha"), "medium.coupling_alpha");
        const double kappa = coupling_constant(p);
        if (!(kappa > 0.0)) {
            fail("medium.coupling_alpha", "needs kappa > 0 (atom_density, wavelength, radiative_decay)");
        }
        p.cell_length = alpha * p.one_photon_detuning / kappa;
    }
}

void parse_pumps(const json& j, RunConfig& c)
{
    check_keys(j, "pumps", with_units({"forward", "backward"}, {}));
    cplx f = c.pumps.forward();
    cplx b = c.pumps.backward();
    const bool has_f = read_pump(j, "forward", f);
    const bool has_b = read_pump(j, "backward", b);
    if (has_f && !has_b) {
        b = cplx(std::abs(f), 0.0);
    }
    try {
        c.pumps = PumpBoundary(f, b);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

void validate_config(const RunConfig& c)
{
    try {
        validate(c.medium);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("medium.") + e.what());
    }
    if (c.match_two_photon_detuning && !(coupling_constant(c.medium) > 0.0)) {
        fail("medium.two_photon_detuning_rad_s", "\"matched\" needs kappa > 0");
    }
    const SweepConfig& s = c.sweep;
    if (!(s.alpha_min < s.alpha_max)) {
        fail("sweep.alpha_min", "must be < alpha_max");
    }
    if (s.n_points < 2) {
        fail("sweep.n_points", "must be >= 2");
    }
    if (s.insert_e_over_ed < 0.0) {
        fail("sweep.insert_e_over_ed", "must be >= 0");
    }
    const McConfig& m = c.mc;
    if (!(m.omega_lo > 0.0) || !(m.omega_lo <= m.omega_hi)) {
        fail("mc.omega_lo_fraction", "need 0 < omega_lo_fraction <= omega_hi_fraction");
    }
    if (m.omega_hi > 0.01) {
        fail("mc.omega_hi_fraction", "must be <= 0.01 (small-omega band)");
    }
    if (m.n_omega < 1) {
        fail("mc.n_omega", "must be >= 1");
    }
    if (m.n_realizations < 100) {
        fail("mc.n_realizations", "must be >= 100");
    }
    const SolverOptions& o = c.solver;
    if (!(o.rtol > 0.0)) fail("solver.rtol", "must be > 0");
    if (!(o.atol_factor > 0.0)) fail("solver.atol_factor", "must be > 0");
    if (o.grid_nodes < 2) fail("solver.grid_nodes", "must be >= 2");
    if (o.max_iterations < 1) fail("solver.max_iterations", "must be >= 1");
    if (!(o.damping > 0.0 && o.damping < 1.0)) fail("solver.damping", "must be in (0, 1)");
    if (!(o.continuation_step > 0.0)) fail("solver.continuation_step", "must be > 0");
    if (!(o.tolerance > 0.0)) fail("solver.tolerance", "must be > 0");
    if (!(o.noise_floor >= 0.0)) fail("solver.noise_floor", "must be >= 0");
    if (!(o.depletion_limit >= 0.0 && o.depletion_limit < 1.0)) fail("solver.depletion_limit", "must be in [0, 1)");
    if (!(o.probe_amplitude > 0.0 && o.probe_amplitude < 1e-2)) fail("solver.probe_amplitude", "must be in (0, 1e-2)");
    if (!(c.threshold.ed2_max_factor > 1.0)) fail("threshold.ed2_max_factor", "must be > 1");
    if (!(c.threshold.flux_prefactor > 0.0)) fail("threshold.flux_prefactor", "must be > 0");
    if (c.linewidth.p_out_w < 0.0) fail("linewidth.p_out_w", "must be >= 0");
    if (c.output.format != "csv" && c.output.format != "json") fail("output.format", "must be csv or json");
    if (c.output.path.empty()) fail("output.path", "must not be empty");
}

std::string location(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

MediumParams RunConfig::resolved_medium() const
{
    MediumParams p = medium;
    if (lock_phase_mismatch && match_two_photon_detuning) {
        p.two_photon_detuning = p.raman_splitting - self_consistent_beat(p, pumps);
        p.phase_mismatch = locked_phase_mismatch(p.raman_splitting, p.two_photon_detuning);
    } else if (lock_phase_mismatch) {
        p.phase_mismatch = locked_phase_mismatch(p.raman_splitting, p.two_photon_detuning);
    } else if (match_two_photon_detuning) {
        p.two_photon_detuning = matched_detuning(p, pumps) + 0.0;  // no -0 in reports
    }
    return p;
}

RunConfig RunConfig::with_alpha(double alpha) const
{
    RunConfig c = *this;
    c.medium.cell_length = alpha * medium.one_photon_detuning / coupling_constant(medium);
    return c;
}

RunConfig default_config()
{
    RunConfig c;
    MediumParams& p = c.medium;
    p.atom_density = 3e16;
    p.wavelength = 795e-9;
    p.radiative_decay = 3.58e7;
    p.ground_decay = 0.0;
    p.one_photon_detuning = 1e9;
    p.two_photon_detuning = 0.0;
    p.raman_splitting = units::hz_to_rad_s(6.834682610904e9);
    p.phase_mismatch = 0.0;
    p.beam_area = 1e-6;
    p.optical_frequency = 2.0 * units::pi * units::speed_of_light / p.wavelength;
    p.cell_length = 1.5711104 * p.one_photon_detuning / coupling_constant(p);
    c.pumps = PumpBoundary(cplx(5e7, 0.0), cplx(5e7, 0.0));
    return c;
}

RunConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error at " + location(text, e.byte) + ": " + e.what());
    }
    check_keys(j, "", {"medium", "pumps", "sweep", "mc", "solver", "threshold", "linewidth", "output"});

    RunConfig c = default_config();
    if (j.contains("medium")) {
        parse_medium(j.at("medium"), c);
    }
    if (j.contains("pumps")) {
        parse_pumps(j.at("pumps"), c);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "sweep", {"alpha_min", "alpha_max", "n_points", "insert_e_over_ed"});
        read(s, "alpha_min", "sweep", c.sweep.alpha_min);
        read(s, "alpha_max", "sweep", c.sweep.alpha_max);
        read(s, "n_points", "sweep", c.sweep.n_points);
        read(s, "insert_e_over_ed", "sweep", c.sweep.insert_e_over_ed);
    }
    if (j.contains("mc")) {
        const json& s = j.at("mc");
        check_keys(s, "mc",
                   {"omega_lo_fraction", "omega_hi_fraction", "n_omega", "n_realizations", "master_seed", "threads"});
        read(s, "omega_lo_fraction", "mc", c.mc.omega_lo);
        read(s, "omega_hi_fraction", "mc", c.mc.omega_hi);
        read(s, "n_omega", "mc", c.mc.n_omega);
        read(s, "n_realizations", "mc", c.mc.n_realizations);
        read(s, "master_seed", "mc", c.mc.master_seed);
        read(s, "threads", "mc", c.mc.threads);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        check_keys(s, "solver",
                   {"rtol", "atol_factor", "grid_nodes", "max_iterations", "damping", "continuation_step", "tolerance",
                    "noise_floor", "depletion_limit", "probe_amplitude"});
        SolverOptions& o = c.solver;
        read(s, "rtol", "solver", o.rtol);
        read(s, "atol_factor", "solver", o.atol_factor);
        read(s, "grid_nodes", "solver", o.grid_nodes);
        read(s, "max_iterations", "solver", o.max_iterations);
        read(s, "damping", "solver", o.damping);
        read(s, "continuation_step", "solver", o.continuation_step);
        read(s, "tolerance", "solver", o.tolerance);
        read(s, "noise_floor", "solver", o.noise_floor);
        read(s, "depletion_limit", "solver", o.depletion_limit);
        read(s, "probe_amplitude", "solver", o.probe_amplitude);
    }
    if (j.contains("threshold")) {
        const json& s = j.at("threshold");
        check_keys(s, "threshold", {"ed2_max_factor", "condition", "flux_prefactor"});
        read(s, "ed2_max_factor", "threshold", c.threshold.ed2_max_factor);
        read(s, "flux_prefactor", "threshold", c.threshold.flux_prefactor);
        std::string cond(to_string(c.threshold.condition));
        read(s, "condition", "threshold", cond);
        try {
            c.threshold.condition = threshold_condition_from_string(cond);
        } catch (const DomainError&) {
            fail("threshold.condition", "must be boundary_determinant or quoted");
        }
    }
    if (j.contains("linewidth")) {
        const json& s = j.at("linewidth");
        check_keys(s, "linewidth", {"p_out_w"});
        read(s, "p_out_w", "linewidth", c.linewidth.p_out_w);
    }
    if (j.contains("output")) {
        const json& s = j.at("output");
        check_keys(s, "output", {"format", "path", "emit_svg"});
        read(s, "format", "output", c.output.format);
        read(s, "path", "output", c.output.path);
        read(s, "emit_svg", "output", c.output.emit_svg);
    }
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c)
{
    const MediumParams& p = c.medium;
    json j;
    json& m = j["medium"];
    m["atom_density_m3"] = p.atom_density;
    m["wavelength_m"] = p.wavelength;
    m["radiative_decay_rad_s"] = p.radiative_decay;
    m["ground_decay_rad_s"] = p.ground_decay;
    m["one_photon_detuning_rad_s"] = p.one_photon_detuning;
    if (c.match_two_photon_detuning) {
        m["two_photon_detuning_rad_s"] = "matched";
    } else {
        m["two_photon_detuning_rad_s"] = p.two_photon_detuning;
    }
    m["raman_splitting_rad_s"] = p.raman_splitting;
    m["cell_length_m"] = p.cell_length;
    if (c.lock_phase_mismatch) {
        m["phase_mismatch_rad_m"] = "locked";
    } else {
        m["phase_mismatch_rad_m"] = p.phase_mismatch;
    }
    m["beam_area_m2"] = p.beam_area;
    m["optical_frequency_rad_s"] = p.optical_frequency;

    j["pumps"]["forward_rad_s"] = {c.pumps.forward().real(), c.pumps.forward().imag()};
    j["pumps"]["backward_rad_s"] = {c.pumps.backward().real(), c.pumps.backward().imag()};

    j["sweep"] = {{"alpha_min", c.sweep.alpha_min},
                  {"alpha_max", c.sweep.alpha_max},
                  {"n_points", c.sweep.n_points},
                  {"insert_e_over_ed", c.sweep.insert_e_over_ed}};
    j["mc"] = {{"omega_lo_fraction", c.mc.omega_lo},
               {"omega_hi_fraction", c.mc.omega_hi},
               {"n_omega", c.mc.n_omega},
               {"n_realizations", c.mc.n_realizations},
               {"master_seed", c.mc.master_seed},
               {"threads", c.mc.threads}};
    const SolverOptions& o = c.solver;
    j["solver"] = {{"rtol", o.rtol},
                   {"atol_factor", o.atol_factor},
                   {"grid_nodes", o.grid_nodes},
                   {"max_iterations", o.max_iterations},
                   {"damping", o.damping},
                   {"continuation_step", o.continuation_step},
                   {"tolerance", o.tolerance},
                   {"noise_floor", o.noise_floor},
                   {"depletion_limit", o.depletion_limit},
                   {"probe_amplitude", o.probe_amplitude}};
    j["threshold"] = {{"ed2_max_factor", c.threshold.ed2_max_factor},
                      {"condition", std::string(to_string(c.threshold.condition))},
                      {"flux_prefactor", c.threshold.flux_prefactor}};
    j["linewidth"] = {{"p_out_w", c.linewidth.p_out_w}};
    j["output"] = {{"format", c.output.format}, {"path", c.output.path}, {"emit_svg", c.output.emit_svg}};
    return j.dump(2) + "\n";
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    return serialize_config(a) == serialize_config(b);
}

}  // namespace mpo
