#include "mpo/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mpo {

using json = nlohmann::ordered_json;

namespace {

json meta_object(const Metadata& meta)
{
    json m = json::object();
    for (const auto& [k, v] : meta) {
        m[k] = v;
    }
    return m;
}

// NaN is not representable in JSON
json num(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return nullptr;
}

}  // namespace

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_metadata(std::ostream& os, const Metadata& meta)
{
    for (const auto& [k, v] : meta) {
        os << "# " << k << ": " << v << "\n";
    }
}

void write_steady_csv(std::ostream& os, const SteadyState& s, const Metadata& meta)
{
    write_metadata(os, meta);
    os << "# units: z_m in m; fields are Rabi frequencies in rad/s\n";
    os << "# branch: " << to_string(s.branch) << "\n";
    os << "# amplitude_rad_s: " << format_double(s.amplitude) << "\n";
    os << "# e_over_ed: " << format_double(s.amplitude / s.drive_amplitude) << "\n";
    os << "# two_photon_detuning_rad_s: " << format_double(s.two_photon_detuning) << "\n";
    os << "# residual_norm: " << format_double(s.residual_norm) << "\n";
    write_profile_csv(os, s);
}

std::string steady_json(const SteadyState& s, const Metadata& meta)
{
    json j;
    j["metadata"] = meta_object(meta);
    j["units"] = {{"z", "m"}, {"fields", "rad/s"}, {"theta", "rad"}};
    j["branch"] = std::string(to_string(s.branch));
    j["amplitude_rad_s"] = s.amplitude;
    j["drive_amplitude_rad_s"] = s.drive_amplitude;
    j["e_over_ed"] = s.amplitude / s.drive_amplitude;
    j["two_photon_detuning_rad_s"] = s.two_photon_detuning;
    j["residual_norm"] = s.residual_norm;
    j["iterations"] = s.iterations;
    json prof = json::array();
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        const FieldState& f = s.fields[k];
        prof.push_back({{"z_m", s.z[k]},
                        {"theta", s.theta[k]},
                        {"E1", {f.e1.real(), f.e1.imag()}},
                        {"E2", {f.e2.real(), f.e2.imag()}},
                        {"Ef", {f.ef.real(), f.ef.imag()}},
                        {"Eb", {f.eb.real(), f.eb.imag()}}});
    }
    j["profile"] = prof;
    return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, const Metadata& meta)
{
    write_metadata(os, meta);
    os << "# units: alpha = kappa L / Delta (dimensionless); amplitudes relative to E_d\n";
    os << "alpha,E_over_Ed,analytic_E_over_Ed,residual,branch,error\n";
    for (const SweepRow& row : r.rows) {
        std::string err = row.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << format_double(row.alpha) << ',' << format_double(row.e_over_ed) << ',' << format_double(row.analytic)
           << ',' << format_double(row.residual) << ',' << row.branch << ',' << err << "\n";
    }
}

std::string sweep_json(const SweepResult& r, const Metadata& meta)
{
    json j;
    j["metadata"] = meta_object(meta);
    j["failures"] = r.failures;
    j["out_of_validity"] = r.out_of_validity;
    json rows = json::array();
    for (const SweepRow& row : r.rows) {
        rows.push_back({{"alpha", row.alpha},
                        {"E_over_Ed", num(row.e_over_ed)},
                        {"analytic_E_over_Ed", row.analytic},
                        {"residual", row.residual},
                        {"branch", row.branch},
                        {"error", row.error}});
    }
    j["rows"] = rows;
    if (r.insert) {
        j["insert_alpha"] = r.insert_alpha;
    }
    return j.dump(2) + "\n";
}

std::string threshold_json(const ThresholdResult& t)
{
    json j;
    j["alpha_critical"] = num(t.alpha_critical);
    j["ed2_threshold"] = num(t.pump_intensity_threshold);
    j["residual"] = num(t.residual_at_root);
    j["feasible"] = t.feasible;
    j["floor"] = t.floor;
    j["condition"] = std::string(to_string(t.condition));
    return j.dump(2) + "\n";
}

void write_threshold_csv(std::ostream& os, const ThresholdResult& t, const Metadata& meta)
{
    write_metadata(os, meta);
    os << "# units: ed2_threshold and floor in rad^2/s^2\n";
    os << "alpha_critical,ed2_threshold,residual,feasible,floor,condition\n";
    os << format_double(t.alpha_critical) << ',' << format_double(t.pump_intensity_threshold) << ','
       << format_double(t.residual_at_root) << ',' << (t.feasible ? "true" : "false") << ','
       << format_double(t.floor) << ',' << to_string(t.condition) << "\n";
}

std::string threshold_schema_json()
{
    return R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "threshold report",
  "type": "object",
  "properties": {
    "alpha_critical": {"type": ["number", "null"], "description": "critical kappa L / Delta, dimensionless"},
    "ed2_threshold": {"type": ["number", "null"], "description": "threshold pump intensity E_d^2, rad^2/s^2"},
    "residual": {"type": ["number", "null"], "description": "threshold condition at the returned root, dimensionless"},
    "feasible": {"type": "boolean"},
    "floor": {"type": "number", "description": "gamma0 |Delta| / 2, rad^2/s^2"},
    "condition": {"enum": ["boundary_determinant", "quoted"]}
  },
  "required": ["alpha_critical", "ed2_threshold", "residual", "feasible", "floor"],
  "additionalProperties": false
}
)";
}

void write_spectrum_csv(std::ostream& os, const MonteCarloResult& r, const Metadata& meta)
{
    write_metadata(os, meta);
    os << "# units: omega in rad/s; omega^2 S_phi in rad/s\n";
    os << "# correlator_model: " << correlator_model_tag << "\n";
    os << "# master_seed: " << r.master_seed << "\n";
    os << "# n_realizations: " << r.n_realizations << "\n";
    os << "# linewidth_rad_s: " << format_double(r.estimate) << "\n";
    os << "# standard_error_rad_s: " << format_double(r.standard_error) << "\n";
    os << "omega_rad_s,omega2_S_phi,stderr\n";
    for (std::size_t k = 0; k < r.omega.size(); ++k) {
        os << format_double(r.omega[k]) << ',' << format_double(r.omega2_s_phi[k]) << ','
           << format_double(r.stderr_[k]) << "\n";
    }
}

std::string spectrum_json(const MonteCarloResult& r, const Metadata& meta)
{
    json j;
    j["metadata"] = meta_object(meta);
    j["units"] = {{"omega", "rad/s"}, {"omega2_S_phi", "rad/s"}, {"linewidth", "rad/s"}};
    j["correlator_model"] = std::string(correlator_model_tag);
    j["master_seed"] = r.master_seed;
    j["n_realizations"] = r.n_realizations;
    j["linewidth_rad_s"] = r.estimate;
    j["standard_error_rad_s"] = r.standard_error;
    json rows = json::array();
    for (std::size_t k = 0; k < r.omega.size(); ++k) {
        rows.push_back({{"omega_rad_s", r.omega[k]}, {"omega2_S_phi", r.omega2_s_phi[k]}, {"stderr", r.stderr_[k]}});
    }
    j["spectrum"] = rows;
    return j.dump(2) + "\n";
}

void write_linewidth_csv(std::ostream& os, const LinewidthReport& r, const Metadata& meta)
{
    write_metadata(os, meta);
    os << "# units: linewidths in rad/s, tau_gr in s, p_out in W\n";
    os << "# correlator_model: " << correlator_model_tag << "\n";
    os << "quantity,value\n";
    auto row = [&os](const char* k, double v) { os << k << ',' << format_double(v) << "\n"; };
    row("eta", r.eta);
    row("tau_gr_s", r.tau_gr);
    row("p_out_w", r.p_out);
    row("dnu_closed", r.dnu_closed);
    row("dnu_group_delay", r.dnu_group_delay);
    row("dnu_lossy", r.dnu_lossy);
    row("dnu_semianalytic", r.dnu_semianalytic);
    if (r.has_monte_carlo) {
        row("dnu_monte_carlo", r.monte_carlo.estimate);
        row("dnu_monte_carlo_stderr", r.monte_carlo.standard_error);
    }
}

std::string linewidth_json(const LinewidthReport& r, const Metadata& meta)
{
    json j;
    j["metadata"] = meta_object(meta);
    j["units"] = {{"linewidth", "rad/s"}, {"tau_gr", "s"}, {"p_out", "W"}, {"omega", "rad/s"}};
    j["correlator_model"] = std::string(correlator_model_tag);
    j["eta"] = r.eta;
    j["tau_gr_s"] = r.tau_gr;
    j["p_out_w"] = r.p_out;
    j["dnu_closed"] = r.dnu_closed;
    j["dnu_group_delay"] = r.dnu_group_delay;
    j["dnu_lossy"] = r.dnu_lossy;
    j["dnu_semianalytic"] = r.dnu_semianalytic;
    if (r.has_monte_carlo) {
        j["dnu_monte_carlo"] = r.monte_carlo.estimate;
        j["dnu_monte_carlo_stderr"] = r.monte_carlo.standard_error;
        j["master_seed"] = r.monte_carlo.master_seed;
        j["n_realizations"] = r.monte_carlo.n_realizations;
    }
    j["omega_band"] = r.omega_band;
    return j.dump(2) + "\n";
}

namespace {

struct Frame {
    double x0, x1, y0, y1;
    double left = 60, right = 20, top = 20, bottom = 45, width = 520, height = 360;
    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void axes(std::ostringstream& os, const Frame& f, const char* xlabel, const char* ylabel)
{
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                  f.left, f.top, f.width - f.left - f.right, f.height - f.top - f.bottom);
    os << buf;
    for (int k = 0; k <= 4; ++k) {
        const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                      f.px(x), f.height - f.bottom + 15, x, f.left - 5, f.py(y) + 4, y);
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n"
                  "<text x=\"14\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 14 %.1f)\">%s</text>\n",
                  (f.left + f.width - f.right) / 2, f.height - 8, xlabel, (f.top + f.height - f.bottom) / 2,
                  (f.top + f.height - f.bottom) / 2, ylabel);
    os << buf;
}

void polyline(std::ostringstream& os, const Frame& f, const std::vector<double>& x, const std::vector<double>& y,
              const char* color, const char* dash = nullptr)
{
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dash != nullptr) {
        os << " stroke-dasharray=\"" << dash << "\"";
    }
    os << " points=\"";
    char buf[64];
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(y[k])) {
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", f.px(x[k]), f.py(y[k]));
        os << buf;
    }
    os << "\"/>\n";
}

std::string open_svg(const Frame& f)
{
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "font-family=\"sans-serif\">\n",
                  f.width, f.height);
    return buf;
}

}  // namespace

std::string sweep_svg(const SweepResult& r)
{
    std::vector<double> a;
    std::vector<double> num_e;
    std::vector<double> an_e;
    double ymax = 0.1;
    for (const SweepRow& row : r.rows) {
        a.push_back(row.alpha);
        num_e.push_back(row.e_over_ed);
        an_e.push_back(row.analytic);
        if (std::isfinite(row.e_over_ed)) {
            ymax = std::max(ymax, row.e_over_ed);
        }
        ymax = std::max(ymax, row.analytic);
    }
    Frame f{a.front(), a.back(), 0.0, ymax * 1.05};
    std::ostringstream os;
    os << open_svg(f);
    axes(os, f, "kappa L / Delta", "E / E_d");
    polyline(os, f, a, an_e, "gray", "5,4");
    polyline(os, f, a, num_e, "black");
    os << "<text x=\"" << f.left + 10 << "\" y=\"" << f.top + 16
       << "\" font-size=\"11\">solid: numerical, dashed: closed form</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string profile_svg(const SteadyState& s)
{
    std::vector<double> x;
    std::vector<double> e1;
    std::vector<double> e2;
    const double length = s.z.back();
    for (std::size_t k = 0; k < s.z.size(); ++k) {
        x.push_back(s.z[k] / length);
        e1.push_back(std::abs(s.fields[k].e1) / s.drive_amplitude);
        e2.push_back(std::abs(s.fields[k].e2) / s.drive_amplitude);
    }
    double ymax = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        ymax = std::max({ymax, e1[k], e2[k]});
    }
    Frame f{0.0, 1.0, 0.0, std::max(ymax, 1e-12) * 1.05};
    std::ostringstream os;
    os << open_svg(f);
    axes(os, f, "z / L", "|E| / E_d");
    polyline(os, f, x, e1, "firebrick");
    polyline(os, f, x, e2, "steelblue");
    os << "<text x=\"" << f.left + 10 << "\" y=\"" << f.top + 16
       << "\" font-size=\"11\">red: |E1|, blue: |E2|</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace mpo
