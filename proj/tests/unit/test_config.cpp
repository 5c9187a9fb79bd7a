#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mpo/config.hpp"
#include "mpo/errors.hpp"
#include "mpo/units.hpp"

using namespace mpo;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool mentions(const std::string& s, const std::string& what)
{
    return s.find(what) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty object is the default")
{
    CHECK(parse_config("{}") == default_config());
    const RunConfig c = parse_config("{}");
    CHECK(c.medium.one_photon_detuning == 1e9);
    CHECK(c.pumps.drive_intensity() == 2.5e15);
    CHECK(c.sweep.n_points == 61);
    CHECK(c.mc.master_seed == 20240601u);
    CHECK(c.threshold.condition == ThresholdCondition::boundary_determinant);
    CHECK(c.output.path == "-");
    CHECK(c.match_two_photon_detuning);
    CHECK_FALSE(c.lock_phase_mismatch);
}

TEST_CASE("shipped file equals built-in defaults")
{
    const std::filesystem::path f = std::filesystem::path(MPO_SOURCE_DIR) / "configs" / "default.json";
    CHECK(load_config(f) == default_config());
}

TEST_CASE("round trip")
{
    RunConfig c = parse_config(R"({"medium": {"ground_decay_rad_s": 250.0, "two_photon_detuning_rad_s": 3.5,
                                              "phase_mismatch_rad_m": "locked"},
                                   "pumps": {"forward_rad_s": [3e7, 4e7], "backward_rad_s": 5e7},
                                   "mc": {"master_seed": 7, "threads": 2},
                                   "threshold": {"condition": "quoted"}})");
    CHECK_FALSE(c.match_two_photon_detuning);
    CHECK(c.lock_phase_mismatch);
    CHECK(c.pumps.forward() == cplx(3e7, 4e7));
    const RunConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(back.medium.ground_decay == 250.0);
    CHECK(back.medium.two_photon_detuning == 3.5);
    CHECK(back.medium.cell_length == c.medium.cell_length);
    CHECK(back.pumps.forward() == c.pumps.forward());
    CHECK(back.threshold.condition == ThresholdCondition::quoted);
    CHECK(back.mc.threads == 2u);
}

TEST_CASE("hz keys convert to rad/s")
{
    const RunConfig c = parse_config(R"({"medium": {"one_photon_detuning_hz": 1e8}})");
    CHECK(c.medium.one_photon_detuning == doctest::Approx(2.0 * units::pi * 1e8).epsilon(1e-15));
    CHECK(mentions(error_of(R"({"medium": {"one_photon_detuning_hz": 1e8, "one_photon_detuning_rad_s": 1e9}})"),
                   "one_photon_detuning"));
}

TEST_CASE("coupling alpha sets the length")
{
    const RunConfig c = parse_config(R"({"medium": {"coupling_alpha": 2.0}})");
    CHECK(coupling_ratio(c.medium) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(parse_config(R"({"medium": {"cell_length_m": 0.05}})").medium.cell_length == 0.05);
    CHECK(mentions(error_of(R"({"medium": {"cell_length_m": 0.05, "coupling_alpha": 2.0}})"), "cell_length_m"));
}

TEST_CASE("bad values name the field")
{
    CHECK(mentions(error_of(R"({"medium": {"one_photon_detuning_rad_s": 0}})"), "one_photon_detuning"));
    CHECK(mentions(error_of(R"({"medium": {"atom_density_m3": -1}})"), "atom_density"));
    CHECK(mentions(error_of(R"({"sweep": {"alpha_min": 3, "alpha_max": 2}})"), "sweep"));
    CHECK(mentions(error_of(R"({"mc": {"n_realizations": 10}})"), "n_realizations"));
    CHECK(mentions(error_of(R"({"output": {"format": "xml"}})"), "output.format"));
    CHECK(mentions(error_of(R"({"threshold": {"condition": "other"}})"), "threshold.condition"));
    CHECK(mentions(error_of(R"({"medium": {"two_photon_detuning_rad_s": "auto"}})"), "two_photon_detuning"));
    CHECK(mentions(error_of(R"({"solver": {"rtol": "small"}})"), "rtol"));
}

TEST_CASE("unknown keys are rejected")
{
    CHECK(mentions(error_of(R"({"medum": {}})"), "medum"));
    CHECK(mentions(error_of(R"({"medium": {"lenght": 1}})"), "lenght"));
    CHECK(mentions(error_of(R"({"solver": {"rtol": 1e-8, "atol": 1}})"), "atol"));
}

TEST_CASE("parse errors carry line and column")
{
    const std::string e = error_of("{\n  \"medium\": {\n    \"beam_area_m2\": ,\n  }\n}");
    CHECK(mentions(e, "line 3"));
    CHECK(mentions(e, "column"));
    CHECK_THROWS_AS(load_config("/nonexistent/dir/none.json"), ConfigError);
}

TEST_CASE("with_alpha keeps everything but the length")
{
    const RunConfig c = default_config();
    const RunConfig d = c.with_alpha(3.0);
    CHECK(coupling_ratio(d.medium) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(d.medium.atom_density == c.medium.atom_density);
    CHECK(d.pumps.forward() == c.pumps.forward());
}

}
