#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"
#include "qnamp/run_config.hpp"

using namespace qnamp;
using nlohmann::json;

namespace {

std::string error_text(const json& j) {
  try {
    (void)parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("run_config") {
  TEST_CASE("fractions accept plain numbers, ppm and percent") {
    CHECK(parse_fraction(0.25, "k") == 0.25);
    CHECK(parse_fraction("320 ppm", "k") == doctest::Approx(320e-6).epsilon(1e-15));
    CHECK(parse_fraction("320ppm", "k") == doctest::Approx(320e-6).epsilon(1e-15));
    CHECK(parse_fraction("10 %", "k") == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(parse_fraction("0.5", "k") == 0.5);
    CHECK_THROWS_AS(parse_fraction("3 dB", "k"), ConfigError);
    CHECK_THROWS_AS(parse_fraction("lots", "k"), ConfigError);
    CHECK_THROWS_AS(parse_fraction(true, "k"), ConfigError);
  }

  TEST_CASE("empty object yields validated defaults") {
    const ChainConfig c = parse_config(json::object());
    CHECK(c.amp.ring.transmissivity == 0.0089);
    CHECK(c.grid.n_points == 200);
  }

  TEST_CASE("preset plus overrides") {
    const ChainConfig c = parse_config(json::parse(R"({
      "preset": "20dB",
      "ifo": {"readout_loss": "5 %"},
      "amp": {"mass_g": 50, "ofc": {"detuning_hz": -60}},
      "run": {"zeta0_deg": -12, "n_points": 64}
    })"));
    CHECK(c.sqz.db == 20.0);
    CHECK(c.ifo.readout_loss == doctest::Approx(0.05));
    CHECK(c.amp.ring.mirror_mass_kg == doctest::Approx(0.05));
    CHECK(c.sus.mass_kg == c.amp.ring.mirror_mass_kg);
    CHECK(c.ofc.detuning_hz == -60.0);
    CHECK(c.ofc.length_m == 25.0);
    CHECK(c.zeta0_rad == doctest::Approx(-12 * constants::pi / 180));
    CHECK(c.grid.n_points == 64);
  }

  TEST_CASE("unit aliases") {
    const ChainConfig c = parse_config(json::parse(R"({
      "ifo": {"wavelength_um": 1.064, "bandwidth_hz": 400},
      "amp": {"pendulum_hz": 2, "incidence_deg": [30, 45, 45]},
      "coat": {"beam_radius_mm": 3, "substrate_young_gpa": 130},
      "sus": {"width_um": 300, "length_cm": 40}
    })"));
    CHECK(c.ifo.wavelength_m == doctest::Approx(1.064e-6));
    CHECK(c.ifo.bandwidth_rad_s == doctest::Approx(constants::two_pi * 400));
    CHECK(c.amp.ring.pendulum_omega == doctest::Approx(constants::two_pi * 2));
    CHECK(c.amp.ring.incidence_rad[1] == doctest::Approx(constants::pi / 4));
    CHECK(c.coat.beam_radius_m == doctest::Approx(3e-3));
    CHECK(c.coat.substrate_young_pa == doctest::Approx(130e9));
    CHECK(c.sus.width_m == doctest::Approx(300e-6));
    CHECK(c.sus.length_m == doctest::Approx(0.4));
  }

  TEST_CASE("unknown keys are named in the error") {
    CHECK(error_text(json::parse(R"({"amp": {"colour": 1}})")).find("amp.colour") != std::string::npos);
    CHECK(error_text(json::parse(R"({"amp": {"ofc": {"finesse": 1}}})")).find("amp.ofc.finesse") != std::string::npos);
    CHECK(error_text(json::parse(R"({"extra": {}})")).find("extra") != std::string::npos);
    CHECK(error_text(json::parse(R"({"sqz": {"ifc": [{"len": 3}]}})")).find("sqz.ifc[0].len") != std::string::npos);
  }

  TEST_CASE("type and range errors") {
    CHECK_FALSE(error_text(json::parse(R"({"ifo": {"mass_kg": "heavy"}})")).empty());
    CHECK_FALSE(error_text(json::parse(R"({"amp": {"model": "magic"}})")).empty());
    CHECK_FALSE(error_text(json::parse(R"({"amp": {"transmissivity": 1.5}})")).empty());
    CHECK_FALSE(error_text(json::parse(R"({"amp": {"incidence_deg": [30, 30]}})")).empty());
    CHECK_FALSE(error_text(json::parse(R"({"run": {"n_points": -3}})")).empty());
    CHECK_FALSE(error_text(json::parse(R"({"preset": "nope"})")).empty());
    CHECK_FALSE(error_text(json::parse("[1, 2]")).empty());
  }

  TEST_CASE("serialisation round-trips exactly") {
    for (const char* name : {"15dB", "20dB"}) {
      ChainConfig c = preset(name);
      c.zeta0_rad = 0.123456789012345;
      c.amp.ring.incidence_rad = {0.1, 0.2, 0.3};
      c.seed = 987654321;
      const json first = serialize_config(c);
      const ChainConfig back = parse_config(first);
      CHECK(serialize_config(back) == first);
      CHECK(budget(back).total == budget(c).total);
    }
  }

  TEST_CASE("file loading") {
    const std::string missing = "/nonexistent/dir/run.json";
    try {
      (void)load_config(missing);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }
    const auto dir = std::filesystem::temp_directory_path();
    const std::string bad = (dir / "qnamp_bad_config.json").string();
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad), ConfigError);
    const std::string good = (dir / "qnamp_good_config.json").string();
    std::ofstream(good) << serialize_config(preset("15dB")).dump();
    CHECK(serialize_config(load_config(good)) == serialize_config(preset("15dB")));
    std::filesystem::remove(bad);
    std::filesystem::remove(good);
  }
}
