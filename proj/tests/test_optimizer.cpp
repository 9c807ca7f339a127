#include <doctest.h>

#include <cmath>

#include "qnamp/errors.hpp"
#include "qnamp/optimizer.hpp"

using namespace qnamp;

namespace {

OptimizeOptions only(FreeParam p) {
  OptimizeOptions o;
  o.bounds.clear();
  for (const ParamBound& b : default_bounds()) {
    if (b.param == p) o.bounds.push_back(b);
  }
  o.max_evaluations = 120;
  return o;
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("parameter names round-trip") {
    for (const ParamBound& b : default_bounds()) {
      CHECK(param_from_name(param_name(b.param)) == b.param);
      ChainConfig c = preset("15dB");
      const double mid = 0.5 * (b.lo + b.hi);
      set_param(c, b.param, mid);
      CHECK(get_param(c, b.param) == mid);
    }
    CHECK_THROWS_AS(param_from_name("amp.colour"), ConfigError);
  }

  TEST_CASE("cost is the band mean of ln ASD") {
    const ChainConfig c = preset("15dB");
    OptimizeOptions o;
    o.band_points = 9;
    const FrequencyGrid g = FrequencyGrid::log_spaced(o.band_lo_hz, o.band_hi_hz, o.band_points);
    double oracle = 0.0;
    for (double psd : total_strain_psd(c, g)) oracle += std::log(std::sqrt(psd));
    oracle /= static_cast<double>(o.band_points);
    CHECK(midband_cost(c, o) == doctest::Approx(oracle).epsilon(1e-13));
  }

  TEST_CASE("optimum never loses to the start and stays in bounds") {
    const ChainConfig c = preset("15dB");
    const OptimizeOptions o = only(FreeParam::amp_transmissivity);
    const OptimizeResult r = optimize(c, o);
    CHECK(r.cost <= r.initial_cost);
    CHECK(r.cost == doctest::Approx(midband_cost(r.config, o)).epsilon(1e-13));
    const double t = r.config.amp.ring.transmissivity;
    CHECK(t >= o.bounds[0].lo);
    CHECK(t <= o.bounds[0].hi);
    CHECK(r.evaluations <= o.max_evaluations * (o.restarts + 1));
  }

  TEST_CASE("all five parameters with a small budget") {
    OptimizeOptions o;
    o.max_evaluations = 80;
    o.restarts = 0;
    const OptimizeResult r = optimize(preset("15dB"), o);
    CHECK(r.cost <= r.initial_cost);
    for (const ParamBound& b : o.bounds) {
      const double v = get_param(r.config, b.param);
      CHECK(v >= b.lo);
      CHECK(v <= b.hi);
    }
  }

  TEST_CASE("same seed, same optimum") {
    const OptimizeOptions o = only(FreeParam::zeta0_rad);
    const OptimizeResult a = optimize(preset("15dB"), o);
    const OptimizeResult b = optimize(preset("15dB"), o);
    CHECK(a.cost == b.cost);
    CHECK(a.config.zeta0_rad == b.config.zeta0_rad);
    CHECK(a.evaluations == b.evaluations);
  }

  TEST_CASE("empty or inverted bounds are infeasible") {
    OptimizeOptions o;
    o.bounds = {{FreeParam::pump_power_w, 200.0, 100.0}};
    CHECK_THROWS_AS(optimize(preset("15dB"), o), InfeasibleError);
    o.bounds = {{FreeParam::pump_power_w, 100.0, 100.0}};
    CHECK_THROWS_AS(optimize(preset("15dB"), o), InfeasibleError);
  }

  TEST_CASE("no free parameters returns the start") {
    OptimizeOptions o;
    o.bounds.clear();
    const OptimizeResult r = optimize(preset("15dB"), o);
    CHECK(r.cost == r.initial_cost);
    CHECK(r.config.amp.ring.transmissivity == 0.0089);
  }

  TEST_CASE("lighter mirrors give more mid-band improvement") {
    const std::vector<MassSweepEntry> s = mass_sweep(preset("15dB"), {0.003, 0.030, 0.300}, OptimizeOptions{});
    REQUIRE(s.size() == 3);
    CHECK(s[0].midband_improvement > s[1].midband_improvement);
    CHECK(s[1].midband_improvement > s[2].midband_improvement);
    for (const MassSweepEntry& e : s) {
      CHECK(e.optimum.config.amp.ring.mirror_mass_kg == e.mass_kg);
      CHECK(e.budget.total.size() == e.optimum.config.grid.n_points);
    }
    CHECK_THROWS_AS(mass_sweep(preset("15dB"), {-1.0}, OptimizeOptions{}), ConfigError);
  }
}
