#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qnamp/budget.hpp"
#include "qnamp/errors.hpp"

using namespace qnamp;

namespace {

ChainConfig caves_config(double r, double eps, double gain) {
  ChainConfig c;
  c.ifo.model = IfoModel::flat;
  c.ifo.arm_loss = 0.0;
  c.ifo.src_loss = 0.0;
  c.ifo.readout_loss = eps;
  c.sqz.db = 20.0 * r / std::log(10.0);
  c.sqz.injection_loss = 0.0;
  c.sqz.ifc_list.clear();
  c.amp.model = AmpModel::ideal_gain;
  c.amp.ideal_gain = gain;
  c.ofc_enabled = false;
  c.zeta0_rad = 0.0;
  return c;
}

double band_max_ratio(const StrainBudget& on, const StrainBudget& off, double lo, double hi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < on.grid.size(); ++i) {
    const double f = on.grid.hz(i);
    if (f < lo || f > hi) continue;
    worst = std::max(worst, on.total[i] / off.total[i]);
  }
  return worst;
}

}  // namespace

TEST_SUITE("budget") {
  TEST_CASE("phase-insensitive gain reduces to the closed-form lossy result") {
    const FrequencyGrid grid = FrequencyGrid::log_spaced(10, 1000, 7);
    for (double r : {0.0, 0.7, 1.5}) {
      for (double eps : {0.0, 0.1, 0.3}) {
        for (double g : {1.0, 3.0, 30.0}) {
          const auto [off_oracle, on_oracle] = caves_toy(r, eps, g);
          ChainConfig c = caves_config(r, eps, g);
          const std::vector<double> on = total_strain_psd(c, grid);
          c.amp.enabled = false;
          const std::vector<double> off = total_strain_psd(c, grid);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(on[i] - on_oracle) <= 1e-10 * on_oracle);
            CHECK(std::abs(off[i] - off_oracle) <= 1e-10 * off_oracle);
          }
        }
      }
    }
  }

  TEST_CASE("lossless unsqueezed interferometer gives the standard quantum form") {
    ChainConfig c;
    c.ifo.arm_loss = c.ifo.src_loss = c.ifo.readout_loss = 0.0;
    c.sqz.db = 0.0;
    c.sqz.injection_loss = 0.0;
    c.sqz.ifc_list.clear();
    c.amp.enabled = false;
    const FrequencyGrid grid = FrequencyGrid::log_spaced(5, 5000, 40);
    const StrainBudget b = budget(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const KimbleFactors kf = kimble_factor(c.ifo, grid.omega(i));
      const double oracle = kf.h_sql * std::sqrt((1.0 + kf.k * kf.k) / (2.0 * kf.k));
      CHECK(b.total[i] == doctest::Approx(oracle).epsilon(1e-12));
    }
  }

  TEST_CASE("sources add in quadrature to the total") {
    for (const char* name : {"15dB", "20dB"}) {
      const StrainBudget b = budget(preset(name));
      for (std::size_t i = 0; i < b.grid.size(); ++i) {
        double s = 0.0;
        for (const auto& src : b.sources) s += src[i] * src[i];
        CHECK(std::sqrt(s) == doctest::Approx(b.total[i]).epsilon(1e-12));
        CHECK(std::isfinite(b.total[i]));
        CHECK(b.total[i] > 0.0);
        CHECK_FALSE(b.flagged[i]);
      }
    }
  }

  TEST_CASE("path order does not change the homodyne sum") {
    const ChainConfig c = preset("15dB");
    const FrequencyGrid grid = FrequencyGrid::log_spaced(10, 5000, 30);
    Assembly a = assemble(c, grid);
    const HomodyneResult fwd = homodyne(a.zeta, a.paths, a.signal);
    std::reverse(a.paths.begin(), a.paths.end());
    const HomodyneResult rev = homodyne(a.zeta, a.paths, a.signal);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(rev.noise_psd[i] == doctest::Approx(fwd.noise_psd[i]).epsilon(1e-13));
    }
  }

  TEST_CASE("disabled amplifier is transparent") {
    ChainConfig a = preset("15dB");
    a.amp.enabled = false;
    ChainConfig b = a;
    b.amp.ring.transmissivity = 0.02;
    b.amp.pump.source_power_w = 10.0;
    b.amp.ring.roundtrip_loss = 1e-3;
    b.ofc.detuning_hz = -150.0;
    b.zeta0_rad = 0.4;
    const StrainBudget ba = budget(a);
    const StrainBudget bb = budget(b);
    CHECK(ba.total == bb.total);
    for (const char* label : {"ring_loss", "rin_residual", "coating_brownian", "suspension_thermal"}) {
      for (double v : ba.source(label)) CHECK(v == 0.0);
    }
  }

  TEST_CASE("detection loss is suppressed by the gain") {
    const FrequencyGrid grid = FrequencyGrid::log_spaced(10, 1000, 5);
    const StrainBudget g1 = budget(caves_config(1.0, 0.1, 1.0), grid);
    const StrainBudget g8 = budget(caves_config(1.0, 0.1, 8.0), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(g8.source("readout_loss")[i] == doctest::Approx(g1.source("readout_loss")[i] / 8.0).epsilon(1e-12));
      CHECK(g8.source("quantum")[i] == doctest::Approx(g1.source("quantum")[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("amplifier improves the 15 dB preset across the mid band") {
    const ChainConfig on = preset("15dB");
    ChainConfig off = on;
    off.amp.enabled = false;
    const FrequencyGrid grid = FrequencyGrid::log_spaced(50, 500, 60);
    CHECK(band_max_ratio(budget(on, grid), budget(off, grid), 50, 500) < 1.0);
  }

  TEST_CASE("ring loss leads the amplifier-specific sources") {
    const FrequencyGrid grid = FrequencyGrid::log_spaced(50, 500, 60);
    const StrainBudget b = budget(preset("15dB"), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double ring = b.source("ring_loss")[i];
      for (const char* other : {"rin_residual", "coating_brownian", "suspension_thermal"}) {
        CHECK(ring > b.source(other)[i]);
      }
    }
  }

  TEST_CASE("unit ideal gain without a filter cavity leaves the signal unchanged") {
    ChainConfig c = caves_config(0.5, 0.1, 1.0);
    const GainCurve g = gain_curve(c, FrequencyGrid::log_spaced(10, 1000, 9));
    for (double v : g.gain) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("preset gain falls with frequency and approaches one") {
    const ChainConfig c = preset("15dB");
    const GainCurve g = gain_curve(c, FrequencyGrid::log_spaced(10, 500, 80));
    for (std::size_t i = 1; i < g.gain.size(); ++i) CHECK(g.gain[i] < g.gain[i - 1]);
    CHECK(g.gain.front() > 100.0);
    const GainCurve hi = gain_curve(c, FrequencyGrid(std::vector<double>{5000.0}));
    CHECK(hi.gain[0] == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("thread count does not change results") {
    const ChainConfig c = preset("20dB");
    const FrequencyGrid grid = FrequencyGrid::log_spaced(10, 5000, 257);
    ::setenv("QNAMP_THREADS", "1", 1);
    const StrainBudget one = budget(c, grid);
    ::setenv("QNAMP_THREADS", "5", 1);
    const StrainBudget five = budget(c, grid);
    ::unsetenv("QNAMP_THREADS");
    CHECK(one.total == five.total);
    CHECK(one.sources == five.sources);
  }

  TEST_CASE("resonance on the grid is reported with its source") {
    ChainConfig c = preset("15dB");
    const FrequencyGrid grid(std::vector<double>{0.5, 1.0, 2.0});
    try {
      (void)budget(c, grid);
      FAIL("expected PhysicsError");
    } catch (const PhysicsError& e) {
      CHECK(e.source() == "amp.susceptibility");
    }
  }

  TEST_CASE("presets") {
    const ChainConfig a = preset("15dB");
    CHECK(a.sqz.db == 15.0);
    CHECK(a.ifo.dark_port_loss() == doctest::Approx(320e-6));
    CHECK(a.amp.ring.transmissivity == 0.0089);
    CHECK(a.amp.pump.source_power_w == 220.0);
    CHECK(a.sqz.ifc_list.size() == 1);
    const ChainConfig b = preset("20dB");
    CHECK(b.sqz.db == 20.0);
    CHECK(b.sqz.ifc_list.size() == 2);
    CHECK(b.amp.ring.mirror_mass_kg == 0.010);
    CHECK_THROWS_AS(preset("12dB"), ConfigError);
  }

  TEST_CASE("invalid configurations are rejected") {
    ChainConfig c = preset("15dB");
    c.grid.n_points = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = preset("15dB");
    c.amp.ideal_gain = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}
