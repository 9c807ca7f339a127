// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "qnamp/amplifier.hpp"
#include "qnamp/budget.hpp"
#include "qnamp/coating.hpp"
#include "qnamp/constants.hpp"
#include "qnamp/filter_cavity.hpp"
#include "qnamp/interferometer.hpp"
#include "qnamp/optimizer.hpp"
#include "qnamp/report.hpp"
#include "qnamp/technical_noise.hpp"

using namespace qnamp;
using constants::pi;
using constants::two_pi;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++failures;
}

void info(const char* name, const std::string& detail) { std::printf("INFO  %-28s %s\n", name, detail.c_str()); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void caves() {
  const auto t0 = Clock::now();
  const FrequencyGrid grid = FrequencyGrid::log_spaced(10, 5000, 16);
  double worst = 0.0;
  for (double r : {0.3, 0.9, 1.6}) {
    for (double eps : {0.02, 0.1, 0.3}) {
      for (double g : {2.0, 10.0, 100.0}) {
        ChainConfig c;
        c.ifo.model = IfoModel::flat;
        c.ifo.arm_loss = c.ifo.src_loss = 0.0;
        c.ifo.readout_loss = eps;
        c.sqz.db = 20.0 * r / std::log(10.0);
        c.sqz.injection_loss = 0.0;
        c.sqz.ifc_list.clear();
        c.amp.model = AmpModel::ideal_gain;
        c.amp.ideal_gain = g;
        c.ofc_enabled = false;
        c.zeta0_rad = 0.0;
        const auto [off_o, on_o] = caves_toy(r, eps, g);
        for (double v : total_strain_psd(c, grid)) worst = std::max(worst, std::abs(v / on_o - 1.0));
        c.amp.enabled = false;
        for (double v : total_strain_psd(c, grid)) worst = std::max(worst, std::abs(v / off_o - 1.0));
      }
    }
  }
  const double dt = seconds_since(t0);
  report("caves_oracle", worst < 1e-10 && dt < 1.0, fmt("max rel err %.2e, %.3f s", worst, dt));
}

double lossless_k(const RingCavityParams& p, const PumpParams& pump, double f) {
  const double w = two_pi * f;
  return std::abs(ring_io_exact(p, kappa_A(p, pump, circulating_power_exact(p, pump), w), w).k);
}

void unity_gain() {
  const auto t0 = Clock::now();
  // Reference point of the scaling law: T_A = 1%, P_circ = 40 kW, 30 g.
  RingCavityParams p;
  p.transmissivity = 0.01;
  p.mirror_mass_kg = 0.030;
  PumpParams pump;
  pump.source_power_w = 200.0;
  const double k1500 = lossless_k(p, pump, 1500.0);
  const double k150 = lossless_k(p, pump, 150.0);
  const double dt = seconds_since(t0);
  report("unity_gain_frequency", std::abs(k1500 - 1.0) < 0.03 && std::abs(k150 / 100.0 - 1.0) < 0.03 && dt < 1.0,
         fmt("|K_A(1.5 kHz)| = %.4f, |K_A(150 Hz)| = %.2f, %.3f s", k1500, k150, dt));
  const ChainConfig c = preset("15dB");
  info("unity_gain_preset_15dB", fmt("|K_A(1.5 kHz)| = %.4f with T_A = %.4f, P_source = %.0f W",
                                     lossless_k(c.amp.ring, c.amp.pump, 1500.0), c.amp.ring.transmissivity,
                                     c.amp.pump.source_power_w));
}

void circulating_power() {
  RingCavityParams p;
  p.transmissivity = 0.01;
  PumpParams pump;
  pump.source_power_w = 200.0;
  const double ex = circulating_power_exact(p, pump);
  const double ap = circulating_power_approx(p, pump);
  const double dev = std::abs(ex / ap - 1.0);
  report("circulating_power", std::abs(ex / 40e3 - 1.0) < 0.01 && dev < 0.006,
         fmt("P_circ = %.1f W, exact/approx deviation %.3f%%", ex, 100 * dev));
}

void scatter() {
  const double l = scatter_loss(ScatterModel{});
  const double oracle = std::pow(4 * pi / 2000.0, 2) * 8e-3 / 0.2 * std::pow(std::sqrt(2.0) * 5.0, 0.2);
  report("scatter_loss", std::abs(l / 2.3e-6 - 1.0) < 0.05 && std::abs(l / oracle - 1.0) < 1e-12,
         fmt("loss fraction %.4e", l));
}

void backscatter() {
  BackscatterParams b;
  b.pump.source_power_w = 200.0;
  b.fraction = 1e-7;
  b.rin.floor = 1e-9;
  b.rin.corner_hz = 0.0;
  const double v = backscatter_noise(b, 100.0);
  report("backscatter", std::abs(v / 7e-3 - 1.0) <= 0.10, fmt("%.4e quanta/rtHz per quadrature", v));
}

void exact_vs_approx() {
  const RingCavityParams p;
  const PumpParams pump;
  double dk = 0.0;
  double deta = 0.0;
  for (const double f : FrequencyGrid::log_spaced(10, 1000, 400).values()) {
    const double w = two_pi * f;
    const double kappa = kappa_A(p, pump, circulating_power_exact(p, pump), w);
    const RingResponse e = ring_io_exact(p, kappa, w);
    const RingResponse a = ring_io_approx(p, kappa, w);
    dk = std::max(dk, std::abs(e.k / a.k - 1.0));
    deta = std::max(deta, std::abs(std::remainder(e.eta() - a.eta(), pi)) * 180 / pi);
  }
  report("ring_exact_vs_approx", dk < 0.01 && deta < 0.5, fmt("max |dK|/K = %.3f%%, max |d eta| = %.4f deg", 100 * dk, deta));
}

double mdag_m_error(const Mat2& m) { return (m.adjoint() * m - Mat2::identity()).max_abs(); }

void unitarity() {
  const FrequencyGrid grid = FrequencyGrid::log_spaced(1.5, 1e4, 1000);
  const RingCavityParams ring;
  const PumpParams pump;
  FilterCavityParams fc;
  fc.roundtrip_loss = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.omega(i);
    const double kappa = kappa_A(ring, pump, circulating_power_exact(ring, pump), w);
    worst = std::max(worst, std::abs(std::abs(ring_io_exact(ring, kappa, w).matrix().det()) - 1.0));
    worst = std::max(worst, mdag_m_error(rotation(0.37 * static_cast<double>(i))));
    worst = std::max(worst, std::abs(std::abs(squeeze(15.0, 0.01 * static_cast<double>(i)).det()) - 1.0));
    worst = std::max(worst, mdag_m_error(quadrature_reflection(fc, w)));
  }
  report("unitarity", worst < 1e-10, fmt("max deviation %.2e over 1000 points", worst));
}

void fdt() {
  const SuspensionParams s;
  const double w0 = s.pendulum_omega();
  double worst = 0.0;
  for (const double f : FrequencyGrid::log_spaced(0.05, 5000, 400).values()) {
    const double w = two_pi * f;
    const double phi = pendulum_loss_angle(s, w);
    const std::complex<double> chi = 1.0 / (s.mass_kg * (w0 * w0 * std::complex<double>(1.0, phi) - w * w));
    const double x2 = -4 * constants::k_B * s.temperature_k * chi.imag() / w;
    worst = std::max(worst, std::abs(std::pow(suspension_thermal(s, f), 2) / x2 - 1.0));
  }
  report("fdt_consistency", worst < 1e-10, fmt("max rel err %.2e", worst));
}

void coating() {
  const CoatingMaterials m;
  const CoatingStack qw = quarter_wave_stack(m, 12);
  const double t_qw = stack_transmission(qw, m.wavelength_m).t;
  double energy = 0.0;
  for (const double lam : FrequencyGrid::log_spaced(1e-6, 4e-6, 300).values()) {
    const PowerCoefficients pc = stack_transmission(qw, lam);
    energy = std::max(energy, std::abs(pc.r + pc.t - 1.0));
  }
  const StackOptimizationResult r = optimize_stack(m, StackOptimizerOptions{});
  const double t_opt = stack_transmission(r.stack, m.wavelength_m).t;
  const bool ok = t_qw <= 5e-6 && t_opt <= 5e-6 && r.objective <= r.quarter_wave_objective && energy < 1e-12;
  report("coating", ok,
         fmt("T_qw = %.3f ppm, T_opt = %.3f ppm, objective/qw = %.4f", t_qw * 1e6, t_opt * 1e6,
             r.objective / r.quarter_wave_objective) +
             fmt(", |R+T-1| <= %.1e", energy));
}

void qualitative() {
  const auto t0 = Clock::now();
  const ChainConfig on = preset("15dB");
  ChainConfig off = on;
  off.amp.enabled = false;
  const FrequencyGrid band = FrequencyGrid::log_spaced(50, 500, 120);
  const StrainBudget b_on = budget(on, band);
  const StrainBudget b_off = budget(off, band);
  double ratio = 0.0;
  double dominance = 1e300;
  for (std::size_t i = 0; i < band.size(); ++i) {
    ratio = std::max(ratio, b_on.total[i] / b_off.total[i]);
    double next = 0.0;
    for (const char* l : {"rin_residual", "coating_brownian", "suspension_thermal"}) next = std::max(next, b_on.source(l)[i]);
    dominance = std::min(dominance, b_on.source("ring_loss")[i] / next);
  }
  const std::vector<MassSweepEntry> sweep = mass_sweep(on, {0.003, 0.030, 0.300}, OptimizeOptions{});
  const bool ordered = sweep[0].midband_improvement > sweep[1].midband_improvement &&
                       sweep[1].midband_improvement > sweep[2].midband_improvement;
  const double dt = seconds_since(t0);
  report("amplifier_improves_15dB", ratio < 1.0, fmt("max on/off ASD ratio over 50-500 Hz = %.4f", ratio));
  report("ring_loss_dominates", dominance > 1.0, fmt("min ring_loss / next amplifier source = %.3f", dominance));
  report("mass_sweep_ordering", ordered,
         fmt("improvement 3 g %.3f, 30 g %.3f, 300 g %.3f", sweep[0].midband_improvement,
             sweep[1].midband_improvement, sweep[2].midband_improvement));
  report("qualitative_runtime", dt < 60.0, fmt("%.2f s", dt));
}

std::string all_csv(const ChainConfig& c) {
  const std::string line = manifest_line("budget", config_hash(c));
  StackOptimizerOptions so;
  so.seed = c.seed;
  return budget_table(budget(c)).render(line) + gain_table(gain_curve(c, c.grid.build())).render(line) +
         coating_table(optimize_stack(c.coat.materials, so).stack).render(line);
}

void determinism() {
  ChainConfig c = preset("20dB");
  c.seed = 11;
  const std::string a = all_csv(c);
  const std::string b = all_csv(c);
  report("determinism", !a.empty() && a == b, fmt("%.0f bytes compared", static_cast<double>(a.size())));
}

}  // namespace

int main() {
  caves();
  unity_gain();
  circulating_power();
  scatter();
  backscatter();
  exact_vs_approx();
  unitarity();
  fdt();
  coating();
  qualitative();
  determinism();
  std::printf("%s: %d failing\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
