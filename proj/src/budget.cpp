#include "qnamp/budget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

double CoatingConfig::thickness_loss_m() const {
  if (n_pairs == 0) return 0.0;
  return brownian_proxy(quarter_wave_stack(materials, n_pairs)).product();
}

void ChainConfig::validate() const {
  ifo.validate();
  sqz.validate();
  ofc.validate();
  sus.validate();
  amp.ring.validate();
  amp.pump.validate();
  amp.rin.validate();
  if (!(amp.ideal_gain > 0.0) || !std::isfinite(amp.ideal_gain)) {
    throw ConfigError("amp: ideal gain must be positive");
  }
  if (!(amp.cmrr_db > 0.0) || !(amp.cmrr_ref_hz > 0.0)) {
    throw ConfigError("amp: common-mode rejection and its reference frequency must be positive");
  }
  if (coat.n_pairs < 0 || !(coat.beam_radius_m > 0.0) || !(coat.substrate_young_pa > 0.0) ||
      !(coat.substrate_poisson >= 0.0 && coat.substrate_poisson < 0.5)) {
    throw ConfigError("coat: invalid pair count, beam radius or substrate constants");
  }
  if (!std::isfinite(zeta0_rad)) throw ConfigError("run: homodyne angle must be finite");
  if (!(grid.f_min_hz > 0.0) || !(grid.f_max_hz > grid.f_min_hz) || grid.n_points < 2) {
    throw ConfigError("run: grid needs 0 < f_min < f_max and at least 2 points");
  }
}

namespace {

template <class F>
QuadratureTransfer per_point(const FrequencyGrid& grid, F&& fn, std::string label = {}) {
  std::vector<Mat2> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = fn(i);
  return {grid, std::move(m), std::move(label)};
}

// Classical displacement noise with PSD `xi2` (m^2/Hz) driving b_2 with
// amplitude `coupling`.
NoisePath displacement_path(const FrequencyGrid& grid, std::string label, std::vector<double> xi2,
                            const std::vector<cplx>& coupling) {
  auto t = per_point(grid, [&](std::size_t i) { return Mat2{0.0, 0.0, coupling[i], 0.0}; });
  return {std::move(label), std::move(xi2), std::move(t), Mat2::identity()};
}

void check_resonance(const RingCavityParams& ring, const FrequencyGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.omega(i) - ring.pendulum_omega) <= 1e-12 * ring.pendulum_omega) {
      throw PhysicsError("amp.susceptibility", "grid point " + std::to_string(grid.hz(i)) +
                                                   " Hz sits on the pendulum resonance");
    }
  }
}

void apply_ring(const ChainConfig& c, const FrequencyGrid& grid, NoiseSet& paths, SignalPath& sig) {
  const RingCavityParams& ring = c.amp.ring;
  const RingModel model = c.amp.model == AmpModel::ring_approx ? RingModel::approx : RingModel::exact;
  const double pc = model == RingModel::exact ? circulating_power_exact(ring, c.amp.pump)
                                              : circulating_power_approx(ring, c.amp.pump);
  const std::size_t n = grid.size();
  std::vector<ForwardResponse> fr(n);
  for (std::size_t i = 0; i < n; ++i) fr[i] = mz_forward(ring, c.amp.pump, model, grid.omega(i));

  paths = propagate(paths, per_point(grid, [&](std::size_t i) { return fr[i].signal; }, "amplifier"));
  for (std::size_t i = 0; i < n; ++i) sig.transfer[i] = fr[i].signal * sig.transfer[i];

  if (ring.roundtrip_loss > 0.0) {
    paths.push_back({"ring_loss", std::vector<double>(n, 1.0),
                     per_point(grid, [&](std::size_t i) { return fr[i].loss_vacuum; }), Mat2::identity()});
  }

  std::vector<cplx> coupling(n);
  for (std::size_t i = 0; i < n; ++i) coupling[i] = fr[i].displacement_coupling;

  const RingPair pair = cmrr_split(ring, c.amp.cmrr_db, c.amp.cmrr_ref_hz);
  std::vector<double> rin2(n), coat2(n), sus2(n);
  CoatingThermalParams ct{c.coat.thickness_loss_m(), c.coat.beam_radius_m, c.sus.temperature_k,
                          c.coat.substrate_poisson, c.coat.substrate_young_pa};
  SuspensionParams sp = c.sus;
  sp.mass_kg = ring.mirror_mass_kg;
  // M1 is the coupler; M2 and M3 carry the high-reflector coating.
  const double hr_weight = std::pow(std::cos(ring.incidence_rad[1]), 2) + std::pow(std::cos(ring.incidence_rad[2]), 2);
  double all_weight = 0.0;
  for (double th : ring.incidence_rad) all_weight += std::cos(th) * std::cos(th);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = grid.hz(i);
    const double xr = rin_displacement(ring, pc, c.amp.rin, f) *
                      cmrr_ratio(ring, pair.left, pair.right, grid.omega(i));
    rin2[i] = xr * xr;
    const double xc = coating_brownian(ct, f);
    coat2[i] = hr_weight * xc * xc;
    const double xs = suspension_thermal(sp, f);
    sus2[i] = all_weight * xs * xs;
  }
  paths.push_back(displacement_path(grid, "rin_residual", std::move(rin2), coupling));
  paths.push_back(displacement_path(grid, "coating_brownian", std::move(coat2), coupling));
  paths.push_back(displacement_path(grid, "suspension_thermal", std::move(sus2), coupling));
}

// The output cavity's detuning is quoted by the sense in which it turns the
// homodyne angle. Reflecting the field turns the readout the other way.
FilterCavityParams field_frame(FilterCavityParams f) {
  f.detuning_hz = -f.detuning_hz;
  return f;
}

}  // namespace

Assembly assemble(const ChainConfig& c, const FrequencyGrid& grid) {
  c.validate();
  const bool amp_on = c.amp.enabled;
  const bool ring = amp_on && c.amp.model != AmpModel::ideal_gain;
  if (ring) check_resonance(c.amp.ring, grid);

  NoiseSet paths = injection_chain(c.sqz, c.ifo, grid, c.ifc_mode);
  if (ring && c.amp.backward_phase) {
    paths = propagate(paths, per_point(grid, [&](std::size_t i) { return mz_backward(c.amp.ring, grid.omega(i)); }));
  }
  paths = ifo_output(paths, c.ifo, grid);
  SignalPath sig = ifo_signal_path(c.ifo, grid);

  HomodyneAngle zeta(grid.size(), 0.0);
  HomodyneAngle effective(grid.size(), 0.0);
  if (amp_on) {
    if (ring) {
      apply_ring(c, grid, paths, sig);
    } else {
      const Mat2 g = Mat2::diagonal(c.amp.ideal_gain, 1.0 / c.amp.ideal_gain);
      paths = propagate(paths, QuadratureTransfer::constant(grid, g, "amplifier"));
      for (Vec2& v : sig.transfer) v = g * v;
    }
    zeta.assign(grid.size(), c.zeta0_rad);
    effective = zeta;
    if (c.ofc_enabled) {
      const FilterCavityParams ofc = field_frame(c.ofc);
      const QuadratureTransfer mo = quadrature_reflection(ofc, grid);
      paths = reflect(paths, ofc, grid, "readout_loss");
      for (std::size_t i = 0; i < grid.size(); ++i) sig.transfer[i] = mo.at(i) * sig.transfer[i];
      effective = effective_readout_angle(ofc, c.zeta0_rad, grid);
    }
  }
  paths = additive_loss(paths, c.ifo.readout_loss, grid, "readout_loss");
  return {std::move(paths), std::move(sig), std::move(zeta), std::move(effective)};
}

const std::vector<double>& StrainBudget::source(const std::string& label) const {
  for (std::size_t k = 0; k < kSourceLabels.size(); ++k) {
    if (label == kSourceLabels[k]) return sources[k];
  }
  throw std::out_of_range("budget: unknown source label '" + label + "'");
}

namespace {

std::size_t label_index(const std::string& label) {
  for (std::size_t k = 0; k < kSourceLabels.size(); ++k) {
    if (label == kSourceLabels[k]) return k;
  }
  throw std::logic_error("budget: noise path with unlisted label '" + label + "'");
}

StrainBudget budget_serial(const ChainConfig& c, const FrequencyGrid& grid) {
  const Assembly a = assemble(c, grid);
  const std::size_t n = grid.size();
  std::vector<std::vector<double>> psd(kSourceLabels.size(), std::vector<double>(n, 0.0));
  for (const NoisePath& p : a.paths) {
    std::vector<double>& dst = psd[label_index(p.label)];
    for (std::size_t i = 0; i < n; ++i) dst[i] += p.input_psd[i] * homodyne_psd(a.zeta[i], p.effective(i));
  }
  std::vector<cplx> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = homodyne_gain(a.zeta[i], a.signal.transfer[i]);

  StrainBudget b{grid, {}, {}, {}};
  std::vector<double> total_psd(n, 0.0);
  for (const auto& s : psd) {
    for (std::size_t i = 0; i < n; ++i) total_psd[i] += s[i];
    b.sources.push_back(signal_referred(s, gain).asd);
  }
  StrainAsd t = signal_referred(total_psd, gain);
  b.total = std::move(t.asd);
  b.flagged = std::move(t.flagged);
  return b;
}

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("QNAMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

StrainBudget budget(const ChainConfig& c, const FrequencyGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t chunks = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 32));
  if (chunks <= 1) return budget_serial(c, grid);

  c.validate();
  std::vector<StrainBudget> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  for (std::size_t k = 0; k < chunks; ++k) {
    workers.emplace_back([&, k] {
      try {
        const std::size_t lo = n * k / chunks;
        const std::size_t hi = n * (k + 1) / chunks;
        std::vector<double> hz(grid.values().begin() + lo, grid.values().begin() + hi);
        parts[k] = budget_serial(c, FrequencyGrid(std::move(hz)));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  StrainBudget out{grid, std::vector<std::vector<double>>(kSourceLabels.size()), {}, {}};
  for (const StrainBudget& p : parts) {
    for (std::size_t s = 0; s < kSourceLabels.size(); ++s) {
      out.sources[s].insert(out.sources[s].end(), p.sources[s].begin(), p.sources[s].end());
    }
    out.total.insert(out.total.end(), p.total.begin(), p.total.end());
    out.flagged.insert(out.flagged.end(), p.flagged.begin(), p.flagged.end());
  }
  return out;
}

StrainBudget budget(const ChainConfig& c) { return budget(c, c.grid.build()); }

std::vector<double> total_strain_psd(const ChainConfig& c, const FrequencyGrid& grid) {
  const Assembly a = assemble(c, grid);
  const HomodyneResult h = homodyne(a.zeta, a.paths, a.signal);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h.noise_psd[i] / std::norm(h.signal_gain[i]);
  return out;
}

GainCurve gain_curve(const ChainConfig& c, const FrequencyGrid& grid) {
  ChainConfig off = c;
  off.amp.enabled = false;
  const Assembly on_a = assemble(c, grid);
  const Assembly off_a = assemble(off, grid);
  GainCurve g{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size(), 0.0), on_a.effective_zeta};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double num = std::abs(homodyne_gain(on_a.zeta[i], on_a.signal.transfer[i]));
    const double den = std::abs(homodyne_gain(off_a.zeta[i], off_a.signal.transfer[i]));
    g.gain[i] = num / den;
    if (!c.amp.enabled) continue;
    if (c.amp.model == AmpModel::ideal_gain) {
      g.k_a[i] = c.amp.ideal_gain;
    } else {
      const RingModel m = c.amp.model == AmpModel::ring_approx ? RingModel::approx : RingModel::exact;
      g.k_a[i] = mz_forward(c.amp.ring, c.amp.pump, m, grid.omega(i)).k;
    }
  }
  return g;
}

ChainConfig preset(const std::string& name) {
  ChainConfig c;
  c.ifo.arm_loss = 20e-6;
  c.ifo.readout_loss = 0.10;
  c.ifo.wavelength_m = 2e-6;
  c.amp.pump.wavelength_m = 2e-6;
  c.amp.ring.roundtrip_length_m = 30.0;
  c.amp.cmrr_db = 60.0;
  if (name == "15dB") {
    c.ifo.src_loss = 300e-6;
    c.sqz.db = 15.0;
    c.sqz.injection_loss = 0.01;
    c.sqz.ifc_list = {{500.0, 0.0014, 20e-6, -33.4}};
    c.amp.ring.roundtrip_loss = 30e-6;
    c.amp.ring.transmissivity = 0.0089;
    c.amp.pump.source_power_w = 220.0;
    c.amp.ring.mirror_mass_kg = 0.030;
    c.ofc = {40.0, 43e-6, 20e-6, -80.4};
    c.zeta0_rad = 0.0;
  } else if (name == "20dB") {
    c.ifo.src_loss = 100e-6;
    c.sqz.db = 20.0;
    c.sqz.injection_loss = 0.003;
    c.sqz.ifc_list = {{800.0, 0.0022, 10e-6, -34.6}, {800.0, 0.0022, 10e-6, 4.96}};
    c.amp.ring.roundtrip_loss = 15e-6;
    c.amp.ring.transmissivity = 0.0090;
    c.amp.pump.source_power_w = 230.0;
    c.amp.ring.mirror_mass_kg = 0.010;
    c.ofc = {25.0, 22e-6, 10e-6, -77.8};
    c.zeta0_rad = 0.0;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected 15dB or 20dB)");
  }
  c.sus.mass_kg = c.amp.ring.mirror_mass_kg;
  return c;
}

}  // namespace qnamp
