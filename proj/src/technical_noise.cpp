#include "qnamp/technical_noise.hpp"

#include <cmath>
#include <stdexcept>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

using constants::k_B;
using constants::pi;

void ScatterModel::validate() const {
  if (!(exponent > 1.0)) throw ConfigError("scatter: spectral exponent must exceed 1");
  if (!(amplitude_nm2_mm >= 0.0) || !(cutoff_scale > 0.0) || !(beam_radius_mm > 0.0) ||
      !(wavelength_nm > 0.0)) {
    throw ConfigError("scatter: model parameters must be positive");
  }
}

double scatter_loss(const ScatterModel& s) {
  s.validate();
  const double k = 4.0 * pi / s.wavelength_nm;
  return k * k * s.amplitude_nm2_mm / (s.exponent - 1.0) *
         std::pow(std::sqrt(2.0) * s.cutoff_scale * s.beam_radius_mm, s.exponent - 1.0);
}

void RinModel::validate() const {
  if (!(floor >= 0.0) || !(corner_hz >= 0.0)) throw ConfigError("rin: floor and corner must be >= 0");
}

double rin(const RinModel& r, double f_hz) {
  if (!(f_hz > 0.0)) throw std::invalid_argument("rin: frequency must be positive");
  return std::abs((f_hz + r.corner_hz) / f_hz) * r.floor;
}

double rin_displacement(const RingCavityParams& p, double p_circ, const RinModel& r, double f_hz) {
  const double chi = std::abs(susceptibility(p, constants::two_pi * f_hz));
  const double dp = rin(r, f_hz);
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < 3; ++i) x[i] = chi * 2.0 * p_circ * std::cos(p.incidence_rad[i]) / constants::c * dp;
  return projected_displacement_coherent(p, x);
}

void BackscatterParams::validate() const {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ConfigError("backscatter: fraction must lie in [0, 1)");
  pump.validate();
  rin.validate();
}

double backscatter_noise(const BackscatterParams& b, double f_hz) {
  const double photons = b.pump.source_power_w / (2.0 * constants::hbar * b.pump.omega0());
  return std::sqrt(0.5 * b.fraction * photons) * rin(b.rin, f_hz);
}

double SuspensionParams::pendulum_omega() const {
  if (pendulum_hz > 0.0) return constants::two_pi * pendulum_hz;
  return std::sqrt(constants::g_n / length_m);
}

void SuspensionParams::validate() const {
  if (!(young_pa > 0.0) || !(density_kg_m3 > 0.0) || !(heat_capacity_j_kg_k > 0.0) ||
      !(conductivity_w_m_k > 0.0) || !(width_m > 0.0) || !(thickness_m > 0.0) || !(length_m > 0.0) ||
      n_fibers < 1 || !(temperature_k > 0.0) || !(mass_kg > 0.0) || pendulum_hz < 0.0) {
    throw ConfigError("sus: material and geometry parameters must be positive");
  }
  if (!(phi_surface >= 0.0) || !(phi_bulk >= 0.0) || !(surface_depth_m >= 0.0)) {
    throw ConfigError("sus: loss angles and surface depth must be >= 0");
  }
}

double fiber_loss_angle(const SuspensionParams& s) {
  const double surface_to_volume = 2.0 * (s.width_m + s.thickness_m) / (s.width_m * s.thickness_m);
  return s.phi_bulk + s.phi_surface * s.surface_depth_m * surface_to_volume;
}

double thermoelastic_loss_angle(const SuspensionParams& s, double omega) {
  const double stress = s.mass_kg * constants::g_n / (s.n_fibers * s.width_m * s.thickness_m);
  const double mismatch = s.expansion_per_k - stress * s.dlogy_dt_per_k / s.young_pa;
  const double delta = s.young_pa * s.temperature_k / (s.density_kg_m3 * s.heat_capacity_j_kg_k) * mismatch * mismatch;
  const double tau = s.density_kg_m3 * s.heat_capacity_j_kg_k * s.thickness_m * s.thickness_m /
                     (pi * pi * s.conductivity_w_m_k);
  const double wt = omega * tau;
  return delta * wt / (1.0 + wt * wt);
}

double dilution_factor(const SuspensionParams& s) {
  const double inertia = s.width_m * std::pow(s.thickness_m, 3) / 12.0;
  return std::sqrt(s.n_fibers * s.young_pa * inertia / (s.mass_kg * constants::g_n)) / (2.0 * s.length_m);
}

double pendulum_loss_angle(const SuspensionParams& s, double omega) {
  double phi = fiber_loss_angle(s);
  if (s.thermoelastic) phi += thermoelastic_loss_angle(s, omega);
  if (s.dissipation_dilution) phi *= dilution_factor(s);
  return phi;
}

double suspension_thermal(const SuspensionParams& s, double f_hz) {
  if (!(f_hz > 0.0)) throw std::invalid_argument("suspension thermal: frequency must be positive");
  const double w = constants::two_pi * f_hz;
  const double w0 = s.pendulum_omega();
  const double phi = pendulum_loss_angle(s, w);
  const double w02 = w0 * w0;
  const double d = w02 - w * w;
  const double x2 = 4.0 * k_B * s.temperature_k / (w * s.mass_kg) * w02 * phi / (w02 * w02 * phi * phi + d * d);
  return std::sqrt(x2);
}

double coating_brownian(const CoatingThermalParams& c, double f_hz) {
  if (!(f_hz > 0.0)) throw std::invalid_argument("coating brownian: frequency must be positive");
  const double s = 2.0 * k_B * c.temperature_k / (pi * pi * f_hz) * c.thickness_loss_m *
                   (1.0 - c.substrate_poisson * c.substrate_poisson) /
                   (c.beam_radius_m * c.beam_radius_m * c.substrate_young_pa);
  return std::sqrt(s);
}

}  // namespace qnamp
