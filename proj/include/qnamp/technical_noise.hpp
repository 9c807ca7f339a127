#pragma once

// Classical noise sources of the amplifier: scatter loss, pump intensity
// noise, back-scatter, suspension and coating thermal motion.

#include "qnamp/amplifier.hpp"

namespace qnamp {

/// Power-law micro-roughness model. Lengths in the units named.
struct ScatterModel {
  double amplitude_nm2_mm = 8e-3;  // A
  double exponent = 1.2;           // gamma, > 1
  double cutoff_scale = 1.0;       // alpha
  double beam_radius_mm = 5.0;
  double wavelength_nm = 2000.0;

  void validate() const;
};

/// Scatter loss per optic as a power fraction.
double scatter_loss(const ScatterModel& s);

struct RinModel {
  double floor = 1e-9;        // 1/sqrt(Hz)
  double corner_hz = 50.0;

  void validate() const;
};

/// |(f + f0)/f| * floor. Throws std::invalid_argument for f <= 0.
double rin(const RinModel& r, double f_hz);

/// Cos-projected mirror displacement (m/sqrt(Hz)) of one ring driven by pump
/// intensity noise, summed coherently over the three mirrors.
double rin_displacement(const RingCavityParams& p, double p_circ, const RinModel& r, double f_hz);

struct BackscatterParams {
  double fraction = 1e-7;  // back-scattered share of the pump power
  PumpParams pump;
  RinModel rin;

  void validate() const;
};

/// Quanta/sqrt(Hz) added to each input quadrature of the interferometer.
double backscatter_noise(const BackscatterParams& b, double f_hz);

/// Lower-stage ribbon fibre suspension of one amplifier mirror.
struct SuspensionParams {
  double young_pa = 155.8e9;
  double density_kg_m3 = 2329.0;
  double expansion_per_k = 1e-10;
  double dlogy_dt_per_k = -2e-5;
  double heat_capacity_j_kg_k = 300.0;
  double conductivity_w_m_k = 700.0;
  double width_m = 250e-6;
  double thickness_m = 50e-6;
  double length_m = 0.6;
  int n_fibers = 2;
  double phi_surface = 1e-5;
  double phi_bulk = 2e-9;
  double surface_depth_m = 1e-6;
  double temperature_k = 123.0;
  double pendulum_hz = 0.0;  // 0: sqrt(g / length) / 2 pi
  double mass_kg = 0.030;
  bool dissipation_dilution = true;
  bool thermoelastic = true;

  double pendulum_omega() const;
  void validate() const;
};

/// Surface plus bulk loss angle of the fibre material.
double fiber_loss_angle(const SuspensionParams& s);
/// Thermoelastic loss angle of a ribbon under static tension.
double thermoelastic_loss_angle(const SuspensionParams& s, double omega);
/// Share of the pendulum energy stored in fibre bending.
double dilution_factor(const SuspensionParams& s);
/// Loss angle of the pendulum mode.
double pendulum_loss_angle(const SuspensionParams& s, double omega);

/// Displacement ASD (m/sqrt(Hz)) of one suspended mirror.
double suspension_thermal(const SuspensionParams& s, double f_hz);

struct CoatingThermalParams {
  double thickness_loss_m = 0.0;  // sum over layers of d_i phi_i
  double beam_radius_m = 5e-3;
  double temperature_k = 123.0;
  double substrate_poisson = 0.27;
  double substrate_young_pa = 155.8e9;
};

/// Displacement ASD (m/sqrt(Hz)) of one coated mirror.
double coating_brownian(const CoatingThermalParams& c, double f_hz);

}  // namespace qnamp
