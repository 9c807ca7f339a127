#pragma once

// Triangular ring cavity and Mach-Zehnder optomechanical amplifier.
//
// With two identical rings between 50/50 beam splitters the signal port of
// the Mach-Zehnder sees exactly one ring's input-output relation, so every
// forward/backward relation here is expressed per ring.

#include <array>

#include "qnamp/constants.hpp"
#include "qnamp/twophoton.hpp"

namespace qnamp {

struct RingCavityParams {
  double transmissivity = 0.0089;      // T_A of M1 (power)
  double roundtrip_length_m = 30.0;    // L_A = l1 + l2
  double l1_m = 10.0;                  // M1 -> M2
  double l2_m = 20.0;                  // M2 -> M3 -> M1
  double mirror_mass_kg = 0.030;
  double pendulum_omega = constants::two_pi * 1.0;  // Omega_0, rad/s
  double roundtrip_loss = 30e-6;
  std::array<double, 3> incidence_rad{constants::pi / 6, constants::pi / 6, constants::pi / 6};

  double amplitude_reflectivity() const;    // r_A = sqrt(1 - T_A)
  double amplitude_transmissivity() const;  // t_A = sqrt(T_A)
  /// Cavity pole gamma_A = c T_A / (2 L_A), rad/s.
  double cavity_pole() const;
  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct PumpParams {
  double source_power_w = 220.0;
  double wavelength_m = 2e-6;

  double omega0() const;
  void validate() const;
};

enum class RingModel { exact, approx };

/// chi_A = 1 / (m_A (Omega_0^2 - Omega^2)), m/N. Throws PhysicsError at
/// Omega == Omega_0.
double susceptibility(const RingCavityParams& p, double omega);

/// P_circ = (1/2) (t_A / (1 - r_A))^2 P_source.
double circulating_power_exact(const RingCavityParams& p, const PumpParams& pump);
/// P_circ = 2 P_source / T_A.
double circulating_power_approx(const RingCavityParams& p, const PumpParams& pump);

/// kappa_A = -(8 omega_0 P_circ / c^2) sum_i cos^2(theta_i) chi_i.
double kappa_general(const RingCavityParams& p, const PumpParams& pump, double p_circ,
                     const std::array<double, 3>& chi);
/// All three mirrors share chi_A.
double kappa_A(const RingCavityParams& p, const PumpParams& pump, double p_circ, double omega);
/// Equilateral closed form -18 omega_0 P_circ chi_A / c^2.
double kappa_equilateral(const PumpParams& pump, double p_circ, double chi);

/// e^{2 i eta} [[1, 0], [-K_A, 1]] with its two factors exposed.
struct RingResponse {
  cplx phase;  // e^{2 i eta}
  double k;    // K_A (real)

  double eta() const;
  Mat2 matrix() const;
};

/// Lossless exact ring relation.
RingResponse ring_io_exact(const RingCavityParams& p, double kappa, double omega);
/// Short-cavity, high-finesse limit with K_A = 4 kappa / (T_A (1 + (Omega/gamma_A)^2)).
RingResponse ring_io_approx(const RingCavityParams& p, double kappa, double omega);

/// Scaling law |K_A| = (0.01/T_A)(30 g/m_A)(P_circ/40 kW)(1.5 kHz/f)^2.
double gain_magnitude(double transmissivity, double mirror_mass_kg, double p_circ, double f_hz);

/// Forward (co-propagating) amplifier response at one sideband frequency.
struct ForwardResponse {
  Mat2 signal;                // acts on b_IFO
  Mat2 loss_vacuum;           // acts on the round-trip-loss vacuum
  cplx displacement_coupling; // quanta per metre of cos-projected mirror motion, into b_2
  double k;                   // |K_A| of the lossless relation
};

ForwardResponse mz_forward(const RingCavityParams& p, const PumpParams& pump, RingModel model,
                           double omega);

/// Counter-propagating relation: pure phase e^{2 i eta} times identity.
Mat2 mz_backward(const RingCavityParams& p, double omega);

/// Residual 1/2 (M_left - M_right) of two rings driven by a common input.
Mat2 cmrr_residual(const RingCavityParams& left, const RingCavityParams& right, double kappa,
                   double omega);

/// Amplified-entry residual |1/2 (K_L e_L - K_R e_R)| / |K e| relative to the
/// nominal ring. Independent of kappa.
double cmrr_ratio(const RingCavityParams& nominal, const RingCavityParams& left,
                  const RingCavityParams& right, double omega);

struct RingPair {
  RingCavityParams left;
  RingCavityParams right;
};

/// Split T_A symmetrically so that cmrr_ratio at f_ref equals 10^(-cmrr_db/20).
RingPair cmrr_split(const RingCavityParams& nominal, double cmrr_db, double f_ref_hz);

/// sqrt(sum_i cos^2(theta_i) x_i^2) for independent per-mirror motion.
double projected_displacement_incoherent(const RingCavityParams& p, const std::array<double, 3>& x);
/// sum_i cos(theta_i) x_i for fully correlated per-mirror motion.
double projected_displacement_coherent(const RingCavityParams& p, const std::array<double, 3>& x);

}  // namespace qnamp
