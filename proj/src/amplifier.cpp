#include "qnamp/amplifier.hpp"

#include <cmath>
#include <string>

#include "qnamp/errors.hpp"

namespace qnamp {

using constants::c;
using constants::hbar;

double RingCavityParams::amplitude_reflectivity() const { return std::sqrt(1.0 - transmissivity); }

double RingCavityParams::amplitude_transmissivity() const { return std::sqrt(transmissivity); }

double RingCavityParams::cavity_pole() const { return c * transmissivity / (2.0 * roundtrip_length_m); }

void RingCavityParams::validate() const {
  if (!(transmissivity > 0.0 && transmissivity < 1.0)) {
    throw ConfigError("amp: input transmissivity must lie in (0, 1)");
  }
  if (!(roundtrip_length_m > 0.0) || !(l1_m > 0.0) || !(l2_m > 0.0)) {
    throw ConfigError("amp: ring lengths must be positive");
  }
  if (std::abs(l1_m + l2_m - roundtrip_length_m) > 1e-9 * roundtrip_length_m) {
    throw ConfigError("amp: l1 + l2 must equal the round-trip length");
  }
  if (!(mirror_mass_kg > 0.0)) throw ConfigError("amp: mirror mass must be positive");
  if (!(pendulum_omega > 0.0)) throw ConfigError("amp: pendulum frequency must be positive");
  if (!(roundtrip_loss >= 0.0 && roundtrip_loss < 1.0)) {
    throw ConfigError("amp: round-trip loss must lie in [0, 1)");
  }
  for (double th : incidence_rad) {
    if (!(th >= 0.0 && th < constants::pi / 2)) {
      throw ConfigError("amp: angles of incidence must lie in [0, pi/2)");
    }
  }
}

double PumpParams::omega0() const { return constants::two_pi * c / wavelength_m; }

void PumpParams::validate() const {
  if (!(source_power_w >= 0.0) || !std::isfinite(source_power_w)) {
    throw ConfigError("amp: pump power must be finite and >= 0");
  }
  if (!(wavelength_m > 0.0)) throw ConfigError("amp: pump wavelength must be positive");
}

double susceptibility(const RingCavityParams& p, double omega) {
  const double d = p.pendulum_omega * p.pendulum_omega - omega * omega;
  if (d == 0.0) {
    throw PhysicsError("amp", "susceptibility diverges at the pendulum resonance");
  }
  return 1.0 / (p.mirror_mass_kg * d);
}

double circulating_power_exact(const RingCavityParams& p, const PumpParams& pump) {
  const double g = p.amplitude_transmissivity() / (1.0 - p.amplitude_reflectivity());
  return 0.5 * g * g * pump.source_power_w;
}

double circulating_power_approx(const RingCavityParams& p, const PumpParams& pump) {
  return 2.0 * pump.source_power_w / p.transmissivity;
}

double kappa_general(const RingCavityParams& p, const PumpParams& pump, double p_circ,
                     const std::array<double, 3>& chi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double cs = std::cos(p.incidence_rad[i]);
    sum += cs * cs * chi[i];
  }
  return -8.0 * pump.omega0() * p_circ / (c * c) * sum;
}

double kappa_A(const RingCavityParams& p, const PumpParams& pump, double p_circ, double omega) {
  const double chi = susceptibility(p, omega);
  return kappa_general(p, pump, p_circ, {chi, chi, chi});
}

double kappa_equilateral(const PumpParams& pump, double p_circ, double chi) {
  return -18.0 * pump.omega0() * p_circ * chi / (c * c);
}

double RingResponse::eta() const { return 0.5 * std::arg(phase); }

Mat2 RingResponse::matrix() const { return phase * Mat2{1.0, 0.0, -k, 1.0}; }

namespace {

cplx propagation(double length_m, double omega) { return std::polar(1.0, omega * length_m / c); }

// sqrt(8 omega_0 P_circ / (hbar c^2)): phase-quadrature drive per metre of
// cos-projected displacement inside the ring.
double displacement_scale(const PumpParams& pump, double p_circ) {
  return std::sqrt(8.0 * pump.omega0() * p_circ / (hbar * c * c));
}

}  // namespace

RingResponse ring_io_exact(const RingCavityParams& p, double kappa, double omega) {
  const double r = p.amplitude_reflectivity();
  const double t2 = p.transmissivity;
  const cplx e = propagation(p.roundtrip_length_m, omega);
  const cplx den = 1.0 - r * e;
  return {(e - r) / den, t2 * kappa / std::norm(den)};
}

RingResponse ring_io_approx(const RingCavityParams& p, double kappa, double omega) {
  const double x = omega / p.cavity_pole();
  return {std::polar(1.0, 2.0 * std::atan(x)), 4.0 * kappa / (p.transmissivity * (1.0 + x * x))};
}

double gain_magnitude(double transmissivity, double mirror_mass_kg, double p_circ, double f_hz) {
  const double fr = 1500.0 / f_hz;
  return (0.01 / transmissivity) * (0.030 / mirror_mass_kg) * (p_circ / 40e3) * fr * fr;
}

ForwardResponse mz_forward(const RingCavityParams& p, const PumpParams& pump, RingModel model,
                           double omega) {
  if (model == RingModel::approx) {
    const double pc = circulating_power_approx(p, pump);
    const RingResponse rr = ring_io_approx(p, kappa_A(p, pump, pc, omega), omega);
    const double x = omega / p.cavity_pole();
    const double lt = std::sqrt(p.roundtrip_loss / p.transmissivity);
    const cplx tau = 2.0 * lt * std::polar(1.0, std::atan(x)) / std::sqrt(1.0 + x * x);
    const Mat2 vac{tau, 0.0, -lt * rr.k * rr.phase, tau};
    return {rr.matrix(), vac, 2.0 * displacement_scale(pump, pc) / p.transmissivity, std::abs(rr.k)};
  }

  const double pc = circulating_power_exact(p, pump);
  const double kappa = kappa_A(p, pump, pc, omega);
  const double r = p.amplitude_reflectivity();
  const double t = p.amplitude_transmissivity();
  const double lam = std::sqrt(1.0 - p.roundtrip_loss);
  const cplx e = propagation(p.roundtrip_length_m, omega);
  const cplx e2 = propagation(p.l2_m, omega);
  const cplx den = 1.0 - r * lam * e;

  const cplx rho = t * t * lam * e / den - r;
  const cplx kc = t * t * lam * e * kappa / (den * den);
  const cplx tau = t * e2 * std::sqrt(p.roundtrip_loss) / den;
  const Mat2 vac = tau * Mat2{1.0, 0.0, -kappa / den, 1.0};
  const cplx coupling = t * e2 * displacement_scale(pump, pc) / den;
  const double k_lossless = ring_io_exact(p, kappa, omega).k;
  return {Mat2{rho, 0.0, -kc, rho}, vac, coupling, std::abs(k_lossless)};
}

Mat2 mz_backward(const RingCavityParams& p, double omega) {
  return ring_io_exact(p, 0.0, omega).phase * Mat2::identity();
}

Mat2 cmrr_residual(const RingCavityParams& left, const RingCavityParams& right, double kappa,
                   double omega) {
  return 0.5 * (ring_io_exact(left, kappa, omega).matrix() - ring_io_exact(right, kappa, omega).matrix());
}

double cmrr_ratio(const RingCavityParams& nominal, const RingCavityParams& left,
                  const RingCavityParams& right, double omega) {
  const Mat2 res = cmrr_residual(left, right, 1.0, omega);
  const Mat2 nom = ring_io_exact(nominal, 1.0, omega).matrix();
  return std::abs(res.m21) / std::abs(nom.m21);
}

RingPair cmrr_split(const RingCavityParams& nominal, double cmrr_db, double f_ref_hz) {
  if (!(cmrr_db > 0.0)) throw ConfigError("amp: common-mode rejection must be > 0 dB");
  if (!(f_ref_hz > 0.0)) throw ConfigError("amp: reference frequency must be > 0");
  const double target = std::pow(10.0, -cmrr_db / 20.0);
  const double omega = constants::two_pi * f_ref_hz;
  auto pair_for = [&](double d) {
    RingPair rp{nominal, nominal};
    rp.left.transmissivity = nominal.transmissivity * (1.0 + d);
    rp.right.transmissivity = nominal.transmissivity * (1.0 - d);
    return rp;
  };
  auto ratio = [&](double d) {
    const RingPair rp = pair_for(d);
    return cmrr_ratio(nominal, rp.left, rp.right, omega);
  };
  double lo = 0.0;
  double hi = 0.5;
  if (ratio(hi) < target) {
    throw InfeasibleError("amp: requested common-mode rejection needs more than 50% asymmetry");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < target ? lo : hi) = mid;
  }
  return pair_for(0.5 * (lo + hi));
}

double projected_displacement_incoherent(const RingCavityParams& p, const std::array<double, 3>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double cs = std::cos(p.incidence_rad[i]);
    s += cs * cs * x[i] * x[i];
  }
  return std::sqrt(s);
}

double projected_displacement_coherent(const RingCavityParams& p, const std::array<double, 3>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += std::cos(p.incidence_rad[i]) * x[i];
  return s;
}

}  // namespace qnamp
