#include "qnamp/interferometer.hpp"

#include <cmath>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

double IfoParams::omega0() const { return constants::two_pi * constants::c / wavelength_m; }

void IfoParams::validate() const {
  auto frac = [](double v, const char* what) {
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError(std::string("ifo: ") + what + " must lie in [0, 1)");
  };
  frac(arm_loss, "arm loss");
  frac(src_loss, "SRC loss");
  frac(readout_loss, "readout loss");
  frac(dark_port_loss(), "arm + SRC loss");
  if (!(wavelength_m > 0.0) || !(mass_kg > 0.0) || !(arm_length_m > 0.0) || !(arm_power_w >= 0.0) ||
      !(bandwidth_rad_s > 0.0)) {
    throw ConfigError("ifo: wavelength, mass, arm length and bandwidth must be positive, power >= 0");
  }
}

KimbleFactors kimble_factor(const IfoParams& p, double omega) {
  if (!(omega > 0.0)) throw PhysicsError("ifo", "response is singular at zero frequency");
  if (p.model == IfoModel::flat) return {0.0, 0.0, 1.0};
  const double w2 = omega * omega;
  const double l2 = p.arm_length_m * p.arm_length_m;
  const double g2 = p.bandwidth_rad_s * p.bandwidth_rad_s;
  const double k = 8.0 * p.arm_power_w * p.omega0() / (p.mass_kg * l2 * w2 * (g2 + w2));
  const double h_sql = std::sqrt(8.0 * constants::hbar / (p.mass_kg * w2 * l2));
  return {k, std::atan(omega / p.bandwidth_rad_s), h_sql};
}

Mat2 ifo_matrix(const IfoParams& p, double omega) {
  const KimbleFactors kf = kimble_factor(p, omega);
  return std::polar(1.0, 2.0 * kf.phi) * Mat2{1.0, -kf.k, 0.0, 1.0};
}

Vec2 ifo_signal(const IfoParams& p, double omega) {
  const KimbleFactors kf = kimble_factor(p, omega);
  if (p.model == IfoModel::flat) return {1.0, 0.0};
  return {std::sqrt(2.0 * kf.k) * std::polar(1.0, kf.phi) / kf.h_sql, 0.0};
}

Vec2 ifo_io(const IfoParams& p, double omega, const Vec2& input, cplx h) {
  const Vec2 out = ifo_matrix(p, omega) * input;
  const Vec2 sig = ifo_signal(p, omega);
  return {out.q1 + h * sig.q1, out.q2 + h * sig.q2};
}

QuadratureTransfer ifo_transfer(const IfoParams& p, const FrequencyGrid& grid) {
  return QuadratureTransfer::from_function(grid, [&](double w) { return ifo_matrix(p, w); }, "ifo");
}

SignalPath ifo_signal_path(const IfoParams& p, const FrequencyGrid& grid) {
  SignalPath s{grid, std::vector<Vec2>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) s.transfer[i] = ifo_signal(p, grid.omega(i));
  return s;
}

NoiseSet ifo_output(const NoiseSet& in, const IfoParams& p, const FrequencyGrid& grid) {
  return additive_loss(propagate(in, ifo_transfer(p, grid)), p.dark_port_loss(), grid, "src_arm_loss");
}

void SqueezerParams::validate() const {
  if (!(db >= 0.0) || !std::isfinite(db)) throw ConfigError("sqz: squeeze level must be >= 0 dB");
  if (!(injection_loss >= 0.0 && injection_loss < 1.0)) {
    throw ConfigError("sqz: injection loss must lie in [0, 1)");
  }
  for (const FilterCavityParams& f : ifc_list) f.validate();
}

double ideal_ifc_angle(const IfoParams& p, double omega) { return -std::atan(kimble_factor(p, omega).k); }

NoiseSet injection_chain(const SqueezerParams& sq, const IfoParams& ifo, const FrequencyGrid& grid,
                         IfcMode mode) {
  NoiseSet paths{{"quantum", std::vector<double>(grid.size(), 1.0), squeeze(grid, sq.db, 0.0),
                  Mat2::identity()}};
  paths = additive_loss(paths, sq.injection_loss, grid, "injection_ifc_loss");
  if (mode == IfcMode::ideal) {
    return propagate(paths, QuadratureTransfer::from_function(
                                grid, [&](double w) { return rotation(ideal_ifc_angle(ifo, w)); }));
  }
  for (const FilterCavityParams& f : sq.ifc_list) paths = reflect(paths, f, grid, "injection_ifc_loss");
  return paths;
}

std::pair<double, double> caves_toy(double r, double eps, double gain) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("caves_toy: loss must lie in [0, 1)");
  if (!(gain > 0.0)) throw std::invalid_argument("caves_toy: gain must be positive");
  const double s = std::exp(-2.0 * r);
  return {s + eps, s + eps / (gain * gain)};
}

}  // namespace qnamp
