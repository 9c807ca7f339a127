#include "qnamp/filter_cavity.hpp"

#include <cmath>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

double FilterCavityParams::input_reflectivity() const { return std::sqrt(1.0 - input_transmission); }

double FilterCavityParams::roundtrip_reflectivity() const {
  return input_reflectivity() * std::sqrt(1.0 - roundtrip_loss);
}

double FilterCavityParams::roundtrip_phase(double omega_signed) const {
  return 2.0 * length_m / constants::c * (omega_signed + constants::two_pi * detuning_hz);
}

void FilterCavityParams::validate() const {
  if (!(length_m > 0.0)) throw ConfigError("filter cavity: length must be positive");
  if (!(input_transmission > 0.0 && input_transmission < 1.0)) {
    throw ConfigError("filter cavity: input transmission must lie in (0, 1)");
  }
  if (!(roundtrip_loss >= 0.0 && roundtrip_loss < 1.0)) {
    throw ConfigError("filter cavity: round-trip loss must lie in [0, 1)");
  }
  if (!std::isfinite(detuning_hz)) throw ConfigError("filter cavity: detuning must be finite");
}

cplx reflectivity(const FilterCavityParams& p, double omega_signed) {
  const double rin = p.input_reflectivity();
  const cplx e = p.roundtrip_reflectivity() * std::polar(1.0, p.roundtrip_phase(omega_signed));
  return rin - (p.input_transmission / rin) * e / (1.0 - e);
}

Mat2 quadrature_reflection(const FilterCavityParams& p, double omega) {
  const cplx rp = reflectivity(p, omega);
  const cplx rm = std::conj(reflectivity(p, -omega));
  const cplx i{0.0, 1.0};
  return 0.5 * Mat2{rp + rm, i * (rp - rm), -i * (rp - rm), rp + rm};
}

QuadratureTransfer quadrature_reflection(const FilterCavityParams& p, const FrequencyGrid& grid) {
  return QuadratureTransfer::from_function(
      grid, [&](double w) { return quadrature_reflection(p, w); }, "filter_cavity");
}

QuadratureTransfer reflection_loss_vacuum(const FilterCavityParams& p, const FrequencyGrid& grid) {
  return QuadratureTransfer::from_function(
      grid, [&](double w) { return loss_vacuum_coupling(quadrature_reflection(p, w)); });
}

NoiseSet reflect(const NoiseSet& paths, const FilterCavityParams& p, const FrequencyGrid& grid,
                 const std::string& loss_label) {
  NoiseSet out = propagate(paths, quadrature_reflection(p, grid));
  if (p.roundtrip_loss > 0.0) {
    out.push_back({loss_label, std::vector<double>(grid.size(), 1.0), reflection_loss_vacuum(p, grid),
                   Mat2::identity()});
  }
  return out;
}

double readout_angle(const Mat2& m, double zeta0) {
  const double c = std::cos(zeta0);
  const double s = std::sin(zeta0);
  const cplx u1 = c * m.m11 + s * m.m21;
  const cplx u2 = c * m.m12 + s * m.m22;
  const cplx i{0.0, 1.0};
  return 0.5 * (std::arg(u1 + i * u2) - std::arg(u1 - i * u2));
}

HomodyneAngle effective_readout_angle(const FilterCavityParams& ofc, double zeta0,
                                      const FrequencyGrid& grid) {
  HomodyneAngle z(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    z[i] = readout_angle(quadrature_reflection(ofc, grid.omega(i)), zeta0);
    // A readout angle is defined modulo pi; keep the curve continuous.
    if (i > 0) z[i] -= constants::pi * std::round((z[i] - z[i - 1]) / constants::pi);
  }
  if (!z.empty()) {
    const double shift = constants::pi * std::round((z.back() - zeta0) / constants::pi);
    for (double& v : z) v -= shift;
  }
  return z;
}

}  // namespace qnamp
