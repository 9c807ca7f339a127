#pragma once

// Detuned two-mirror filter cavities seen in reflection.

#include "qnamp/twophoton.hpp"

namespace qnamp {

struct FilterCavityParams {
  double length_m = 40.0;            // one-way
  double input_transmission = 43e-6; // t_in^2
  double roundtrip_loss = 20e-6;
  double detuning_hz = -80.4;

  double input_reflectivity() const;      // r_in
  double roundtrip_reflectivity() const;  // r_rt = r_in sqrt(1 - loss)
  /// Round-trip phase (2L/c)(Omega + 2 pi detuning).
  double roundtrip_phase(double omega_signed) const;
  void validate() const;
};

/// Sideband amplitude reflectivity; omega may be negative (lower sideband).
cplx reflectivity(const FilterCavityParams& p, double omega_signed);

/// Quadrature-domain reflection built from r(+Omega) and r(-Omega).
Mat2 quadrature_reflection(const FilterCavityParams& p, double omega);
QuadratureTransfer quadrature_reflection(const FilterCavityParams& p, const FrequencyGrid& grid);

/// Vacuum admitted by cavity loss, sqrt(I - M M^dagger) per frequency.
QuadratureTransfer reflection_loss_vacuum(const FilterCavityParams& p, const FrequencyGrid& grid);

/// Reflect every path off the cavity and append its loss vacuum.
NoiseSet reflect(const NoiseSet& paths, const FilterCavityParams& p, const FrequencyGrid& grid,
                 const std::string& loss_label);

/// Quadrature angle of the input field that a fixed homodyne angle zeta0
/// after the matrix `m` reads out.
double readout_angle(const Mat2& m, double zeta0);

HomodyneAngle effective_readout_angle(const FilterCavityParams& ofc, double zeta0,
                                      const FrequencyGrid& grid);

}  // namespace qnamp
