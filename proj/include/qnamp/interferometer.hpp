#pragma once

// Ponderomotive interferometer response and the squeezed-vacuum injection
// chain that feeds it.

#include <utility>
#include <vector>

#include "qnamp/constants.hpp"
#include "qnamp/filter_cavity.hpp"
#include "qnamp/twophoton.hpp"

namespace qnamp {

enum class IfoModel {
  ponderomotive,
  flat,  // K = 0, unit signal: a bare beam splitter used for loss studies
};

struct IfoParams {
  double arm_loss = 20e-6;   // per round trip
  double src_loss = 300e-6;  // per round trip
  double readout_loss = 0.10;
  double wavelength_m = 2e-6;
  double mass_kg = 200.0;
  double arm_length_m = 4000.0;
  double arm_power_w = 3.8e5;
  double bandwidth_rad_s = constants::two_pi * 500.0;
  IfoModel model = IfoModel::ponderomotive;

  /// Arm and SRC losses lumped at the dark port.
  double dark_port_loss() const { return arm_loss + src_loss; }
  double omega0() const;
  void validate() const;
};

struct KimbleFactors {
  double k;      // K_IFO
  double phi;    // Phi_IFO
  double h_sql;  // 1/sqrt(Hz)
};

/// Throws PhysicsError for omega <= 0.
KimbleFactors kimble_factor(const IfoParams& p, double omega);

/// e^{2 i Phi} [[1, -K], [0, 1]].
Mat2 ifo_matrix(const IfoParams& p, double omega);
/// Output quadratures per unit strain: sqrt(2K) e^{i Phi} (1, 0) / h_SQL.
Vec2 ifo_signal(const IfoParams& p, double omega);
/// Lossless response to an input pair plus strain h.
Vec2 ifo_io(const IfoParams& p, double omega, const Vec2& input, cplx h);

QuadratureTransfer ifo_transfer(const IfoParams& p, const FrequencyGrid& grid);
SignalPath ifo_signal_path(const IfoParams& p, const FrequencyGrid& grid);

/// Propagate through the interferometer and add its lumped dark-port loss.
NoiseSet ifo_output(const NoiseSet& in, const IfoParams& p, const FrequencyGrid& grid);

struct SqueezerParams {
  double db = 15.0;
  double injection_loss = 0.01;
  std::vector<FilterCavityParams> ifc_list;

  void validate() const;
};

enum class IfcMode {
  physical,  // reflect off every cavity in ifc_list
  ideal,     // exact lossless rotation -arctan(K_IFO)
};

/// Squeeze angle rotation that lands the squeezing on b_IFO,1.
double ideal_ifc_angle(const IfoParams& p, double omega);

/// Fields entering the interferometer's dark port.
NoiseSet injection_chain(const SqueezerParams& sq, const IfoParams& ifo, const FrequencyGrid& grid,
                         IfcMode mode = IfcMode::physical);

/// Closed-form lossy sensitivity without and with a phase-insensitive gain G.
std::pair<double, double> caves_toy(double r, double eps, double gain);

}  // namespace qnamp
