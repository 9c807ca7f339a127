#pragma once

// Full readout chain: squeezer, input filter cavities, interferometer,
// Mach-Zehnder amplifier, output filter cavity, detection and homodyne.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qnamp/amplifier.hpp"
#include "qnamp/coating.hpp"
#include "qnamp/filter_cavity.hpp"
#include "qnamp/interferometer.hpp"
#include "qnamp/technical_noise.hpp"
#include "qnamp/twophoton.hpp"

namespace qnamp {

enum class AmpModel {
  ring_exact,
  ring_approx,
  ideal_gain,  // diag(G, 1/G), noiseless
};

struct AmplifierConfig {
  bool enabled = true;
  AmpModel model = AmpModel::ring_exact;
  RingCavityParams ring;
  PumpParams pump;
  double ideal_gain = 1.0;
  double cmrr_db = 60.0;
  double cmrr_ref_hz = 100.0;
  RinModel rin;
  bool backward_phase = true;  // counter-propagating pass before the interferometer
};

struct CoatingConfig {
  CoatingMaterials materials;
  int n_pairs = 12;
  double beam_radius_m = 5e-3;
  double substrate_poisson = 0.27;
  double substrate_young_pa = 155.8e9;

  /// Sum of d phi over the quarter-wave design stack.
  double thickness_loss_m() const;
};

struct GridSpec {
  double f_min_hz = 10.0;
  double f_max_hz = 5000.0;
  std::size_t n_points = 200;

  FrequencyGrid build() const { return FrequencyGrid::log_spaced(f_min_hz, f_max_hz, n_points); }
};

struct ChainConfig {
  IfoParams ifo;
  SqueezerParams sqz;
  IfcMode ifc_mode = IfcMode::physical;
  AmplifierConfig amp;
  CoatingConfig coat;
  SuspensionParams sus;
  FilterCavityParams ofc;
  bool ofc_enabled = true;
  double zeta0_rad = 0.0;  // homodyne angle after the output filter cavity
  GridSpec grid;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Fixed budget source labels, in output column order.
inline constexpr std::array<const char*, 8> kSourceLabels{
    "quantum",          "readout_loss",       "ring_loss",          "rin_residual",
    "coating_brownian", "suspension_thermal", "injection_ifc_loss", "src_arm_loss"};

struct Assembly {
  NoiseSet paths;
  SignalPath signal;
  HomodyneAngle zeta;            // homodyne angle applied at the detector
  HomodyneAngle effective_zeta;  // angle referred to the amplifier output
};

Assembly assemble(const ChainConfig& c, const FrequencyGrid& grid);

struct StrainBudget {
  FrequencyGrid grid;
  std::vector<std::vector<double>> sources;  // indexed like kSourceLabels
  std::vector<double> total;
  std::vector<bool> flagged;

  const std::vector<double>& source(const std::string& label) const;
};

/// Evaluate on `grid`, parallel over frequency (QNAMP_THREADS caps workers).
StrainBudget budget(const ChainConfig& c, const FrequencyGrid& grid);
StrainBudget budget(const ChainConfig& c);

/// Total PSD of the two homodyne sums at each frequency, signal-referred.
std::vector<double> total_strain_psd(const ChainConfig& c, const FrequencyGrid& grid);

struct GainCurve {
  FrequencyGrid grid;
  std::vector<double> gain;    // |signal with amplifier + OFC| / |signal without|
  std::vector<double> k_a;     // |K_A| of the lossless ring
  std::vector<double> zeta;    // effective readout angle, rad
};

GainCurve gain_curve(const ChainConfig& c, const FrequencyGrid& grid);

/// Worker count from QNAMP_THREADS, defaulting to hardware concurrency.
unsigned worker_count();

/// "15dB" or "20dB". Throws ConfigError for other names.
ChainConfig preset(const std::string& name);

}  // namespace qnamp
