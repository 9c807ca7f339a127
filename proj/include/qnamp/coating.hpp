#pragma once

// Dielectric multilayer mirror coatings at normal incidence.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qnamp {

struct Layer {
  std::string material;
  double n = 1.0;
  double d_m = 0.0;
  double phi = 0.0;  // mechanical loss angle
};

struct CoatingStack {
  std::vector<Layer> layers;  // air side first
  double substrate_index = 3.45;
  double incident_index = 1.0;
  double design_wavelength_m = 2e-6;

  void validate() const;
};

struct PowerCoefficients {
  double r;
  double t;
};

/// Characteristic-matrix reflectance and transmittance.
PowerCoefficients stack_transmission(const CoatingStack& s, double wavelength_m);

struct BrownianProxy {
  double d_eff;    // total thickness
  double phi_eff;  // thickness-weighted loss angle

  double product() const { return d_eff * phi_eff; }
};

BrownianProxy brownian_proxy(const CoatingStack& s);

struct CoatingMaterials {
  Layer high{"aSi", 3.65, 0.0, 3e-5};
  Layer low{"SiN", 2.17, 0.0, 2e-5};
  double substrate_index = 3.45;
  double wavelength_m = 2e-6;
};

/// (high, low) x n_pairs quarter-wave layers, high index facing air.
CoatingStack quarter_wave_stack(const CoatingMaterials& m, int n_pairs);

struct StackOptimizerOptions {
  int n_pairs = 12;
  double t_max = 5e-6;
  int restarts = 8;
  std::uint64_t seed = 1;
  double min_quarter_fraction = 0.1;  // bounds on d relative to quarter-wave
  double max_quarter_fraction = 2.0;
};

struct StackOptimizationResult {
  CoatingStack stack;
  double objective;                 // sum of d phi
  double quarter_wave_objective;
  std::vector<double> history;      // accepted objective values, in order
};

/// Minimise the Brownian proxy subject to T <= t_max. Throws InfeasibleError
/// when the quarter-wave start already violates the constraint.
StackOptimizationResult optimize_stack(const CoatingMaterials& m, const StackOptimizerOptions& opt);

/// Per-layer records {material, n, d_nm, phi}.
nlohmann::json stack_to_json(const CoatingStack& s);
CoatingStack stack_from_json(const nlohmann::json& j);

}  // namespace qnamp
