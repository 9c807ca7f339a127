#pragma once

// Bounded, seeded Nelder-Mead search over chain parameters.

#include <cstdint>
#include <string>
#include <vector>

#include "qnamp/budget.hpp"

namespace qnamp {

enum class FreeParam {
  amp_transmissivity,
  pump_power_w,
  ofc_detuning_hz,
  ofc_transmission,
  zeta0_rad,
};

struct ParamBound {
  FreeParam param;
  double lo;
  double hi;
};

std::string param_name(FreeParam p);
/// Inverse of param_name. Throws ConfigError for unknown names.
FreeParam param_from_name(const std::string& name);

double get_param(const ChainConfig& c, FreeParam p);
void set_param(ChainConfig& c, FreeParam p, double v);

/// Default bounds for every free parameter.
std::vector<ParamBound> default_bounds();

struct OptimizeOptions {
  std::vector<ParamBound> bounds = default_bounds();
  double band_lo_hz = 50.0;
  double band_hi_hz = 500.0;
  std::size_t band_points = 24;
  int max_evaluations = 600;
  int restarts = 2;
};

/// Mean of ln(total ASD) over log-spaced points in the band.
double midband_cost(const ChainConfig& c, const OptimizeOptions& opt);

struct OptimizeResult {
  ChainConfig config;
  double cost;
  double initial_cost;
  int evaluations;
};

/// Starts from `c` (clamped into bounds); the seed comes from c.seed. Throws
/// InfeasibleError when a bound is empty or inverted.
OptimizeResult optimize(const ChainConfig& c, const OptimizeOptions& opt);

struct MassSweepEntry {
  double mass_kg;
  OptimizeResult optimum;
  StrainBudget budget;
  /// exp(cost without amplifier - cost with it): geometric-mean ASD gain.
  double midband_improvement;
};

/// Re-optimise and evaluate the budget for each mass. Entries run in parallel.
std::vector<MassSweepEntry> mass_sweep(const ChainConfig& c, const std::vector<double>& masses_kg,
                                       const OptimizeOptions& opt);

}  // namespace qnamp
