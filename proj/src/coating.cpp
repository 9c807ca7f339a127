#include "qnamp/coating.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

void CoatingStack::validate() const {
  if (!(substrate_index > 0.0) || !(incident_index > 0.0) || !(design_wavelength_m > 0.0)) {
    throw ConfigError("coat: indices and wavelength must be positive");
  }
  for (const Layer& l : layers) {
    if (!(l.n > 1.0) || !(l.d_m > 0.0) || !(l.phi >= 0.0)) {
      throw ConfigError("coat: layer needs n > 1, d > 0, phi >= 0");
    }
  }
}

PowerCoefficients stack_transmission(const CoatingStack& s, double wavelength_m) {
  using cd = std::complex<double>;
  const cd i{0.0, 1.0};
  cd m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  for (const Layer& l : s.layers) {
    const double delta = constants::two_pi * l.n * l.d_m / wavelength_m;
    const double c = std::cos(delta);
    const double sn = std::sin(delta);
    const cd a11 = c, a12 = i * sn / l.n, a21 = i * l.n * sn, a22 = c;
    const cd n11 = m11 * a11 + m12 * a21;
    const cd n12 = m11 * a12 + m12 * a22;
    const cd n21 = m21 * a11 + m22 * a21;
    const cd n22 = m21 * a12 + m22 * a22;
    m11 = n11;
    m12 = n12;
    m21 = n21;
    m22 = n22;
  }
  const double n0 = s.incident_index;
  const double ns = s.substrate_index;
  const cd b = m11 + m12 * ns;
  const cd cc = m21 + m22 * ns;
  const cd den = n0 * b + cc;
  const double r = std::norm((n0 * b - cc) / den);
  const double t = 4.0 * n0 * ns / std::norm(den);
  return {r, t};
}

BrownianProxy brownian_proxy(const CoatingStack& s) {
  if (s.layers.empty()) throw std::invalid_argument("brownian proxy: empty stack");
  double d = 0.0;
  double dphi = 0.0;
  for (const Layer& l : s.layers) {
    d += l.d_m;
    dphi += l.d_m * l.phi;
  }
  return {d, dphi / d};
}

CoatingStack quarter_wave_stack(const CoatingMaterials& m, int n_pairs) {
  if (n_pairs < 0) throw ConfigError("coat: number of layer pairs must be >= 0");
  CoatingStack s;
  s.substrate_index = m.substrate_index;
  s.design_wavelength_m = m.wavelength_m;
  for (int k = 0; k < n_pairs; ++k) {
    for (Layer l : {m.high, m.low}) {
      l.d_m = m.wavelength_m / (4.0 * l.n);
      s.layers.push_back(l);
    }
  }
  return s;
}

namespace {

double objective(const CoatingStack& s) {
  double v = 0.0;
  for (const Layer& l : s.layers) v += l.d_m * l.phi;
  return v;
}

bool feasible(const CoatingStack& s, double t_max) {
  return stack_transmission(s, s.design_wavelength_m).t <= t_max;
}

// Uniform [0, 1) from the raw engine output; std distributions are not
// portable across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Descent {
  CoatingStack stack;
  std::vector<double> history;
};

Descent descend(CoatingStack s, const std::vector<double>& lo, const std::vector<double>& hi,
                double t_max) {
  Descent out{s, {objective(s)}};
  double step = 0.05;
  while (step > 1e-7) {
    bool improved = false;
    for (std::size_t j = 0; j < s.layers.size(); ++j) {
      for (double dir : {-1.0, 1.0}) {
        CoatingStack trial = out.stack;
        trial.layers[j].d_m = std::clamp(trial.layers[j].d_m * (1.0 + dir * step), lo[j], hi[j]);
        const double f = objective(trial);
        if (f < out.history.back() && feasible(trial, t_max)) {
          out.stack = std::move(trial);
          out.history.push_back(f);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

}  // namespace

StackOptimizationResult optimize_stack(const CoatingMaterials& m, const StackOptimizerOptions& opt) {
  if (opt.restarts < 1) throw ConfigError("coat: need at least one optimizer start");
  if (!(opt.t_max > 0.0 && opt.t_max < 1.0)) throw ConfigError("coat: transmission limit must lie in (0, 1)");
  const CoatingStack qw = quarter_wave_stack(m, opt.n_pairs);
  if (qw.layers.empty()) throw ConfigError("coat: optimisation needs at least one layer pair");
  if (!feasible(qw, opt.t_max)) {
    throw InfeasibleError("coat: quarter-wave stack already exceeds the transmission limit");
  }
  std::vector<double> lo(qw.layers.size());
  std::vector<double> hi(qw.layers.size());
  for (std::size_t j = 0; j < qw.layers.size(); ++j) {
    lo[j] = opt.min_quarter_fraction * qw.layers[j].d_m;
    hi[j] = opt.max_quarter_fraction * qw.layers[j].d_m;
  }

  std::mt19937_64 rng(opt.seed);
  Descent best = descend(qw, lo, hi, opt.t_max);
  for (int k = 1; k < opt.restarts; ++k) {
    CoatingStack start = qw;
    std::vector<double> jitter(qw.layers.size());
    for (double& v : jitter) v = 0.2 * (uniform01(rng) - 0.5);
    // Pull the perturbation back toward the quarter-wave design until feasible.
    for (double scale = 1.0; scale > 1e-3; scale *= 0.5) {
      for (std::size_t j = 0; j < qw.layers.size(); ++j) {
        start.layers[j].d_m = qw.layers[j].d_m * (1.0 + scale * jitter[j]);
      }
      if (feasible(start, opt.t_max)) break;
      start = qw;
    }
    Descent d = descend(start, lo, hi, opt.t_max);
    if (d.history.back() < best.history.back()) best = std::move(d);
  }
  return {best.stack, best.history.back(), objective(qw), best.history};
}

nlohmann::json stack_to_json(const CoatingStack& s) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : s.layers) {
    layers.push_back({{"material", l.material}, {"n", l.n}, {"d_nm", l.d_m * 1e9}, {"phi", l.phi}});
  }
  return {{"substrate_index", s.substrate_index},
          {"incident_index", s.incident_index},
          {"design_wavelength_nm", s.design_wavelength_m * 1e9},
          {"layers", layers}};
}

CoatingStack stack_from_json(const nlohmann::json& j) {
  CoatingStack s;
  try {
    s.substrate_index = j.at("substrate_index").get<double>();
    s.incident_index = j.value("incident_index", 1.0);
    s.design_wavelength_m = j.at("design_wavelength_nm").get<double>() * 1e-9;
    for (const auto& l : j.at("layers")) {
      s.layers.push_back({l.at("material").get<std::string>(), l.at("n").get<double>(),
                          l.at("d_nm").get<double>() * 1e-9, l.at("phi").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("coat: malformed stack record: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace qnamp
