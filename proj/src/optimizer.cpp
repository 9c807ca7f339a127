#include "qnamp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

namespace {

struct NamedParam {
  FreeParam p;
  const char* name;
};

constexpr NamedParam kNames[] = {
    {FreeParam::amp_transmissivity, "amp.transmissivity"},
    {FreeParam::pump_power_w, "amp.source_power_w"},
    {FreeParam::ofc_detuning_hz, "ofc.detuning_hz"},
    {FreeParam::ofc_transmission, "ofc.input_transmission"},
    {FreeParam::zeta0_rad, "run.zeta0_rad"},
};

}  // namespace

std::string param_name(FreeParam p) {
  for (const auto& n : kNames) {
    if (n.p == p) return n.name;
  }
  return "?";
}

FreeParam param_from_name(const std::string& name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.p;
  }
  throw ConfigError("unknown free parameter '" + name + "'");
}

double get_param(const ChainConfig& c, FreeParam p) {
  switch (p) {
    case FreeParam::amp_transmissivity: return c.amp.ring.transmissivity;
    case FreeParam::pump_power_w: return c.amp.pump.source_power_w;
    case FreeParam::ofc_detuning_hz: return c.ofc.detuning_hz;
    case FreeParam::ofc_transmission: return c.ofc.input_transmission;
    case FreeParam::zeta0_rad: return c.zeta0_rad;
  }
  return 0.0;
}

void set_param(ChainConfig& c, FreeParam p, double v) {
  switch (p) {
    case FreeParam::amp_transmissivity: c.amp.ring.transmissivity = v; break;
    case FreeParam::pump_power_w: c.amp.pump.source_power_w = v; break;
    case FreeParam::ofc_detuning_hz: c.ofc.detuning_hz = v; break;
    case FreeParam::ofc_transmission: c.ofc.input_transmission = v; break;
    case FreeParam::zeta0_rad: c.zeta0_rad = v; break;
  }
}

std::vector<ParamBound> default_bounds() {
  return {{FreeParam::amp_transmissivity, 0.001, 0.05},
          {FreeParam::pump_power_w, 10.0, 300.0},
          {FreeParam::ofc_detuning_hz, -200.0, -20.0},
          {FreeParam::ofc_transmission, 5e-6, 500e-6},
          {FreeParam::zeta0_rad, -constants::pi / 4, constants::pi / 4}};
}

double midband_cost(const ChainConfig& c, const OptimizeOptions& opt) {
  const FrequencyGrid grid = FrequencyGrid::log_spaced(opt.band_lo_hz, opt.band_hi_hz, opt.band_points);
  double sum = 0.0;
  try {
    for (double psd : total_strain_psd(c, grid)) sum += 0.5 * std::log(psd);
  } catch (const PhysicsError&) {
    return std::numeric_limits<double>::infinity();
  }
  const double cost = sum / static_cast<double>(grid.size());
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class Search {
 public:
  Search(const ChainConfig& base, const OptimizeOptions& opt) : base_(base), opt_(opt) {}

  ChainConfig config_at(const std::vector<double>& u) const {
    ChainConfig c = base_;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const ParamBound& b = opt_.bounds[k];
      set_param(c, b.param, b.lo + std::clamp(u[k], 0.0, 1.0) * (b.hi - b.lo));
    }
    return c;
  }

  double cost(const std::vector<double>& u) {
    ++evaluations;
    return midband_cost(config_at(u), opt_);
  }

  int evaluations = 0;

 private:
  const ChainConfig& base_;
  const OptimizeOptions& opt_;
};

struct Vertex {
  std::vector<double> u;
  double f;
};

void clamp01(std::vector<double>& u) {
  for (double& v : u) v = std::clamp(v, 0.0, 1.0);
}

Vertex nelder_mead(Search& s, Vertex start, std::mt19937_64& rng, int budget) {
  const std::size_t d = start.u.size();
  std::vector<Vertex> simplex{start};
  for (std::size_t k = 0; k < d; ++k) {
    Vertex v = start;
    const double step = 0.05 + 0.15 * uniform01(rng);
    v.u[k] += (v.u[k] + step <= 1.0) ? step : -step;
    clamp01(v.u);
    v.f = s.cost(v.u);
    simplex.push_back(std::move(v));
  }
  const int stop = s.evaluations + budget;
  auto by_cost = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  while (s.evaluations < stop) {
    std::stable_sort(simplex.begin(), simplex.end(), by_cost);
    double size = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
      for (std::size_t j = 0; j < d; ++j) size = std::max(size, std::abs(simplex[k].u[j] - simplex[0].u[j]));
    }
    if (size < 1e-7) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[k].u[j] / static_cast<double>(d);
    }
    auto along = [&](double t) {
      std::vector<double> u(d);
      for (std::size_t j = 0; j < d; ++j) u[j] = centroid[j] + t * (simplex[d].u[j] - centroid[j]);
      clamp01(u);
      return u;
    };
    Vertex r{along(-1.0), 0.0};
    r.f = s.cost(r.u);
    if (r.f < simplex[0].f) {
      Vertex e{along(-2.0), 0.0};
      e.f = s.cost(e.u);
      simplex[d] = e.f < r.f ? std::move(e) : std::move(r);
    } else if (r.f < simplex[d - 1].f) {
      simplex[d] = std::move(r);
    } else {
      Vertex ct{along(r.f < simplex[d].f ? -0.5 : 0.5), 0.0};
      ct.f = s.cost(ct.u);
      if (ct.f < std::min(r.f, simplex[d].f)) {
        simplex[d] = std::move(ct);
      } else {
        for (std::size_t k = 1; k <= d; ++k) {
          for (std::size_t j = 0; j < d; ++j) {
            simplex[k].u[j] = simplex[0].u[j] + 0.5 * (simplex[k].u[j] - simplex[0].u[j]);
          }
          simplex[k].f = s.cost(simplex[k].u);
        }
      }
    }
  }
  return *std::min_element(simplex.begin(), simplex.end(), by_cost);
}

}  // namespace

OptimizeResult optimize(const ChainConfig& c, const OptimizeOptions& opt) {
  c.validate();
  for (const ParamBound& b : opt.bounds) {
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw InfeasibleError("optimize: empty bound for " + param_name(b.param));
    }
  }
  const double initial = midband_cost(c, opt);
  if (opt.bounds.empty()) return {c, initial, initial, 1};

  Search s(c, opt);
  Vertex best{std::vector<double>(opt.bounds.size()), 0.0};
  for (std::size_t k = 0; k < opt.bounds.size(); ++k) {
    const ParamBound& b = opt.bounds[k];
    best.u[k] = std::clamp((get_param(c, b.param) - b.lo) / (b.hi - b.lo), 0.0, 1.0);
  }
  best.f = s.cost(best.u);
  std::mt19937_64 rng(c.seed);
  const int rounds = std::max(1, opt.restarts);
  for (int k = 0; k < rounds; ++k) {
    Vertex v = nelder_mead(s, best, rng, opt.max_evaluations / rounds);
    if (v.f < best.f) best = std::move(v);
  }
  if (!std::isfinite(best.f)) throw InfeasibleError("optimize: no admissible point has finite cost");
  ChainConfig out = s.config_at(best.u);
  out.validate();
  return {out, best.f, initial, s.evaluations};
}

std::vector<MassSweepEntry> mass_sweep(const ChainConfig& c, const std::vector<double>& masses_kg,
                                       const OptimizeOptions& opt) {
  for (double m : masses_kg) {
    if (!(m > 0.0)) throw ConfigError("mass sweep: masses must be positive");
  }
  std::vector<MassSweepEntry> out(masses_kg.size());
  std::vector<std::exception_ptr> errors(masses_kg.size());
  std::vector<std::thread> workers;
  for (std::size_t k = 0; k < masses_kg.size(); ++k) {
    workers.emplace_back([&, k] {
      try {
        ChainConfig base = c;
        base.amp.ring.mirror_mass_kg = masses_kg[k];
        base.sus.mass_kg = masses_kg[k];
        OptimizeResult r = optimize(base, opt);
        ChainConfig off = r.config;
        off.amp.enabled = false;
        const double improvement = std::exp(midband_cost(off, opt) - r.cost);
        out[k] = {masses_kg[k], r, budget(r.config), improvement};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace qnamp
