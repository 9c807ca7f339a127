// qnamp: quantum noise budgets for an optomechanical readout amplifier.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnamp/budget.hpp"
#include "qnamp/coating.hpp"
#include "qnamp/errors.hpp"
#include "qnamp/optimizer.hpp"
#include "qnamp/report.hpp"
#include "qnamp/run_config.hpp"

namespace fs = std::filesystem;
using namespace qnamp;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out = ".";
  bool no_amp = false;
  long long seed = -1;
};

void add_common(CLI::App* sub, Common& o) {
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--preset", o.preset, "15dB or 20dB");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_flag("--no-amp", o.no_amp, "Disable the amplifier and output filter cavity");
  sub->add_option("--seed", o.seed, "Override the configuration seed")->check(CLI::NonNegativeNumber);
}

ChainConfig load(const Common& o) {
  if (!o.config.empty() && !o.preset.empty()) throw ConfigError("use either --config or --preset, not both");
  ChainConfig c = o.config.empty() ? preset(o.preset.empty() ? "15dB" : o.preset) : load_config(o.config);
  if (o.no_amp) c.amp.enabled = false;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  c.validate();
  return c;
}

std::string out_path(const Common& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

void write_budget(const Common& o, const ChainConfig& c, const std::string& stem, const nlohmann::json& extra) {
  const StrainBudget b = budget(c);
  write_text_file(out_path(o, stem + ".csv"), budget_table(b).render(manifest_line("budget", config_hash(c))));
  write_text_file(out_path(o, stem + "_manifest.json"), run_manifest("budget", c, extra).dump(2) + "\n");
}

int cmd_budget(const Common& o) {
  const ChainConfig c = load(o);
  write_budget(o, c, "budget", {{"amplifier", c.amp.enabled}});
  return 0;
}

int cmd_gain(const Common& o) {
  const ChainConfig c = load(o);
  const GainCurve g = gain_curve(c, c.grid.build());
  write_text_file(out_path(o, "gain.csv"), gain_table(g).render(manifest_line("gain", config_hash(c))));
  write_text_file(out_path(o, "gain_manifest.json"), run_manifest("gain", c, nlohmann::json::object()).dump(2) + "\n");
  return 0;
}

nlohmann::json optimize_record(const OptimizeResult& r, const OptimizeOptions& opt) {
  nlohmann::json params = nlohmann::json::object();
  for (const ParamBound& b : opt.bounds) {
    params[param_name(b.param)] = {{"value", get_param(r.config, b.param)}, {"lo", b.lo}, {"hi", b.hi}};
  }
  return {{"cost", r.cost},
          {"initial_cost", r.initial_cost},
          {"evaluations", r.evaluations},
          {"cost_definition", "mean ln(total ASD) over log-spaced points"},
          {"band_hz", {opt.band_lo_hz, opt.band_hi_hz}},
          {"band_points", opt.band_points},
          {"parameters", params}};
}

int cmd_optimize(const Common& o, const std::vector<std::string>& free) {
  const ChainConfig c = load(o);
  OptimizeOptions opt;
  if (!free.empty()) {
    std::vector<ParamBound> bounds;
    for (const std::string& name : free) {
      const FreeParam p = param_from_name(name);
      for (const ParamBound& b : default_bounds()) {
        if (b.param == p) bounds.push_back(b);
      }
    }
    opt.bounds = bounds;
  }
  const OptimizeResult r = optimize(c, opt);
  write_text_file(out_path(o, "optimized_config.json"), serialize_config(r.config).dump(2) + "\n");
  write_budget(o, r.config, "optimized_budget", {{"optimization", optimize_record(r, opt)}});
  std::printf("cost %.6f -> %.6f (%d evaluations)\n", r.initial_cost, r.cost, r.evaluations);
  return 0;
}

int cmd_coating(const Common& o, int pairs, double t_max_ppm, int restarts) {
  const ChainConfig c = load(o);
  StackOptimizerOptions so;
  so.n_pairs = pairs > 0 ? pairs : c.coat.n_pairs;
  so.t_max = t_max_ppm * 1e-6;
  so.restarts = restarts;
  so.seed = c.seed;
  const StackOptimizationResult r = optimize_stack(c.coat.materials, so);
  const PowerCoefficients pc = stack_transmission(r.stack, r.stack.design_wavelength_m);
  write_text_file(out_path(o, "coating.csv"), coating_table(r.stack).render(manifest_line("coating", config_hash(c))));
  write_text_file(out_path(o, "coating_stack.json"), stack_to_json(r.stack).dump(2) + "\n");
  nlohmann::json extra{{"n_pairs", so.n_pairs},
                       {"t_max", so.t_max},
                       {"transmission", pc.t},
                       {"objective_m", r.objective},
                       {"quarter_wave_objective_m", r.quarter_wave_objective}};
  write_text_file(out_path(o, "coating_manifest.json"), run_manifest("coating", c, extra).dump(2) + "\n");
  std::printf("T = %.3f ppm, sum d*phi = %.4e m (quarter-wave %.4e m)\n", pc.t * 1e6, r.objective,
              r.quarter_wave_objective);
  return 0;
}

/// "3g", "30 g", "0.3kg".
double parse_mass(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse mass '" + token + "'");
  }
  std::string unit = token.substr(used);
  unit.erase(0, unit.find_first_not_of(' '));
  if (unit == "g") return v * 1e-3;
  if (unit == "kg") return v;
  throw ConfigError("mass '" + token + "' needs a g or kg suffix");
}

int cmd_mass_sweep(const Common& o, const std::vector<std::string>& masses) {
  const ChainConfig c = load(o);
  std::vector<double> kg;
  for (const std::string& m : masses) kg.push_back(parse_mass(m));
  if (kg.empty()) throw ConfigError("--masses needs at least one entry");
  const OptimizeOptions opt;
  const std::vector<MassSweepEntry> sweep = mass_sweep(c, kg, opt);
  CsvTable summary{{"mass_kg", "file", "cost", "midband_improvement", "transmissivity", "source_power_w",
                    "ofc_detuning_hz", "ofc_input_transmission", "zeta0_rad"},
                   {}};
  nlohmann::json entries = nlohmann::json::array();
  for (const MassSweepEntry& e : sweep) {
    char name[64];
    std::snprintf(name, sizeof name, "budget_mass_%gg.csv", e.mass_kg * 1e3);
    const ChainConfig& oc = e.optimum.config;
    write_text_file(out_path(o, name), budget_table(e.budget).render(manifest_line("budget", config_hash(oc))));
    summary.rows.push_back({format_number(e.mass_kg), name, format_number(e.optimum.cost),
                            format_number(e.midband_improvement), format_number(oc.amp.ring.transmissivity),
                            format_number(oc.amp.pump.source_power_w), format_number(oc.ofc.detuning_hz),
                            format_number(oc.ofc.input_transmission), format_number(oc.zeta0_rad)});
    entries.push_back({{"mass_kg", e.mass_kg},
                       {"file", name},
                       {"config_hash", hash_hex(config_hash(oc))},
                       {"optimization", optimize_record(e.optimum, opt)}});
  }
  write_text_file(out_path(o, "mass_sweep.csv"), summary.render(manifest_line("mass-sweep", config_hash(c))));
  write_text_file(out_path(o, "mass_sweep_manifest.json"),
                  run_manifest("mass-sweep", c, {{"entries", entries}}).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum noise budgets for a Mach-Zehnder optomechanical readout amplifier"};
  app.require_subcommand(1);

  Common o_budget, o_gain, o_opt, o_coat, o_mass;
  auto* budget_cmd = app.add_subcommand("budget", "Per-source strain noise budget");
  add_common(budget_cmd, o_budget);

  auto* gain_cmd = app.add_subcommand("gain", "Amplifier gain in the filtered readout quadrature");
  add_common(gain_cmd, o_gain);

  std::vector<std::string> free;
  auto* opt_cmd = app.add_subcommand("optimize", "Minimise mid-band noise over free parameters");
  add_common(opt_cmd, o_opt);
  opt_cmd->add_option("--free", free, "Free parameters (default: all)")->delimiter(',');

  int pairs = 0;
  double t_max_ppm = 5.0;
  int restarts = 8;
  auto* coat_cmd = app.add_subcommand("coating", "Design a low-noise high-reflector stack");
  add_common(coat_cmd, o_coat);
  coat_cmd->add_option("--pairs", pairs, "Layer pairs (default from config)");
  coat_cmd->add_option("--tmax-ppm", t_max_ppm, "Transmission limit in ppm");
  coat_cmd->add_option("--restarts", restarts, "Optimizer starts");

  std::vector<std::string> masses{"3g", "30g", "300g"};
  auto* mass_cmd = app.add_subcommand("mass-sweep", "Re-optimise and budget for several mirror masses");
  add_common(mass_cmd, o_mass);
  mass_cmd->add_option("--masses", masses, "Comma-separated masses, e.g. 3g,30g,300g")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*budget_cmd) return cmd_budget(o_budget);
    if (*gain_cmd) return cmd_gain(o_gain);
    if (*opt_cmd) return cmd_optimize(o_opt, free);
    if (*coat_cmd) return cmd_coating(o_coat, pairs, t_max_ppm, restarts);
    if (*mass_cmd) return cmd_mass_sweep(o_mass, masses);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error [" << e.source() << "]: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
