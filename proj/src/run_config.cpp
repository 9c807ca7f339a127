#include "qnamp/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "qnamp/constants.hpp"
#include "qnamp/errors.hpp"

namespace qnamp {

using nlohmann::json;

double parse_fraction(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError(key + ": expected a number or a \"ppm\"/\"%\" literal");
  const std::string s = v.get<std::string>();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + s + "'");
  }
  std::string unit = s.substr(used);
  unit.erase(0, unit.find_first_not_of(' '));
  if (unit == "ppm") return x * constants::ppm;
  if (unit == "%") return x * 1e-2;
  if (unit.empty()) return x;
  throw ConfigError(key + ": unknown unit '" + unit + "' (use ppm or %)");
}

namespace {

// Reads keys from one JSON object and remembers which were consumed.
class Group {
 public:
  Group(const json& obj, std::string path) : path_(std::move(path)) {
    if (obj.is_null()) return;
    if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
    obj_ = &obj;
  }

  const json* take(const char* key) {
    if (obj_ == nullptr || !obj_->contains(key)) return nullptr;
    used_.insert(key);
    return &obj_->at(key);
  }

  void number(const char* key, double& out, double scale = 1.0) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
      out = v->get<double>() * scale;
      if (!std::isfinite(out)) throw ConfigError(where(key) + ": must be finite");
    }
  }

  void fraction(const char* key, double& out) {
    if (const json* v = take(key)) out = parse_fraction(*v, where(key));
  }

  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void count(const char* key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  template <class E>
  void choice(const char* key, E& out, std::initializer_list<std::pair<const char*, E>> options) {
    std::string s;
    text(key, s);
    if (s.empty() && !(obj_ && obj_->contains(key))) return;
    for (const auto& [name, value] : options) {
      if (s == name) {
        out = value;
        return;
      }
    }
    throw ConfigError(where(key) + ": unknown value '" + s + "'");
  }

  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [key, value] : obj_->items()) {
      if (!used_.count(key)) throw ConfigError(where(key.c_str()) + ": unknown key");
    }
  }

  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> used_;
};

const json kNull;

const json& member(const json& j, const char* key) { return j.contains(key) ? j.at(key) : kNull; }

FilterCavityParams parse_cavity(const json& j, const std::string& path, FilterCavityParams f) {
  Group g(j, path);
  g.number("length_m", f.length_m);
  g.fraction("input_transmission", f.input_transmission);
  g.fraction("roundtrip_loss", f.roundtrip_loss);
  g.number("detuning_hz", f.detuning_hz);
  g.finish();
  return f;
}

json cavity_json(const FilterCavityParams& f) {
  return {{"length_m", f.length_m},
          {"input_transmission", f.input_transmission},
          {"roundtrip_loss", f.roundtrip_loss},
          {"detuning_hz", f.detuning_hz}};
}

void parse_ifo(const json& j, IfoParams& p) {
  Group g(j, "ifo");
  g.fraction("arm_loss", p.arm_loss);
  g.fraction("src_loss", p.src_loss);
  g.fraction("readout_loss", p.readout_loss);
  g.number("wavelength_m", p.wavelength_m);
  g.number("wavelength_um", p.wavelength_m, 1e-6);
  g.number("mass_kg", p.mass_kg);
  g.number("arm_length_m", p.arm_length_m);
  g.number("arm_power_w", p.arm_power_w);
  g.number("bandwidth_rad_s", p.bandwidth_rad_s);
  g.number("bandwidth_hz", p.bandwidth_rad_s, constants::two_pi);
  g.choice("model", p.model, {{"ponderomotive", IfoModel::ponderomotive}, {"flat", IfoModel::flat}});
  g.finish();
}

void parse_sqz(const json& j, SqueezerParams& s, IfcMode& mode) {
  Group g(j, "sqz");
  g.number("squeeze_db", s.db);
  g.fraction("injection_loss", s.injection_loss);
  if (const json* list = g.take("ifc")) {
    if (!list->is_array()) throw ConfigError("sqz.ifc: expected an array of cavities");
    s.ifc_list.clear();
    for (std::size_t k = 0; k < list->size(); ++k) {
      s.ifc_list.push_back(parse_cavity(list->at(k), "sqz.ifc[" + std::to_string(k) + "]", {}));
    }
  }
  g.choice("ifc_mode", mode, {{"physical", IfcMode::physical}, {"ideal", IfcMode::ideal}});
  g.finish();
}

void parse_amp(const json& j, ChainConfig& c) {
  AmplifierConfig& a = c.amp;
  Group g(j, "amp");
  g.boolean("enabled", a.enabled);
  g.choice("model", a.model,
           {{"ring_exact", AmpModel::ring_exact}, {"ring_approx", AmpModel::ring_approx},
            {"ideal_gain", AmpModel::ideal_gain}});
  g.fraction("transmissivity", a.ring.transmissivity);
  g.number("roundtrip_length_m", a.ring.roundtrip_length_m);
  g.number("l1_m", a.ring.l1_m);
  g.number("l2_m", a.ring.l2_m);
  g.number("mass_kg", a.ring.mirror_mass_kg);
  g.number("mass_g", a.ring.mirror_mass_kg, 1e-3);
  g.number("pendulum_rad_s", a.ring.pendulum_omega);
  g.number("pendulum_hz", a.ring.pendulum_omega, constants::two_pi);
  g.fraction("roundtrip_loss", a.ring.roundtrip_loss);
  for (const auto& [key, scale] : {std::pair{"incidence_rad", 1.0}, std::pair{"incidence_deg", constants::pi / 180.0}}) {
    if (const json* v = g.take(key)) {
      if (!v->is_array() || v->size() != 3) throw ConfigError(g.where(key) + ": expected three angles");
      for (std::size_t k = 0; k < 3; ++k) {
        if (!v->at(k).is_number()) throw ConfigError(g.where(key) + ": expected numbers");
        a.ring.incidence_rad[k] = v->at(k).get<double>() * scale;
      }
    }
  }
  g.number("source_power_w", a.pump.source_power_w);
  g.number("pump_wavelength_m", a.pump.wavelength_m);
  g.number("ideal_gain", a.ideal_gain);
  g.number("cmrr_db", a.cmrr_db);
  g.number("cmrr_ref_hz", a.cmrr_ref_hz);
  g.number("rin_floor_per_rthz", a.rin.floor);
  g.number("rin_corner_hz", a.rin.corner_hz);
  g.boolean("backward_phase", a.backward_phase);
  g.boolean("ofc_enabled", c.ofc_enabled);
  if (const json* o = g.take("ofc")) c.ofc = parse_cavity(*o, "amp.ofc", c.ofc);
  g.finish();
}

void parse_coat(const json& j, CoatingConfig& c) {
  Group g(j, "coat");
  g.text("high_material", c.materials.high.material);
  g.number("n_high", c.materials.high.n);
  g.number("phi_high", c.materials.high.phi);
  g.text("low_material", c.materials.low.material);
  g.number("n_low", c.materials.low.n);
  g.number("phi_low", c.materials.low.phi);
  g.number("substrate_index", c.materials.substrate_index);
  g.number("wavelength_m", c.materials.wavelength_m);
  g.integer("n_pairs", c.n_pairs);
  g.number("beam_radius_m", c.beam_radius_m);
  g.number("beam_radius_mm", c.beam_radius_m, 1e-3);
  g.number("substrate_poisson", c.substrate_poisson);
  g.number("substrate_young_pa", c.substrate_young_pa);
  g.number("substrate_young_gpa", c.substrate_young_pa, 1e9);
  g.finish();
}

void parse_sus(const json& j, SuspensionParams& s) {
  Group g(j, "sus");
  g.number("young_pa", s.young_pa);
  g.number("young_gpa", s.young_pa, 1e9);
  g.number("density_kg_m3", s.density_kg_m3);
  g.number("expansion_per_k", s.expansion_per_k);
  g.number("dlogy_dt_per_k", s.dlogy_dt_per_k);
  g.number("heat_capacity_j_kg_k", s.heat_capacity_j_kg_k);
  g.number("conductivity_w_m_k", s.conductivity_w_m_k);
  g.number("width_m", s.width_m);
  g.number("width_um", s.width_m, 1e-6);
  g.number("thickness_m", s.thickness_m);
  g.number("thickness_um", s.thickness_m, 1e-6);
  g.number("length_m", s.length_m);
  g.number("length_cm", s.length_m, 1e-2);
  g.integer("n_fibers", s.n_fibers);
  g.number("phi_surface", s.phi_surface);
  g.number("phi_bulk", s.phi_bulk);
  g.number("surface_depth_m", s.surface_depth_m);
  g.number("surface_depth_um", s.surface_depth_m, 1e-6);
  g.number("temperature_k", s.temperature_k);
  g.number("pendulum_hz", s.pendulum_hz);
  g.boolean("dissipation_dilution", s.dissipation_dilution);
  g.boolean("thermoelastic", s.thermoelastic);
  g.finish();
}

void parse_run(const json& j, ChainConfig& c) {
  Group g(j, "run");
  g.number("f_min_hz", c.grid.f_min_hz);
  g.number("f_max_hz", c.grid.f_max_hz);
  g.count("n_points", c.grid.n_points);
  g.seed("seed", c.seed);
  g.number("zeta0_rad", c.zeta0_rad);
  g.number("zeta0_deg", c.zeta0_rad, constants::pi / 180.0);
  g.finish();
}

}  // namespace

ChainConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  Group top(j, "");
  ChainConfig c;
  std::string name;
  top.text("preset", name);
  if (!name.empty()) c = preset(name);
  parse_ifo(member(j, "ifo"), c.ifo);
  parse_sqz(member(j, "sqz"), c.sqz, c.ifc_mode);
  parse_amp(member(j, "amp"), c);
  parse_coat(member(j, "coat"), c.coat);
  parse_sus(member(j, "sus"), c.sus);
  parse_run(member(j, "run"), c);
  for (const char* k : {"ifo", "sqz", "amp", "coat", "sus", "run"}) top.take(k);
  top.finish();
  // One mirror mass serves both the optics and the suspension.
  c.sus.mass_kg = c.amp.ring.mirror_mass_kg;
  c.validate();
  return c;
}

ChainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse_config(j);
}

json serialize_config(const ChainConfig& c) {
  json ifc = json::array();
  for (const FilterCavityParams& f : c.sqz.ifc_list) ifc.push_back(cavity_json(f));
  const auto& a = c.amp;
  const char* amp_model = a.model == AmpModel::ring_exact    ? "ring_exact"
                          : a.model == AmpModel::ring_approx ? "ring_approx"
                                                             : "ideal_gain";
  return {
      {"ifo",
       {{"arm_loss", c.ifo.arm_loss},
        {"src_loss", c.ifo.src_loss},
        {"readout_loss", c.ifo.readout_loss},
        {"wavelength_m", c.ifo.wavelength_m},
        {"mass_kg", c.ifo.mass_kg},
        {"arm_length_m", c.ifo.arm_length_m},
        {"arm_power_w", c.ifo.arm_power_w},
        {"bandwidth_rad_s", c.ifo.bandwidth_rad_s},
        {"model", c.ifo.model == IfoModel::flat ? "flat" : "ponderomotive"}}},
      {"sqz",
       {{"squeeze_db", c.sqz.db},
        {"injection_loss", c.sqz.injection_loss},
        {"ifc", ifc},
        {"ifc_mode", c.ifc_mode == IfcMode::ideal ? "ideal" : "physical"}}},
      {"amp",
       {{"enabled", a.enabled},
        {"model", amp_model},
        {"transmissivity", a.ring.transmissivity},
        {"roundtrip_length_m", a.ring.roundtrip_length_m},
        {"l1_m", a.ring.l1_m},
        {"l2_m", a.ring.l2_m},
        {"mass_kg", a.ring.mirror_mass_kg},
        {"pendulum_rad_s", a.ring.pendulum_omega},
        {"roundtrip_loss", a.ring.roundtrip_loss},
        {"incidence_rad", a.ring.incidence_rad},
        {"source_power_w", a.pump.source_power_w},
        {"pump_wavelength_m", a.pump.wavelength_m},
        {"ideal_gain", a.ideal_gain},
        {"cmrr_db", a.cmrr_db},
        {"cmrr_ref_hz", a.cmrr_ref_hz},
        {"rin_floor_per_rthz", a.rin.floor},
        {"rin_corner_hz", a.rin.corner_hz},
        {"backward_phase", a.backward_phase},
        {"ofc_enabled", c.ofc_enabled},
        {"ofc", cavity_json(c.ofc)}}},
      {"coat",
       {{"high_material", c.coat.materials.high.material},
        {"n_high", c.coat.materials.high.n},
        {"phi_high", c.coat.materials.high.phi},
        {"low_material", c.coat.materials.low.material},
        {"n_low", c.coat.materials.low.n},
        {"phi_low", c.coat.materials.low.phi},
        {"substrate_index", c.coat.materials.substrate_index},
        {"wavelength_m", c.coat.materials.wavelength_m},
        {"n_pairs", c.coat.n_pairs},
        {"beam_radius_m", c.coat.beam_radius_m},
        {"substrate_poisson", c.coat.substrate_poisson},
        {"substrate_young_pa", c.coat.substrate_young_pa}}},
      {"sus",
       {{"young_pa", c.sus.young_pa},
        {"density_kg_m3", c.sus.density_kg_m3},
        {"expansion_per_k", c.sus.expansion_per_k},
        {"dlogy_dt_per_k", c.sus.dlogy_dt_per_k},
        {"heat_capacity_j_kg_k", c.sus.heat_capacity_j_kg_k},
        {"conductivity_w_m_k", c.sus.conductivity_w_m_k},
        {"width_m", c.sus.width_m},
        {"thickness_m", c.sus.thickness_m},
        {"length_m", c.sus.length_m},
        {"n_fibers", c.sus.n_fibers},
        {"phi_surface", c.sus.phi_surface},
        {"phi_bulk", c.sus.phi_bulk},
        {"surface_depth_m", c.sus.surface_depth_m},
        {"temperature_k", c.sus.temperature_k},
        {"pendulum_hz", c.sus.pendulum_hz},
        {"dissipation_dilution", c.sus.dissipation_dilution},
        {"thermoelastic", c.sus.thermoelastic}}},
      {"run",
       {{"f_min_hz", c.grid.f_min_hz},
        {"f_max_hz", c.grid.f_max_hz},
        {"n_points", c.grid.n_points},
        {"seed", c.seed},
        {"zeta0_rad", c.zeta0_rad}}},
  };
}

}  // namespace qnamp
