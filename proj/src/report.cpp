#include "qnamp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qnamp/run_config.hpp"

namespace qnamp {

std::uint64_t config_hash(const ChainConfig& c) {
  const std::string s = serialize_config(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string CsvTable::render(const std::string& manifest) const {
  std::string out = manifest + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += csv_field(cells[k]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string manifest_line(const std::string& kind, std::uint64_t hash) {
  return "# qnamp " + kind + " engine=" + kEngineVersion + " config_hash=" + hash_hex(hash);
}

CsvTable budget_table(const StrainBudget& b) {
  CsvTable t;
  t.header.push_back("f_Hz");
  for (const char* l : kSourceLabels) t.header.push_back(l);
  t.header.push_back("total");
  for (std::size_t i = 0; i < b.grid.size(); ++i) {
    std::vector<std::string> row{format_number(b.grid.hz(i))};
    for (const auto& s : b.sources) row.push_back(format_number(s[i]));
    row.push_back(format_number(b.total[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable gain_table(const GainCurve& g) {
  CsvTable t{{"f_Hz", "gain", "K_A", "zeta_rad"}, {}};
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    t.rows.push_back({format_number(g.grid.hz(i)), format_number(g.gain[i]), format_number(g.k_a[i]),
                      format_number(g.zeta[i])});
  }
  return t;
}

CsvTable coating_table(const CoatingStack& s) {
  CsvTable t{{"layer", "material", "n", "d_nm", "phi"}, {}};
  for (std::size_t k = 0; k < s.layers.size(); ++k) {
    const Layer& l = s.layers[k];
    t.rows.push_back({std::to_string(k + 1), l.material, format_number(l.n), format_number(l.d_m * 1e9),
                      format_number(l.phi)});
  }
  return t;
}

nlohmann::json run_manifest(const std::string& kind, const ChainConfig& c, const nlohmann::json& extra) {
  nlohmann::json m{{"engine", "qnamp"},
                   {"engine_version", kEngineVersion},
                   {"kind", kind},
                   {"config_hash", hash_hex(config_hash(c))},
                   {"seed", c.seed},
                   {"config", serialize_config(c)}};
  for (const auto& [k, v] : extra.items()) m[k] = v;
  return m;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace qnamp
