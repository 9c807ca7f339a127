#pragma once

// Deterministic CSV and manifest output.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnamp/budget.hpp"
#include "qnamp/coating.hpp"

namespace qnamp {

inline constexpr const char* kEngineVersion = "1.0.0";

/// FNV-1a over the compact serialised configuration.
std::uint64_t config_hash(const ChainConfig& c);
std::string hash_hex(std::uint64_t h);

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
/// Fixed "%.10e" rendering; "inf"/"nan" spelled out.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Manifest comment line, header, rows; CRLF-free, '\n' terminated.
  std::string render(const std::string& manifest_line) const;
};

std::string manifest_line(const std::string& kind, std::uint64_t hash);

CsvTable budget_table(const StrainBudget& b);
CsvTable gain_table(const GainCurve& g);
CsvTable coating_table(const CoatingStack& s);

/// Structured run record: engine version, command, config, seed and extras.
nlohmann::json run_manifest(const std::string& kind, const ChainConfig& c, const nlohmann::json& extra);

/// Throws std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qnamp
