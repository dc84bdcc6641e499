#pragma once

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilinrank/design.hpp"
#include "bilinrank/error.hpp"
#include "bilinrank/experiments.hpp"
#include "bilinrank/rank.hpp"
#include "bilinrank/sectors.hpp"

namespace bilinrank::io {

using nlohmann::json;

inline constexpr const char* kBundleFormat = "bodf";
inline constexpr int kBundleVersion = 1;
inline constexpr const char* kProfileHeader = "tolerance,rank,nullity";
inline constexpr const char* kSectorHeader = "tolerance,nullspace_dim,sector,weight";
inline constexpr const char* kUndefined = "undefined";

/// 17 significant digits, decimal scientific notation; round-trips exactly.
inline std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoFailure("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoFailure("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

// ---------------------------------------------------------------------------
// Bundle documents

inline json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (const auto& z : m.row(r)) row.push_back(json::array({z.real(), z.imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InvalidInput(field + ": expected a nonempty array of rows");
  std::vector<std::vector<Complex>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    const auto row_field = field + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw InvalidInput(row_field + ": expected an array of entries");
    std::vector<Complex> entries;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InvalidInput(row_field + "[" + std::to_string(c) + "]: expected [re, im]");
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    rows.push_back(std::move(entries));
  }
  try {
    return DenseMatrix::from_rows(rows);
  } catch (const InvalidInput& e) {
    throw InvalidInput(field + ": " + e.what());
  }
}

inline json bundle_to_json(const DesignBundle& bundle) {
  json doc;
  doc["format"] = kBundleFormat;
  doc["version"] = kBundleVersion;
  doc["config"] = {{"d", bundle.config.d},
                   {"n_E", bundle.config.n_operators},
                   {"n_rho", bundle.config.n_states},
                   {"ambient_dim", bundle.config.ambient_dim()},
                   {"label", to_string(bundle.config.label)}};
  doc["partition"] = bundle.partition.blocks;
  doc["seed"] = bundle.seed;
  doc["preset_label"] = bundle.preset_label;
  json ops = json::array();
  for (const auto& op : bundle.operators) ops.push_back({{"kind", to_string(op.kind)}, {"matrix", matrix_to_json(op.matrix)}});
  json sts = json::array();
  for (const auto& st : bundle.states) sts.push_back({{"kind", to_string(st.kind)}, {"matrix", matrix_to_json(st.matrix)}});
  doc["operators"] = std::move(ops);
  doc["states"] = std::move(sts);
  return doc;
}

namespace detail {

inline const json& require(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidInput(field + "." + key + ": missing");
  return obj.at(key);
}

inline std::size_t require_count(const json& obj, const char* key, const std::string& field) {
  const auto& v = require(obj, key, field);
  if (!v.is_number_unsigned()) throw InvalidInput(field + "." + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace detail

/// Parses and re-validates every invariant; errors name the failing field.
inline DesignBundle bundle_from_json(const json& doc) {
  using detail::require;
  using detail::require_count;
  if (!doc.is_object()) throw InvalidInput("document: expected an object");
  const auto& format = require(doc, "format", "document");
  if (!format.is_string() || format.get<std::string>() != kBundleFormat)
    throw InvalidInput("format: expected \"" + std::string(kBundleFormat) + "\"");
  const auto& version = require(doc, "version", "document");
  if (!version.is_number_integer() || version.get<int>() != kBundleVersion)
    throw InvalidInput("version: unsupported (expected " + std::to_string(kBundleVersion) + ")");

  DesignBundle bundle;
  const auto& config = require(doc, "config", "document");
  bundle.config.d = require_count(config, "d", "config");
  bundle.config.n_operators = require_count(config, "n_E", "config");
  bundle.config.n_states = require_count(config, "n_rho", "config");
  const auto& label = require(config, "label", "config");
  if (!label.is_string()) throw InvalidInput("config.label: expected a string");
  bundle.config.label = parse_config_label(label.get<std::string>());
  if (config.contains("ambient_dim") && require_count(config, "ambient_dim", "config") != bundle.config.ambient_dim())
    throw InvalidInput("config.ambient_dim: must equal d^4");

  const auto& partition = require(doc, "partition", "document");
  try {
    bundle.partition.blocks = partition.get<std::vector<std::vector<std::size_t>>>();
  } catch (const json::exception&) {
    throw InvalidInput("partition: expected an array of index arrays");
  }
  const auto& seed = require(doc, "seed", "document");
  if (!seed.is_number_unsigned()) throw InvalidInput("seed: expected an unsigned integer");
  bundle.seed = seed.get<std::uint64_t>();
  const auto& preset = require(doc, "preset_label", "document");
  if (!preset.is_string()) throw InvalidInput("preset_label: expected a string");
  bundle.preset_label = preset.get<std::string>();

  const auto& ops = require(doc, "operators", "document");
  if (!ops.is_array()) throw InvalidInput("operators: expected an array");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto field = "operators[" + std::to_string(i) + "]";
    const auto& kind = require(ops[i], "kind", field);
    if (!kind.is_string()) throw InvalidInput(field + ".kind: expected a string");
    bundle.operators.push_back(
        {matrix_from_json(require(ops[i], "matrix", field), field + ".matrix"), parse_operator_kind(kind.get<std::string>())});
  }
  const auto& sts = require(doc, "states", "document");
  if (!sts.is_array()) throw InvalidInput("states: expected an array");
  for (std::size_t j = 0; j < sts.size(); ++j) {
    const auto field = "states[" + std::to_string(j) + "]";
    const auto& kind = require(sts[j], "kind", field);
    if (!kind.is_string()) throw InvalidInput(field + ".kind: expected a string");
    bundle.states.push_back(
        {matrix_from_json(require(sts[j], "matrix", field), field + ".matrix"), parse_state_kind(kind.get<std::string>())});
  }
  bundle.validate();
  return bundle;
}

inline std::string bundle_to_text(const DesignBundle& bundle) { return bundle_to_json(bundle).dump(1) + "\n"; }

inline DesignBundle bundle_from_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed bundle document: ") + e.what());
  }
  return bundle_from_json(doc);
}

inline void save_bundle(const DesignBundle& bundle, const std::filesystem::path& path) {
  bundle.validate();
  write_file_atomic(path, bundle_to_text(bundle));
}

inline DesignBundle load_bundle(const std::filesystem::path& path) { return bundle_from_text(read_file(path)); }

// ---------------------------------------------------------------------------
// Profile tables

inline std::string profile_to_csv(const RankProfile& profile) {
  profile.validate();
  std::string out = std::string(kProfileHeader) + "\n";
  for (std::size_t k = 0; k < profile.grid.size(); ++k)
    out += format_sci(profile.grid[k]) + "," + std::to_string(profile.ranks[k]) + "," +
           std::to_string(profile.nullities[k]) + "\n";
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    throw InvalidInput(field + ": not a number");
  }
  if (used != s.size()) throw InvalidInput(field + ": not a number");
  return v;
}

inline std::size_t parse_count(const std::string& s, const std::string& field) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidInput(field + ": expected a non-negative integer");
  return std::stoul(s);
}

}  // namespace detail

/// Inverse of profile_to_csv. The ambient dimension is recovered as rank + nullity.
inline RankProfile profile_from_csv(const std::string& text, std::string source_label = {}) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kProfileHeader)
    throw InvalidInput("profile: expected header '" + std::string(kProfileHeader) + "'");
  std::vector<double> taus;
  std::vector<std::size_t> ranks, nullities;
  std::size_t ambient = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto field = "profile line " + std::to_string(lineno);
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw InvalidInput(field + ": expected 3 columns");
    taus.push_back(detail::parse_double(parts[0], field + " tolerance"));
    ranks.push_back(detail::parse_count(parts[1], field + " rank"));
    nullities.push_back(detail::parse_count(parts[2], field + " nullity"));
    const std::size_t a = ranks.back() + nullities.back();
    if (ranks.size() == 1) ambient = a;
    if (a != ambient) throw InvalidInput(field + ": rank + nullity differs from earlier rows");
  }
  if (taus.empty()) throw InvalidInput("profile: no data rows");
  RankProfile profile{ToleranceGrid(std::move(taus)), std::move(ranks), std::move(nullities), ambient,
                      std::move(source_label)};
  profile.validate();
  return profile;
}

inline void export_profile(const RankProfile& profile, const std::filesystem::path& path) {
  write_file_atomic(path, profile_to_csv(profile));
}

inline RankProfile import_profile(const std::filesystem::path& path) {
  return profile_from_csv(read_file(path), path.filename().string());
}

inline std::string plateaus_to_text(const RankProfile& profile, const std::vector<Plateau>& plateaus) {
  std::string out = "start_index,end_index,rank,tolerance_start,tolerance_end,span_decades\n";
  for (const auto& p : plateaus) {
    char span[32];
    std::snprintf(span, sizeof span, "%.3f", p.span_decades);
    out += std::to_string(p.start_index) + "," + std::to_string(p.end_index) + "," + std::to_string(p.rank_value) +
           "," + format_sci(profile.grid[p.start_index]) + "," + format_sci(profile.grid[p.end_index]) + "," + span +
           "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sector tables

/// One row per sector, or a single "undefined" row for an empty nullspace.
inline std::string sectors_to_csv(const SectorWeights& weights) {
  std::string out = std::string(kSectorHeader) + "\n";
  const std::string prefix = format_sci(weights.tolerance) + "," + std::to_string(weights.nullspace_dim) + ",";
  if (!weights.defined()) return out + prefix + kUndefined + "," + kUndefined + "\n";
  for (std::size_t s = 0; s < weights.names.size(); ++s)
    out += prefix + weights.names[s] + "," + format_sci(weights.weights[s]) + "\n";
  return out;
}

inline SectorWeights sectors_from_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSectorHeader)
    throw InvalidInput("sectors: expected header '" + std::string(kSectorHeader) + "'");
  SectorWeights out;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 4) throw InvalidInput("sectors: expected 4 columns");
    if (first) {
      out.tolerance = detail::parse_double(parts[0], "sectors tolerance");
      out.nullspace_dim = detail::parse_count(parts[1], "sectors nullspace_dim");
      first = false;
    }
    if (parts[2] == kUndefined) return out;
    out.names.push_back(parts[2]);
    out.weights.push_back(detail::parse_double(parts[3], "sectors weight"));
  }
  if (first) throw InvalidInput("sectors: no data rows");
  return out;
}

inline void export_sectors(const SectorWeights& weights, const std::filesystem::path& path) {
  write_file_atomic(path, sectors_to_csv(weights));
}

// ---------------------------------------------------------------------------
// Comparison reports

inline json profile_to_json(const RankProfile& profile) {
  return {{"source_label", profile.source_label},
          {"ambient_dim", profile.ambient_dim},
          {"tolerances", profile.grid.values()},
          {"ranks", profile.ranks},
          {"nullities", profile.nullities}};
}

inline RankProfile profile_from_json(const json& j) {
  try {
    RankProfile p{ToleranceGrid(j.at("tolerances").get<std::vector<double>>()),
                  j.at("ranks").get<std::vector<std::size_t>>(), j.at("nullities").get<std::vector<std::size_t>>(),
                  j.at("ambient_dim").get<std::size_t>(), j.at("source_label").get<std::string>()};
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("report profile: ") + e.what());
  }
}

inline json report_to_json(const ComparisonReport& report) {
  json doc;
  doc["format"] = "bodf-report";
  doc["version"] = 1;
  doc["source_label"] = report.source_label;
  doc["baseline_profile"] = profile_to_json(report.baseline_profile);
  json plateaus = json::array();
  for (const auto& p : report.baseline_plateaus)
    plateaus.push_back({{"start_index", p.start_index},
                        {"end_index", p.end_index},
                        {"rank", p.rank_value},
                        {"span_decades", p.span_decades}});
  doc["baseline_plateaus"] = std::move(plateaus);
  json refinements = json::array();
  for (const auto& r : report.refinement_results)
    refinements.push_back({{"procedure", r.procedure}, {"profile", profile_to_json(r.profile)}});
  doc["refinement_results"] = std::move(refinements);
  json modifications = json::array();
  for (const auto& m : report.modification_results)
    modifications.push_back({{"procedure", m.procedure}, {"profile", profile_to_json(m.profile)}});
  doc["modification_results"] = std::move(modifications);
  doc["plateaus_preserved"] = report.plateaus_preserved;
  doc["max_rank_after_modification"] = report.max_rank_after_modification;
  json sectors;
  sectors["tolerance"] = report.sector_summary.tolerance;
  sectors["nullspace_dim"] = report.sector_summary.nullspace_dim;
  if (report.sector_summary.defined()) {
    json w = json::object();
    for (std::size_t s = 0; s < report.sector_summary.names.size(); ++s)
      w[report.sector_summary.names[s]] = report.sector_summary.weights[s];
    sectors["weights"] = std::move(w);
    sectors["sector_order"] = report.sector_summary.names;
  } else {
    sectors["weights"] = kUndefined;
  }
  doc["sector_summary"] = std::move(sectors);
  doc["realification_mismatch_tolerances"] = report.realification_mismatch_tolerances;
  return doc;
}

inline ComparisonReport report_from_json(const json& doc) {
  try {
    if (doc.at("format") != "bodf-report" || doc.at("version") != 1) throw InvalidInput("report: unsupported format");
    ComparisonReport r;
    r.source_label = doc.at("source_label").get<std::string>();
    r.baseline_profile = profile_from_json(doc.at("baseline_profile"));
    for (const auto& p : doc.at("baseline_plateaus"))
      r.baseline_plateaus.push_back({p.at("start_index").get<std::size_t>(), p.at("end_index").get<std::size_t>(),
                                     p.at("rank").get<std::size_t>(), p.at("span_decades").get<double>()});
    for (const auto& x : doc.at("refinement_results"))
      r.refinement_results.push_back({x.at("procedure").get<std::string>(), profile_from_json(x.at("profile"))});
    for (const auto& x : doc.at("modification_results"))
      r.modification_results.push_back({x.at("procedure").get<std::string>(), profile_from_json(x.at("profile"))});
    r.plateaus_preserved = doc.at("plateaus_preserved").get<bool>();
    r.max_rank_after_modification = doc.at("max_rank_after_modification").get<std::size_t>();
    const auto& s = doc.at("sector_summary");
    r.sector_summary.tolerance = s.at("tolerance").get<double>();
    r.sector_summary.nullspace_dim = s.at("nullspace_dim").get<std::size_t>();
    if (s.at("weights").is_object()) {
      for (const auto& name : s.at("sector_order")) {
        r.sector_summary.names.push_back(name.get<std::string>());
        r.sector_summary.weights.push_back(s.at("weights").at(name.get<std::string>()).get<double>());
      }
    }
    r.realification_mismatch_tolerances = doc.at("realification_mismatch_tolerances").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

inline std::string report_to_text(const ComparisonReport& report) { return report_to_json(report).dump(1) + "\n"; }

inline ComparisonReport report_from_text(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

inline void export_report(const ComparisonReport& report, const std::filesystem::path& path) {
  write_file_atomic(path, report_to_text(report));
}

}  // namespace bilinrank::io
