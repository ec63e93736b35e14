// JSON run configuration: schema, parsing, validation and preset export.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heod/encoding.hpp"
#include "heod/liouville.hpp"
#include "heod/models.hpp"
#include "heod/transforms.hpp"

namespace heod {

constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
  LevelSystem system;
  ControlField field;
  EncodingMatrix encoding;
  std::string scheme = "custom";  // off-diagonal | diagonal-inclusive | custom
  PictureSpec picture;
  int steps = 32768;
  int max_order = 4;
  int source = 0;  // 1-based flat indices
  int target = 0;
  double threshold = 1e-3;  // relative to the largest bin magnitude
  int sample_stride = 0;    // 0 = steps/1024 rounded up

  TimeGrid grid() const { return TimeGrid(field.total_time, steps); }
  int stride() const {
    if (sample_stride > 0) return sample_stride;
    return std::max(1, steps / 1024);
  }
};

namespace detail {

using json = nlohmann::ordered_json;

inline const json& require(const json& j, const std::string& key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error("missing required key '" + context + key + "'");
  return *it;
}

template <class T>
inline T require_as(const json& j, const std::string& key, const std::string& context) {
  try {
    return require(j, key, context).get<T>();
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error("bad value for key '" + context + key + "': " + e.what());
  }
}

inline int parse_state(const json& j, const std::string& key, const std::string& context,
                       const LiouvilleIndexMap& map) {
  const auto pair = require_as<std::vector<int>>(j, key, context);
  if (pair.size() != 2)
    throw config_error("key '" + context + key + "' must be a [j, k] pair");
  try {
    return map.flat(pair[0], pair[1]);
  } catch (const std::exception& e) {
    throw config_error("key '" + context + key + "': " + e.what());
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::ordered_json& j) {
  using detail::require;
  using detail::require_as;

  const int schema = require_as<int>(j, "schema", "");
  if (schema != kConfigSchemaVersion)
    throw config_error("unsupported schema version " + std::to_string(schema));

  RunConfig cfg;

  const auto& model = require(j, "model", "");
  cfg.system.dim = require_as<int>(model, "dim", "model.");
  cfg.system.energies = require_as<std::vector<double>>(model, "energies", "model.");
  const auto dipole_rows =
      require_as<std::vector<std::vector<double>>>(model, "dipole", "model.");
  if (static_cast<int>(dipole_rows.size()) != cfg.system.dim)
    throw config_error("model.dipole must have dim rows");
  cfg.system.dipole = Eigen::MatrixXd::Zero(cfg.system.dim, cfg.system.dim);
  for (int r = 0; r < cfg.system.dim; ++r) {
    if (static_cast<int>(dipole_rows[r].size()) != cfg.system.dim)
      throw config_error("model.dipole row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < cfg.system.dim; ++c) cfg.system.dipole(r, c) = dipole_rows[r][c];
  }
  for (const auto& ch : require(model, "channels", "model.")) {
    LindbladChannel channel;
    channel.from = detail::require_as<int>(ch, "from", "model.channels[].");
    channel.to = detail::require_as<int>(ch, "to", "model.channels[].");
    channel.rate = detail::require_as<double>(ch, "rate", "model.channels[].");
    cfg.system.channels.push_back(channel);
  }
  cfg.system.eta = require_as<double>(model, "eta", "model.");

  const auto& field = require(j, "field", "");
  cfg.field.total_time = require_as<double>(field, "total_time", "field.");
  cfg.field.envelope_width = require_as<double>(field, "sigma", "field.");
  for (const auto& c : require(field, "components", "field.")) {
    FieldComponent comp;
    comp.amplitude = detail::require_as<double>(c, "amplitude", "field.components[].");
    comp.frequency = detail::require_as<double>(c, "frequency", "field.components[].");
    comp.phase = detail::require_as<double>(c, "phase", "field.components[].");
    cfg.field.components.push_back(comp);
  }

  const auto& encoding = require(j, "encoding", "");
  cfg.scheme = require_as<std::string>(encoding, "scheme", "encoding.");
  if (cfg.scheme != "off-diagonal" && cfg.scheme != "diagonal-inclusive" &&
      cfg.scheme != "custom")
    throw config_error("encoding.scheme must be off-diagonal, diagonal-inclusive or custom");
  cfg.encoding.samples = require_as<long>(encoding, "samples", "encoding.");
  const auto code_rows =
      require_as<std::vector<std::vector<int>>>(encoding, "matrix", "encoding.");
  const int dd = cfg.system.dim * cfg.system.dim;
  if (static_cast<int>(code_rows.size()) != dd)
    throw config_error("encoding.matrix must have dim^2 rows");
  cfg.encoding.codes.resize(dd, dd);
  for (int r = 0; r < dd; ++r) {
    if (static_cast<int>(code_rows[r].size()) != dd)
      throw config_error("encoding.matrix row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < dd; ++c) cfg.encoding.codes(r, c) = code_rows[r][c];
  }

  const auto& run = require(j, "run", "");
  const auto picture = require_as<std::string>(run, "picture", "run.");
  if (picture == "original")
    cfg.picture.picture = Picture::original;
  else if (picture == "interaction")
    cfg.picture.picture = Picture::interaction;
  else if (picture == "transformed")
    cfg.picture.picture = Picture::transformed;
  else
    throw config_error("run.picture must be original, interaction or transformed");
  cfg.picture.rwa = run.value("rwa", false);
  cfg.picture.carry_phases = run.value("carry_phases", false);
  cfg.steps = require_as<int>(run, "steps", "run.");
  cfg.max_order = require_as<int>(run, "max_order", "run.");
  const LiouvilleIndexMap map(cfg.system.dim);
  cfg.source = detail::parse_state(run, "source", "run.", map);
  cfg.target = detail::parse_state(run, "target", "run.", map);
  cfg.threshold = run.value("threshold", 1e-3);
  cfg.sample_stride = run.value("sample_stride", 0);

  // Semantic validation; model errors surface as configuration errors here.
  try {
    cfg.system.validate();
    cfg.field.validate();
    cfg.encoding.validate();
  } catch (const invalid_model_error& e) {
    throw config_error(e.what());
  }
  if (cfg.encoding.dim() != dd) throw config_error("encoding.matrix dimension mismatch");
  if (cfg.steps < 1) throw config_error("run.steps must be >= 1");
  if (cfg.max_order < 1 || cfg.max_order > 8)
    throw config_error("run.max_order must lie in [1, 8]");
  if (cfg.threshold < 0.0) throw config_error("run.threshold must be >= 0");
  if (cfg.picture.picture == Picture::transformed && !cfg.field.is_zero() && !cfg.picture.rwa)
    throw config_error("run.rwa must be true for the transformed picture with an active field");
  if (cfg.picture.picture == Picture::original && cfg.picture.rwa)
    throw config_error("run.rwa does not apply to the original picture");
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("config parse failure in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

inline nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = kConfigSchemaVersion;

  auto& model = j["model"];
  model["dim"] = cfg.system.dim;
  model["energies"] = cfg.system.energies;
  std::vector<std::vector<double>> dipole;
  for (int r = 0; r < cfg.system.dim; ++r) {
    std::vector<double> row;
    for (int c = 0; c < cfg.system.dim; ++c) row.push_back(cfg.system.dipole(r, c));
    dipole.push_back(std::move(row));
  }
  model["dipole"] = dipole;
  model["channels"] = nlohmann::ordered_json::array();
  for (const auto& ch : cfg.system.channels)
    model["channels"].push_back({{"from", ch.from}, {"to", ch.to}, {"rate", ch.rate}});
  model["eta"] = cfg.system.eta;

  auto& field = j["field"];
  field["total_time"] = cfg.field.total_time;
  field["sigma"] = cfg.field.envelope_width;
  field["components"] = nlohmann::ordered_json::array();
  for (const auto& c : cfg.field.components)
    field["components"].push_back(
        {{"amplitude", c.amplitude}, {"frequency", c.frequency}, {"phase", c.phase}});

  auto& encoding = j["encoding"];
  encoding["scheme"] = cfg.scheme;
  encoding["samples"] = cfg.encoding.samples;
  std::vector<std::vector<int>> codes;
  for (int r = 0; r < cfg.encoding.dim(); ++r) {
    std::vector<int> row;
    for (int c = 0; c < cfg.encoding.dim(); ++c) row.push_back(cfg.encoding.codes(r, c));
    codes.push_back(std::move(row));
  }
  encoding["matrix"] = codes;

  auto& run = j["run"];
  run["picture"] = picture_name(cfg.picture.picture);
  run["rwa"] = cfg.picture.rwa;
  run["carry_phases"] = cfg.picture.carry_phases;
  run["steps"] = cfg.steps;
  run["max_order"] = cfg.max_order;
  const LiouvilleIndexMap map(cfg.system.dim);
  const auto src = map.levels(cfg.source);
  const auto tgt = map.levels(cfg.target);
  run["source"] = {src.first, src.second};
  run["target"] = {tgt.first, tgt.second};
  run["threshold"] = cfg.threshold;
  run["sample_stride"] = cfg.sample_stride;
  return j;
}

// ---------------------------------------------------------------------------
// Named presets
// ---------------------------------------------------------------------------

inline std::vector<std::string> preset_names() {
  return {"benchmark-offdiag", "benchmark-diagonal", "benchmark-transformed",
          "benchmark-fieldfree", "two-level-toy"};
}

/// Ready-made run configurations built from the model presets.
inline RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  if (name == "two-level-toy") {
    const Benchmark toy = two_level_toy(0.05, 0.08);
    cfg.system = toy.system;
    cfg.field = toy.field;
    cfg.encoding = toy.offdiag_scheme;
    cfg.scheme = "off-diagonal";
    cfg.picture.picture = Picture::original;
    cfg.steps = toy.grid.steps;
    cfg.max_order = toy.max_order;
    cfg.source = toy.source;
    cfg.target = toy.target;
    return cfg;
  }

  const Benchmark b = benchmark_three_level();
  cfg.system = b.system;
  cfg.field = b.field;
  cfg.steps = b.grid.steps;
  cfg.max_order = b.max_order;
  cfg.source = b.source;
  cfg.target = b.target;
  if (name == "benchmark-offdiag") {
    cfg.encoding = b.offdiag_scheme;
    cfg.scheme = "off-diagonal";
    cfg.picture.picture = Picture::original;
  } else if (name == "benchmark-diagonal") {
    cfg.encoding = b.diagonal_scheme;
    cfg.scheme = "diagonal-inclusive";
    cfg.picture.picture = Picture::original;
  } else if (name == "benchmark-transformed") {
    cfg.encoding = b.transformed_scheme;
    cfg.scheme = "off-diagonal";
    cfg.picture.picture = Picture::transformed;
    cfg.picture.rwa = true;
  } else if (name == "benchmark-fieldfree") {
    cfg.encoding = b.offdiag_scheme;
    cfg.scheme = "off-diagonal";
    cfg.picture.picture = Picture::original;
    for (auto& c : cfg.field.components) c.amplitude = 0.0;
  } else {
    throw config_error("unknown preset '" + name + "'");
  }
  return cfg;
}

}  // namespace heod
