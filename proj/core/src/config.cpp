#include "stacklaw/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stacklaw {

namespace {

using nlohmann::json;

/// Strict accessor over one JSON object: typed getters with field-path
/// diagnostics, and a sweep for unknown keys once a section is consumed.
class Section {
public:
  Section(const json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object())
      throw SchemaError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return node_.contains(key); }

  const json& require(const char* key) {
    if (!node_.contains(key))
      throw SchemaError(member(key) + ": required field is missing");
    consumed_.insert(key);
    return node_.at(key);
  }

  const json* optional(const char* key) {
    if (!node_.contains(key)) return nullptr;
    consumed_.insert(key);
    return &node_.at(key);
  }

  double number(const char* key) { return as_number(require(key), member(key)); }

  double number_or(const char* key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(*v, member(key)) : fallback;
  }

  std::uint64_t count(const char* key) {
    return as_count(require(key), member(key));
  }

  std::uint64_t count_or(const char* key, std::uint64_t fallback) {
    const json* v = optional(key);
    return v ? as_count(*v, member(key)) : fallback;
  }

  Section section(const char* key) { return Section(require(key), member(key)); }

  std::string member(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const std::string& path() const { return path_; }

  /// Every key must have been consumed; anything else is unknown.
  void finish() const {
    for (const auto& item : node_.items())
      if (!consumed_.contains(item.key()))
        throw SchemaError(member(item.key().c_str()) + ": unknown key");
  }

  const json& raw() const { return node_; }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number())
      throw SchemaError(path + ": expected a number");
    return v.get<double>();
  }

  static std::uint64_t as_count(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw SchemaError(path + ": expected a non-negative integer");
  }

  static std::uint32_t as_count32(const json& v, const std::string& path) {
    const std::uint64_t value = as_count(v, path);
    if (value > UINT32_MAX)
      throw SchemaError(path + ": value is out of range");
    return static_cast<std::uint32_t>(value);
  }

  std::uint32_t count32_or(const char* key, std::uint32_t fallback) {
    const json* v = optional(key);
    return v ? as_count32(*v, member(key)) : fallback;
  }

private:
  const json& node_;
  std::string path_;
  std::set<std::string> consumed_;
};

TileGrid parse_power_map(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty())
    throw SchemaError(path + ": expected a non-empty 2D array of watts");
  TileGrid grid;
  grid.rows = node.size();
  for (std::size_t r = 0; r < node.size(); ++r) {
    const json& row = node[r];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty())
      throw SchemaError(row_path + ": expected a non-empty row of numbers");
    if (r == 0) grid.cols = row.size();
    if (row.size() != grid.cols)
      throw SchemaError(row_path + ": rows must all have " +
                        std::to_string(grid.cols) + " columns");
    for (std::size_t c = 0; c < row.size(); ++c)
      grid.values.push_back(Section::as_number(
          row[c], row_path + "[" + std::to_string(c) + "]"));
  }
  return grid;
}

template <typename Fn>
void check(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw InvariantError(path.empty() ? e.what() : path + ": " + e.what());
  }
}

DesignPoint parse_point(Section& root) {
  DesignPoint point;

  Section workload = root.section("workload");
  point.locality.c0 = workload.number("c0");
  point.locality.m0 = workload.number("m0");
  point.locality.alpha = workload.number_or("alpha", 0.5);
  point.core.refs_per_instr = workload.number_or("refs_per_instr", 1.0);
  point.core.accesses_per_cycle_per_thread =
      workload.number_or("accesses_per_cycle_per_thread", 1.0);
  point.core.base_cpi = workload.number_or("base_cpi", 1.0);
  workload.finish();
  check(workload.path(), [&] { point.locality.validate(); });
  check(workload.path(), [&] { point.core.validate(); });

  const json& cache = root.require("cache");
  if (!cache.is_array() || cache.empty())
    throw SchemaError("cache: expected a non-empty array of cache levels");
  for (std::size_t i = 0; i < cache.size(); ++i) {
    Section level(cache[i], "cache[" + std::to_string(i) + "]");
    CacheLevelSpec spec;
    spec.capacity = level.count("capacity");
    spec.line_size = level.count("line_size");
    spec.associativity = level.count32_or("associativity", 1);
    level.finish();
    check(level.path(), [&] { spec.validate(); });
    point.cache_levels.push_back(spec);
  }

  Section bus = root.section("bus");
  point.bus.width = bus.count("width");
  point.bus.cycles_per_bus_clock = bus.count32_or("cycles_per_bus_clock", 1);
  point.bus.leading_edge = bus.number_or("leading_edge", 0.0);
  bus.finish();
  check(bus.path(), [&] { point.bus.validate(); });

  Section geometry = root.section("geometry");
  point.geometry.x_mm = geometry.number("x");
  point.geometry.layers = geometry.count32_or("n", 1);
  point.geometry.thickness_um = geometry.number("t");
  point.geometry.tsv_fraction = geometry.number_or("tsv_fraction", 0.0);
  geometry.finish();
  check(geometry.path(), [&] { point.geometry.validate(); });

  if (root.has("tsv")) {
    Section tsv = root.section("tsv");
    PowerDelivery pd;
    pd.tsv.diameter_um = tsv.number("diameter");
    pd.tsv.pitch_um = tsv.number("pitch");
    pd.tsv.current_limit_a = tsv.number("current_limit");
    pd.tsv.cell_area_um2 = tsv.number("cell_area");
    pd.supply_voltage_v = tsv.number("supply_voltage");
    tsv.finish();
    check(tsv.path(), [&] { pd.validate(); });
    point.power = pd;
  }

  Section thermal = root.section("thermal");
  point.thermal.ambient_c = thermal.number_or("ambient", 25.0);
  point.thermal.r_sink = thermal.number("r_sink");
  const json& layers = thermal.require("layers");
  if (!layers.is_array() || layers.empty())
    throw SchemaError("thermal.layers: expected a non-empty array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Section layer(layers[i], "thermal.layers[" + std::to_string(i) + "]");
    LayerThermal lt;
    lt.r_above = layer.number("r_above");
    lt.power_w = parse_power_map(layer.require("power_map"),
                                 layer.member("power_map"));
    layer.finish();
    check(layer.path(), [&] { lt.validate(); });
    point.thermal.layers.push_back(std::move(lt));
  }
  thermal.finish();
  check(thermal.path(), [&] { point.thermal.validate(); });

  point.threads = root.count32_or("threads", 1);

  if (root.has("layer_assignment")) {
    Section assignment = root.section("layer_assignment");
    point.assignment.cores = assignment.count32_or("cores", 0);
    if (const json* levels = assignment.optional("cache_levels")) {
      if (!levels->is_array())
        throw SchemaError("layer_assignment.cache_levels: expected an array");
      for (std::size_t i = 0; i < levels->size(); ++i)
        point.assignment.cache_levels.push_back(Section::as_count32(
            (*levels)[i],
            "layer_assignment.cache_levels[" + std::to_string(i) + "]"));
    }
    assignment.finish();
  }
  if (point.assignment.cache_levels.empty()) {
    // Default placement: cores nearest the sink, cache levels above.
    const std::uint32_t top = point.geometry.layers - 1;
    for (std::uint32_t i = 0; i < point.cache_levels.size(); ++i)
      point.assignment.cache_levels.push_back(
          std::min(i + 1, top));
  }
  if (point.assignment.cache_levels.size() != point.cache_levels.size())
    throw InvariantError(
        "layer_assignment.cache_levels: expected one layer index per cache "
        "level (" +
        std::to_string(point.cache_levels.size()) + ")");

  if (point.thermal.layer_count() != point.geometry.layers)
    throw InvariantError("thermal.layers: has " +
                         std::to_string(point.thermal.layer_count()) +
                         " layers but geometry.n is " +
                         std::to_string(point.geometry.layers));
  if (point.assignment.cores >= point.geometry.layers)
    throw InvariantError("layer_assignment.cores: layer " +
                         std::to_string(point.assignment.cores) +
                         " is outside geometry.n = " +
                         std::to_string(point.geometry.layers));
  for (std::size_t i = 0; i < point.assignment.cache_levels.size(); ++i)
    if (point.assignment.cache_levels[i] >= point.geometry.layers)
      throw InvariantError(
          "layer_assignment.cache_levels[" + std::to_string(i) + "]: layer " +
          std::to_string(point.assignment.cache_levels[i]) +
          " is outside geometry.n = " + std::to_string(point.geometry.layers));

  check("", [&] { point.validate(); });
  return point;
}

SweepSpec parse_sweep(Section& root, const DesignPoint& point) {
  SweepSpec spec;
  spec.base = point;
  if (root.has("sweep")) {
    Section sweep = root.section("sweep");
    const auto names = sweepable_parameters();
    for (const auto& item : sweep.raw().items()) {
      const std::string path = "sweep." + item.key();
      if (std::find(names.begin(), names.end(), item.key()) == names.end())
        throw SchemaError(path + ": unknown sweep parameter");
      if (!item.value().is_array() || item.value().empty())
        throw SchemaError(path + ": expected a non-empty array of values");
      SweepParameter param;
      param.name = item.key();
      for (std::size_t i = 0; i < item.value().size(); ++i)
        param.values.push_back(Section::as_number(
            item.value()[i], path + "[" + std::to_string(i) + "]"));
      spec.parameters.push_back(std::move(param));
    }
    std::sort(spec.parameters.begin(), spec.parameters.end(),
              [](const SweepParameter& a, const SweepParameter& b) {
                return a.name < b.name;
              });
  }
  if (root.has("constraints")) {
    Section constraints = root.section("constraints");
    if (constraints.optional("t_max"))
      spec.constraints.t_max_c = Section::as_number(
          constraints.raw().at("t_max"), "constraints.t_max");
    if (constraints.optional("rho_max")) {
      spec.constraints.rho_max = Section::as_number(
          constraints.raw().at("rho_max"), "constraints.rho_max");
      if (!(*spec.constraints.rho_max > 0.0 && *spec.constraints.rho_max <= 1.0))
        throw InvariantError("constraints.rho_max: must be in (0, 1]");
    }
    if (constraints.optional("area_max")) {
      spec.constraints.area_max_mm2 = Section::as_number(
          constraints.raw().at("area_max"), "constraints.area_max");
      if (!(*spec.constraints.area_max_mm2 > 0.0))
        throw InvariantError("constraints.area_max: must be positive");
    }
    constraints.finish();
  }
  return spec;
}

} // namespace

LoadedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  Section root(doc, "");
  const std::uint64_t version = root.count("version");
  if (version != static_cast<std::uint64_t>(kConfigVersion))
    throw SchemaError("version: expected " + std::to_string(kConfigVersion) +
                      ", got " + std::to_string(version));

  LoadedConfig config;
  config.point = parse_point(root);
  config.sweep = parse_sweep(root, config.point);
  root.finish();
  return config;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const LoadedConfig& config) {
  const DesignPoint& p = config.point;
  json doc;
  doc["version"] = kConfigVersion;
  doc["workload"] = {
      {"c0", p.locality.c0},
      {"m0", p.locality.m0},
      {"alpha", p.locality.alpha},
      {"refs_per_instr", p.core.refs_per_instr},
      {"accesses_per_cycle_per_thread", p.core.accesses_per_cycle_per_thread},
      {"base_cpi", p.core.base_cpi},
  };
  doc["cache"] = json::array();
  for (const auto& level : p.cache_levels)
    doc["cache"].push_back({{"capacity", level.capacity},
                            {"line_size", level.line_size},
                            {"associativity", level.associativity}});
  doc["bus"] = {
      {"width", p.bus.width},
      {"cycles_per_bus_clock", p.bus.cycles_per_bus_clock},
      {"leading_edge", p.bus.leading_edge},
  };
  doc["geometry"] = {
      {"x", p.geometry.x_mm},
      {"n", p.geometry.layers},
      {"t", p.geometry.thickness_um},
      {"tsv_fraction", p.geometry.tsv_fraction},
  };
  if (p.power)
    doc["tsv"] = {
        {"diameter", p.power->tsv.diameter_um},
        {"pitch", p.power->tsv.pitch_um},
        {"current_limit", p.power->tsv.current_limit_a},
        {"cell_area", p.power->tsv.cell_area_um2},
        {"supply_voltage", p.power->supply_voltage_v},
    };
  doc["thermal"] = {
      {"ambient", p.thermal.ambient_c},
      {"r_sink", p.thermal.r_sink},
      {"layers", json::array()},
  };
  for (const auto& layer : p.thermal.layers) {
    json map = json::array();
    for (std::size_t r = 0; r < layer.power_w.rows; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < layer.power_w.cols; ++c)
        row.push_back(layer.power_w.at(r, c));
      map.push_back(std::move(row));
    }
    doc["thermal"]["layers"].push_back(
        {{"r_above", layer.r_above}, {"power_map", std::move(map)}});
  }
  doc["threads"] = p.threads;
  json cache_layers = json::array();
  for (std::uint32_t idx : p.assignment.cache_levels) cache_layers.push_back(idx);
  doc["layer_assignment"] = {{"cores", p.assignment.cores},
                             {"cache_levels", std::move(cache_layers)}};
  if (!config.sweep.parameters.empty()) {
    json sweep = json::object();
    for (const auto& param : config.sweep.parameters)
      sweep[param.name] = param.values;
    doc["sweep"] = std::move(sweep);
  }
  const Constraints& c = config.sweep.constraints;
  if (c.t_max_c || c.rho_max || c.area_max_mm2) {
    json constraints = json::object();
    if (c.t_max_c) constraints["t_max"] = *c.t_max_c;
    if (c.rho_max) constraints["rho_max"] = *c.rho_max;
    if (c.area_max_mm2) constraints["area_max"] = *c.area_max_mm2;
    doc["constraints"] = std::move(constraints);
  }
  return doc.dump(2) + "\n";
}

} // namespace stacklaw
