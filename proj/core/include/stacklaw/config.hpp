#pragma once

#include <filesystem>
#include <string>

#include "stacklaw/dse.hpp"

namespace stacklaw {

/// Config schema version understood by this build.
inline constexpr int kConfigVersion = 1;

/// A loaded document: the base design point plus its sweep description.
/// sweep.base is the same point.
struct LoadedConfig {
  DesignPoint point;
  SweepSpec sweep;

  bool operator==(const LoadedConfig&) const = default;
};

/// Parse and validate a JSON config document. Every failure throws a
/// classified ConfigError (ParseError / SchemaError / InvariantError) whose
/// message names the offending field path; nothing loads partially.
LoadedConfig parse_config(const std::string& text);

LoadedConfig load_config(const std::filesystem::path& path);

/// Serialize back to the schema. load(serialize(x)) == x.
std::string serialize_config(const LoadedConfig& config);

} // namespace stacklaw
