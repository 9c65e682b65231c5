#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pinn/training.hpp"

namespace pinn {

/// Everything a run needs: training setup plus artifact options.
struct RunConfig {
  TrainConfig train;
  std::filesystem::path out_dir;  // empty: $PINN_OUT_DIR, else "."
  double probe_dt = 0.01;         // history sample spacing
  double probe_horizon = 0.0;     // last probe time; 0 means the final time
  int shape_points = 51;          // x samples of the shape probe
  /// [problem] bc, e.g. "pinned-free": replaces the boundary part of the preset.
  std::string bc;
  /// Whether [schedule] cycles was given; otherwise [train] steps sets a
  /// single cycle.
  bool cycles_set = false;
};

struct ConfigKey {
  std::string name;  // "section.key"
  std::string default_value;
  std::string help;
};

/// Every accepted key with its default, in file order.
const std::vector<ConfigKey>& config_keys();

/// Parses an INI-style document:
///
///   # comment
///   [section]
///   key = value
///
/// Unknown sections or keys, duplicate keys and malformed values raise
/// ConfigError with the line number and key. Unknown presets raise
/// UnknownPresetError.
///
/// `overrides` ("section.key=value") are applied after the file, before
/// finalize_config.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Sets one "section.key" as if it appeared in the file.
void apply_setting(RunConfig& cfg, std::string_view dotted_key, std::string_view value);

/// Finishes a config after all settings: resolves [problem] bc, an unset
/// total step count and checks the preset. Called by parse_config.
void finalize_config(RunConfig& cfg);

/// Renders a config back to the file format.
std::string to_config_text(const RunConfig& cfg);

}  // namespace pinn
