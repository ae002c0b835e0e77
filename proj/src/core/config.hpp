#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "core/coincidence.hpp"

namespace ghostphase {

enum class ObjectKind { flat, phase_slit, double_phase_slit, custom };

const char* to_string(ObjectKind kind) noexcept;

struct GridConfig {
  std::size_t object_n = 160;
  double object_pitch = 25e-6;
  // Target pitch for the automatically sized D1/D2 planes.
  double detector_pitch = 40e-6;
  // 0 picks the smallest odd count that keeps the chain unitary.
  std::size_t crystal_n = 0;
  std::size_t d1_n = 0;
  std::size_t d2_n = 0;
};

struct EnvelopeConfig {
  enum class Kind { none, full_model, file };
  Kind kind = Kind::full_model;
  double waist = 1e-3;
  std::size_t grid_n = 1024;
  double grid_pitch = 6e-6;
  std::filesystem::path path;
};

struct ScanConfig {
  double start = -8e-3;
  double stop = 8e-3;
  double step = 1e-4;
};

struct ScenarioConfig {
  double lambda = 812e-9;
  double lambda_pump = 406e-9;
  double d_a = 1.17;
  double d_b = 1.98;
  double d_2 = 3.96;
  double crystal_length = 1.5e-3;
  ObjectKind object = ObjectKind::flat;
  std::vector<double> custom_depths;
  double column_width = 300e-6;
  int n_columns = 12;
  double pull_depth_pi = 203e-9;
  double p1_width = 1.4e-3;
  double p2_width = 1.4e-3;
  double p1_center = 0.0;
  GridConfig grid;
  EnvelopeConfig envelope;
  ScanConfig scan;
  Method method = Method::fast;
  unsigned workers = 0;
};

/// Parses JSON text. `origin` names the source in messages and anchors
/// relative envelope paths. Unknown keys and invalid values raise
/// configuration errors that quote the key and its line.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& origin = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Re-checks a programmatically built config.
void validate_config(const ScenarioConfig& cfg);

/// Canonical JSON of every resolved key, one "key: value" entry per line.
std::vector<std::string> describe_config(const ScenarioConfig& cfg);

}  // namespace ghostphase
