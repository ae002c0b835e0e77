#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/profile.hpp"

namespace ghostphase {

/// Matched plane chain for a config: every plane pair satisfies
/// n_out * pitch_out * pitch_in = lambda * d, so each free-space leg is an
/// exactly unitary discrete operator.
ArmGeometry scenario_geometry(const ScenarioConfig& cfg);

/// The mirror-array object for a config on `grid`. Presets centre the pulled
/// line(s) on the axis; `theta_override` replaces the preset pi phase.
PhaseObject scenario_object(const ScenarioConfig& cfg, const Grid1D& grid,
                            std::optional<double> theta_override = std::nullopt);

/// Scan positions start, start+step, ... up to stop.
Grid1D scan_grid(const ScenarioConfig& cfg);

/// Two-column CSV (x2_m, weight) interpolated linearly onto x2.
std::vector<double> load_envelope_file(const std::filesystem::path& path, const std::vector<double>& x2);

enum class Normalize { self, flat };

struct RunOptions {
  std::optional<Method> method;  // overrides cfg.method
  Normalize normalize = Normalize::self;
  std::optional<unsigned> workers;  // overrides cfg.workers
  bool keep_map = false;
};

struct RunMetrics {
  ProfileMetrics profile;  // of the emitted coincidence_raw column
  std::size_t dominant_maxima = 0;
  double collection_factor = 0.0;
  double scale = 1.0;  // raw rates were divided by this
};

struct RunReport {
  ScenarioConfig config;
  ScanResult scan;  // emitted columns
  std::vector<double> envelope;
  Grid1D grid_d1;
  Grid1D grid_d2;
  std::vector<double> singles_d1;
  std::vector<double> singles_d2;
  RunMetrics metrics;
  double seconds = 0.0;
  std::optional<CoincidenceMap> map;
};

RunReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// 9 significant digits in %g style, independent of the C locale.
std::string format_number(double v);

void emit_csv(const RunReport& report, std::ostream& out);
void emit_csv(const RunReport& report, const std::filesystem::path& path);

/// Full G2 matrix: header row of x2, then one row per x1.
void emit_g2(const RunReport& report, std::ostream& out);
void emit_g2(const RunReport& report, const std::filesystem::path& path);

}  // namespace ghostphase
