#include "core/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/log.hpp"

namespace ghostphase {
namespace {

constexpr std::size_t max_plane_samples = 20000;

// Smallest odd n >= max(floor_n, lambda*d / (pitch_in * target_pitch)).
std::size_t matched_count(double lambda_d, double pitch_in, double target_pitch, std::size_t floor_n) {
  const double want = std::ceil(lambda_d / (pitch_in * target_pitch) - 1e-9);
  auto n = std::max(floor_n, static_cast<std::size_t>(std::max(want, 2.0)));
  if (n % 2 == 0) ++n;
  return n;
}

Grid1D matched_plane(const char* name, std::size_t configured, double lambda_d, const Grid1D& in,
                     double target_pitch) {
  const std::size_t n = configured != 0 ? configured : matched_count(lambda_d, in.pitch(), target_pitch, in.size());
  // n < in.size() is left to the Fresnel sampling check, which reports the
  // resulting output pitch as aliased.
  if (n > max_plane_samples) {
    std::ostringstream os;
    os << name << " plane would need " << n << " samples (limit " << max_plane_samples
       << "); coarsen grid.detector_pitch or grid.object_pitch";
    throw_config(os.str());
  }
  return Grid1D(n, lambda_d / (static_cast<double>(n) * in.pitch()));
}

struct RawRun {
  ScanResult scan;
  std::vector<double> singles_d1;
  std::vector<double> singles_d2;
  double collection = 0.0;
  Grid1D grid_d1;
  Grid1D grid_d2;
  std::optional<CoincidenceMap> map;
};

RawRun compute_raw(const ScenarioConfig& cfg, Method method, unsigned workers, bool keep_map,
                   const std::vector<double>& x2) {
  const ArmGeometry geo = scenario_geometry(cfg);
  const PhaseObject obj = scenario_object(cfg, geo.object);
  const TwoArmSystem sys = build_two_arm_system(geo, obj, method, workers);
  SourceSpec source;
  source.lambda_pump = Wavelength(cfg.lambda_pump);
  source.crystal_length = cfg.crystal_length;
  const BiphotonState state = build_thin_crystal_state(source, geo.crystal);
  CoincidenceMap map = coincidence_amplitude(state, sys, method, workers);

  const SlitWindow p1{cfg.p1_center, cfg.p1_width};
  RawRun run{scan_coincidence(map, p1, cfg.p2_width, x2),
             singles_rate(map, Detector::d1),
             singles_rate(map, Detector::d2),
             collection_fraction(map, p1),
             map.grid1,
             map.grid2,
             std::nullopt};
  if (keep_map) run.map = std::move(map);
  return run;
}

std::vector<double> envelope_for(const ScenarioConfig& cfg, const Grid1D& scan, unsigned workers) {
  const std::size_t n = scan.size();
  switch (cfg.envelope.kind) {
    case EnvelopeConfig::Kind::none: return std::vector<double>(n, 1.0);
    case EnvelopeConfig::Kind::file: {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = scan.coordinate(i);
      return load_envelope_file(cfg.envelope.path, x);
    }
    case EnvelopeConfig::Kind::full_model: break;
  }
  SourceSpec source;
  source.lambda_pump = Wavelength(cfg.lambda_pump);
  source.crystal_length = cfg.crystal_length;
  source.pump = PumpProfile::gaussian(cfg.envelope.waist);
  const BiphotonState state = build_full_state(source, Grid1D(cfg.envelope.grid_n, cfg.envelope.grid_pitch));
  return reference_singles(state, FresnelSpec{cfg.d_2, Wavelength(cfg.lambda)}, scan, workers);
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

ArmGeometry scenario_geometry(const ScenarioConfig& cfg) {
  const Wavelength lambda(cfg.lambda);
  const Grid1D object(cfg.grid.object_n, cfg.grid.object_pitch);
  // The crystal pitch is kept at or below the object pitch so the d_a leg
  // does not alias the object's edge diffraction.
  const Grid1D crystal = matched_plane("crystal", cfg.grid.crystal_n, cfg.lambda * cfg.d_a, object, object.pitch());
  const Grid1D d1 = matched_plane("D1", cfg.grid.d1_n, cfg.lambda * cfg.d_b, object, cfg.grid.detector_pitch);
  const Grid1D d2 = matched_plane("D2", cfg.grid.d2_n, cfg.lambda * cfg.d_2, crystal, cfg.grid.detector_pitch);
  return ArmGeometry{crystal,
                     object,
                     d1,
                     d2,
                     FresnelSpec{cfg.d_a, lambda},
                     FresnelSpec{cfg.d_b, lambda},
                     FresnelSpec{cfg.d_2, lambda}};
}

PhaseObject scenario_object(const ScenarioConfig& cfg, const Grid1D& grid, std::optional<double> theta_override) {
  MirrorArraySpec spec;
  spec.column_width = cfg.column_width;
  spec.lambda = Wavelength(cfg.lambda);
  spec.aperture_width = cfg.n_columns * cfg.column_width;
  if (cfg.object == ObjectKind::custom) {
    spec.n_columns = cfg.n_columns;
    spec.pull_depth = cfg.custom_depths;
    return build_phase_object(spec, grid);
  }
  // An odd lattice has a column on the axis; the aperture clips it back to
  // n_columns * column_width.
  spec.n_columns = cfg.n_columns % 2 == 1 ? cfg.n_columns : cfg.n_columns + 1;
  spec.pull_depth.assign(static_cast<std::size_t>(spec.n_columns), 0.0);
  const double depth =
      theta_override ? *theta_override * cfg.lambda / (4.0 * std::numbers::pi) : cfg.pull_depth_pi;
  const auto mid = static_cast<std::size_t>(spec.n_columns / 2);
  if (cfg.object == ObjectKind::phase_slit) {
    spec.pull_depth[mid] = depth;
  } else if (cfg.object == ObjectKind::double_phase_slit) {
    if (spec.n_columns < 3) throw_config("double phase slit needs at least 3 columns");
    spec.pull_depth[mid - 1] = depth;
    spec.pull_depth[mid + 1] = depth;
  }
  return build_phase_object(spec, grid);
}

Grid1D scan_grid(const ScenarioConfig& cfg) {
  const double span = cfg.scan.stop - cfg.scan.start;
  const auto steps = static_cast<std::size_t>(std::floor(span / cfg.scan.step + 1e-9));
  if (steps < 2) throw_config("scan range must contain at least 3 positions");
  if (steps > 1000000) throw_config("scan has more than a million positions");
  const double center = cfg.scan.start + 0.5 * static_cast<double>(steps) * cfg.scan.step;
  return Grid1D(steps + 1, cfg.scan.step, center);
}

std::vector<double> load_envelope_file(const std::filesystem::path& path, const std::vector<double>& x2) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open envelope file " + path.string());
  std::vector<double> xs;
  std::vector<double> ws;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    const auto fail = [&](const std::string& why) {
      throw_data(path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (comma == std::string::npos) fail("expected two comma-separated columns");
    auto parse = [&](std::string_view s, double& v) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      if (b == std::string_view::npos) return false;
      s = s.substr(b, e - b + 1);
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      return res.ec == std::errc() && res.ptr == s.data() + s.size();
    };
    double x = 0.0;
    double w = 0.0;
    const std::string_view view(line);
    if (!parse(view.substr(0, comma), x) || !parse(view.substr(comma + 1), w)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      fail("non-numeric value");
    }
    header_allowed = false;
    if (!std::isfinite(x) || !std::isfinite(w)) fail("values must be finite");
    if (w < 0.0) fail("envelope weights must be non-negative");
    if (!xs.empty() && !(x > xs.back())) fail("x2 values must be strictly increasing");
    xs.push_back(x);
    ws.push_back(w);
  }
  if (in.bad()) throw_io("cannot read envelope file " + path.string());
  if (xs.size() < 2) throw_data(path.string() + ": envelope needs at least two rows");

  std::vector<double> out(x2.size());
  const double tol = 1e-9 * (xs.back() - xs.front());
  for (std::size_t i = 0; i < x2.size(); ++i) {
    const double x = x2[i];
    if (x < xs.front() - tol || x > xs.back() + tol) {
      std::ostringstream os;
      os << path.string() << ": envelope does not cover scan position " << x << " m";
      throw_data(os.str());
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs.begin());
    k = std::clamp<std::size_t>(k, 1, xs.size() - 1);
    const double t = std::clamp((x - xs[k - 1]) / (xs[k] - xs[k - 1]), 0.0, 1.0);
    out[i] = (1.0 - t) * ws[k - 1] + t * ws[k];
  }
  return out;
}

RunReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_config(cfg);
  const Method method = options.method.value_or(cfg.method);
  const unsigned workers = options.workers.value_or(cfg.workers);

  const Grid1D scan = scan_grid(cfg);
  std::vector<double> x2(scan.size());
  for (std::size_t i = 0; i < x2.size(); ++i) {
    const double x = scan.coordinate(i);
    x2[i] = std::abs(x) < 1e-9 * scan.pitch() ? 0.0 : x;
  }

  RawRun raw = compute_raw(cfg, method, workers, options.keep_map, x2);
  double scale = max_of(raw.scan.coincidence);
  if (options.normalize == Normalize::flat && cfg.object != ObjectKind::flat) {
    ScenarioConfig flat = cfg;
    flat.object = ObjectKind::flat;
    flat.custom_depths.clear();
    scale = max_of(compute_raw(flat, method, workers, false, x2).scan.coincidence);
  }
  if (!(scale > 0.0)) throw_numerical("coincidence scan is identically zero; check the P1 window and scan range");

  const std::vector<double> envelope = envelope_for(cfg, scan, workers);
  ScanResult scan_out = envelope_correct(raw.scan, envelope);
  const double s2_peak = max_of(scan_out.singles_d2);
  for (std::size_t i = 0; i < x2.size(); ++i) {
    scan_out.coincidence[i] /= scale;
    scan_out.corrected[i] *= raw.collection / scale;
    scan_out.singles_d2[i] = s2_peak > 0.0 ? scan_out.singles_d2[i] / s2_peak : 0.0;
  }

  RunMetrics metrics;
  metrics.profile = profile_metrics(scan_out.x2, scan_out.coincidence);
  metrics.dominant_maxima = dominant_maxima(scan_out.coincidence).size();
  metrics.collection_factor = raw.collection;
  metrics.scale = scale;

  RunReport report{cfg,
                   std::move(scan_out),
                   envelope,
                   raw.grid_d1,
                   raw.grid_d2,
                   std::move(raw.singles_d1),
                   std::move(raw.singles_d2),
                   metrics,
                   0.0,
                   std::move(raw.map)};
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

void emit_csv(const RunReport& report, std::ostream& out) {
  out << "# ghostphase coincidence scan\n";
  for (const std::string& line : describe_config(report.config)) out << "# " << line << "\n";
  out << "# grid.d1: " << report.grid_d1.size() << " x " << format_number(report.grid_d1.pitch()) << " m\n";
  out << "# grid.d2: " << report.grid_d2.size() << " x " << format_number(report.grid_d2.pitch()) << " m\n";
  out << "# collection_factor: " << format_number(report.metrics.collection_factor) << "\n";
  out << "x2_m,coincidence_raw,coincidence_corrected,singles_d2\n";
  const ScanResult& s = report.scan;
  for (std::size_t i = 0; i < s.x2.size(); ++i) {
    out << format_number(s.x2[i]) << ',' << format_number(s.coincidence[i]) << ',' << format_number(s.corrected[i])
        << ',' << format_number(s.singles_d2[i]) << '\n';
  }
}

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open " + path.string() + " for writing");
  emit_csv(report, out);
  out.flush();
  if (!out) throw_io("failed writing " + path.string());
}

void emit_g2(const RunReport& report, std::ostream& out) {
  if (!report.map) throw_config("the coincidence map was not kept for this run");
  const CoincidenceMap& m = *report.map;
  const double scale = report.metrics.scale;
  out << "x1_m\\x2_m";
  for (std::size_t j = 0; j < m.grid2.size(); ++j) out << ',' << format_number(m.grid2.coordinate(j));
  out << '\n';
  for (std::size_t i = 0; i < m.grid1.size(); ++i) {
    out << format_number(m.grid1.coordinate(i));
    for (std::size_t j = 0; j < m.grid2.size(); ++j) {
      out << ',' << format_number(m.g2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / scale);
    }
    out << '\n';
  }
}

void emit_g2(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open " + path.string() + " for writing");
  emit_g2(report, out);
  out.flush();
  if (!out) throw_io("failed writing " + path.string());
}

}  // namespace ghostphase
