#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "core/log.hpp"
#include "core/scenario.hpp"
#include "support.hpp"

using namespace ghostphase;
namespace fs = std::filesystem;

namespace {

std::string config_message(const std::string& text) {
  try {
    parse_config(text, "case.json");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
    return e.what();
  }
  return {};
}

// A coarse chain that runs in milliseconds.
ScenarioConfig small_config(ObjectKind object) {
  ScenarioConfig cfg;
  cfg.object = object;
  cfg.grid.object_n = 100;
  cfg.grid.object_pitch = 37.5e-6;
  cfg.grid.detector_pitch = 100e-6;
  cfg.envelope.kind = EnvelopeConfig::Kind::none;
  cfg.scan = ScanConfig{-4e-3, 4e-3, 2e-4};
  return cfg;
}

ScenarioConfig cfg_with(ObjectKind object) {
  ScenarioConfig cfg;
  cfg.object = object;
  return cfg;
}

std::size_t count_phase(const PhaseObject& obj, double theta) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < obj.theta.size(); ++i)
    if (obj.aperture[i] && std::abs(obj.theta[i] - theta) < 1e-12) ++n;
  return n;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("ghostphase_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("empty config resolves to the defaults") {
  const ScenarioConfig cfg = parse_config("  \n", "empty.json");
  const ScenarioConfig def;
  CHECK(cfg.lambda == 812e-9);
  CHECK(cfg.lambda_pump == 406e-9);
  CHECK(cfg.d_a == 1.17);
  CHECK(cfg.d_b == 1.98);
  CHECK(cfg.d_2 == 3.96);
  CHECK(cfg.crystal_length == 1.5e-3);
  CHECK(cfg.object == ObjectKind::flat);
  CHECK(cfg.column_width == 300e-6);
  CHECK(cfg.n_columns == 12);
  CHECK(cfg.pull_depth_pi == 203e-9);
  CHECK(cfg.p1_width == 1.4e-3);
  CHECK(cfg.p2_width == 1.4e-3);
  CHECK(cfg.method == Method::fast);
  CHECK(describe_config(cfg) == describe_config(def));
  CHECK(describe_config(parse_config("{}")) == describe_config(def));
}

TEST_CASE("nested keys are read") {
  const ScenarioConfig cfg = parse_config(R"({
    "object": {"custom": [0,0,0,0,0,0,1e-7,0,0,0,0,0]},
    "grid": {"object_n": 200, "detector_pitch": 5e-5},
    "envelope": {"kind": "full-model", "waist": 2e-3},
    "scan": {"start": -1e-3, "stop": 1e-3, "step": 5e-5},
    "method": "direct",
    "workers": 3
  })");
  CHECK(cfg.object == ObjectKind::custom);
  CHECK(cfg.custom_depths[6] == 1e-7);
  CHECK(cfg.grid.object_n == 200);
  CHECK(cfg.grid.detector_pitch == 5e-5);
  CHECK(cfg.envelope.waist == 2e-3);
  CHECK(cfg.scan.step == 5e-5);
  CHECK(cfg.method == Method::direct);
  CHECK(cfg.workers == 3);
  CHECK(parse_config(R"({"envelope": "none"})").envelope.kind == EnvelopeConfig::Kind::none);
}

TEST_CASE("unknown keys are rejected with their line") {
  const std::string top = config_message("{\n  \"d_a\": 1.0,\n  \"d_c\": 2.0\n}");
  CHECK(top.find("case.json:3") != std::string::npos);
  CHECK(top.find("'d_c'") != std::string::npos);
  const std::string nested = config_message("{\n\"grid\": {\n  \"object_m\": 3\n}}");
  CHECK(nested.find("case.json:3") != std::string::npos);
  CHECK(nested.find("grid.object_m") != std::string::npos);
}

TEST_CASE("invalid values are configuration errors") {
  for (const char* text : {R"({"d_a": -1})", R"({"lambda": "red"})", R"({"object": "triple-slit"})",
                           R"({"object": {"custom": [1e-7]}})", R"({"n_columns": 0})", R"({"grid": {"d2_n": 1}})",
                           R"({"scan": {"start": 1, "stop": 0}})", R"({"scan": {"step": 0}})",
                           R"({"method": "slow"})", R"({"envelope": {"kind": "file"}})", R"({"envelope": 3})",
                           R"({"crystal_length": -1e-3})", R"([1, 2])", R"({"d_a": 1.0,})"}) {
    CAPTURE(text);
    CHECK(!config_message(text).empty());
  }
  const std::string parse = config_message("{\n\n  \"d_a\": }");
  CHECK(parse.find("case.json:3") != std::string::npos);
}

TEST_CASE("a pump wavelength that is not half the signal wavelength warns") {
  std::vector<std::string> seen;
  const WarningHandler previous = set_warning_handler([&](std::string_view m) { seen.emplace_back(m); });
  parse_config(R"({"lambda_pump": 405e-9})");
  const std::size_t after_mismatch = seen.size();
  parse_config(R"({"lambda": 800e-9, "lambda_pump": 400e-9})");
  set_warning_handler(previous);
  CHECK(after_mismatch == 1);
  CHECK(seen.size() == 1);
  CHECK(seen[0].find("lambda_pump") != std::string::npos);
}

TEST_CASE("config files") {
  CHECK(error_kind([] { load_config("/nonexistent/ghostphase.json"); }) == ErrorKind::io);
  const fs::path p = temp_file("cfg.json", R"({"object": "phase-slit", "envelope": {"kind": "file", "path": "env.csv"}})");
  const ScenarioConfig cfg = load_config(p);
  CHECK(cfg.object == ObjectKind::phase_slit);
  CHECK(cfg.envelope.path == p.parent_path() / "env.csv");
  fs::remove(p);
}

TEST_CASE("matched geometry of the default scenario") {
  const ArmGeometry geo = scenario_geometry(ScenarioConfig{});
  CHECK(geo.object.size() == 160);
  CHECK(geo.crystal.size() == 1521);
  CHECK(geo.d1.size() == 1609);
  CHECK(geo.d2.size() == 3219);
  const auto matched = [](const Grid1D& out, const Grid1D& in, double d) {
    return static_cast<double>(out.size()) * out.pitch() * in.pitch() / (812e-9 * d);
  };
  CHECK(matched(geo.crystal, geo.object, 1.17) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(matched(geo.d1, geo.object, 1.98) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(matched(geo.d2, geo.crystal, 3.96) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geo.crystal.pitch() <= 25e-6);
  CHECK(geo.d1.pitch() <= 40e-6);
  CHECK(geo.d2.pitch() <= 40e-6);

  ScenarioConfig huge;
  huge.grid.detector_pitch = 1e-6;
  CHECK(throws_config([&] { scenario_geometry(huge); }));
}

TEST_CASE("preset object layouts") {
  ScenarioConfig cfg;
  const Grid1D g(160, 25e-6);
  const auto has_pi = [&](const PhaseObject& obj, double x) {
    return std::abs(obj.theta[g.nearest_index(x)] - std::numbers::pi) < 1e-12;
  };

  // 4 pi * 203 nm / 812 nm = pi on the pulled columns; 3.6 mm of mirror.
  const PhaseObject flat = scenario_object(cfg, g);
  CHECK(count_phase(flat, 0.0) == 144);

  cfg.object = ObjectKind::phase_slit;
  const PhaseObject slit = scenario_object(cfg, g);
  CHECK(count_phase(slit, std::numbers::pi) == 12);
  CHECK(has_pi(slit, 12.5e-6));
  CHECK(has_pi(slit, -137.5e-6));
  CHECK(!has_pi(slit, 162.5e-6));

  cfg.object = ObjectKind::double_phase_slit;
  const PhaseObject dbl = scenario_object(cfg, g);
  CHECK(count_phase(dbl, std::numbers::pi) == 24);
  CHECK(!has_pi(dbl, 12.5e-6));
  CHECK(has_pi(dbl, 312.5e-6));
  CHECK(has_pi(dbl, -312.5e-6));
  CHECK(count_phase(dbl, 0.0) == 120);

  const PhaseObject half = scenario_object(cfg_with(ObjectKind::phase_slit), g, std::numbers::pi / 2);
  CHECK(count_phase(half, std::numbers::pi / 2) == 12);
}

TEST_CASE("custom depths follow the plain column lattice") {
  ScenarioConfig cfg;
  cfg.object = ObjectKind::custom;
  cfg.custom_depths.assign(12, 0.0);
  cfg.custom_depths[6] = 203e-9;
  const PhaseObject obj = scenario_object(cfg, Grid1D(160, 25e-6));
  CHECK(count_phase(obj, std::numbers::pi) == 12);
  CHECK(obj.theta[80] == doctest::Approx(std::numbers::pi));   // x = +12.5 um
  CHECK(obj.theta[79] == 0.0);                                 // x = -12.5 um
}

TEST_CASE("scan grid") {
  const Grid1D scan = scan_grid(ScenarioConfig{});
  CHECK(scan.size() == 161);
  CHECK(scan.first() == doctest::Approx(-8e-3));
  CHECK(scan.last() == doctest::Approx(8e-3));
  CHECK(std::abs(scan.coordinate(80)) < 1e-15);
  ScenarioConfig tiny;
  tiny.scan = ScanConfig{0.0, 1e-4, 1e-4};
  CHECK(throws_config([&] { scan_grid(tiny); }));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-8e-3) == "-0.008");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(1.23456789012e-7) == "1.23456789e-07");
  CHECK(format_number(123456789012.0) == "1.23456789e+11");
}

TEST_CASE("envelope files") {
  const std::vector<double> x2{-1e-3, 0.0, 1e-3};
  const fs::path ok = temp_file("env_ok.csv", "# measured\nx2_m,weight\n-2e-3,0\n0,1\n2e-3,0.5\n");
  const std::vector<double> w = load_envelope_file(ok, x2);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(0.75));

  for (const char* bad : {"-2e-3,1\n2e-3,-1\n", "-2e-3,1\n-3e-3,1\n", "-2e-3,1\n", "0,1\n2e-3,1\n",
                          "-2e-3,1\nfoo,bar\n2e-3,1\n", "-2e-3 1\n2e-3 1\n"}) {
    CAPTURE(bad);
    const fs::path p = temp_file("env_bad.csv", bad);
    CHECK(error_kind([&] { load_envelope_file(p, x2); }) == ErrorKind::data);
    fs::remove(p);
  }
  CHECK(error_kind([&] { load_envelope_file("/nonexistent/env.csv", x2); }) == ErrorKind::io);
  fs::remove(ok);
}

TEST_CASE("CSV output") {
  const RunReport report = run_scenario(small_config(ObjectKind::phase_slit));
  std::ostringstream a;
  emit_csv(report, a);
  const std::vector<std::string> lines = lines_of(a.str());
  CHECK(lines.front() == "# ghostphase coincidence scan");
  std::size_t header = 0;
  while (header < lines.size() && lines[header].starts_with("#")) ++header;
  REQUIRE(header < lines.size());
  CHECK(lines[header] == "x2_m,coincidence_raw,coincidence_corrected,singles_d2");
  CHECK(lines.size() - header - 1 == 41);
  CHECK(a.str().find("# object: \"phase-slit\"") != std::string::npos);
  CHECK(a.str().find("# collection_factor: ") != std::string::npos);
  CHECK(lines[header + 21].starts_with("0,"));
  CHECK(a.str().find("workers") == std::string::npos);

  ScenarioConfig again = small_config(ObjectKind::phase_slit);
  again.workers = 3;
  std::ostringstream b;
  emit_csv(run_scenario(again), b);
  CHECK(a.str() == b.str());

  std::ostringstream g2;
  CHECK(throws_config([&] { emit_g2(report, g2); }));
  CHECK(error_kind([&] { emit_csv(report, fs::path("/nonexistent/dir/out.csv")); }) == ErrorKind::io);
}

TEST_CASE("G2 output") {
  RunOptions opt;
  opt.keep_map = true;
  const RunReport report = run_scenario(small_config(ObjectKind::flat), opt);
  REQUIRE(report.map);
  std::ostringstream out;
  emit_g2(report, out);
  const std::vector<std::string> lines = lines_of(out.str());
  CHECK(lines.size() == report.grid_d1.size() + 1);
  CHECK(lines[0].starts_with("x1_m\\x2_m,"));
  CHECK(static_cast<std::size_t>(std::count(lines[1].begin(), lines[1].end(), ',')) == report.grid_d2.size());
}

TEST_CASE("report columns and metrics are consistent") {
  const RunReport r = run_scenario(small_config(ObjectKind::double_phase_slit));
  const ScanResult& s = r.scan;
  const double raw_peak = *std::max_element(s.coincidence.begin(), s.coincidence.end());
  CHECK(raw_peak == doctest::Approx(1.0));
  CHECK(*std::max_element(s.singles_d2.begin(), s.singles_d2.end()) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < s.x2.size(); ++i)
    CHECK(s.corrected[i] == doctest::Approx(s.coincidence[i] * r.metrics.collection_factor));  // envelope "none"

  const ProfileMetrics m = profile_metrics(s.x2, s.coincidence);
  CHECK(m.visibility == r.metrics.profile.visibility);
  CHECK(m.dip_width == r.metrics.profile.dip_width);
  CHECK(dominant_maxima(s.coincidence).size() == r.metrics.dominant_maxima);
  CHECK(r.metrics.collection_factor > 0.0);
  CHECK(r.metrics.collection_factor < 1.0);
}

TEST_CASE("flat normalisation divides by the flat-object peak") {
  const ScenarioConfig cfg = small_config(ObjectKind::phase_slit);
  const RunReport self = run_scenario(cfg);
  const RunReport flat_ref = run_scenario(small_config(ObjectKind::flat));
  RunOptions opt;
  opt.normalize = Normalize::flat;
  const RunReport flat = run_scenario(cfg, opt);
  CHECK(flat.metrics.scale == doctest::Approx(flat_ref.metrics.scale).epsilon(1e-14));
  for (std::size_t i = 0; i < self.scan.x2.size(); ++i)
    CHECK(flat.scan.coincidence[i] == doctest::Approx(self.scan.coincidence[i] * self.metrics.scale / flat.metrics.scale));
}

TEST_CASE("the file envelope reaches the corrected column") {
  ScenarioConfig cfg = small_config(ObjectKind::flat);
  cfg.envelope.kind = EnvelopeConfig::Kind::file;
  cfg.envelope.path = temp_file("env_run.csv", "-5e-3,0.5\n5e-3,0.5\n");
  const RunReport r = run_scenario(cfg);
  for (std::size_t i = 0; i < r.scan.x2.size(); ++i)
    CHECK(r.scan.corrected[i] == doctest::Approx(r.scan.coincidence[i] * r.metrics.collection_factor));
  cfg.scan = ScanConfig{-6e-3, 6e-3, 2e-4};
  CHECK(error_kind([&] { run_scenario(cfg); }) == ErrorKind::data);
  fs::remove(cfg.envelope.path);
}

TEST_CASE("profile metrics against a closed-form dip") {
  // y = c + x^2 exp(-x^2/a^2): maxima at +-a, centre value c.
  const double a = 2e-3;
  const double c = 0.1;
  std::vector<double> x;
  std::vector<double> y;
  for (int i = -4000; i <= 4000; ++i) {
    x.push_back(i * 1e-6);
    y.push_back(c + x.back() * x.back() * std::exp(-x.back() * x.back() / (a * a)) * 1e5);
  }
  const double peak = c + a * a / std::numbers::e * 1e5;
  // Half depth: u exp(-u) = 1/(2e) with u = x^2/a^2 < 1, solved by bisection.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(-mid) < 0.5 / std::numbers::e ? lo : hi) = mid;
  }
  const ProfileMetrics m = profile_metrics(x, y);
  CHECK(m.central_minimum);
  CHECK(m.peak == doctest::Approx(peak).epsilon(1e-6));
  CHECK(std::abs(std::abs(m.peak_position) - a) <= 1e-6);
  CHECK(m.center_value == c);
  CHECK(m.visibility == doctest::Approx((peak - c) / (peak + c)));
  CHECK(m.dip_width == doctest::Approx(2.0 * a * std::sqrt(lo)).epsilon(1e-5));
  CHECK(dominant_maxima(y).size() == 2);

  const std::vector<double> hump{0.0, 1.0, 2.0, 1.0, 0.0};
  const std::vector<double> hx{-2.0, -1.0, 0.0, 1.0, 2.0};
  const ProfileMetrics single = profile_metrics(hx, hump);
  CHECK(!single.central_minimum);
  CHECK(single.dip_width == 0.0);
  CHECK(single.visibility == 0.0);
}

TEST_CASE("local maxima count plateaus once and ignore the ends") {
  CHECK(local_maxima(std::vector<double>{3, 1, 2, 2, 1, 4}) == std::vector<std::size_t>{2});
  CHECK(local_maxima(std::vector<double>{1, 2, 3}).empty());
  CHECK(dominant_maxima(std::vector<double>{0, 1, 0, 10, 0, 6, 0}) == std::vector<std::size_t>{3, 5});
}
