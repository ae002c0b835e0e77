#include "core/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/log.hpp"

namespace ghostphase {
namespace {

using nlohmann::json;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset; ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

// Line of the first `"key" :` in the text, 0 when not found.
std::size_t line_of_key(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string_view::npos) {
    std::size_t k = pos + quoted.size();
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k < text.size() && text[k] == ':') return line_of_offset(text, pos);
    pos += quoted.size();
  }
  return 0;
}

class Section {
 public:
  Section(const json& node, std::string prefix, std::string_view text, std::string origin)
      : node_(node), prefix_(std::move(prefix)), text_(text), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    std::ostringstream os;
    os << origin_;
    const std::size_t line = line_of_key(text_, key);
    if (line > 0) os << ":" << line;
    os << ": key '" << prefix_ << key << "': " << why;
    throw_config(os.str());
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }
  const json& raw(const std::string& key) const { return node_.at(key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }
  double positive(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) fail(key, "must be positive");
    return d;
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a non-negative integer");
    return static_cast<std::size_t>(v.get<long long>());
  }
  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  void reject_unknown() const {
    for (const auto& item : node_.items()) {
      if (!seen_.contains(item.key())) fail(item.key(), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string prefix_;
  std::string_view text_;
  std::string origin_;
  std::set<std::string> seen_;
};

Section sub_section(Section& parent, const std::string& key, const std::string& prefix, std::string_view text,
                    const std::string& origin) {
  const json& v = parent.raw(key);
  if (!v.is_object()) parent.fail(key, "expected an object");
  return Section(v, prefix + key + ".", text, origin);
}

}  // namespace

const char* to_string(ObjectKind kind) noexcept {
  switch (kind) {
    case ObjectKind::flat: return "flat";
    case ObjectKind::phase_slit: return "phase-slit";
    case ObjectKind::double_phase_slit: return "double-phase-slit";
    case ObjectKind::custom: return "custom";
  }
  return "?";
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& origin) {
  const std::string where = origin.empty() ? std::string("<config>") : origin.string();
  json root;
  // An empty (or whitespace-only) file means "all defaults".
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    root = json::object();
  } else {
    try {
      root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      std::ostringstream os;
      os << where << ":" << line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1) << ": parse error: " << e.what();
      throw_config(os.str());
    }
  }
  if (!root.is_object()) throw_config(where + ": top level must be a JSON object");

  ScenarioConfig cfg;
  Section top(root, "", text, where);
  cfg.lambda = top.positive("lambda", cfg.lambda);
  cfg.lambda_pump = top.positive("lambda_pump", cfg.lambda_pump);
  cfg.d_a = top.positive("d_a", cfg.d_a);
  cfg.d_b = top.positive("d_b", cfg.d_b);
  cfg.d_2 = top.positive("d_2", cfg.d_2);
  cfg.crystal_length = top.number("crystal_length", cfg.crystal_length);
  if (cfg.crystal_length < 0.0) top.fail("crystal_length", "must be non-negative");
  cfg.column_width = top.positive("column_width", cfg.column_width);
  const std::size_t columns = top.count("n_columns", static_cast<std::size_t>(cfg.n_columns));
  if (columns < 1 || columns > 100000) top.fail("n_columns", "must be between 1 and 100000");
  cfg.n_columns = static_cast<int>(columns);
  cfg.pull_depth_pi = top.number("pull_depth_pi", cfg.pull_depth_pi);
  if (cfg.pull_depth_pi < 0.0) top.fail("pull_depth_pi", "must be non-negative");
  cfg.p1_width = top.positive("p1_width", cfg.p1_width);
  cfg.p2_width = top.positive("p2_width", cfg.p2_width);
  cfg.p1_center = top.number("p1_center", cfg.p1_center);

  if (top.has("object")) {
    const json& v = top.raw("object");
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "flat") cfg.object = ObjectKind::flat;
      else if (s == "phase-slit") cfg.object = ObjectKind::phase_slit;
      else if (s == "double-phase-slit") cfg.object = ObjectKind::double_phase_slit;
      else top.fail("object", "expected flat, phase-slit, double-phase-slit or {\"custom\": [...]}, got '" + s + "'");
    } else if (v.is_object()) {
      Section obj = sub_section(top, "object", "", text, where);
      if (!obj.has("custom")) obj.fail("object", "object table needs a \"custom\" depth list");
      const json& depths = obj.raw("custom");
      if (!depths.is_array()) obj.fail("custom", "expected an array of pull depths in meters");
      for (const json& d : depths) {
        if (!d.is_number() || !(d.get<double>() >= 0.0)) obj.fail("custom", "pull depths must be non-negative numbers");
        cfg.custom_depths.push_back(d.get<double>());
      }
      obj.reject_unknown();
      cfg.object = ObjectKind::custom;
      if (cfg.custom_depths.size() != static_cast<std::size_t>(cfg.n_columns)) {
        top.fail("object", "custom depth list has " + std::to_string(cfg.custom_depths.size()) +
                               " entries but n_columns is " + std::to_string(cfg.n_columns));
      }
    } else {
      top.fail("object", "expected a string or an object");
    }
  }

  if (top.has("grid")) {
    Section g = sub_section(top, "grid", "", text, where);
    cfg.grid.object_n = g.count("object_n", cfg.grid.object_n);
    cfg.grid.object_pitch = g.positive("object_pitch", cfg.grid.object_pitch);
    cfg.grid.detector_pitch = g.positive("detector_pitch", cfg.grid.detector_pitch);
    cfg.grid.crystal_n = g.count("crystal_n", cfg.grid.crystal_n);
    cfg.grid.d1_n = g.count("d1_n", cfg.grid.d1_n);
    cfg.grid.d2_n = g.count("d2_n", cfg.grid.d2_n);
    if (cfg.grid.object_n < 2) g.fail("object_n", "must be at least 2");
    if (cfg.grid.crystal_n == 1) g.fail("crystal_n", "must be 0 (automatic) or at least 2");
    if (cfg.grid.d1_n == 1) g.fail("d1_n", "must be 0 (automatic) or at least 2");
    if (cfg.grid.d2_n == 1) g.fail("d2_n", "must be 0 (automatic) or at least 2");
    g.reject_unknown();
  }

  if (top.has("envelope")) {
    const json& v = top.raw("envelope");
    if (v.is_string() && v.get<std::string>() == "none") {
      cfg.envelope.kind = EnvelopeConfig::Kind::none;
    } else if (v.is_string() && v.get<std::string>() == "full-model") {
      cfg.envelope.kind = EnvelopeConfig::Kind::full_model;
    } else if (v.is_object()) {
      Section e = sub_section(top, "envelope", "", text, where);
      const std::string kind = e.text("kind", "full-model");
      if (kind == "full-model") {
        cfg.envelope.kind = EnvelopeConfig::Kind::full_model;
        cfg.envelope.waist = e.positive("waist", cfg.envelope.waist);
        cfg.envelope.grid_n = e.count("grid_n", cfg.envelope.grid_n);
        cfg.envelope.grid_pitch = e.positive("grid_pitch", cfg.envelope.grid_pitch);
        if (cfg.envelope.grid_n < 2) e.fail("grid_n", "must be at least 2");
      } else if (kind == "file") {
        const std::string path = e.text("path", "");
        if (path.empty()) e.fail("path", "file envelope needs a path");
        cfg.envelope.kind = EnvelopeConfig::Kind::file;
        cfg.envelope.path = path;
        if (cfg.envelope.path.is_relative() && !origin.empty()) {
          cfg.envelope.path = origin.parent_path() / cfg.envelope.path;
        }
      } else if (kind == "none") {
        cfg.envelope.kind = EnvelopeConfig::Kind::none;
      } else {
        e.fail("kind", "expected full-model, file or none");
      }
      e.reject_unknown();
    } else {
      top.fail("envelope", "expected \"none\", \"full-model\" or an object");
    }
  }

  if (top.has("scan")) {
    Section s = sub_section(top, "scan", "", text, where);
    cfg.scan.start = s.number("start", cfg.scan.start);
    cfg.scan.stop = s.number("stop", cfg.scan.stop);
    cfg.scan.step = s.positive("step", cfg.scan.step);
    if (cfg.scan.stop < cfg.scan.start) s.fail("stop", "must not be below scan.start");
    s.reject_unknown();
  }

  const std::string method = top.text("method", "fast");
  if (method == "fast") cfg.method = Method::fast;
  else if (method == "direct") cfg.method = Method::direct;
  else top.fail("method", "expected fast or direct");

  const std::size_t workers = top.count("workers", 0);
  if (workers > 1024) top.fail("workers", "must be at most 1024");
  cfg.workers = static_cast<unsigned>(workers);

  top.reject_unknown();
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw_io("cannot read config file " + path.string());
  return parse_config(buf.str(), path);
}

void validate_config(const ScenarioConfig& cfg) {
  const auto need_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw_config(std::string("'") + name + "' must be positive");
  };
  need_positive(cfg.lambda, "lambda");
  need_positive(cfg.lambda_pump, "lambda_pump");
  need_positive(cfg.d_a, "d_a");
  need_positive(cfg.d_b, "d_b");
  need_positive(cfg.d_2, "d_2");
  need_positive(cfg.column_width, "column_width");
  need_positive(cfg.p1_width, "p1_width");
  need_positive(cfg.p2_width, "p2_width");
  need_positive(cfg.grid.object_pitch, "grid.object_pitch");
  need_positive(cfg.grid.detector_pitch, "grid.detector_pitch");
  need_positive(cfg.scan.step, "scan.step");
  if (cfg.crystal_length < 0.0) throw_config("'crystal_length' must be non-negative");
  if (cfg.n_columns < 1) throw_config("'n_columns' must be at least 1");
  if (cfg.object == ObjectKind::custom && cfg.custom_depths.size() != static_cast<std::size_t>(cfg.n_columns)) {
    throw_config("custom depth list length differs from 'n_columns'");
  }
  if (cfg.scan.stop < cfg.scan.start) throw_config("'scan.stop' must not be below 'scan.start'");
  if (std::abs(cfg.lambda_pump - 0.5 * cfg.lambda) > 1e-12 * cfg.lambda) {
    std::ostringstream os;
    os << "lambda_pump " << cfg.lambda_pump << " m is not lambda/2; the degenerate-pair model is used regardless";
    warn(os.str());
  }
}

std::vector<std::string> describe_config(const ScenarioConfig& cfg) {
  json j;
  j["lambda"] = cfg.lambda;
  j["lambda_pump"] = cfg.lambda_pump;
  j["d_a"] = cfg.d_a;
  j["d_b"] = cfg.d_b;
  j["d_2"] = cfg.d_2;
  j["crystal_length"] = cfg.crystal_length;
  if (cfg.object == ObjectKind::custom) {
    j["object"] = json{{"custom", cfg.custom_depths}};
  } else {
    j["object"] = to_string(cfg.object);
  }
  j["column_width"] = cfg.column_width;
  j["n_columns"] = cfg.n_columns;
  j["pull_depth_pi"] = cfg.pull_depth_pi;
  j["p1_width"] = cfg.p1_width;
  j["p2_width"] = cfg.p2_width;
  j["p1_center"] = cfg.p1_center;
  j["grid"] = json{{"object_n", cfg.grid.object_n},   {"object_pitch", cfg.grid.object_pitch},
                   {"detector_pitch", cfg.grid.detector_pitch}, {"crystal_n", cfg.grid.crystal_n},
                   {"d1_n", cfg.grid.d1_n},           {"d2_n", cfg.grid.d2_n}};
  switch (cfg.envelope.kind) {
    case EnvelopeConfig::Kind::none: j["envelope"] = "none"; break;
    case EnvelopeConfig::Kind::full_model:
      j["envelope"] = json{{"kind", "full-model"},
                           {"waist", cfg.envelope.waist},
                           {"grid_n", cfg.envelope.grid_n},
                           {"grid_pitch", cfg.envelope.grid_pitch}};
      break;
    case EnvelopeConfig::Kind::file:
      j["envelope"] = json{{"kind", "file"}, {"path", cfg.envelope.path.generic_string()}};
      break;
  }
  j["scan"] = json{{"start", cfg.scan.start}, {"stop", cfg.scan.stop}, {"step", cfg.scan.step}};
  j["method"] = cfg.method == Method::fast ? "fast" : "direct";

  std::vector<std::string> lines;
  for (const auto& item : j.items()) lines.push_back(item.key() + ": " + item.value().dump());
  return lines;
}

}  // namespace ghostphase
