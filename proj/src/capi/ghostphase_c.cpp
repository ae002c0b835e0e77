#include "ghostphase/ghostphase.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/log.hpp"
#include "core/scenario.hpp"

struct gp_config {
  ghostphase::ScenarioConfig cfg;
};

struct gp_report {
  ghostphase::RunReport report;
};

namespace {

thread_local std::string last_error;

gp_status fail(gp_status status, const std::string& message) {
  last_error = message;
  return status;
}

gp_status status_of(ghostphase::ErrorKind kind) {
  switch (kind) {
    case ghostphase::ErrorKind::configuration: return GP_ERR_CONFIG;
    case ghostphase::ErrorKind::numerical: return GP_ERR_NUMERICAL;
    case ghostphase::ErrorKind::io: return GP_ERR_IO;
    case ghostphase::ErrorKind::data: return GP_ERR_DATA;
  }
  return GP_ERR_INTERNAL;
}

template <class F>
gp_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return GP_OK;
  } catch (const ghostphase::Error& e) {
    return fail(status_of(e.kind()), std::string(ghostphase::to_string(e.kind())) + " error: " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(GP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GP_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* gp_last_error(void) { return last_error.c_str(); }

const char* gp_version(void) { return "0.1.0"; }

void gp_set_warning_callback(gp_warning_fn fn, void* user) {
  if (fn == nullptr) {
    ghostphase::set_warning_handler({});
    return;
  }
  ghostphase::set_warning_handler([fn, user](std::string_view msg) {
    const std::string s(msg);
    fn(s.c_str(), user);
  });
}

gp_run_options gp_default_run_options(void) {
  return gp_run_options{GP_METHOD_FROM_CONFIG, GP_NORMALIZE_SELF, -1, 0};
}

gp_status gp_config_load(const char* path, gp_config** out) {
  if (path == nullptr || out == nullptr) return fail(GP_ERR_ARGUMENT, "gp_config_load: null argument");
  *out = nullptr;
  return guarded([&] { *out = new gp_config{ghostphase::load_config(path)}; });
}

gp_status gp_config_parse(const char* json_text, gp_config** out) {
  if (json_text == nullptr || out == nullptr) return fail(GP_ERR_ARGUMENT, "gp_config_parse: null argument");
  *out = nullptr;
  return guarded([&] { *out = new gp_config{ghostphase::parse_config(json_text)}; });
}

void gp_config_free(gp_config* cfg) { delete cfg; }

gp_status gp_run(const gp_config* cfg, const gp_run_options* options, gp_report** out) {
  if (cfg == nullptr || out == nullptr) return fail(GP_ERR_ARGUMENT, "gp_run: null argument");
  *out = nullptr;
  const gp_run_options opts = options != nullptr ? *options : gp_default_run_options();
  ghostphase::RunOptions run;
  switch (opts.method) {
    case GP_METHOD_FROM_CONFIG: break;
    case GP_METHOD_FAST: run.method = ghostphase::Method::fast; break;
    case GP_METHOD_DIRECT: run.method = ghostphase::Method::direct; break;
    default: return fail(GP_ERR_ARGUMENT, "gp_run: unknown method");
  }
  switch (opts.normalize) {
    case GP_NORMALIZE_SELF: run.normalize = ghostphase::Normalize::self; break;
    case GP_NORMALIZE_FLAT: run.normalize = ghostphase::Normalize::flat; break;
    default: return fail(GP_ERR_ARGUMENT, "gp_run: unknown normalisation");
  }
  if (opts.workers >= 0) run.workers = static_cast<unsigned>(opts.workers);
  run.keep_map = opts.keep_map != 0;
  return guarded([&] { *out = new gp_report{ghostphase::run_scenario(cfg->cfg, run)}; });
}

void gp_report_free(gp_report* report) { delete report; }

gp_status gp_report_write_csv(const gp_report* report, const char* path) {
  if (report == nullptr) return fail(GP_ERR_ARGUMENT, "gp_report_write_csv: null report");
  return guarded([&] {
    if (path == nullptr || std::strcmp(path, "-") == 0) {
      ghostphase::emit_csv(report->report, std::cout);
      std::cout.flush();
      if (!std::cout) ghostphase::throw_io("failed writing to stdout");
    } else {
      ghostphase::emit_csv(report->report, std::filesystem::path(path));
    }
  });
}

gp_status gp_report_write_g2(const gp_report* report, const char* path) {
  if (report == nullptr) return fail(GP_ERR_ARGUMENT, "gp_report_write_g2: null report");
  return guarded([&] {
    if (path == nullptr || std::strcmp(path, "-") == 0) {
      ghostphase::emit_g2(report->report, std::cout);
      std::cout.flush();
      if (!std::cout) ghostphase::throw_io("failed writing to stdout");
    } else {
      ghostphase::emit_g2(report->report, std::filesystem::path(path));
    }
  });
}

size_t gp_report_scan_length(const gp_report* report) {
  return report == nullptr ? 0 : report->report.scan.x2.size();
}

gp_status gp_report_scan(const gp_report* report, double* x2, double* raw, double* corrected, double* singles_d2,
                         size_t capacity) {
  if (report == nullptr) return fail(GP_ERR_ARGUMENT, "gp_report_scan: null report");
  const auto& s = report->report.scan;
  const std::size_t n = std::min(capacity, s.x2.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x2 != nullptr) x2[i] = s.x2[i];
    if (raw != nullptr) raw[i] = s.coincidence[i];
    if (corrected != nullptr) corrected[i] = s.corrected[i];
    if (singles_d2 != nullptr) singles_d2[i] = s.singles_d2[i];
  }
  return GP_OK;
}

gp_status gp_report_metrics(const gp_report* report, gp_metrics* out) {
  if (report == nullptr || out == nullptr) return fail(GP_ERR_ARGUMENT, "gp_report_metrics: null argument");
  const auto& m = report->report.metrics;
  out->peak = m.profile.peak;
  out->peak_position = m.profile.peak_position;
  out->center_value = m.profile.center_value;
  out->visibility = m.profile.visibility;
  out->dip_width = m.profile.dip_width;
  out->central_minimum = m.profile.central_minimum ? 1 : 0;
  out->dominant_maxima = m.dominant_maxima;
  out->collection_factor = m.collection_factor;
  out->scale = m.scale;
  out->seconds = report->report.seconds;
  return GP_OK;
}

}  // extern "C"
