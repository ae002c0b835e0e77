/* ghostphase: two-photon (ghost) imaging simulator for pure phase objects. */
#ifndef GHOSTPHASE_GHOSTPHASE_H
#define GHOSTPHASE_GHOSTPHASE_H

#include <stddef.h>

#if defined(GHOSTPHASE_BUILDING_LIBRARY)
#define GP_API __attribute__((visibility("default")))
#else
#define GP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gp_status {
  GP_OK = 0,
  GP_ERR_INTERNAL = 1,
  GP_ERR_CONFIG = 2,
  GP_ERR_NUMERICAL = 3,
  GP_ERR_IO = 4,
  GP_ERR_DATA = 5,
  GP_ERR_ARGUMENT = 6
} gp_status;

typedef enum gp_method {
  GP_METHOD_FROM_CONFIG = 0,
  GP_METHOD_FAST = 1,
  GP_METHOD_DIRECT = 2 /* dense quadrature, the reference path */
} gp_method;

typedef enum gp_normalize {
  GP_NORMALIZE_SELF = 0, /* the run's own raw peak is 1 */
  GP_NORMALIZE_FLAT = 1  /* the flat-object peak of the same geometry is 1 */
} gp_normalize;

typedef struct gp_config gp_config;
typedef struct gp_report gp_report;

typedef struct gp_run_options {
  gp_method method;
  gp_normalize normalize;
  int workers;  /* < 0: use the config value; 0: one per hardware thread */
  int keep_map; /* non-zero keeps G2 for gp_report_write_g2 */
} gp_run_options;

typedef struct gp_metrics {
  double peak;
  double peak_position;
  double center_value;
  double visibility;
  double dip_width;
  int central_minimum;
  size_t dominant_maxima;
  double collection_factor;
  double scale;
  double seconds;
} gp_metrics;

typedef void (*gp_warning_fn)(const char* message, void* user);

/* Message of the last failing call on this thread ("" if none). */
GP_API const char* gp_last_error(void);
GP_API const char* gp_version(void);

/* NULL restores the default sink (stderr). */
GP_API void gp_set_warning_callback(gp_warning_fn fn, void* user);

GP_API gp_run_options gp_default_run_options(void);

GP_API gp_status gp_config_load(const char* path, gp_config** out);
GP_API gp_status gp_config_parse(const char* json_text, gp_config** out);
GP_API void gp_config_free(gp_config* cfg);

GP_API gp_status gp_run(const gp_config* cfg, const gp_run_options* options, gp_report** out);
GP_API void gp_report_free(gp_report* report);

/* path NULL or "-" writes to stdout. */
GP_API gp_status gp_report_write_csv(const gp_report* report, const char* path);
GP_API gp_status gp_report_write_g2(const gp_report* report, const char* path);

GP_API size_t gp_report_scan_length(const gp_report* report);
/* Copies up to `capacity` points into each non-NULL array. */
GP_API gp_status gp_report_scan(const gp_report* report, double* x2, double* raw, double* corrected,
                                double* singles_d2, size_t capacity);
GP_API gp_status gp_report_metrics(const gp_report* report, gp_metrics* out);

#ifdef __cplusplus
}
#endif

#endif
