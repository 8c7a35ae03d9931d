/* C interface to the half-wave maps toolkit. Objects are opaque handles owned
 * by the caller and released with the matching destroy function. Every call
 * returns an hwm_status; on failure hwm_last_error() describes the error for
 * the calling thread. */
#ifndef HWM_HWM_H
#define HWM_HWM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HWM_BUILDING_LIBRARY)
#    define HWM_API __declspec(dllexport)
#  else
#    define HWM_API __declspec(dllimport)
#  endif
#else
#  define HWM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hwm_status {
  HWM_OK = 0,
  HWM_ERR_INVALID_ARGUMENT = 1,
  HWM_ERR_DIMENSION = 2,
  HWM_ERR_DOMAIN = 3,
  HWM_ERR_CONFIG = 4,
  HWM_ERR_IO = 5,
  HWM_ERR_FORMAT = 6,
  HWM_ERR_BLOW_UP = 7,
  HWM_ERR_STABILITY = 8,
  HWM_ERR_NON_CONTRACTION = 9,
  HWM_ERR_INTERNAL = 10
} hwm_status;

typedef struct hwm_grid hwm_grid;
typedef struct hwm_field hwm_field;
typedef struct hwm_config hwm_config;

typedef enum hwm_multiplier_kind {
  HWM_FRACTIONAL_LAPLACIAN = 0, /* |xi|^s */
  HWM_HILBERT = 1,              /* -i sgn(xi) */
  HWM_HEAT = 2,                 /* exp(-eps xi^2 t) */
  HWM_LP_LOW = 3,               /* |xi| < cutoff */
  HWM_LP_HIGH = 4,              /* |xi| >= cutoff */
  HWM_DERIVATIVE = 5            /* i xi */
} hwm_multiplier_kind;

typedef struct hwm_multiplier {
  hwm_multiplier_kind kind;
  double s;
  double eps;
  double t;
  double cutoff;
} hwm_multiplier;

typedef struct hwm_verdict {
  int passed;
  char summary[512];
} hwm_verdict;

HWM_API const char* hwm_version(void);
/* Message of the last failed call on this thread, "" if none. */
HWM_API const char* hwm_last_error(void);
HWM_API const char* hwm_status_string(hwm_status status);

/* Periodic grid on [-L/2, L/2) with M points (M even, >= 8). */
HWM_API hwm_status hwm_grid_create(double box_length, size_t num_points, hwm_grid** out);
HWM_API void hwm_grid_destroy(hwm_grid* grid);
HWM_API hwm_status hwm_grid_coordinates(const hwm_grid* grid, double* x, size_t len);

/* Field from three component arrays of length M each. */
HWM_API hwm_status hwm_field_create(const hwm_grid* grid, const double* ux, const double* uy,
                                    const double* uz, hwm_field** out);
HWM_API void hwm_field_destroy(hwm_field* field);
HWM_API size_t hwm_field_size(const hwm_field* field);
HWM_API hwm_status hwm_field_copy_out(const hwm_field* field, double* ux, double* uy, double* uz,
                                      size_t len);

HWM_API hwm_status hwm_apply_multiplier(const hwm_multiplier* spec, const hwm_field* in,
                                        hwm_field** out);
HWM_API hwm_status hwm_hs_norm(const hwm_field* field, double s, double* out);
/* N(u) = u x (-Delta)^{1/2} u */
HWM_API hwm_status hwm_nonlinearity(const hwm_field* field, int dealias, hwm_field** out);

HWM_API hwm_status hwm_snapshot_write(const hwm_field* field, const char* path);
HWM_API hwm_status hwm_snapshot_read(const char* path, hwm_field** out);

HWM_API hwm_status hwm_config_load(const char* path, hwm_config** out);
HWM_API hwm_status hwm_config_parse(const char* text, hwm_config** out);
/* Writes at most cap bytes including the terminator; *needed gets the full size. */
HWM_API hwm_status hwm_config_serialize(const hwm_config* cfg, char* buf, size_t cap, size_t* needed);
HWM_API void hwm_config_destroy(hwm_config* cfg);

/* Subcommands. Data files and manifest.json go to out_dir. */
HWM_API hwm_status hwm_run_simulate(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict);
HWM_API hwm_status hwm_run_picard_check(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict);
HWM_API hwm_status hwm_run_sweep(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict);
HWM_API hwm_status hwm_run_weakres(const hwm_config* cfg, const char* trajectory_path,
                                   const char* out_dir, hwm_verdict* verdict);
HWM_API hwm_status hwm_run_lp_split(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict);
HWM_API hwm_status hwm_run_selftest(uint64_t seed, hwm_verdict* verdict);

/* Detail line i of the last verdict on this thread, NULL past the end. */
HWM_API const char* hwm_verdict_detail(size_t i);

#ifdef __cplusplus
}
#endif

#endif
