#include "hwm/hwm.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "hwm/app.hpp"
#include "hwm/config.hpp"
#include "hwm/error.hpp"
#include "hwm/fields.hpp"
#include "hwm/grid.hpp"
#include "hwm/io.hpp"
#include "hwm/solver.hpp"
#include "hwm/spectral.hpp"

struct hwm_grid {
  hwm::GridPtr grid;
};

struct hwm_field {
  hwm::VectorField3 field;
};

struct hwm_config {
  hwm::RunConfig cfg;
};

namespace {

thread_local std::string last_error;
thread_local std::vector<std::string> last_details;

hwm_status status_of(hwm::ErrorCode code) {
  using hwm::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return HWM_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension: return HWM_ERR_DIMENSION;
    case ErrorCode::domain: return HWM_ERR_DOMAIN;
    case ErrorCode::config: return HWM_ERR_CONFIG;
    case ErrorCode::io: return HWM_ERR_IO;
    case ErrorCode::format: return HWM_ERR_FORMAT;
    case ErrorCode::blow_up: return HWM_ERR_BLOW_UP;
    case ErrorCode::stability: return HWM_ERR_STABILITY;
    case ErrorCode::non_contraction: return HWM_ERR_NON_CONTRACTION;
    case ErrorCode::internal: return HWM_ERR_INTERNAL;
  }
  return HWM_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <class F>
hwm_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return HWM_OK;
  } catch (const hwm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return HWM_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) hwm::fail(hwm::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

hwm::MultiplierSpec to_spec(const hwm_multiplier& m) {
  using hwm::MultiplierSpec;
  switch (m.kind) {
    case HWM_FRACTIONAL_LAPLACIAN: return MultiplierSpec::fractional_laplacian(m.s);
    case HWM_HILBERT: return MultiplierSpec::hilbert();
    case HWM_HEAT: return MultiplierSpec::heat(m.eps, m.t);
    case HWM_LP_LOW: return MultiplierSpec::lp_low(m.cutoff);
    case HWM_LP_HIGH: return MultiplierSpec::lp_high(m.cutoff);
    case HWM_DERIVATIVE: return MultiplierSpec::derivative();
  }
  hwm::fail(hwm::ErrorCode::invalid_argument, "unknown multiplier kind");
}

void fill(hwm_verdict* out, const hwm::AppVerdict& v) {
  last_details = v.details;
  if (!out) return;
  out->passed = v.passed ? 1 : 0;
  std::memset(out->summary, 0, sizeof out->summary);
  std::strncpy(out->summary, v.summary.c_str(), sizeof out->summary - 1);
}

template <class Run>
hwm_status run_command(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict, Run&& run) {
  return guard([&] {
    need(cfg, "config");
    need(out_dir, "out_dir");
    fill(verdict, run(cfg->cfg, std::string(out_dir)));
  });
}

}  // namespace

extern "C" {

const char* hwm_version(void) { return hwm::version_string(); }
const char* hwm_last_error(void) { return last_error.c_str(); }

const char* hwm_status_string(hwm_status status) {
  switch (status) {
    case HWM_OK: return "ok";
    case HWM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HWM_ERR_DIMENSION: return "dimension";
    case HWM_ERR_DOMAIN: return "domain";
    case HWM_ERR_CONFIG: return "config";
    case HWM_ERR_IO: return "io";
    case HWM_ERR_FORMAT: return "format";
    case HWM_ERR_BLOW_UP: return "blow_up";
    case HWM_ERR_STABILITY: return "stability";
    case HWM_ERR_NON_CONTRACTION: return "non_contraction";
    case HWM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

hwm_status hwm_grid_create(double box_length, size_t num_points, hwm_grid** out) {
  return guard([&] {
    need(out, "out");
    *out = new hwm_grid{hwm::SpectralGrid::create(box_length, num_points)};
  });
}

void hwm_grid_destroy(hwm_grid* grid) { delete grid; }

hwm_status hwm_grid_coordinates(const hwm_grid* grid, double* x, size_t len) {
  return guard([&] {
    need(grid, "grid");
    need(x, "x");
    const auto c = grid->grid->coordinates();
    if (len != c.size()) hwm::fail(hwm::ErrorCode::dimension, "coordinate buffer length differs from M");
    std::copy(c.begin(), c.end(), x);
  });
}

hwm_status hwm_field_create(const hwm_grid* grid, const double* ux, const double* uy, const double* uz,
                            hwm_field** out) {
  return guard([&] {
    need(grid, "grid");
    need(ux, "ux");
    need(uy, "uy");
    need(uz, "uz");
    need(out, "out");
    const std::size_t m = grid->grid->size();
    std::array<std::vector<double>, 3> comp{std::vector<double>(ux, ux + m), std::vector<double>(uy, uy + m),
                                            std::vector<double>(uz, uz + m)};
    *out = new hwm_field{hwm::VectorField3(grid->grid, std::move(comp))};
  });
}

void hwm_field_destroy(hwm_field* field) { delete field; }

size_t hwm_field_size(const hwm_field* field) { return field ? field->field.size() : 0; }

hwm_status hwm_field_copy_out(const hwm_field* field, double* ux, double* uy, double* uz, size_t len) {
  return guard([&] {
    need(field, "field");
    if (len != field->field.size()) hwm::fail(hwm::ErrorCode::dimension, "buffer length differs from M");
    double* dst[3] = {ux, uy, uz};
    for (int c = 0; c < 3; ++c) {
      need(dst[c], "component buffer");
      const auto src = field->field.component(c);
      std::copy(src.begin(), src.end(), dst[c]);
    }
  });
}

hwm_status hwm_apply_multiplier(const hwm_multiplier* spec, const hwm_field* in, hwm_field** out) {
  return guard([&] {
    need(spec, "spec");
    need(in, "field");
    need(out, "out");
    *out = new hwm_field{hwm::apply_multiplier(to_spec(*spec), in->field)};
  });
}

hwm_status hwm_hs_norm(const hwm_field* field, double s, double* out) {
  return guard([&] {
    need(field, "field");
    need(out, "out");
    *out = hwm::hs_norm(field->field, s);
  });
}

hwm_status hwm_nonlinearity(const hwm_field* field, int dealias, hwm_field** out) {
  return guard([&] {
    need(field, "field");
    need(out, "out");
    *out = new hwm_field{hwm::nonlinearity(field->field, dealias != 0)};
  });
}

hwm_status hwm_snapshot_write(const hwm_field* field, const char* path) {
  return guard([&] {
    need(field, "field");
    need(path, "path");
    hwm::write_snapshot(field->field, path);
  });
}

hwm_status hwm_snapshot_read(const char* path, hwm_field** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new hwm_field{hwm::read_snapshot(path)};
  });
}

hwm_status hwm_config_load(const char* path, hwm_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new hwm_config{hwm::parse_config(path)};
  });
}

hwm_status hwm_config_parse(const char* text, hwm_config** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new hwm_config{hwm::parse_config_text(text)};
  });
}

hwm_status hwm_config_serialize(const hwm_config* cfg, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    need(cfg, "config");
    const std::string s = hwm::serialize_config(cfg->cfg);
    if (needed) *needed = s.size() + 1;
    if (buf && cap > 0) {
      const std::size_t n = std::min(cap - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
    }
  });
}

void hwm_config_destroy(hwm_config* cfg) { delete cfg; }

hwm_status hwm_run_simulate(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict) {
  return run_command(cfg, out_dir, verdict, hwm::run_simulate);
}

hwm_status hwm_run_picard_check(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict) {
  return run_command(cfg, out_dir, verdict, hwm::run_picard_check);
}

hwm_status hwm_run_sweep(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict) {
  return run_command(cfg, out_dir, verdict, hwm::run_sweep);
}

hwm_status hwm_run_weakres(const hwm_config* cfg, const char* trajectory_path, const char* out_dir,
                           hwm_verdict* verdict) {
  return guard([&] {
    need(cfg, "config");
    need(trajectory_path, "trajectory_path");
    need(out_dir, "out_dir");
    fill(verdict, hwm::run_weakres(cfg->cfg, trajectory_path, out_dir));
  });
}

hwm_status hwm_run_lp_split(const hwm_config* cfg, const char* out_dir, hwm_verdict* verdict) {
  return run_command(cfg, out_dir, verdict, hwm::run_lp_split);
}

hwm_status hwm_run_selftest(uint64_t seed, hwm_verdict* verdict) {
  return guard([&] { fill(verdict, hwm::run_selftest(seed)); });
}

const char* hwm_verdict_detail(size_t i) {
  return i < last_details.size() ? last_details[i].c_str() : nullptr;
}

}  // extern "C"
