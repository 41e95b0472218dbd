#include "topoiga/topoiga.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/pipeline.hpp"
#include "core/voxel_io.hpp"

struct tpi_grid {
  topoiga::VoxelGrid grid;
};

struct tpi_image {
  topoiga::BinaryImage image;
};

struct tpi_config {
  topoiga::PipelineConfig config;
};

namespace {

thread_local std::string last_error;

tpi_status fail(tpi_status s, const std::string& message) {
  last_error = message;
  return s;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, mapping exceptions to status codes.
template <class Fn>
tpi_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return TPI_OK;
  } catch (const topoiga::FormatError& e) {
    return fail(TPI_ERR_FORMAT, e.what());
  } catch (const topoiga::IoError& e) {
    return fail(TPI_ERR_IO, e.what());
  } catch (const topoiga::DimensionError& e) {
    return fail(TPI_ERR_DIMENSION, e.what());
  } catch (const topoiga::NumericalError& e) {
    return fail(TPI_ERR_NUMERICAL, e.what());
  } catch (const topoiga::Error& e) {
    return fail(TPI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TPI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TPI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TPI_ERR_INTERNAL, "unknown error");
  }
}

tpi_status null_argument(const char* name) { return fail(TPI_ERR_INVALID_ARGUMENT, std::string(name) + " is null"); }

void emit(const topoiga::Json& j, char** json) {
  if (json) *json = copy_string(j.dump(2));
}

}  // namespace

extern "C" {

const char* tpi_version(void) { return "0.1.0"; }

const char* tpi_status_string(tpi_status status) {
  switch (status) {
    case TPI_OK: return "ok";
    case TPI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TPI_ERR_FORMAT: return "format error";
    case TPI_ERR_DIMENSION: return "dimension error";
    case TPI_ERR_NUMERICAL: return "numerical error";
    case TPI_ERR_IO: return "i/o error";
    case TPI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tpi_last_error(void) { return last_error.c_str(); }

void tpi_string_free(char* s) { std::free(s); }

tpi_status tpi_grid_create(int ndim, const int* dims, const double* spacing, const double* origin,
                           const double* values, tpi_grid** out) {
  if (!dims || !spacing || !values || !out) return null_argument("argument");
  return guarded([&] {
    if (ndim < 1 || ndim > 3) throw topoiga::DimensionError("ndim must be 1, 2 or 3");
    topoiga::Index3 d{1, 1, 1};
    topoiga::Vec3 s{1.0, 1.0, 1.0}, o{0.0, 0.0, 0.0};
    for (int a = 0; a < ndim; ++a) {
      if (dims[a] < 1) throw topoiga::DimensionError("dims must be positive");
      d[a] = dims[a];
      s[a] = spacing[a];
      if (origin) o[a] = origin[a];
    }
    std::vector<double> v(values, values + topoiga::product(d));
    *out = new tpi_grid{topoiga::VoxelGrid(ndim, d, s, o, std::move(v))};
  });
}

tpi_status tpi_grid_read(const char* path, tpi_grid** out) {
  if (!path || !out) return null_argument("argument");
  return guarded([&] { *out = new tpi_grid{topoiga::read_voxels(std::string(path))}; });
}

tpi_status tpi_grid_write(const tpi_grid* grid, const char* path, int u8, int binary) {
  if (!grid || !path) return null_argument("argument");
  return guarded([&] {
    topoiga::write_voxels(std::string(path), grid->grid, u8 ? topoiga::VoxelType::u8 : topoiga::VoxelType::f64,
                          binary ? topoiga::VoxelEncoding::binary : topoiga::VoxelEncoding::ascii);
  });
}

tpi_status tpi_grid_shape(const tpi_grid* grid, int* ndim, int dims[3], double spacing[3]) {
  if (!grid) return null_argument("grid");
  if (ndim) *ndim = grid->grid.dim();
  for (int a = 0; a < 3; ++a) {
    if (dims) dims[a] = grid->grid.dims()[a];
    if (spacing) spacing[a] = grid->grid.spacing()[a];
  }
  last_error.clear();
  return TPI_OK;
}

tpi_status tpi_grid_values(const tpi_grid* grid, const double** values, size_t* count) {
  if (!grid || !values || !count) return null_argument("argument");
  *values = grid->grid.values().data();
  *count = grid->grid.size();
  last_error.clear();
  return TPI_OK;
}

void tpi_grid_free(tpi_grid* grid) { delete grid; }

tpi_status tpi_threshold(const tpi_grid* grid, double g_crit, tpi_image** out) {
  if (!grid || !out) return null_argument("argument");
  return guarded([&] { *out = new tpi_image{topoiga::threshold(grid->grid, g_crit)}; });
}

tpi_status tpi_image_count(const tpi_image* image, size_t* foreground) {
  if (!image || !foreground) return null_argument("argument");
  *foreground = image->image.count();
  last_error.clear();
  return TPI_OK;
}

tpi_status tpi_image_topology(const tpi_image* image, tpi_connectivity connectivity, int* regions, int* total_chi) {
  if (!image) return null_argument("image");
  if (connectivity != TPI_CONNECTIVITY_VERTEX && connectivity != TPI_CONNECTIVITY_FACE)
    return fail(TPI_ERR_INVALID_ARGUMENT, "unknown connectivity");
  return guarded([&] {
    const auto e = topoiga::euler_characteristic(
        image->image, connectivity == TPI_CONNECTIVITY_VERTEX ? topoiga::Connectivity::vertex : topoiga::Connectivity::face);
    if (regions) *regions = static_cast<int>(e.per_region_chi.size());
    if (total_chi) *total_chi = e.total_chi;
  });
}

void tpi_image_free(tpi_image* image) { delete image; }

tpi_status tpi_config_create(tpi_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new tpi_config{}; });
}

tpi_status tpi_config_load(tpi_config* config, const char* path) {
  if (!config || !path) return null_argument("argument");
  return guarded([&] { config->config = topoiga::apply_config(topoiga::read_config_file(path), config->config); });
}

tpi_status tpi_config_set(tpi_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return null_argument("argument");
  return guarded([&] { config->config = topoiga::apply_config({{key, value}}, config->config); });
}

tpi_status tpi_config_get(const tpi_config* config, const char* key, char** value) {
  if (!config || !key || !value) return null_argument("argument");
  return guarded([&] {
    const auto entries = topoiga::config_entries(config->config);
    const auto it = entries.find(key);
    if (it == entries.end()) throw topoiga::FormatError(std::string("unknown config key '") + key + "'");
    *value = copy_string(it->second);
  });
}

void tpi_config_free(tpi_config* config) { delete config; }

tpi_status tpi_ingest_info(const char* path, char** json) {
  if (!path) return null_argument("path");
  return guarded([&] { emit(topoiga::ingest_info(path), json); });
}

tpi_status tpi_segment(const tpi_config* config, char** json) {
  if (!config) return null_argument("config");
  return guarded([&] { emit(topoiga::run_segment(config->config), json); });
}

tpi_status tpi_detect(const tpi_config* config, char** json) {
  if (!config) return null_argument("config");
  return guarded([&] { emit(topoiga::run_detect(config->config), json); });
}

tpi_status tpi_refine(const tpi_config* config, char** json) {
  if (!config) return null_argument("config");
  return guarded([&] { emit(topoiga::run_refine(config->config), json); });
}

tpi_status tpi_tessellate(const tpi_config* config, char** json) {
  if (!config) return null_argument("config");
  return guarded([&] { emit(topoiga::run_tessellate(config->config), json); });
}

tpi_status tpi_solve(const tpi_config* config, tpi_solver solver, char** json) {
  if (!config) return null_argument("config");
  if (solver != TPI_SOLVER_ELASTICITY && solver != TPI_SOLVER_STOKES)
    return fail(TPI_ERR_INVALID_ARGUMENT, "unknown solver");
  return guarded([&] {
    emit(topoiga::run_solve(config->config, solver == TPI_SOLVER_ELASTICITY ? topoiga::SolverKind::elasticity
                                                                             : topoiga::SolverKind::stokes),
         json);
  });
}

tpi_status tpi_analyze_kernel(int degree, double h, const char* output_dir, char** json) {
  if (!output_dir) return null_argument("output_dir");
  return guarded([&] { emit(topoiga::analyze_kernel(degree, h, output_dir), json); });
}

tpi_status tpi_run_pipeline(const tpi_config* config, char** json) {
  if (!config) return null_argument("config");
  return guarded([&] { emit(topoiga::run_pipeline(config->config), json); });
}

}  // extern "C"
