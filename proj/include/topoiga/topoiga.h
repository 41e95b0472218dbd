/* topoiga: topology-preserving spline segmentation of voxel data and
 * immersed isogeometric analysis on the result.
 *
 * All functions return a tpi_status. On failure, tpi_last_error() returns a
 * thread-local message describing the most recent error on the calling
 * thread. Strings returned through char** must be released with
 * tpi_string_free; handles with their matching *_free function.
 */
#ifndef TOPOIGA_TOPOIGA_H
#define TOPOIGA_TOPOIGA_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(TOPOIGA_BUILDING_LIBRARY)
#define TPI_API __declspec(dllexport)
#else
#define TPI_API __declspec(dllimport)
#endif
#else
#define TPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tpi_status {
  TPI_OK = 0,
  TPI_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, out-of-range value */
  TPI_ERR_FORMAT = 2,           /* malformed file or configuration */
  TPI_ERR_DIMENSION = 3,        /* mismatched shapes or unsupported dimension */
  TPI_ERR_NUMERICAL = 4,        /* singular or failed linear solve */
  TPI_ERR_IO = 5,               /* file could not be read or written */
  TPI_ERR_INTERNAL = 6
} tpi_status;

typedef enum tpi_connectivity { TPI_CONNECTIVITY_VERTEX = 0, TPI_CONNECTIVITY_FACE = 1 } tpi_connectivity;

typedef enum tpi_solver { TPI_SOLVER_ELASTICITY = 1, TPI_SOLVER_STOKES = 2 } tpi_solver;

typedef struct tpi_grid tpi_grid;
typedef struct tpi_image tpi_image;
typedef struct tpi_config tpi_config;

TPI_API const char* tpi_version(void);
TPI_API const char* tpi_status_string(tpi_status status);
TPI_API const char* tpi_last_error(void);
TPI_API void tpi_string_free(char* s);

/* Voxel grids. Values are normalized to [0, 1], x fastest; unused axes of the
 * 3-element arrays are ignored. */
TPI_API tpi_status tpi_grid_create(int ndim, const int* dims, const double* spacing, const double* origin,
                                   const double* values, tpi_grid** out);
TPI_API tpi_status tpi_grid_read(const char* path, tpi_grid** out);
TPI_API tpi_status tpi_grid_write(const tpi_grid* grid, const char* path, int u8, int binary);
TPI_API tpi_status tpi_grid_shape(const tpi_grid* grid, int* ndim, int dims[3], double spacing[3]);
TPI_API tpi_status tpi_grid_values(const tpi_grid* grid, const double** values, size_t* count);
TPI_API void tpi_grid_free(tpi_grid* grid);

/* Binary images and their topology. */
TPI_API tpi_status tpi_threshold(const tpi_grid* grid, double g_crit, tpi_image** out);
TPI_API tpi_status tpi_image_count(const tpi_image* image, size_t* foreground);
TPI_API tpi_status tpi_image_topology(const tpi_image* image, tpi_connectivity connectivity, int* regions,
                                      int* total_chi);
TPI_API void tpi_image_free(tpi_image* image);

/* Pipeline configuration: defaults, then an optional key=value file, then
 * individual settings (later settings win). */
TPI_API tpi_status tpi_config_create(tpi_config** out);
TPI_API tpi_status tpi_config_load(tpi_config* config, const char* path);
TPI_API tpi_status tpi_config_set(tpi_config* config, const char* key, const char* value);
TPI_API tpi_status tpi_config_get(const tpi_config* config, const char* key, char** value);
TPI_API void tpi_config_free(tpi_config* config);

/* Stages. Each writes its files into the configured output directory and
 * returns a JSON summary through `json` (may be NULL). */
TPI_API tpi_status tpi_ingest_info(const char* path, char** json);
TPI_API tpi_status tpi_segment(const tpi_config* config, char** json);
TPI_API tpi_status tpi_detect(const tpi_config* config, char** json);
TPI_API tpi_status tpi_refine(const tpi_config* config, char** json);
TPI_API tpi_status tpi_tessellate(const tpi_config* config, char** json);
TPI_API tpi_status tpi_solve(const tpi_config* config, tpi_solver solver, char** json);
TPI_API tpi_status tpi_analyze_kernel(int degree, double h, const char* output_dir, char** json);
TPI_API tpi_status tpi_run_pipeline(const tpi_config* config, char** json);

#ifdef __cplusplus
}
#endif

#endif
