/* Exercises the public C interface from C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "topoiga/topoiga.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_grid_and_topology(const char* dir) {
  const int dims[2] = {4, 4};
  const double spacing[2] = {0.25, 0.25};
  /* ring of voxels around one empty centre voxel in the lower-left 3x3 block */
  const double values[16] = {1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0};
  tpi_grid* grid = NULL;
  CHECK(tpi_grid_create(2, dims, spacing, NULL, values, &grid) == TPI_OK);

  int nd = 0, d[3];
  double s[3];
  CHECK(tpi_grid_shape(grid, &nd, d, s) == TPI_OK);
  CHECK(nd == 2 && d[0] == 4 && d[1] == 4 && d[2] == 1 && s[0] == 0.25);

  tpi_image* img = NULL;
  size_t fg = 0;
  int regions = 0, chi = 0;
  CHECK(tpi_threshold(grid, 0.5, &img) == TPI_OK);
  CHECK(tpi_image_count(img, &fg) == TPI_OK && fg == 8);
  CHECK(tpi_image_topology(img, TPI_CONNECTIVITY_VERTEX, &regions, &chi) == TPI_OK);
  CHECK(regions == 1 && chi == 0);
  tpi_image_free(img);

  char path[1024];
  snprintf(path, sizeof path, "%s/grid.tpv", dir);
  CHECK(tpi_grid_write(grid, path, 0, 1) == TPI_OK);
  tpi_grid* back = NULL;
  CHECK(tpi_grid_read(path, &back) == TPI_OK);
  const double* v = NULL;
  size_t n = 0;
  CHECK(tpi_grid_values(back, &v, &n) == TPI_OK);
  CHECK(n == 16 && memcmp(v, values, sizeof values) == 0);

  char* info = NULL;
  CHECK(tpi_ingest_info(path, &info) == TPI_OK);
  CHECK(info != NULL && strstr(info, "\"foreground_voxels\": 8") != NULL);
  tpi_string_free(info);

  tpi_grid_free(back);
  tpi_grid_free(grid);
}

static void test_errors(void) {
  tpi_grid* grid = NULL;
  const int dims[2] = {2, 2};
  const double spacing[2] = {1, 1};
  const double values[4] = {0, 1, 1, 0};
  CHECK(tpi_grid_create(2, dims, spacing, NULL, NULL, &grid) == TPI_ERR_INVALID_ARGUMENT);
  CHECK(strlen(tpi_last_error()) > 0);
  CHECK(tpi_grid_create(5, dims, spacing, NULL, values, &grid) != TPI_OK);
  CHECK(tpi_grid_read("/nonexistent/x.tpv", &grid) == TPI_ERR_IO);
  CHECK(grid == NULL);
  CHECK(strcmp(tpi_status_string(TPI_ERR_FORMAT), "format error") == 0);

  tpi_config* cfg = NULL;
  CHECK(tpi_config_create(&cfg) == TPI_OK);
  CHECK(tpi_config_set(cfg, "no_such_key", "1") == TPI_ERR_FORMAT);
  CHECK(strstr(tpi_last_error(), "no_such_key") != NULL);
  CHECK(tpi_config_set(cfg, "degree", "3") == TPI_OK);
  char* value = NULL;
  CHECK(tpi_config_get(cfg, "degree", &value) == TPI_OK && strcmp(value, "3") == 0);
  tpi_string_free(value);
  char* json = NULL;
  CHECK(tpi_run_pipeline(cfg, &json) == TPI_ERR_FORMAT); /* no input */
  CHECK(json == NULL);
  tpi_config_free(cfg);
}

static void test_pipeline(const char* dir) {
  enum { N = 12 };
  int dims[2] = {N, N};
  double spacing[2] = {1.0 / N, 1.0 / N};
  double values[N * N];
  for (int y = 0; y < N; ++y)
    for (int x = 0; x < N; ++x) values[x + N * y] = (x >= 3 && x < 9 && y >= 2 && y < 10) ? 1.0 : 0.0;
  tpi_grid* grid = NULL;
  CHECK(tpi_grid_create(2, dims, spacing, NULL, values, &grid) == TPI_OK);
  char input[1024], out[1024];
  snprintf(input, sizeof input, "%s/block.tpv", dir);
  snprintf(out, sizeof out, "%s/out", dir);
  CHECK(tpi_grid_write(grid, input, 1, 0) == TPI_OK);
  tpi_grid_free(grid);

  tpi_config* cfg = NULL;
  CHECK(tpi_config_create(&cfg) == TPI_OK);
  CHECK(tpi_config_set(cfg, "input", input) == TPI_OK);
  CHECK(tpi_config_set(cfg, "output_dir", out) == TPI_OK);
  CHECK(tpi_config_set(cfg, "mesh", "12") == TPI_OK);
  CHECK(tpi_config_set(cfg, "write_vtk", "false") == TPI_OK);
  char* json = NULL;
  CHECK(tpi_solve(cfg, TPI_SOLVER_ELASTICITY, &json) == TPI_OK);
  CHECK(json != NULL && strstr(json, "effective_modulus") != NULL);
  tpi_string_free(json);
  json = NULL;
  CHECK(tpi_run_pipeline(cfg, &json) == TPI_OK);
  CHECK(json != NULL && strstr(json, "\"passes\": 0") != NULL);
  tpi_string_free(json);
  tpi_config_free(cfg);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  CHECK(strlen(tpi_version()) > 0);
  test_grid_and_topology(dir);
  test_errors();
  test_pipeline(dir);
  if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
  else printf("C API: all checks passed\n");
  return failures ? 1 : 0;
}
