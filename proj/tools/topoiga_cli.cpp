// Command-line driver over the topoiga C API.
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topoiga/topoiga.h"

namespace {

// Config keys that can be given as --flags (underscores become dashes).
const std::vector<std::string> kKeys = {
    "output_dir", "degree",    "g_crit",    "radius",    "n_sub",    "max_passes",  "connectivity", "rho_max",
    "k_max",      "order_decay", "mesh",    "solver",    "compare",  "lambda",      "mu",           "u_bar",
    "viscosity",  "p_bar",     "beta",      "gamma",     "gamma_ghost", "ghost",    "skeleton",     "sides",
    "flux_side",  "flux_range", "write_vtk"};

std::string flag_name(std::string key) {
  for (char& ch : key)
    if (ch == '_') ch = '-';
  return "--" + key;
}

struct StageOptions {
  std::string input;
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

void add_stage_options(CLI::App* app, StageOptions& o, bool with_solver_flags) {
  app->add_option("input", o.input, "Voxel file (TPIVOX format)");
  app->add_option("-c,--config", o.config_file, "key=value configuration file");
  app->add_option("--set", o.sets, "Extra key=value setting (repeatable)");
  for (const std::string& key : kKeys) {
    if (!with_solver_flags && key == "solver") continue;
    app->add_option_function<std::string>(flag_name(key), [&o, key](const std::string& v) { o.flags[key] = v; },
                                          "Override config key " + key);
  }
}

int report(tpi_status s, char* json) {
  if (s != TPI_OK) {
    std::fprintf(stderr, "topoiga: %s: %s\n", tpi_status_string(s), tpi_last_error());
    return static_cast<int>(s);
  }
  if (json) std::printf("%s\n", json);
  tpi_string_free(json);
  return 0;
}

// Builds the config (defaults < file < flags); returns nullptr after printing
// the error.
tpi_config* make_config(const StageOptions& o, int* code) {
  tpi_config* cfg = nullptr;
  tpi_status s = tpi_config_create(&cfg);
  if (s == TPI_OK && !o.config_file.empty()) s = tpi_config_load(cfg, o.config_file.c_str());
  if (s == TPI_OK && !o.input.empty()) s = tpi_config_set(cfg, "input", o.input.c_str());
  for (const std::string& kv : o.sets) {
    if (s != TPI_OK) break;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "topoiga: --set expects key=value, got '%s'\n", kv.c_str());
      tpi_config_free(cfg);
      *code = TPI_ERR_INVALID_ARGUMENT;
      return nullptr;
    }
    s = tpi_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
  }
  for (const auto& [key, value] : o.flags) {
    if (s != TPI_OK) break;
    s = tpi_config_set(cfg, key.c_str(), value.c_str());
  }
  if (s != TPI_OK) {
    *code = report(s, nullptr);
    tpi_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology-preserving spline segmentation and immersed analysis of voxel data"};
  app.set_version_flag("--version", std::string(tpi_version()));
  app.require_subcommand(1);

  std::string info_path;
  auto* info = app.add_subcommand("ingest-info", "Describe a voxel file");
  info->add_option("input", info_path, "Voxel file")->required();

  struct Stage {
    const char* name;
    const char* help;
    StageOptions opts;
  };
  std::vector<Stage> stages = {
      {"segment", "Threshold the voxels (direct segmentation)", {}},
      {"detect", "Smooth on the voxel mesh and flag topology changes", {}},
      {"refine", "Topology-preserving smoothing with local THB refinement", {}},
      {"tessellate", "Tessellate the corrected level set on the analysis mesh", {}},
      {"solve-elasticity", "Effective modulus of the corrected geometry", {}},
      {"solve-stokes", "Stokes outflow through the corrected geometry", {}},
      {"pipeline", "Run all stages and write report.json", {}},
  };
  std::vector<CLI::App*> subs;
  for (Stage& st : stages) {
    CLI::App* sub = app.add_subcommand(st.name, st.help);
    add_stage_options(sub, st.opts, std::string(st.name) == "pipeline");
    subs.push_back(sub);
  }

  int k_degree = 2;
  double k_h = 1.0;
  std::string k_out = "out";
  auto* kernel = app.add_subcommand("analyze-kernel", "Spline smoothing kernel versus its Gaussian model");
  kernel->add_option("-p,--degree", k_degree, "Spline degree")->check(CLI::Range(1, 8));
  kernel->add_option("--mesh-size", k_h, "Mesh size h")->check(CLI::PositiveNumber);
  kernel->add_option("-o,--output-dir", k_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (*info) {
    char* json = nullptr;
    const tpi_status s = tpi_ingest_info(info_path.c_str(), &json);
    return report(s, json);
  }
  if (*kernel) {
    char* json = nullptr;
    const tpi_status s = tpi_analyze_kernel(k_degree, k_h, k_out.c_str(), &json);
    return report(s, json);
  }
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!*subs[i]) continue;
    int code = 0;
    tpi_config* cfg = make_config(stages[i].opts, &code);
    if (!cfg) return code;
    const std::string name = stages[i].name;
    char* json = nullptr;
    tpi_status s;
    if (name == "segment") s = tpi_segment(cfg, &json);
    else if (name == "detect") s = tpi_detect(cfg, &json);
    else if (name == "refine") s = tpi_refine(cfg, &json);
    else if (name == "tessellate") s = tpi_tessellate(cfg, &json);
    else if (name == "solve-elasticity") s = tpi_solve(cfg, TPI_SOLVER_ELASTICITY, &json);
    else if (name == "solve-stokes") s = tpi_solve(cfg, TPI_SOLVER_STOKES, &json);
    else s = tpi_run_pipeline(cfg, &json);
    tpi_config_free(cfg);
    return report(s, json);
  }
  return 0;
}
