#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "core/immersed_solver.hpp"
#include "core/topo_guard.hpp"

namespace topoiga {

enum class SolverKind { none, elasticity, stokes };

struct PipelineConfig {
  std::string input;
  std::string output_dir = "out";

  int degree = 2;
  double g_crit = 0.5;
  int radius = 1;
  int n_sub = 3;
  int max_passes = 1;
  Connectivity connectivity = Connectivity::vertex;

  int rho_max = 3;
  int k_max = 3;
  double order_decay = 1.0;
  std::vector<int> mesh{32};  // analysis cells along x, one run per entry

  SolverKind solver = SolverKind::none;
  bool compare = false;  // also solve on the uncorrected geometry

  double lambda = 0.5;
  double mu = 0.5;
  double u_bar = 0.2;

  double viscosity = 1.0;
  double p_bar = 1.0;
  double beta = 100.0;
  double gamma = 0.05;
  double gamma_ghost = 0.0005;
  bool ghost = true;
  bool skeleton = true;
  std::array<SideKind, 4> sides{SideKind::none, SideKind::none, SideKind::inflow, SideKind::outflow};
  int flux_side = 3;
  double flux_lo = -1e300;
  double flux_hi = 1e300;

  bool write_vtk = true;
};

/// Flat key=value text. Blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Apply settings on top of `base`; unknown keys and out-of-range values throw
/// FormatError naming the key.
PipelineConfig apply_config(const std::map<std::string, std::string>& settings, PipelineConfig base = {});

/// defaults < file < flags.
PipelineConfig resolve_config(const std::string& file, const std::map<std::string, std::string>& flags);

/// All recognised keys with their current values, in key order.
std::map<std::string, std::string> config_entries(const PipelineConfig& config);

std::string to_string(SolverKind kind);
std::string to_string(SideKind kind);

}  // namespace topoiga
