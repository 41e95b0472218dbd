#pragma once

#include <string>

#include <json.hpp>

#include "core/config.hpp"

namespace topoiga {

using Json = nlohmann::ordered_json;

/// Grid dimensions, value range and direct-segmentation topology of a voxel file.
Json ingest_info(const std::string& path, double g_crit = 0.5,
                 Connectivity connectivity = Connectivity::vertex);

/// Direct thresholding; writes segmentation.tpv.
Json run_segment(const PipelineConfig& config);

/// Uniform smoothing (h = voxel size) and one window scan; writes indicator.tpv
/// and flagged.csv.
Json run_detect(const PipelineConfig& config);

/// Topology-preserving smoothing; writes mesh.tpimesh and levelset.vtk.
Json run_refine(const PipelineConfig& config);

/// Corrected level set tessellated on the first analysis mesh; writes
/// tessellation.vtk.
Json run_tessellate(const PipelineConfig& config);

/// Solves on every analysis mesh (and on the uncorrected geometry when
/// config.compare); writes qoi.csv and solution VTKs.
Json run_solve(const PipelineConfig& config, SolverKind kind);

/// Kernel profile and frequency response; writes kernel.csv and frequency.csv.
Json analyze_kernel(int degree, double h, const std::string& output_dir);

/// ingest -> preserve_topology -> tessellate -> optional solve; writes
/// report.json next to the stage outputs and returns the report.
Json run_pipeline(const PipelineConfig& config);

}  // namespace topoiga
