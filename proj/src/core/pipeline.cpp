#include "core/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <memory>
#include <fstream>
#include <sstream>

#include "core/voxel_io.hpp"
#include "core/vtk_io.hpp"

namespace topoiga {

namespace {

namespace fs = std::filesystem;

// Re-throws stage errors with the stage name in front, keeping the error kind.
template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  auto tag = [name](const std::exception& e) { return std::string(name) + ": " + e.what(); };
  try {
    return fn();
  } catch (const FormatError& e) {
    throw FormatError(tag(e));
  } catch (const DimensionError& e) {
    throw DimensionError(tag(e));
  } catch (const NumericalError& e) {
    throw NumericalError(tag(e));
  } catch (const IoError& e) {
    throw IoError(tag(e));
  } catch (const Error& e) {
    throw Error(tag(e));
  }
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(12);
  ss << x;
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

void write_mesh(const fs::path& path, const HierarchicalMesh& mesh) {
  std::ostringstream ss;
  mesh.write(ss);
  write_text(path, ss.str());
}

fs::path output_dir(const PipelineConfig& c) {
  fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + c.output_dir);
  return dir;
}

VoxelGrid load(const PipelineConfig& c) {
  if (c.input.empty()) throw FormatError("no input file given");
  return read_voxels(c.input);
}

Json chi_json(const EulerSummary& e) {
  Json m = Json::object();
  for (const auto& [chi, n] : e.chi_multiset) m[std::to_string(chi)] = n;
  return m;
}

Json topology_json(const BinaryImage& img, Connectivity conn) {
  const EulerSummary e = euler_characteristic(img, conn);
  return Json{{"regions", e.per_region_chi.size()}, {"total_chi", e.total_chi}, {"chi_multiset", chi_json(e)}};
}

TopologyParams topology_params(const PipelineConfig& c) {
  TopologyParams p;
  p.degree = c.degree;
  p.g_crit = c.g_crit;
  p.radius = c.radius;
  p.n_sub = c.n_sub;
  p.max_passes = c.max_passes;
  p.connectivity = c.connectivity;
  return p;
}

QuadratureSchedule schedule(const PipelineConfig& c) {
  QuadratureSchedule s;
  s.k_max = c.k_max;
  s.rho_max = c.rho_max;
  s.decay = c.order_decay;
  return s;
}

BackgroundMesh analysis_mesh(const Box& box, int nd, int cells_x) {
  BackgroundMesh m;
  m.nd = nd;
  m.box = box;
  for (int a = 0; a < nd; ++a) {
    const double n = cells_x * box.length(a) / box.length(0);
    const long r = std::lround(n);
    if (r < 1 || std::abs(n - r) > 1e-9 * n) throw FormatError("mesh size does not tile the image box");
    m.cells[a] = static_cast<int>(r);
  }
  return m;
}

int refined_cells(const HierarchicalMesh& mesh) {
  int n = 0;
  for (const LevelCell& c : mesh.active_cells()) n += c.level > 0;
  return n;
}

int zones(const BinaryImage& indicator) { return label_components(indicator, Connectivity::vertex).region_count; }

void write_levelset_vtk(const fs::path& path, const LevelSetField& field, const VoxelGrid& grid) {
  const int nd = grid.dim();
  const int per = nd == 3 ? 2 : 4;
  Index3 pts{1, 1, 1};
  Vec3 h{1.0, 1.0, 1.0};
  for (int a = 0; a < nd; ++a) {
    pts[a] = grid.dims()[a] * per + 1;
    h[a] = grid.spacing()[a] / per;
  }
  std::vector<Vec3> x;
  x.reserve(product(pts));
  for_each_index(nd, {0, 0, 0}, pts, [&](const Index3& i) {
    Vec3 p = grid.origin();
    for (int a = 0; a < nd; ++a) p[a] += i[a] * h[a];
    x.push_back(p);
  });
  write_structured_points_vtk(path.string(), nd, pts, grid.origin(), h, "levelset", field.evaluate(x));
}

Json tessellation_json(const TessellatedDomain& d) {
  Json j{{"cells", std::vector<int>(d.mesh.cells.begin(), d.mesh.cells.begin() + d.nd)},
         {"interior_cells", d.interior_cells.size()},
         {"cut_cells", d.cut_cells.size()},
         {"volume", d.volume()},
         {"immersed_boundary_measure", d.immersed_boundary_measure()},
         {"degenerate_crossings", d.degenerate_crossings}};
  return j;
}

struct SolveRun {
  Json json;
  std::string csv_row;
};

SolveRun solve_once(const PipelineConfig& c, SolverKind kind, const LevelSetField& field, int cells,
                    const std::string& variant, const fs::path& vtk_path) {
  const ImplicitGeometry geom = ImplicitGeometry::from_field(field, c.g_crit);
  const BackgroundMesh mesh = analysis_mesh(field.box(), field.dim(), cells);
  const TessellatedDomain dom = stage("tessellate", [&] { return tessellate(geom, mesh, {c.rho_max}); });
  const BackgroundDiscretization disc(dom, c.degree, schedule(c));
  Json j{{"variant", variant},
         {"cells", cells},
         {"h", disc.h()},
         {"active_cells", dom.interior_cells.size() + dom.cut_cells.size()},
         {"cut_cells", dom.cut_cells.size()},
         {"ghost_faces", disc.ghost_face_count()}};
  double qoi = 0.0;
  std::size_t dofs = 0;
  if (kind == SolverKind::elasticity) {
    ElasticityProblem pr;
    pr.lambda = c.lambda;
    pr.mu = c.mu;
    pr.u_bar = c.u_bar;
    const ElasticitySolution sol = stage("solve-elasticity", [&] { return solve_elasticity(disc, pr); });
    qoi = effective_modulus(disc, sol, pr);
    dofs = sol.dofs;
    j["dofs"] = sol.dofs;
    j["constrained_dofs"] = sol.constrained;
    j["relative_residual"] = sol.relative_residual;
    j["qoi"] = qoi;
    if (!vtk_path.empty())
      write_tessellation_vtk(vtk_path.string(), dom,
                             {{"displacement", 3, [&](const Vec3& x) { return displacement(disc, sol, x); }},
                              {"sigma22", 1, [&](const Vec3& x) { return Vec3{stress(disc, sol, pr, x)[1], 0, 0}; }}});
  } else {
    StokesProblem pr;
    pr.mu = c.viscosity;
    pr.p_bar = c.p_bar;
    pr.beta = c.beta;
    pr.gamma = c.gamma;
    pr.gamma_ghost = c.gamma_ghost;
    pr.ghost = c.ghost;
    pr.skeleton = c.skeleton;
    pr.sides = c.sides;
    const StokesSolution sol = stage("solve-stokes", [&] { return solve_stokes(disc, pr); });
    qoi = outflow_flux(disc, sol, c.flux_side, c.flux_lo, c.flux_hi);
    dofs = sol.dofs;
    j["dofs"] = sol.dofs;
    j["relative_residual"] = sol.relative_residual;
    j["qoi"] = qoi;
    j["side_flux"] = outflow_flux(disc, sol, c.flux_side);
    if (!vtk_path.empty())
      write_tessellation_vtk(vtk_path.string(), dom,
                             {{"velocity", 3, [&](const Vec3& x) { return velocity(disc, sol, x); }},
                              {"pressure", 1, [&](const Vec3& x) { return Vec3{pressure(disc, sol, x), 0, 0}; }}});
  }
  return {j, variant + "," + std::to_string(cells) + "," + fmt(disc.h()) + "," + std::to_string(dofs) + "," + fmt(qoi)};
}

Json solve_all(const PipelineConfig& c, SolverKind kind, const VoxelGrid& grid, const LevelSetField& fixed,
               const fs::path& dir) {
  if (grid.dim() != 2) throw DimensionError("the immersed solvers are two-dimensional");
  const std::string tag = to_string(kind);
  std::vector<std::pair<std::string, const LevelSetField*>> variants{{"with_fix", &fixed}};
  std::unique_ptr<LevelSetField> plain;
  if (c.compare) {
    plain = std::make_unique<LevelSetField>(smooth_level_set(grid, base_mesh(grid), c.degree));
    variants.emplace_back("without_fix", plain.get());
  }
  Json runs = Json::array();
  std::string csv = "variant,cells,h,dofs,qoi\n";
  for (const auto& [name, field] : variants)
    for (std::size_t m = 0; m < c.mesh.size(); ++m) {
      fs::path vtk;
      if (c.write_vtk && m + 1 == c.mesh.size()) vtk = dir / (tag + "_" + name + ".vtk");
      SolveRun r = solve_once(c, kind, *field, c.mesh[m], name, vtk);
      runs.push_back(r.json);
      csv += r.csv_row + "\n";
    }
  write_text(dir / "qoi.csv", csv);
  return Json{{"kind", tag},
              {"qoi", kind == SolverKind::elasticity ? "effective_modulus" : "outflow_flux"},
              {"runs", runs}};
}

Json topology_report(const PipelineConfig& c, const VoxelGrid& grid, const TopologyResult& r) {
  Json passes = Json::array();
  for (const BinaryImage& ind : r.indicators)
    passes.push_back(Json{{"flagged_voxels", ind.count()}, {"flagged_zones", zones(ind)}});
  const LevelSetField plain = smooth_level_set(grid, base_mesh(grid), c.degree);
  return Json{{"passes", r.refinements},
              {"evaluations", passes},
              {"refined_cells", refined_cells(r.mesh)},
              {"levels", r.mesh.max_level()},
              {"converged", r.converged},
              {"smooth_before", topology_json(voxelize_smooth(plain, c.n_sub, c.g_crit), c.connectivity)},
              {"smooth_after", topology_json(voxelize_smooth(r.field, c.n_sub, c.g_crit), c.connectivity)},
              {"warnings", r.warnings}};
}

}  // namespace

Json ingest_info(const std::string& path, double g_crit, Connectivity connectivity) {
  const VoxelGrid grid = stage("ingest", [&] { return read_voxels(path); });
  const int nd = grid.dim();
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (double v : grid.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  const BinaryImage seg = threshold(grid, g_crit);
  return Json{{"path", path},
              {"ndim", nd},
              {"dims", std::vector<int>(grid.dims().begin(), grid.dims().begin() + nd)},
              {"spacing", std::vector<double>(grid.spacing().begin(), grid.spacing().begin() + nd)},
              {"origin", std::vector<double>(grid.origin().begin(), grid.origin().begin() + nd)},
              {"min", lo},
              {"max", hi},
              {"mean", sum / static_cast<double>(grid.size())},
              {"foreground_voxels", seg.count()},
              {"segmentation", topology_json(seg, connectivity)}};
}

Json run_segment(const PipelineConfig& c) {
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  const BinaryImage seg = threshold(grid, c.g_crit);
  write_binary_image((dir / "segmentation.tpv").string(), seg, grid.box());
  Json j = topology_json(seg, c.connectivity);
  j["foreground_voxels"] = seg.count();
  return j;
}

Json run_detect(const PipelineConfig& c) {
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  return stage("detect", [&] {
    const LevelSetField plain = smooth_level_set(grid, base_mesh(grid), c.degree);
    const BinaryImage smooth = voxelize_smooth(plain, c.n_sub, c.g_crit);
    const BinaryImage indicator = scan(threshold(grid, c.g_crit), smooth, c.radius, c.connectivity);
    write_binary_image((dir / "indicator.tpv").string(), indicator, grid.box());
    std::ostringstream csv;
    csv << "i,j,k\n";
    for (std::size_t n = 0; n < indicator.size(); ++n)
      if (indicator[n]) {
        const Index3 i = unravel_index(n, indicator.dims());
        csv << i[0] << ',' << i[1] << ',' << i[2] << '\n';
      }
    write_text(dir / "flagged.csv", csv.str());
    return Json{{"flagged_voxels", indicator.count()},
                {"flagged_zones", zones(indicator)},
                {"ring_indicators", ring_indicator_count(indicator)},
                {"voxels", topology_json(threshold(grid, c.g_crit), c.connectivity)},
                {"smooth", topology_json(smooth, c.connectivity)}};
  });
}

Json run_refine(const PipelineConfig& c) {
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  const TopologyResult r = stage("refine", [&] { return preserve_topology(grid, topology_params(c)); });
  write_mesh(dir / "mesh.tpimesh", r.mesh);
  if (c.write_vtk) write_levelset_vtk(dir / "levelset.vtk", r.field, grid);
  return topology_report(c, grid, r);
}

Json run_tessellate(const PipelineConfig& c) {
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  const TopologyResult r = stage("refine", [&] { return preserve_topology(grid, topology_params(c)); });
  return stage("tessellate", [&] {
    const BackgroundMesh mesh = analysis_mesh(grid.box(), grid.dim(), c.mesh.front());
    const TessellatedDomain dom = tessellate(ImplicitGeometry::from_field(r.field, c.g_crit), mesh, {c.rho_max});
    if (c.write_vtk) write_tessellation_vtk((dir / "tessellation.vtk").string(), dom);
    return tessellation_json(dom);
  });
}

Json run_solve(const PipelineConfig& c, SolverKind kind) {
  if (kind == SolverKind::none) throw FormatError("no solver selected");
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  const TopologyResult r = stage("refine", [&] { return preserve_topology(grid, topology_params(c)); });
  return solve_all(c, kind, grid, r.field, dir);
}

Json analyze_kernel(int degree, double h, const std::string& output_dir_path) {
  if (degree < 1) throw FormatError("degree must be positive");
  if (!(h > 0.0)) throw FormatError("mesh size must be positive");
  PipelineConfig c;
  c.output_dir = output_dir_path;
  const fs::path dir = output_dir(c);
  const double sigma = gaussian_kernel_width(h, degree);
  const KernelProfile prof = kernel_profile(degree, h);
  std::ostringstream k;
  k << "x,exact_kernel,gaussian_kernel\n";
  for (std::size_t i = 0; i < prof.x.size(); ++i)
    k << fmt(prof.x[i]) << ',' << fmt(prof.exact[i]) << ',' << fmt(prof.gaussian[i]) << '\n';
  write_text(dir / "kernel.csv", k.str());
  std::ostringstream f;
  f << "xi,K\n";
  const double xi_max = 3.0 / sigma;
  for (int i = 0; i <= 300; ++i) {
    const double xi = xi_max * i / 300.0;
    f << fmt(xi) << ',' << fmt(frequency_response(xi, sigma)) << '\n';
  }
  write_text(dir / "frequency.csv", f.str());
  return Json{{"degree", degree},
              {"h", h},
              {"sigma", sigma},
              {"fitted_sigma", fitted_kernel_width(degree, h)},
              {"sup_error", kernel_vs_gaussian_error(degree, h)},
              {"feature_peak", smoothed_feature_peak(1.0, degree, false)},
              {"feature_peak_linear", smoothed_feature_peak(1.0, degree, true)}};
}

Json run_pipeline(const PipelineConfig& c) {
  const VoxelGrid grid = stage("ingest", [&] { return load(c); });
  const fs::path dir = output_dir(c);
  const int nd = grid.dim();
  Json report;
  report["format"] = "topoiga-report";
  report["version"] = 1;
  report["input"] = Json{{"path", c.input},
                         {"ndim", nd},
                         {"dims", std::vector<int>(grid.dims().begin(), grid.dims().begin() + nd)},
                         {"spacing", std::vector<double>(grid.spacing().begin(), grid.spacing().begin() + nd)}};
  Json params = Json::object();
  for (const auto& [k, v] : config_entries(c))
    if (k != "input" && k != "output_dir") params[k] = v;
  report["parameters"] = params;

  const BinaryImage seg = threshold(grid, c.g_crit);
  write_binary_image((dir / "segmentation.tpv").string(), seg, grid.box());
  report["segmentation"] = topology_json(seg, c.connectivity);
  report["segmentation"]["foreground_voxels"] = seg.count();

  const TopologyResult r = stage("refine", [&] { return preserve_topology(grid, topology_params(c)); });
  report["topology"] = topology_report(c, grid, r);
  write_mesh(dir / "mesh.tpimesh", r.mesh);
  if (!r.indicators.empty()) write_binary_image((dir / "indicator.tpv").string(), r.indicators.front(), grid.box());
  if (c.write_vtk) write_levelset_vtk(dir / "levelset.vtk", r.field, grid);

  report["tessellation"] = stage("tessellate", [&] {
    const BackgroundMesh mesh = analysis_mesh(grid.box(), nd, c.mesh.front());
    const TessellatedDomain dom = tessellate(ImplicitGeometry::from_field(r.field, c.g_crit), mesh, {c.rho_max});
    if (c.write_vtk) write_tessellation_vtk((dir / "tessellation.vtk").string(), dom);
    return tessellation_json(dom);
  });

  if (c.solver != SolverKind::none)
    report["solver"] = solve_all(c, c.solver, grid, r.field, dir);
  else
    report["solver"] = Json{{"kind", "none"}, {"runs", Json::array()}};

  write_text(dir / "report.json", report.dump(2) + "\n");
  return report;
}

}  // namespace topoiga
