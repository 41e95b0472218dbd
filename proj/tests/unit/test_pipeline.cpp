#include <doctest.h>

#include <fstream>
#include <sstream>

#include "core/pipeline.hpp"
#include "core/voxel_io.hpp"
#include "fixtures.hpp"
#include "temp_dir.hpp"

using namespace topoiga;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig config_for(const TempDir& dir, const VoxelGrid& grid, const std::string& out = "out") {
  write_voxels(dir.file("in.tpv"), grid, VoxelType::f64, VoxelEncoding::binary);
  PipelineConfig c;
  c.input = dir.file("in.tpv");
  c.output_dir = dir.file(out);
  return c;
}

}  // namespace

TEST_CASE("faithful image needs no correction pass") {
  TempDir dir;
  const PipelineConfig c = config_for(dir, fixtures::disk());
  const Json r = run_pipeline(c);
  CHECK(r["format"] == "topoiga-report");
  CHECK(r["topology"]["passes"] == 0);
  CHECK(r["topology"]["evaluations"][0]["flagged_voxels"] == 0);
  CHECK(r["segmentation"]["regions"] == 1);
  CHECK(std::filesystem::exists(dir.file("out/segmentation.tpv")));
  CHECK(std::filesystem::exists(dir.file("out/report.json")));
  CHECK(Json::parse(slurp(dir.file("out/report.json"))) == r);
  CHECK(read_voxels(dir.file("out/segmentation.tpv")).dims() == Index3{24, 24, 1});
}

TEST_CASE("thin features: one pass and at least two flagged zones") {
  TempDir dir;
  const PipelineConfig c = config_for(dir, fixtures::bridge_and_channel());
  const Json r = run_pipeline(c);
  CHECK(r["topology"]["passes"] == 1);
  CHECK(r["topology"]["evaluations"][0]["flagged_zones"].get<int>() >= 2);
  CHECK(r["topology"]["converged"] == true);
  CHECK(r["topology"]["smooth_after"]["chi_multiset"] == r["segmentation"]["chi_multiset"]);
  CHECK(r["topology"]["smooth_before"]["chi_multiset"] != r["segmentation"]["chi_multiset"]);
}

TEST_CASE("elasticity comparison reports both variants and is deterministic") {
  TempDir dir;
  PipelineConfig c = config_for(dir, fixtures::bridged_frame(), "a");
  c.solver = SolverKind::elasticity;
  c.compare = true;
  c.mesh = {16};
  c.write_vtk = false;
  const Json r = run_pipeline(c);
  const Json& runs = r["solver"]["runs"];
  REQUIRE(runs.size() == 2);
  CHECK(runs[0]["variant"] == "with_fix");
  CHECK(runs[1]["variant"] == "without_fix");
  CHECK(runs[1]["qoi"].get<double>() < runs[0]["qoi"].get<double>());

  c.output_dir = dir.file("b");
  run_pipeline(c);
  const std::string a = slurp(dir.file("a/qoi.csv")), b = slurp(dir.file("b/qoi.csv"));
  CHECK(a.rfind("variant,cells,h,dofs,qoi\n", 0) == 0);
  CHECK(a == b);
}

TEST_CASE("stage errors name the stage") {
  TempDir dir;
  PipelineConfig c;
  c.input = dir.file("missing.tpv");
  try {
    run_pipeline(c);
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).rfind("ingest:", 0) == 0);
  }
  {
    std::ofstream f(dir.file("bad.tpv"));
    f << "TPIVOX 1\nndim 2\n";
  }
  c.input = dir.file("bad.tpv");
  CHECK_THROWS_AS(run_pipeline(c), FormatError);
}

TEST_CASE("kernel analysis writes both tables") {
  TempDir dir;
  const Json r = analyze_kernel(3, 0.5, dir.file("k"));
  CHECK(r["sigma"].get<double>() == doctest::Approx(0.5 * std::sqrt(4.0 / 6.0)));
  CHECK(slurp(dir.file("k/kernel.csv")).rfind("x,exact_kernel,gaussian_kernel\n", 0) == 0);
  CHECK(slurp(dir.file("k/frequency.csv")).rfind("xi,K\n", 0) == 0);
}

TEST_CASE("detect stage writes the indicator") {
  TempDir dir;
  const PipelineConfig c = config_for(dir, fixtures::bridge_and_channel());
  const Json r = run_detect(c);
  CHECK(r["flagged_voxels"].get<int>() > 0);
  const VoxelGrid ind = read_voxels(dir.file("out/indicator.tpv"));
  double flagged = 0.0;
  for (double v : ind.values()) flagged += v;
  CHECK(flagged == r["flagged_voxels"].get<double>());
}
