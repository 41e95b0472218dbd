#include <doctest.h>

#include <fstream>
#include <sstream>

#include "core/config.hpp"
#include "core/voxel_io.hpp"
#include "core/vtk_io.hpp"
#include "temp_dir.hpp"

using namespace topoiga;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VoxelGrid parse(const std::string& text) {
  std::istringstream in(text);
  return read_voxels(in);
}

}  // namespace

TEST_CASE("2x2 ascii voxel file") {
  const VoxelGrid g = parse("TPIVOX 1\nndim 2\ndims 2 2\nspacing 0.5 0.25\ntype f64\nencoding ascii\ndata\n0 1\n1 0\n");
  CHECK(g.dim() == 2);
  CHECK(g.dims() == Index3{2, 2, 1});
  CHECK(g.values() == std::vector<double>{0, 1, 1, 0});
  CHECK(g.spacing()[1] == 0.25);
  CHECK(g.box().hi[0] == 1.0);
}

TEST_CASE("u8 payload is normalized by 255") {
  const VoxelGrid g = parse("TPIVOX 1\nndim 1\ndims 3\nspacing 1\norigin -1\ntype u8\nencoding ascii\ndata\n0 255 51\n");
  CHECK(g.values()[1] == 1.0);
  CHECK(g.values()[2] == doctest::Approx(0.2));
  CHECK(g.origin()[0] == -1.0);
}

TEST_CASE("binary round trip is bit-identical") {
  const VoxelGrid g(3, {3, 2, 2}, {0.1, 0.2, 0.3}, {1, 2, 3},
                    {0.0, 1.0 / 3.0, 0.5, 1.0, 0.125, 0.7, 0.9, 0.0, 1e-17, 0.25, 0.999, 0.4});
  for (VoxelEncoding enc : {VoxelEncoding::binary, VoxelEncoding::ascii}) {
    std::stringstream ss;
    write_voxels(ss, g, VoxelType::f64, enc);
    const VoxelGrid r = read_voxels(ss);
    CHECK(r.values() == g.values());
    CHECK(r.spacing() == g.spacing());
    CHECK(r.origin() == g.origin());
  }
  std::stringstream first, second;
  write_voxels(first, g, VoxelType::f64, VoxelEncoding::binary);
  write_voxels(second, read_voxels(first), VoxelType::f64, VoxelEncoding::binary);
  first.clear();
  first.seekg(0);
  CHECK(first.str() == second.str());
}

TEST_CASE("u8 binary round trip") {
  const VoxelGrid g(2, {2, 2, 1}, {1, 1, 1}, {0, 0, 0}, {0.0, 1.0, 128.0 / 255.0, 7.0 / 255.0});
  std::stringstream ss;
  write_voxels(ss, g, VoxelType::u8, VoxelEncoding::binary);
  CHECK(read_voxels(ss).values() == g.values());
}

TEST_CASE("malformed voxel files") {
  const std::string head = "TPIVOX 1\nndim 2\ndims 2 2\nspacing 1 1\ntype f64\nencoding ascii\ndata\n";
  CHECK_THROWS_AS(parse("VOX\n"), FormatError);
  CHECK_THROWS_AS(parse("TPIVOX 2\n"), FormatError);
  CHECK_THROWS_AS(parse(head + "0 1 1\n"), FormatError);
  CHECK_THROWS_AS(parse(head + "0 1 1 0 1\n"), FormatError);
  CHECK_THROWS_AS(parse(head + "0 1 1 2\n"), FormatError);
  CHECK_THROWS_AS(parse("TPIVOX 1\nndim 4\n"), FormatError);
  CHECK_THROWS_AS(parse("TPIVOX 1\nndim 2\ndims 2 2\nspacing 1 0\ntype f64\nencoding ascii\ndata\n0 0 0 0\n"),
                  FormatError);
  CHECK_THROWS_AS(parse("TPIVOX 1\nndim 2\ndims 2 2\nspacing 1 1\ntype u16\nencoding ascii\ndata\n0 0 0 0\n"),
                  FormatError);
  CHECK_THROWS_AS(parse("TPIVOX 1\nndim 1\ndims 2\nspacing 1\ntype u8\nencoding binary\ndata\nA"), FormatError);
  CHECK_THROWS_AS(read_voxels(std::string("/nonexistent/file.tpv")), IoError);
}

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("# comment\n\ndegree = 3\n  g_crit=0.4  \nmesh=16,32\n");
  CHECK(kv.at("degree") == "3");
  CHECK(kv.at("g_crit") == "0.4");
  const PipelineConfig c = apply_config(kv);
  CHECK(c.degree == 3);
  CHECK(c.g_crit == 0.4);
  CHECK(c.mesh == std::vector<int>{16, 32});
  CHECK_THROWS_AS(parse_config_text("degree 3\n"), FormatError);
}

TEST_CASE("config rejects unknown keys and out-of-range values, naming the key") {
  try {
    apply_config({{"degre", "3"}});
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("degre") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config({{"degree", "0"}}), FormatError);
  CHECK_THROWS_AS(apply_config({{"g_crit", "abc"}}), FormatError);
  CHECK_THROWS_AS(apply_config({{"solver", "heat"}}), FormatError);
  CHECK_THROWS_AS(apply_config({{"sides", "wall,wall"}}), FormatError);
  CHECK_THROWS_AS(apply_config({{"mu", "0"}}), FormatError);
}

TEST_CASE("precedence: flags over file over defaults") {
  TempDir dir;
  {
    std::ofstream f(dir.file("run.cfg"));
    f << "degree=3\nradius=2\n";
  }
  const PipelineConfig c = resolve_config(dir.file("run.cfg"), {{"radius", "3"}});
  CHECK(c.degree == 3);
  CHECK(c.radius == 3);
  CHECK(c.n_sub == PipelineConfig{}.n_sub);
  CHECK_THROWS_AS(resolve_config(dir.file("missing.cfg"), {}), IoError);
}

TEST_CASE("config entries round trip through apply_config") {
  PipelineConfig c;
  c.degree = 4;
  c.solver = SolverKind::stokes;
  c.sides = {SideKind::wall, SideKind::wall, SideKind::inflow, SideKind::outflow};
  c.mesh = {8, 16};
  const PipelineConfig r = apply_config(config_entries(c));
  CHECK(config_entries(r) == config_entries(c));
}

TEST_CASE("VTK writers produce legacy headers") {
  TempDir dir;
  ImplicitGeometry g;
  g.box = {{0, 0, 0}, {1, 1, 0}};
  g.f = [](const Vec3& x) { return 0.5 + 0.3 - std::hypot(x[0] - 0.5, x[1] - 0.5); };
  const TessellatedDomain d = tessellate(g, {2, g.box, {4, 4, 1}});
  write_tessellation_vtk(dir.file("t.vtk"), d, {{"x", 1, [](const Vec3& x) { return x; }}});
  const std::string t = slurp(dir.file("t.vtk"));
  CHECK(t.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(t.find("UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(t.find("SCALARS kind") != std::string::npos);
  write_structured_points_vtk(dir.file("s.vtk"), 2, {2, 2, 1}, {0, 0, 0}, {1, 1, 1}, "f", {0, 1, 2, 3});
  CHECK(slurp(dir.file("s.vtk")).find("STRUCTURED_POINTS") != std::string::npos);
  CHECK_THROWS_AS(write_structured_points_vtk("/nonexistent/dir/s.vtk", 2, {2, 2, 1}, {0, 0, 0}, {1, 1, 1}, "f",
                                              {0, 1, 2, 3}),
                  IoError);
}
