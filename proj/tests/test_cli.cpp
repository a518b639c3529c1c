#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hexpress/io.hpp"
#include "hexpress/mesh.hpp"

using namespace hexpress;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HEXPRESS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("vtk export carries mesh, density, and optional point data") {
  const HexMesh m = HexMesh::generate(2, 2, 0.2, 0.2);
  std::vector<double> rho(m.num_elements(), 0.25);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(m.num_nodes(), 7.0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * m.num_nodes());

  const std::string bare = vtk_string(m, rho);
  CHECK(bare.find("# vtk DataFile") != std::string::npos);
  CHECK(bare.find("POINTS " + std::to_string(m.num_nodes())) != std::string::npos);
  CHECK(bare.find("POLYGONS") != std::string::npos);
  CHECK(bare.find("density") != std::string::npos);
  CHECK(bare.find("pressure") == std::string::npos);

  const std::string full = vtk_string(m, rho, p, u);
  CHECK(full.find("POINT_DATA " + std::to_string(m.num_nodes())) != std::string::npos);
  CHECK(full.find("pressure") != std::string::npos);
  CHECK(full.find("VECTORS displacement") != std::string::npos);

  CHECK_THROWS(vtk_string(m, {0.5}));
}

TEST_CASE("svg export draws one hexagon per element") {
  const HexMesh m = HexMesh::generate(3, 2, 0.3, 0.2);
  std::vector<double> rho(m.num_elements(), 0.0);
  rho[0] = 1.0;
  const std::string svg = svg_string(m, rho);
  CHECK(svg.find("<svg") != std::string::npos);
  size_t polys = 0;
  for (size_t pos = 0; (pos = svg.find("<polygon", pos)) != std::string::npos; ++pos) ++polys;
  CHECK(polys == static_cast<size_t>(m.num_elements()));
  // Solid is black, void is white.
  CHECK(svg.find("rgb(0,0,0)") != std::string::npos);
  CHECK(svg.find("rgb(255,255,255)") != std::string::npos);
}

TEST_CASE("csv log format") {
  std::vector<IterateRow> log = {{1, 0.5, 0.2, 0.1, -0.3, 0.07}, {2, 0.4, 0.21, 0.09, -0.2, 0.05}};
  const std::string csv = csv_string(log);
  CHECK(csv.rfind("iter,objective,vol_frac,gsi,g1,g2\n", 0) == 0);
  CHECK(count_lines(csv) == 3);
  CHECK(csv.find("\n1,0.5,") != std::string::npos);
  CHECK(csv_string({}) == "iter,objective,vol_frac,gsi,g1,g2\n");
}

TEST_CASE("atomic_write replaces content wholesale") {
  const fs::path dir = fs::temp_directory_path() / "hexpress_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "file.txt";
  atomic_write(target.string(), "first\n");
  CHECK(slurp(target) == "first\n");
  atomic_write(target.string(), "second\n");
  CHECK(slurp(target) == "second\n");
  fs::remove_all(dir);
}

TEST_CASE("cli: bad arguments fail, analysis and short runs produce artifacts") {
  CHECK(run_cli("run no-such-problem") != 0);
  CHECK(run_cli("bogus-subcommand") != 0);

  const fs::path dir = fs::temp_directory_path() / "hexpress_cli_test";
  fs::remove_all(dir);

  // Analysis-only fixture.
  const fs::path adir = dir / "analysis";
  REQUIRE(run_cli("run ddomain1 --nex 20 --ney 15 --out " + adir.string()) == 0);
  CHECK(fs::exists(adir / "final.vtk"));
  CHECK(fs::exists(adir / "density.svg"));
  CHECK(slurp(adir / "final.vtk").find("pressure") != std::string::npos);

  // Short optimization run.
  const fs::path odir = dir / "opt";
  REQUIRE(run_cli("run arch --nex 16 --ney 8 --iters 3 --seed-masks 4x2 --smooth 0 --out " +
                  odir.string()) == 0);
  for (const char* name : {"log.csv", "final.vtk", "density.svg", "masks.txt"})
    CHECK(fs::exists(odir / name));
  const std::string log = slurp(odir / "log.csv");
  CHECK(count_lines(log) == 4);  // header + one row per iteration
  CHECK(log.rfind("iter,objective,vol_frac,gsi,g1,g2\n", 0) == 0);
  // Comment header plus one line per mask for the 4x2 seed grid.
  CHECK(count_lines(slurp(odir / "masks.txt")) == 9);

  // Gradient check mode reports success through the exit code.
  CHECK(run_cli("run arch --nex 16 --ney 8 --seed-masks 4x2 --check-gradients") == 0);

  fs::remove_all(dir);
}
