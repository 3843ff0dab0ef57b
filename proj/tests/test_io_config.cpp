#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

#include "bmild/config.hpp"
#include "bmild/error.hpp"
#include "bmild/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bmild;
using namespace bmild::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "bmild_test_io";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("snapshots round trip bit for bit") {
  const Grid3 g = make_grid(8, 3.5);
  const VectorField u = random_vector(g, 5);
  const ScalarField th = random_scalar(g, 6);
  const fs::path path = scratch_dir() / "round.bmsf";
  write_snapshot(path.string(), make_snapshot(u, th, 0.375));
  const Snapshot s = read_snapshot(path.string());
  CHECK(s.n == 8);
  CHECK(s.box_length == 3.5);
  CHECK(s.t == 0.375);
  REQUIRE(s.components.size() == 4);
  const VectorField u2 = snapshot_velocity(s);
  const ScalarField t2 = snapshot_scalar(s, 3);
  auto same = [](const ScalarField& a, const ScalarField& b) {
    return std::ranges::equal(a.values(), b.values());
  };
  for (int c = 0; c < 3; ++c) CHECK(same(u2[c], u[c]));
  CHECK(same(t2, th));

  const std::string bytes = slurp(path);
  CHECK(bytes.size() == 4 + 4 + 4 + 8 + 8 + 4 + 4 * 512 * 8);
  CHECK(bytes.substr(0, 4) == "BMSF");

  write_snapshot((scratch_dir() / "again.bmsf").string(), s);
  CHECK(slurp(scratch_dir() / "again.bmsf") == bytes);

  const Snapshot scalar = make_snapshot(th, 0.0);
  CHECK(scalar.components.size() == 1);
  CHECK_THROWS_AS(snapshot_velocity(scalar), FormatError);
}

TEST_CASE("malformed snapshots are rejected") {
  const Grid3 g = make_grid(8, 2.0);
  const fs::path good = scratch_dir() / "good.bmsf";
  write_snapshot(good.string(), make_snapshot(random_scalar(g, 1), 0.0));
  const std::string bytes = slurp(good);

  const fs::path bad = scratch_dir() / "bad.bmsf";
  dump(bad, bytes.substr(0, bytes.size() - 8));
  CHECK_THROWS_AS(read_snapshot(bad.string()), FormatError);

  dump(bad, bytes + std::string(8, '\0'));
  CHECK_THROWS_AS(read_snapshot(bad.string()), FormatError);

  std::string wrong_version = bytes;
  wrong_version[4] = static_cast<char>(kSnapshotVersion + 1);
  dump(bad, wrong_version);
  CHECK_THROWS_WITH_AS(read_snapshot(bad.string()), doctest::Contains("unsupported version"),
                       FormatError);

  std::string wrong_magic = bytes;
  wrong_magic[0] = 'X';
  dump(bad, wrong_magic);
  CHECK_THROWS_AS(read_snapshot(bad.string()), FormatError);

  dump(bad, "BMS");
  CHECK_THROWS_AS(read_snapshot(bad.string()), FormatError);
  CHECK_THROWS_AS(read_snapshot((scratch_dir() / "missing.bmsf").string()), FormatError);
}

TEST_CASE("config parsing accepts comments and infinity") {
  const ExperimentConfig c = parse_config_text(
      "# leading comment\n"
      "n = 16   # trailing comment\n"
      "\n"
      "L=6\n"
      "p = 4.5\n"
      "q = 2\n"
      "kernel_betas = 1, 2, inf\n"
      "preset = taylor_green\n"
      "quadrature = left_endpoint\n"
      "refinement_check = false\n"
      "seed = 18446744073709551615\n");
  CHECK(c.n == 16);
  CHECK(c.box_length == 6.0);
  CHECK(c.p == 4.5);
  CHECK(c.q == 2.0);
  REQUIRE(c.kernel_betas.size() == 3);
  CHECK(std::isinf(c.kernel_betas[2]));
  CHECK(c.data.preset == Preset::taylor_green);
  CHECK(c.quadrature == Quadrature::left_endpoint);
  CHECK_FALSE(c.refinement_check);
  CHECK(c.data.seed == std::numeric_limits<std::uint64_t>::max());
  CHECK(c.horizon == ExperimentConfig{}.horizon);
}

TEST_CASE("config errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_config_text("n = 16\nbogus = 1\n"),
                       doctest::Contains("line 2: unknown key 'bogus'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("n = 16\nn = 32\n"), doctest::Contains("duplicate key 'n'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("just words\n"), doctest::Contains("expected key=value"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = sixteen\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("dt = 0.1x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("quadrature = simpson\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("preset = vortex\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("refinement_check = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("kernel_t_grid = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config((scratch_dir() / "absent.cfg").string()), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  const std::string text = "n = 16\nL = 6\namplitude = 0.2\n";
  const ExperimentConfig a = parse_config_text(text);
  const ExperimentConfig b = parse_config_text("amplitude=0.2\n# reordered\nL = 6.0\nn=16\n");
  CHECK(a.hash().size() == 16);
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  CHECK(parse_config_text("n = 16\nL = 6\namplitude = 0.3\n").hash() != a.hash());

  const ExperimentConfig round = parse_config_text(a.canonical());
  CHECK(round.canonical() == a.canonical());

  const fs::path path = scratch_dir() / "c.cfg";
  dump(path, text);
  CHECK(load_config(path.string()).hash() == a.hash());
}

TEST_CASE("CSV numbers keep 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");

  const fs::path path = scratch_dir() / "t.csv";
  {
    CsvWriter w(path.string(), {"a", "b", "c"}, {{"config_hash", "abc"}, {"quadrature", "x"}});
    w.cell(0.1).cell(3).cell("s").end_row();
    w.cell(true).cell(-2.5).cell(std::size_t{7}).end_row();
  }
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# config_hash=abc");
  std::getline(in, line);
  CHECK(line == "# quadrature=x");
  std::getline(in, line);
  CHECK(line == "a,b,c");
  std::getline(in, line);
  CHECK(line == "0.10000000000000001,3,s");
  std::getline(in, line);
  CHECK(line == "true,-2.5,7");
}
