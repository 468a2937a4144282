#include <doctest.h>

#include <unistd.h>
#include <filesystem>
#include <fstream>

#include "stickydiff/errors.hpp"
#include "stickydiff/io.hpp"
#include "stickydiff/simgen.hpp"

using namespace stickydiff;
namespace sfs = std::filesystem;

namespace {

struct TempDir {
  sfs::path path;
  TempDir() {
    path = sfs::temp_directory_path() / ("stickydiff_test_" + std::to_string(::getpid()) + "_" +
                                         std::to_string(counter()++));
    sfs::create_directories(path);
  }
  ~TempDir() { sfs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("dataset round-trips through the TSV formats") {
  SimConfig cfg;
  cfg.p = 20;
  cfg.T = 3;
  cfg.n_per_treatment = 2;
  cfg.seed = 3;
  auto [data, truth] = generate_dataset(cfg);

  TempDir dir;
  io::write_dataset(data, dir.path);
  const Dataset loaded = io::read_dataset(dir.path);
  CHECK(loaded.values.data() == data.values.data());
  CHECK(loaded.treatments == data.treatments);
  CHECK(loaded.positions == data.positions);
  CHECK(loaded.probe_ids == data.probe_ids);

  io::write_truth(truth, data.probe_ids, dir.path / "truth.tsv");
  const io::TruthFile tf = io::read_truth(dir.path / "truth.tsv");
  CHECK(tf.s_true == truth.s_true);
  CHECK(tf.h_true == truth.h_true);
  CHECK(tf.chi_true == truth.chi_true);
  CHECK(tf.theta_true.data() == truth.theta_true.data());
}

TEST_CASE("sim config echo is parse-stable") {
  SimConfig cfg;
  cfg.p = 77;
  cfg.seed = 9;
  const std::string text = io::sim_config_echo(cfg);
  TempDir dir;
  io::atomic_write(dir.path / "cfg.json", text);
  const SimConfig parsed = io::read_sim_config(dir.path / "cfg.json");
  CHECK(io::sim_config_echo(parsed) == text);  // byte-identical round trip
  CHECK(parsed.p == 77);
  CHECK(parsed.hp_true.d2 == cfg.hp_true.d2);
}

TEST_CASE("config validation failures carry context") {
  TempDir dir;
  io::atomic_write(dir.path / "bad.json", "{\"schema\": \"stickydiff-sim-v1\", \"p\": 10}\n");
  CHECK_THROWS_AS(io::read_sim_config(dir.path / "bad.json"), validation_error);
  io::atomic_write(dir.path / "trunc.json", "{\"schema\": \"stickydiff-sim-v1\"");
  CHECK_THROWS_AS(io::read_sim_config(dir.path / "trunc.json"), validation_error);
  CHECK_THROWS_AS(io::read_dataset(dir.path), validation_error);
}

TEST_CASE("atomic_write leaves no temp file behind") {
  TempDir dir;
  io::atomic_write(dir.path / "x.txt", "hello\n");
  CHECK(sfs::exists(dir.path / "x.txt"));
  CHECK(!sfs::exists(dir.path / "x.txt.tmp"));
  io::atomic_write(dir.path / "x.txt", "replaced\n");
  std::ifstream in(dir.path / "x.txt");
  std::string line;
  std::getline(in, line);
  CHECK(line == "replaced");
}

TEST_CASE("format_double survives a parse round trip") {
  for (double x : {0.1225, 1e-300, 3.141592653589793, -0.0, 1234567.0, 0.1 + 0.2}) {
    const std::string s = io::format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}
