#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sonartda/array_io.hpp"
#include "sonartda/pipeline.hpp"
#include "sonartda/rng.hpp"
#include "sonartda/signal_ops.hpp"

using namespace sonartda;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sonartda_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

SignalMap random_map(int rows, int cols, std::uint64_t seed,
                     bool f32_exact, bool complex_data) {
  const CounterRng rng(seed);
  std::vector<Complex> samples;
  for (int i = 0; i < rows * cols; ++i) {
    double re = 2.0 * rng.uniform(2 * i) - 1.0;
    double im = complex_data ? 2.0 * rng.uniform(2 * i + 1) - 1.0 : 0.0;
    if (f32_exact) {
      re = static_cast<double>(static_cast<float>(re));
      im = static_cast<double>(static_cast<float>(im));
    }
    samples.emplace_back(re, im);
  }
  return {DomainDescriptor::circle(rows), cols, std::move(samples)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("csv arrays round-trip bit for bit") {
  const auto dir = temp_dir("csv_roundtrip");
  SUBCASE("real") {
    const SignalMap map = random_map(17, 3, 1, false, false);
    const std::string path = (dir / "real.csv").string();
    write_array_csv(map, path);
    CHECK(ingest_array(path) == map);
  }
  SUBCASE("complex") {
    const SignalMap map = random_map(9, 4, 2, false, true);
    const std::string path = (dir / "cx.csv").string();
    write_array_csv(map, path);
    CHECK(ingest_array(path) == map);
  }
}

TEST_CASE("binary arrays round-trip f32-representable data bit for bit") {
  const auto dir = temp_dir("bin_roundtrip");
  SUBCASE("f32") {
    const SignalMap map = random_map(360, 10, 3, true, false);
    const std::string path = (dir / "arr.bin").string();
    write_array_binary(map, path);
    CHECK(ingest_array(path) == map);
    CHECK(ingest_array((dir / "arr.json").string()) == map);
  }
  SUBCASE("c64") {
    const SignalMap map = random_map(64, 5, 4, true, true);
    const std::string path = (dir / "arr.bin").string();
    write_array_binary(map, path);
    CHECK(ingest_array(path) == map);
  }
}

TEST_CASE("minimal csv array") {
  const auto dir = temp_dir("csv_min");
  const std::string path = (dir / "mini.csv").string();
  std::ofstream(path) << "c0,c1\n1,2\n3,4\n5,6\n7,8\n";
  const SignalMap map = ingest_array(path);
  CHECK(map.domain() == DomainDescriptor::circle(4));
  CHECK(map.channels() == 2);
  CHECK(map.at(3, 1) == Complex(8.0, 0.0));
}

TEST_CASE("ingest failure modes name the problem") {
  const auto dir = temp_dir("ingest_errors");

  SUBCASE("missing file") {
    CHECK_THROWS_AS(ingest_array((dir / "nope.csv").string()),
                    ValidationError);
  }
  SUBCASE("unknown extension") {
    std::ofstream(dir / "arr.dat") << "junk";
    CHECK_THROWS_AS(ingest_array((dir / "arr.dat").string()),
                    ValidationError);
  }
  SUBCASE("shape mismatch against the sidecar") {
    const SignalMap map = random_map(360, 4, 5, true, false);
    write_array_binary(map, (dir / "arr.bin").string());
    // Truncate one row off the payload.
    const std::string payload = slurp(dir / "arr.bin");
    std::ofstream(dir / "arr.bin", std::ios::binary)
        << payload.substr(0, payload.size() - 4 * 4);
    try {
      ingest_array((dir / "arr.bin").string());
      FAIL("expected a shape error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("5760") != std::string::npos);  // declared bytes
      CHECK(msg.find("5744") != std::string::npos);  // actual bytes
    }
  }
  SUBCASE("ragged csv row") {
    std::ofstream(dir / "bad.csv") << "c0,c1\n1,2\n3\n";
    CHECK_THROWS_AS(ingest_array((dir / "bad.csv").string()),
                    ValidationError);
  }
  SUBCASE("malformed cell names row and column") {
    std::ofstream(dir / "cell.csv") << "c0,c1\n1,2\n3,oops\n";
    try {
      ingest_array((dir / "cell.csv").string());
      FAIL("expected a cell error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 1") != std::string::npos);
      CHECK(msg.find("col 1") != std::string::npos);
    }
  }
  SUBCASE("non-finite binary value reports its byte offset") {
    const SignalMap map = random_map(4, 2, 6, true, false);
    write_array_binary(map, (dir / "nf.bin").string());
    std::string payload = slurp(dir / "nf.bin");
    // Overwrite the third float with a NaN bit pattern.
    payload[8] = '\x00';
    payload[9] = '\x00';
    payload[10] = '\xc0';
    payload[11] = '\x7f';
    std::ofstream(dir / "nf.bin", std::ios::binary) << payload;
    try {
      ingest_array((dir / "nf.bin").string());
      FAIL("expected a non-finite error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("byte offset 8") != std::string::npos);
    }
  }
  SUBCASE("missing sidecar") {
    std::ofstream(dir / "lonely.bin", std::ios::binary) << "\0\0\0\0";
    CHECK_THROWS_AS(ingest_array((dir / "lonely.bin").string()),
                    ValidationError);
  }
}

TEST_CASE("cloud csv round-trips labels and coordinates") {
  const auto dir = temp_dir("cloud_csv");
  std::vector<double> coords{0.125, -3.5, 1.0, 2.0, 7.25, -0.5};
  std::vector<std::array<double, 2>> labels{{0.0, 0.0}, {120.0, 0.0},
                                            {240.0, 0.0}};
  const PointCloud cloud(2, coords, labels, 1);
  const std::string path = (dir / "cloud.csv").string();
  write_cloud_csv(cloud, path);
  const PointCloud back = read_cloud_csv(path);
  CHECK(back.ambient_dim() == 2);
  CHECK(back.coords() == coords);
  CHECK(back.labels() == labels);
}

TEST_CASE("diagram csv round-trips including open-ended features") {
  const auto dir = temp_dir("diag_csv");
  PersistenceDiagram diag;
  diag.truncation_eps = 0.75;
  diag.features.push_back({0, 0.0, 0.5, false});
  diag.features.push_back({0, 0.0, kInfDeath, false});
  diag.features.push_back({1, 0.125, kInfDeath, true});
  const std::string path = (dir / "diag.csv").string();
  write_diagram_csv(diag, path);
  const PersistenceDiagram back = read_diagram_csv(path);
  CHECK(back.truncation_eps == 0.75);
  CHECK(back.features == diag.features);
}

TEST_CASE("config files parse and reject unknown keys") {
  const auto dir = temp_dir("config");
  const std::string path = (dir / "run.cfg").string();
  std::ofstream(path) << "# comment\n"
                         "scene = pipe\n"
                         "n_angles = 180\n"
                         "offsets_deg = 0,8,16\n"
                         "scene_offset = 0.1,0.2,0.3\n"
                         "max_eps = 0.5\n";
  const RunConfig cfg = parse_config_file(path);
  CHECK(cfg.scene == "pipe");
  CHECK(cfg.n_angles == 180);
  CHECK(cfg.offsets_deg == std::vector<double>{0.0, 8.0, 16.0});
  CHECK(cfg.scene_offset_y == 0.2);
  CHECK(cfg.max_eps == 0.5);

  std::ofstream(path) << "no_such_key = 1\n";
  CHECK_THROWS_AS(parse_config_file(path), ValidationError);
  std::ofstream(path) << "scene pipe\n";
  CHECK_THROWS_AS(parse_config_file(path), ValidationError);
}

TEST_CASE("config validation runs before any computation") {
  RunConfig cfg;
  cfg.scene = "input";
  cfg.input = "/definitely/not/here.csv";
  CHECK_THROWS_AS(validate_config(cfg), ValidationError);

  RunConfig bad;
  bad.threshold_fraction = 1.5;
  CHECK_THROWS_AS(validate_config(bad), ValidationError);
}

TEST_CASE("pipeline runs are deterministic byte for byte") {
  RunConfig cfg;
  cfg.scene = "pipe";
  cfg.pipe_scatterers_per_side = 10;
  cfg.n_angles = 90;
  cfg.n_wavenumbers = 12;
  cfg.noise_sigma = 0.003;
  cfg.seed = 42;
  cfg.offsets_deg = {0.0, 8.0, 24.0};
  cfg.max_dim = 1;

  const auto dir_a = temp_dir("det_a");
  const auto dir_b = temp_dir("det_b");
  cfg.out_dir = dir_a.string();
  run_pipeline(cfg);
  cfg.out_dir = dir_b.string();
  run_pipeline(cfg);

  const char* names[] = {"signal.csv",      "cloud.csv", "cloud_pca.csv",
                         "diagram.csv",     "pca.svg",   "diagram.svg",
                         "echo_report.json"};
  for (const char* name : names) {
    CHECK_MESSAGE(slurp(dir_a / name) == slurp(dir_b / name), name);
    CHECK_FALSE(slurp(dir_a / name).empty());
  }
  // The manifest differs only in its timestamp.
  CHECK(slurp(dir_a / "manifest.json").find(config_hash(cfg)) !=
        std::string::npos);
}

TEST_CASE("noise sweep writes one row per sigma") {
  RunConfig cfg;
  cfg.scene = "pipe";
  cfg.pipe_scatterers_per_side = 8;
  cfg.n_angles = 72;
  cfg.n_wavenumbers = 8;
  cfg.offsets_deg = {0.0, 5.0, 25.0};
  cfg.sigmas = {0.0, 0.005};
  const auto dir = temp_dir("sweep");
  cfg.out_dir = dir.string();
  const auto rows = run_noise_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sigma == 0.0);
  const std::string csv = slurp(dir / "noise_sweep.csv");
  CHECK(csv.rfind("sigma,top_death,top_persistence", 0) == 0);
}
