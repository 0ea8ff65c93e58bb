#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnotkit/catalog.hpp"
#include "carnotkit/cli.hpp"
#include "carnotkit/cloud_io.hpp"
#include "carnotkit/dsl.hpp"

using namespace carnotkit;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("carnotkit_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("exit-code matrix") {
  auto engel_file = temp_file("engel.alg");
  write_file(engel_file, serialize_algebra(*builtin_algebra("engel")));
  auto broken_file = temp_file("broken.alg");
  write_file(broken_file, "algebra broken\nstep 2\nlayer 1 X Y\n");
  auto invalid_file = temp_file("invalid.alg");
  write_file(invalid_file,
             "algebra bad\nstep 3\nlayer 1: X0 X1\nlayer 2: X2\nlayer 3: X3\n"
             "bracket [X0,X1] = 1*X2\n");  // stratification fails at layer 3

  // 0: success / holds
  CHECK(run({"info", "engel"}).code == 0);
  CHECK(run({"validate", engel_file.string()}).code == 0);
  CHECK(run({"autdim", "filiform2:5"}).code == 0);
  CHECK(run({"abnormal", "engel", "--filiform-exact"}).code == 0);
  CHECK(run({"endpoint", "heis", "--control", "1:1,0;1:0,1"}).code == 0);

  // 1: property violated, witness on output
  RunResult invalid = run({"validate", invalid_file.string()});
  CHECK(invalid.code == 1);
  CHECK(invalid.out.find("stratification") != std::string::npos);
  RunResult obstructed = run({"autext", "filiform2:5", "--matrix", "1,0,1,1"});
  CHECK(obstructed.code == 1);
  CHECK(obstructed.out.find("obstructed") != std::string::npos);

  // 2: usage / parse errors
  CHECK(run({"info", "no-such-algebra"}).code == 2);
  CHECK(run({"validate", broken_file.string()}).code == 2);
  CHECK(run({"endpoint", "heis"}).code == 2);                          // missing --control
  CHECK(run({"endpoint", "heis", "--control", "1:bogus,0"}).code == 2);
  CHECK(run({"abnormal", "heis", "--filiform-exact"}).code == 2);      // not filiform
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);

  std::filesystem::remove(engel_file);
  std::filesystem::remove(broken_file);
  std::filesystem::remove(invalid_file);
}

TEST_CASE("info prints dimensions and homogeneous dimension") {
  RunResult res = run({"info", "cartan"});
  CHECK(res.code == 0);
  CHECK(res.out.find("dimension: 5") != std::string::npos);
  CHECK(res.out.find("step:      3") != std::string::npos);
  CHECK(res.out.find("Q: 10") != std::string::npos);
}

TEST_CASE("abnormal subcommand output") {
  RunResult exact = run({"abnormal", "engel", "--filiform-exact"});
  CHECK(exact.code == 0);
  CHECK(exact.out.find("1 abnormal horizontal line") != std::string::npos);
  CHECK(exact.out.find("X1") != std::string::npos);

  RunResult scan = run({"abnormal", "cartan", "--scan", "16"});
  CHECK(scan.code == 0);
  CHECK(scan.out.find("16/16 abnormal") != std::string::npos);
}

TEST_CASE("autdim matches the published dimensions") {
  CHECK(run({"autdim", "filiform2:5"}).out == "2\n");
  CHECK(run({"autdim", "filiform1:4"}).out == "3\n");
}

TEST_CASE("endpoint is exact") {
  RunResult res = run({"endpoint", "heis", "--control", "1:1,0;1:0,1;1:-1,0;1:0,-1"});
  CHECK(res.code == 0);
  CHECK(res.out == "1*Z\n");
}

TEST_CASE("sample export is byte-stable and loadable") {
  auto csv_a = temp_file("cloud_a.csv");
  auto csv_b = temp_file("cloud_b.csv");
  auto json_path = temp_file("cloud.json");
  CHECK(run({"sample", "heis", "--nu", "1,0", "--count", "10", "--seed", "3", "--out",
             csv_a.string()})
            .code == 0);
  CHECK(run({"sample", "heis", "--nu", "1,0", "--count", "10", "--seed", "3", "--out",
             csv_b.string()})
            .code == 0);
  CHECK(read_file(csv_a) == read_file(csv_b));

  CHECK(run({"sample", "heis", "--nu", "1,0", "--count", "10", "--seed", "3", "--out",
             json_path.string(), "--format", "json"})
            .code == 0);
  auto json_b = temp_file("cloud_b.json");
  CHECK(run({"sample", "heis", "--nu", "1,0", "--count", "10", "--seed", "3", "--out",
             json_b.string(), "--format", "json"})
            .code == 0);
  CHECK(read_file(json_path) == read_file(json_b));
  std::filesystem::remove(json_b);

  AlgebraPtr heis = builtin_algebra("heis");
  std::vector<DblElement> from_csv = load_points(heis, csv_a.string());
  std::vector<DblElement> from_json = load_points(heis, json_path.string());
  REQUIRE(from_csv.size() == 10);
  REQUIRE(from_json.size() == 10);
  for (int i = 0; i < 10; ++i)
    for (int c = 0; c < heis->dim(); ++c)
      CHECK(from_csv[i].coeffs[c] == doctest::Approx(from_json[i].coeffs[c]).epsilon(1e-15));

  std::filesystem::remove(csv_a);
  std::filesystem::remove(csv_b);
  std::filesystem::remove(json_path);
}

TEST_CASE("empty cloud exports a header-only csv") {
  AlgebraPtr heis = builtin_algebra("heis");
  SemigroupParams params;
  params.count = 0;
  params.seed = 1;
  SemigroupCloud cloud = sample_semigroup(heis, {1.0, 0.0}, params);
  std::ostringstream os;
  export_cloud(cloud, os, CloudFormat::csv);
  CHECK(os.str() == "X1,X2,Z\n");
}

TEST_CASE("conecheck and lipcheck drive the checkers end to end") {
  auto gamma_path = temp_file("gamma.csv");
  write_file(gamma_path, "e1,e2\n0,0.5\n0,-0.5\n0,1.5\n");
  RunResult holds =
      run({"conecheck", "abelian:2", "--gamma", gamma_path.string(), "--cone", "half:1,0:strict"});
  CHECK(holds.code == 0);

  write_file(gamma_path, "e1,e2\n0,0.5\n0.7,0\n0,-0.5\n");
  RunResult violated =
      run({"conecheck", "abelian:2", "--gamma", gamma_path.string(), "--cone", "half:1,0:strict"});
  CHECK(violated.code == 1);
  CHECK(violated.out.find("violated") != std::string::npos);

  // cloud-backed cone (conic neighborhood of the stored directions) and
  // the inverse-orientation prefix
  auto cone_cloud = temp_file("cone_cloud.csv");
  write_file(cone_cloud, "e1,e2\n1,0\n");
  write_file(gamma_path, "e1,e2\n0,0.5\n0.9,0.55\n");
  RunResult cone_hit = run({"conecheck", "abelian:2", "--gamma", gamma_path.string(), "--cone",
                            "cloud:" + cone_cloud.string() + ":0.2"});
  CHECK(cone_hit.code == 1);  // the difference (0.9, 0.05) points along e1
  CHECK(run({"conecheck", "abelian:2", "--gamma", gamma_path.string(), "--cone",
             "inv:half:0,1:strict"})
            .code == 1);
  std::filesystem::remove(cone_cloud);

  write_file(gamma_path, "e1,e2\n0,0.5\n0,-0.5\n");
  CHECK(run({"lipcheck", "abelian:2", "--sigma", gamma_path.string(), "--direction", "1,0",
             "--beta", "0.5"})
            .code == 0);
  write_file(gamma_path, "e1,e2\n0,0\n1,0\n");
  CHECK(run({"lipcheck", "abelian:2", "--sigma", gamma_path.string(), "--direction", "1,0",
             "--beta", "0.25"})
            .code == 1);

  std::filesystem::remove(gamma_path);
}

TEST_CASE("product and quotient write loadable files") {
  auto prod_path = temp_file("prod.alg");
  RunResult prod = run({"product", "engel", "abelian:1", "--out", prod_path.string()});
  CHECK(prod.code == 0);
  RunResult info = run({"info", prod_path.string()});
  CHECK(info.code == 0);
  CHECK(info.out.find("dimension: 5") != std::string::npos);

  auto quot_path = temp_file("quot.alg");
  RunResult quot = run({"quotient", "engel", "--ideal", "0,0,0,1", "--out", quot_path.string()});
  CHECK(quot.code == 0);
  RunResult qinfo = run({"info", quot_path.string()});
  CHECK(qinfo.out.find("dimension: 3") != std::string::npos);

  // rejected ideal: exit 1 with a witness
  RunResult rejected = run({"quotient", "heis", "--ideal", "0,1,0", "--out", quot_path.string()});
  CHECK(rejected.code == 1);
  CHECK(rejected.out.find("witness") != std::string::npos);

  std::filesystem::remove(prod_path);
  std::filesystem::remove(quot_path);
}

TEST_CASE("jacobian-rank subcommand") {
  RunResult res = run({"jacobian-rank", "engel", "--direction", "0,1", "--pieces", "8"});
  CHECK(res.code == 0);
  CHECK(res.out.find("jacobian rank 3 of 4") != std::string::npos);
  CHECK(res.out.find("ad-chain span 3") != std::string::npos);
}
