// Drives the built CLI binary end to end through temp directories.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kCli = UNIDISC_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("unidisc_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(kCli) + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream os(p);
  os << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

}  // namespace

TEST_CASE("discretize-check produces an exact certificate") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({
    "subcommand": "discretize-check",
    "dictionary": {"family": "trig", "M": 2, "d": 1},
    "sampling": {"mode": "equispaced", "m": 5},
    "params": {"v": 2},
    "output_dir": ")" + (tmp.path / "out").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string()) == 0);
  json cert = read_json(tmp.path / "out" / "certificate.json");
  CHECK(cert["holds"] == true);
  CHECK(std::abs(cert["c1_global"].get<double>() - 1.0) < 1e-10);
  CHECK(std::abs(cert["c2_global"].get<double>() - 1.0) < 1e-10);
  json manifest = read_json(tmp.path / "out" / "manifest.json");
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("lowerbound emits a failure certificate for m=2, N=64") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({
    "subcommand": "lowerbound",
    "dictionary": {"family": "sine", "N": 64},
    "sampling": {"m": 2, "seed": 11},
    "params": {"C1": 0.5},
    "output_dir": ")" + (tmp.path / "out").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string()) == 0);
  json j = read_json(tmp.path / "out" / "lowerbound.json");
  REQUIRE_FALSE(j["certificate"].is_null());
  CHECK(j["certificate"]["discrete_mean"].get<double>() < 0.5);
  CHECK(j["one_sided_confirms_failure"] == true);
}

TEST_CASE("malformed config: validation exit and no outputs") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({
    "subcommand": "discretize-check",
    "dictionary": {"family": "trig", "M": 1, "d": 1},
    "sampling": {"m": 4},
    "params": {"v": 9},
    "output_dir": ")" + (tmp.path / "out").string() + R"("
  })");
  CHECK(run_cli("run " + (tmp.path / "cfg.json").string()) == 2);
  CHECK_FALSE(fs::exists(tmp.path / "out"));

  write_file(tmp.path / "unknown.json", R"({
    "subcommand": "rip",
    "dictionary": {"family": "trig", "M": 1, "d": 1},
    "sampling": {"m": 4},
    "params": {"v": 1, "bogus": 3},
    "output_dir": ")" + (tmp.path / "out2").string() + R"("
  })");
  CHECK(run_cli("run " + (tmp.path / "unknown.json").string()) == 2);
  CHECK_FALSE(fs::exists(tmp.path / "out2"));
}

TEST_CASE("cap exceedance uses its own exit code") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({
    "subcommand": "discretize-check",
    "dictionary": {"family": "trig-n", "N": 12, "d": 1},
    "sampling": {"m": 8, "seed": 1},
    "params": {"v": 3},
    "output_dir": ")" + (tmp.path / "out").string() + R"("
  })");
  CHECK(run_cli("run " + (tmp.path / "cfg.json").string() + " --cap 10") == 3);
}

TEST_CASE("identical configs reproduce identical result files") {
  TempDir tmp;
  std::string body = R"({
    "subcommand": "discretize-check",
    "dictionary": {"family": "trig-n", "N": 6, "d": 1},
    "sampling": {"mode": "iid-uniform", "m": 12, "seed": 99},
    "params": {"v": 2}
  })";
  write_file(tmp.path / "cfg.json", body);
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "a").string()) == 0);
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "b").string()) == 0);
  CHECK(read_file(tmp.path / "a" / "certificate.json") ==
        read_file(tmp.path / "b" / "certificate.json"));
  CHECK(read_file(tmp.path / "a" / "points.csv") ==
        read_file(tmp.path / "b" / "points.csv"));
  // the manifests agree except for wall clock
  json ma = read_json(tmp.path / "a" / "manifest.json");
  json mb = read_json(tmp.path / "b" / "manifest.json");
  ma.erase("wall_clock_ms");
  mb.erase("wall_clock_ms");
  CHECK(ma == mb);
}

TEST_CASE("seed override changes the drawn points") {
  TempDir tmp;
  std::string body = R"({
    "subcommand": "discretize-check",
    "dictionary": {"family": "trig-n", "N": 6, "d": 1},
    "sampling": {"mode": "iid-uniform", "m": 12, "seed": 99},
    "params": {"v": 2}
  })";
  write_file(tmp.path / "cfg.json", body);
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string() + " --out " +
                  (tmp.path / "a").string()) == 0);
  REQUIRE(run_cli("run " + (tmp.path / "cfg.json").string() + " --seed 100 " +
                  "--out " + (tmp.path / "b").string()) == 0);
  CHECK(read_file(tmp.path / "a" / "points.csv") !=
        read_file(tmp.path / "b" / "points.csv"));
}

TEST_CASE("report on an empty directory succeeds with an empty summary") {
  TempDir tmp;
  fs::create_directories(tmp.path / "results");
  CHECK(run_cli("report " + (tmp.path / "results").string()) == 0);
  std::string summary = read_file(tmp.path / "results" / "summary.md");
  CHECK(summary.find("# Results summary") == 0);
}

TEST_CASE("report merges sweeps for the same dictionary keyed by m") {
  TempDir tmp;
  fs::path results = tmp.path / "results";
  auto sweep_cfg = [&](const std::string& name, const std::string& ms,
                       int seed) {
    write_file(tmp.path / (name + ".json"), R"({
      "subcommand": "sweep-m",
      "dictionary": {"family": "trig", "M": 1, "d": 1},
      "sampling": {"mode": "iid-uniform", "m_values": )" + ms +
                   R"(, "seed": )" + std::to_string(seed) + R"(},
      "params": {"v": 1, "trials": 10},
      "output_dir": ")" + (results / name).string() + R"("
    })");
    REQUIRE(run_cli("run " + (tmp.path / (name + ".json")).string()) == 0);
  };
  sweep_cfg("s1", "[4, 8]", 1);
  sweep_cfg("s2", "[8, 16]", 2);
  REQUIRE(run_cli("report " + results.string()) == 0);

  std::string merged = read_file(results / "merged_sweeps.csv");
  // one table keyed by m: 4, 8 (trials merged to 20), 16
  CHECK(merged.find(",4,10,") != std::string::npos);
  CHECK(merged.find(",8,20,") != std::string::npos);
  CHECK(merged.find(",16,10,") != std::string::npos);

  // regenerating the summary is byte-identical
  std::string first = read_file(results / "summary.md");
  REQUIRE(run_cli("report " + results.string()) == 0);
  CHECK(first == read_file(results / "summary.md"));
}

TEST_CASE("corrupt manifests are skipped with a warning") {
  TempDir tmp;
  fs::path results = tmp.path / "results";
  fs::create_directories(results / "broken");
  write_file(results / "broken" / "manifest.json", "{not json");
  CHECK(run_cli("report " + results.string()) == 0);
  CHECK(fs::exists(results / "summary.md"));
}

TEST_CASE("remaining subcommands run end to end") {
  TempDir tmp;
  write_file(tmp.path / "rip.json", R"({
    "subcommand": "rip",
    "dictionary": {"family": "trig", "M": 2, "d": 1},
    "sampling": {"mode": "equispaced", "m": 5},
    "params": {"v": 2},
    "output_dir": ")" + (tmp.path / "rip").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "rip.json").string()) == 0);
  CHECK(read_json(tmp.path / "rip" / "rip.json")["delta"].get<double>() <=
        1e-10);

  write_file(tmp.path / "rec.json", R"({
    "subcommand": "recover",
    "dictionary": {"family": "trig-n", "N": 8, "d": 1},
    "sampling": {"mode": "iid-uniform", "m": 24, "seed": 5},
    "params": {"target": {"type": "sparse-random", "v": 2, "seed": 3}},
    "output_dir": ")" + (tmp.path / "rec").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "rec.json").string()) == 0);
  json rec = read_json(tmp.path / "rec" / "recover.json");
  CHECK(rec["trace"]["residual_norms"].back().get<double>() <= 1e-8);

  write_file(tmp.path / "leb.json", R"({
    "subcommand": "lebesgue",
    "dictionary": {"family": "trig-n", "N": 8, "d": 1},
    "sampling": {"mode": "iid-uniform", "m": 48, "seed": 5},
    "params": {"v": 1, "c": 3, "compute_continuous": false,
               "target": {"type": "sparse-plus-noise", "v": 1, "seed": 4,
                           "delta": 1e-3}},
    "output_dir": ")" + (tmp.path / "leb").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "leb.json").string()) == 0);
  CHECK(read_json(tmp.path / "leb" / "lebesgue.json")["ratio_discrete"]
            .get<double>() < 100.0);

  write_file(tmp.path / "lsu.json", R"({
    "subcommand": "ls-universal",
    "dictionary": {"family": "trig-n", "N": 6, "d": 1},
    "sampling": {"mode": "iid-uniform", "m": 16, "seed": 5},
    "params": {"v": 2, "target": {"type": "sparse-random", "v": 2, "seed": 9}},
    "output_dir": ")" + (tmp.path / "lsu").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "lsu.json").string()) == 0);
  CHECK(read_json(tmp.path / "lsu" / "ls_universal.json")["err_continuous"]
            .get<double>() <= 1e-8);

  write_file(tmp.path / "bg.json", R"({
    "subcommand": "block-greedy",
    "dictionary": {"family": "trig", "d": 1},
    "sampling": {"m": 16, "seed": 2},
    "params": {"a": 0.5, "b": 0.0, "n": 3, "j_max": 5, "instance_seed": 8},
    "output_dir": ")" + (tmp.path / "bg").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "bg.json").string()) == 0);
  json bg = read_json(tmp.path / "bg" / "blockgreedy.json");
  CHECK(bg["term_count"].get<std::size_t>() <= 4u << 3);
  CHECK(bg["error_mixed"].get<double>() > 0.0);

  write_file(tmp.path / "ent.json", R"({
    "subcommand": "entropy",
    "dictionary": {"family": "trig-n", "N": 8, "d": 1},
    "sampling": {"seed": 12},
    "params": {"v": 2, "p": 2.0, "n_members": 64, "k_max": 4,
               "grid_points": 128},
    "output_dir": ")" + (tmp.path / "ent").string() + R"("
  })");
  REQUIRE(run_cli("run " + (tmp.path / "ent.json").string()) == 0);
  json ent = read_json(tmp.path / "ent" / "entropy.json");
  REQUIRE(ent["eps_k"].size() == 5);
  for (std::size_t k = 0; k + 1 < 5; ++k)
    CHECK(ent["eps_k"][k + 1].get<double>() <=
          ent["eps_k"][k].get<double>() + 1e-15);
}
