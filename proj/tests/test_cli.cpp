#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bcamo/camo_io.hpp"
#include "bcamo/cli.hpp"
#include "bcamo/keyed.hpp"
#include "bcamo/metrics.hpp"
#include "test_util.hpp"

using namespace bcamo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("BCAMO_TEST_TMP");
  fs::path dir = (env ? fs::path(env) : fs::temp_directory_path() / "bcamo_cli_test") / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return files;
}

std::string bench(const std::string& name) { return test::bench_path(name).string(); }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("value lists") {
  CHECK(cli::parse_seed_list("1-3,7") == std::vector<std::uint64_t>{1, 2, 3, 7});
  CHECK(cli::parse_seed_list("5") == std::vector<std::uint64_t>{5});
  CHECK_THROWS_AS(cli::parse_seed_list("3-1"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_seed_list("x"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_seed_list(""), cli::ConfigError);
  CHECK(cli::parse_scale_list("10%,0.25") == std::vector<double>{0.1, 0.25});
  CHECK_THROWS_AS(cli::parse_scale_list("120%"), cli::ConfigError);
}

TEST_CASE("worker pool") {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<int> hit(100, 0);
    cli::parallel_for(hit.size(), workers, [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  }
  std::atomic<int> calls{0};
  try {
    cli::parallel_for(20, 4, [&](std::size_t i) {
      ++calls;
      if (i == 7 || i == 13) throw std::runtime_error("cell " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "cell 7");
  }
  CHECK(calls == 20);
  cli::parallel_for(0, 4, [](std::size_t) { FAIL("no cells"); });
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"attack", "--bench", bench("c17"), "--scales", "2"}).code == cli::kExitUsage);
  CHECK(run({"attack", "--bench", bench("c17"), "--attacks", "brute"}).code == cli::kExitUsage);

  SUBCASE("missing benchmark names the path") {
    const std::string missing = (scratch("missing") / "absent.bench").string();
    Outcome o = run({"camouflage", "--bench", missing, "--out", scratch("missing_out").string()});
    CHECK(o.code == cli::kExitUsage);
    CHECK(o.err.find(missing) != std::string::npos);
  }

  SUBCASE("malformed data") {
    fs::path dir = scratch("bad_data");
    fs::create_directories(dir);
    write_text_file(dir / "bad.bench", "INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n");
    CHECK(run({"camouflage", "--bench", (dir / "bad.bench").string(), "--out", (dir / "o").string()}).code ==
          cli::kExitData);
    write_text_file(dir / "zero.csv", "benchmark,total,XOR2\nz,0,0\n");
    Outcome o = run({"limits", "--counts", (dir / "zero.csv").string()});
    CHECK(o.code == cli::kExitData);
    CHECK(o.err.find("zero") != std::string::npos);
    write_text_file(dir / "runs.json", "{\"schema_version\": 99, \"runs\": []}");
    CHECK(run({"report", (dir / "runs.json").string()}).code == cli::kExitData);
  }
}

TEST_CASE("limits") {
  Outcome o = run({"limits", "--counts", std::string(BCAMO_DATA_DIR) + "/cell_counts.csv"});
  REQUIRE(o.code == 0);
  CHECK(o.out.rfind("benchmark,total,xor-type,xor-nand-nor,threshold,ours\n", 0) == 0);
  // Rounded to two decimals; b14_C threshold is 1632/3263 = 50.0153%.
  CHECK(o.out.find("b14_C,3263,68.89,33.62,50.02,100.00\n") != std::string::npos);
  CHECK(o.out.find("b15_C,4972,63.44,31.46,41.81,100.00\n") != std::string::npos);

  Outcome j = run({"limits", "--counts", std::string(BCAMO_DATA_DIR) + "/cell_counts.csv", "--format", "json"});
  REQUIRE(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["limits"][0]["benchmark"] == "b14_C");
  CHECK(doc["limits"][0]["xor-type"].get<double>() == doctest::Approx(68.89));
}

TEST_CASE("evaluate") {
  Outcome same = run({"evaluate", bench("mul4"), bench("mul4")});
  REQUIRE(same.code == 0);
  auto doc = nlohmann::json::parse(same.out);
  CHECK(doc["hd_percent"] == 0.0);
  CHECK(doc["oer_percent"] == 0.0);
  CHECK(doc["exhaustive"] == true);
  CHECK(run({"evaluate", bench("mul4"), bench("c17")}).code == cli::kExitData);
}

TEST_CASE("camouflage command") {
  SUBCASE("scale 0 keeps the function") {
    fs::path dir = scratch("camo0");
    REQUIRE(run({"camouflage", "--bench", bench("alu4"), "--scale", "0", "--out", dir.string()}).code == 0);
    Netlist keyed = read_bench_file(dir / "alu4.keyed.bench");
    CHECK(keyed.inputs().size() == test::load("alu4").inputs().size());
    CHECK(test::same_function(keyed, test::load("alu4")));
  }

  SUBCASE("outputs") {
    fs::path dir = scratch("camo");
    REQUIRE(run({"camouflage", "--bench", bench("mul4"), "--scale", "0.3", "--seed", "4", "--out", dir.string()})
                .code == 0);
    for (const char* f : {"config.ini", "mul4.keyed.bench", "mul4.base.bench", "mul4.camo.json", "mul4.secret.json",
                          "mul4.targets.json", "mul4.key", "mul4.log"}) {
      CHECK_MESSAGE(fs::exists(dir / f), f);
    }
    KeyedNetlist k = keyed_from_netlist(read_bench_file(dir / "mul4.keyed.bench"));
    std::string key = read_text_file(dir / "mul4.key");
    key.pop_back();
    CHECK(key.size() == k.key_width());
    CHECK(test::same_function(apply_key(k, Key::from_string(key)), test::load("mul4")));

    // Memorized targets carry over to another scheme.
    fs::path amb = scratch("camo_amb");
    REQUIRE(run({"camouflage", "--bench", bench("mul4"), "--scheme", "ambiguous-16", "--scale", "0.3", "--seed",
                 "9", "--targets", (dir / "mul4.targets.json").string(), "--out", amb.string()})
                .code == 0);
    CHECK(load_target_set(amb / "mul4.targets.json").gates == load_target_set(dir / "mul4.targets.json").gates);
  }
}

TEST_CASE("attack command") {
  SUBCASE("ten seeds aggregate into one row") {
    fs::path dir = scratch("attack10");
    REQUIRE(run({"attack", "--bench", bench("c17"), "--scales", "30%", "--seeds", "1-10", "--out", dir.string()})
                .code == 0);
    auto runs = runs_from_json(read_text_file(dir / "runs.json"));
    CHECK(runs.size() == 10);
    const std::string agg = read_text_file(dir / "aggregates.csv");
    CHECK(count_lines(agg) == 2);
    auto doc = nlohmann::json::parse(read_text_file(dir / "aggregates.json"));
    REQUIRE(doc["aggregates"].size() == 1);
    const auto& row = doc["aggregates"][0];
    CHECK(row["runs"] == 10);
    CHECK(row["solved"] == 10);
    CHECK(row["timeouts"] == 0);
    double mean = 0.0;
    for (const auto& r : runs) mean += static_cast<double>(r.iterations) / 10.0;
    CHECK(row["mean_iterations"].get<double>() == doctest::Approx(mean));
    CHECK_FALSE(row["mean_cpu_s"].is_null());
  }

  SUBCASE("no attacks gives an empty report") {
    fs::path dir = scratch("attack0");
    Outcome o = run({"attack", "--bench", bench("c17"), "--attacks", "none", "--out", dir.string()});
    CHECK(o.code == 0);
    CHECK(runs_from_json(read_text_file(dir / "runs.json")).empty());
    CHECK(count_lines(read_text_file(dir / "runs.csv")) == 1);
  }

  SUBCASE("timeouts are rows, not failures") {
    fs::path dir = scratch("attack_to");
    Outcome o = run({"attack", "--bench", bench("rnd600"), "--scales", "100%", "--timeout", "0.5", "--out",
                     dir.string()});
    CHECK(o.code == 0);
    const std::string csv = read_text_file(dir / "runs.csv");
    CHECK(csv.find(",timeout,") != std::string::npos);
    CHECK(csv.find(",t-o,") != std::string::npos);
    CHECK(read_text_file(dir / "aggregates.csv").find("t-o") != std::string::npos);
  }

  SUBCASE("report re-renders the runs") {
    fs::path dir = scratch("attack_report");
    REQUIRE(run({"attack", "--bench", bench("c17"), "--attacks", "seminal,double-dip", "--seeds", "1-2", "--out",
                 dir.string()})
                .code == 0);
    Outcome csv = run({"report", (dir / "runs.json").string()});
    REQUIRE(csv.code == 0);
    CHECK(csv.out == read_text_file(dir / "runs.csv"));
    Outcome agg = run({"report", (dir / "runs.json").string(), "--aggregate", "--format", "json"});
    CHECK(agg.out == read_text_file(dir / "aggregates.json"));
  }
}

TEST_CASE("split command") {
  SUBCASE("original only") {
    fs::path dir = scratch("split_orig");
    REQUIRE(run({"split", "--bench", bench("mul4") + "," + bench("alu4"), "--original-only", "--thresholds", "0.1",
                 "--out", dir.string()})
                .code == 0);
    auto doc = nlohmann::json::parse(read_text_file(dir / "split_runs.json"));
    REQUIRE(doc["runs"].size() == 2);
    CHECK(doc["runs"][0]["benchmark"] == "mul4");
    CHECK(doc["runs"][1]["benchmark"] == "alu4");
    CHECK(doc["runs"][0]["scale"].is_null());
  }

  SUBCASE("full sweep") {
    fs::path dir = scratch("split_full");
    REQUIRE(run({"split", "--bench", bench("mul4"), "--seeds", "1-2", "--hd-patterns", "1000", "--out",
                 dir.string()})
                .code == 0);
    auto doc = nlohmann::json::parse(read_text_file(dir / "split_summary.json"));
    REQUIRE(doc["summary"].size() == 12);
    std::vector<std::string> scales;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& s = doc["summary"][i]["scale"];
      scales.push_back(s.is_null() ? "original" : format_double(s.get<double>()));
      CHECK(doc["summary"][i]["split_fraction"] == 0.1);
      CHECK(doc["summary"][i + 6]["split_fraction"] == 0.25);
      CHECK(doc["summary"][i]["seeds"] == 2);
    }
    CHECK(scales == std::vector<std::string>{"original", "0.2", "0.4", "0.6", "0.8", "1"});
    CHECK(count_lines(read_text_file(dir / "split_runs.csv")) == 1 + 2 * 12);
  }
}

TEST_CASE("reruns are byte-identical") {
  const std::vector<std::vector<std::string>> commands = {
      {"camouflage", "--bench", bench("alu4"), "--scheme", "final-primitive", "--scale", "0.4", "--seed", "3"},
      {"attack", "--bench", bench("c17") + "," + bench("mul4"), "--schemes", "final-primitive,ambiguous-16",
       "--scales", "10%,20%", "--seeds", "1-3", "--attacks", "seminal,double-dip", "--omit-timing", "--jobs", "3"},
      {"split", "--bench", bench("mul4"), "--seeds", "1-2", "--hd-patterns", "2000", "--omit-timing", "--jobs", "2"},
  };
  int i = 0;
  for (auto args : commands) {
    const fs::path dir = scratch("determinism_" + std::to_string(i++));
    args.push_back("--out");
    args.push_back(dir.string());
    INFO(args[0]);
    REQUIRE(run(args).code == 0);
    const auto first = snapshot(dir);
    CHECK(first.contains("config.ini"));
    REQUIRE(run(args).code == 0);
    CHECK(snapshot(dir) == first);

    // The resolved configuration alone reproduces the same files.
    const fs::path cfg = dir.string() + ".ini";
    fs::copy_file(dir / "config.ini", cfg, fs::copy_options::overwrite_existing);
    fs::remove_all(dir);
    REQUIRE(run({"--config", cfg.string()}).code == 0);
    CHECK(snapshot(dir) == first);
  }
}
