#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ftlab/circuits/suite.hpp"
#include "ftlab/cli/commands.hpp"
#include "ftlab/cli/registry.hpp"
#include "ftlab/error.hpp"

using namespace ftlab;
using namespace ftlab::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  int status = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ftlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// "<kind> <id> <path>" from the first output line.
std::pair<std::string, fs::path> stored(const Invocation& inv) {
  std::istringstream in(inv.out);
  std::string kind, id, path;
  in >> kind >> id >> path;
  return {id, path};
}

std::vector<json> records_of(const fs::path& run_dir) {
  std::vector<json> out;
  std::ifstream in(run_dir / "records.jsonl");
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("parse_selection") {
  CHECK(parse_selection("all").size() == 465);
  CHECK(parse_selection("selected15") == std::vector<int>{0, 1, 2, 171, 172, 173, 216, 217, 218, 240, 241, 242, 270, 271, 272});
  CHECK(parse_selection("5,0-2,2") == std::vector<int>{0, 1, 2, 5});
  CHECK_THROWS_AS(parse_selection("465"), ValidationError);
  CHECK_THROWS_AS(parse_selection("3-1"), ValidationError);
  CHECK_THROWS_AS(parse_selection("x"), ValidationError);
  CHECK_THROWS_AS(parse_selection("1,,2"), ValidationError);
}

TEST_CASE("ideal run over the whole suite analyses to zero distance") {
  const fs::path reg = fresh_dir("ideal");
  const auto run = invoke({"run", "--backend", "ideal", "--circuits", "all", "--mode", "both", "--out", reg.string()});
  REQUIRE(run.status == 0);
  const auto [id, dir] = stored(run);
  const auto recs = records_of(dir);
  REQUIRE(recs.size() == 930);
  CHECK(recs[0]["id"] == 0);
  CHECK(recs[0]["mode"] == "bare");
  CHECK(recs[1]["mode"] == "encoded");
  CHECK(recs[929]["id"] == 464);

  const fs::path report = reg / "report";
  const auto an = invoke({"analyze", "--bare", id, "--encoded", id, "--registry", reg.string(), "--out", report.string()});
  REQUIRE(an.status == 0);
  const json doc = json::parse(std::ifstream(report.string() + ".json"));
  REQUIRE(doc["records"].size() == 465);
  for (const auto& r : doc["records"]) {
    CHECK(r["d_bare"].get<double>() < 1e-12);
    CHECK(r["d_enc"].get<double>() < 1e-12);
  }
  std::ifstream csv(report.string() + ".csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "id,D_bare,D_enc,r");
  std::stringstream svg;
  svg << std::ifstream(report.string() + ".svg").rdbuf();
  CHECK(svg.str().starts_with("<svg"));
  CHECK(svg.str().find("<polyline") != std::string::npos);
}

TEST_CASE("readout error in analysis matches the closed form") {
  const fs::path reg = fresh_dir("readout");
  const auto run = invoke({"run", "--circuits", "0", "--out", reg.string()});
  REQUIRE(run.status == 0);
  const auto id = stored(run).first;
  const fs::path report = reg / "r.json";
  REQUIRE(invoke({"analyze", "--bare", id, "--encoded", id, "--readout-p", "0.08", "--registry", reg.string(), "--out",
                  report.string()})
              .status == 0);
  const json doc = json::parse(std::ifstream(report));
  CHECK(doc["records"][0]["d_bare"].get<double>() == doctest::Approx(1.0 - 0.92 * 0.92).epsilon(1e-12));
  CHECK(doc["records"][0]["d_enc"].get<double>() < doc["records"][0]["d_bare"].get<double>());
}

TEST_CASE("reruns content-address and reproduce bytes") {
  const fs::path reg = fresh_dir("rerun");
  const std::vector<std::string> args{"run", "--circuits", "selected15", "--readout-p", "0.05", "--out", reg.string()};
  const auto first = invoke(args);
  REQUIRE(first.status == 0);
  const auto [id, dir] = stored(first);
  std::stringstream before;
  before << std::ifstream(dir / "records.jsonl").rdbuf();

  auto jobs = args;
  jobs.insert(jobs.end(), {"--jobs", "3"});
  const auto second = invoke(jobs);
  REQUIRE(second.status == 0);
  CHECK(stored(second).first == id);
  CHECK(second.err.find("reused") != std::string::npos);

  const fs::path other = fresh_dir("rerun_other");
  auto elsewhere = args;
  elsewhere[elsewhere.size() - 1] = other.string();
  const auto third = invoke(elsewhere);
  std::stringstream a, b;
  a << std::ifstream(dir / "manifest.json").rdbuf();
  b << std::ifstream(stored(third).second / "manifest.json").rdbuf();
  CHECK(a.str() == b.str());
  CHECK(a.str().find("time") == std::string::npos);

  SUBCASE("a differing rerun is a numeric failure, never an overwrite") {
    write(dir / "records.jsonl", "{}\n");
    CHECK(invoke(args).status == kExitNumeric);
    std::stringstream after;
    after << std::ifstream(dir / "records.jsonl").rdbuf();
    CHECK(after.str() == "{}\n");
  }
}

TEST_CASE("validation failures exit with status 2") {
  const fs::path reg = fresh_dir("errors");
  CHECK(invoke({"run", "--circuits", "465", "--out", reg.string()}).status == kExitValidation);
  CHECK(invoke({"run", "--backend", "quantum", "--out", reg.string()}).status == kExitValidation);
  CHECK(invoke({"frobnicate"}).status == kExitValidation);
  CHECK(invoke({"run", "--readout-p", "0.7", "--out", reg.string()}).status == kExitValidation);

  write(reg / "bad.json", R"({"lambda": 0.1, "colour": 3})");
  CHECK(invoke({"run", "--backend", "spinbath", "--config", (reg / "bad.json").string(), "--out", reg.string()})
            .status == kExitValidation);
  write(reg / "badt.json", R"({"device": "q9"})");
  CHECK(invoke({"run", "--backend", "transmon", "--config", (reg / "badt.json").string(), "--out", reg.string()})
            .status == kExitValidation);
  CHECK(invoke({"analyze", "--bare", "nope", "--encoded", "nope", "--registry", reg.string(), "--out",
                (reg / "x").string()})
            .status == kExitValidation);

  const auto a = stored(invoke({"run", "--circuits", "0-2", "--out", reg.string()})).first;
  const auto b = stored(invoke({"run", "--circuits", "0-5", "--out", reg.string()})).first;
  const auto mismatch =
      invoke({"analyze", "--bare", a, "--encoded", b, "--registry", reg.string(), "--out", (reg / "m").string()});
  CHECK(mismatch.status == kExitValidation);
  CHECK(mismatch.err.find("mismatch") != std::string::npos);
}

TEST_CASE("spinbath at zero coupling reproduces the ideal backend") {
  const fs::path reg = fresh_dir("spin0");
  write(reg / "l0.json", R"({"lambda": 0.0, "n_env": 5, "seed": 11})");
  const auto spin = invoke({"run", "--backend", "spinbath", "--config", (reg / "l0.json").string(), "--circuits",
                            "0-2", "--out", reg.string()});
  REQUIRE(spin.status == 0);
  const auto ideal = invoke({"run", "--circuits", "0-2", "--out", reg.string()});
  const auto s = records_of(stored(spin).second);
  const auto i = records_of(stored(ideal).second);
  REQUIRE(s.size() == i.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s[k]["id"] == i[k]["id"]);
    json keys = s[k]["dist"];
    keys.update(i[k]["dist"]);
    for (const auto& [bits, unused] : keys.items()) {
      CHECK(std::abs(s[k]["dist"].value(bits, 0.0) - i[k]["dist"].value(bits, 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("import produces runs usable by analyze") {
  const fs::path reg = fresh_dir("import");
  write(reg / "counts.jsonl",
        "{\"id\": 1, \"width\": 2, \"counts\": {\"00\": 450, \"01\": 450, \"11\": 100}}\n"
        "{\"id\": 1, \"width\": 5, \"counts\": {\"00000\": 480, \"01111\": 470, \"10000\": 50}}\n");
  const auto imp = invoke({"import", (reg / "counts.jsonl").string(), "--out", reg.string()});
  REQUIRE(imp.status == 0);
  const auto id = stored(imp).first;
  const auto an = invoke({"analyze", "--bare", id, "--encoded", id, "--registry", reg.string(), "--out",
                          (reg / "a").string()});
  REQUIRE(an.status == 0);
  const json doc = json::parse(std::ifstream(reg / "a.json"));
  CHECK(doc["records"][0]["id"] == 1);
  CHECK(doc["records"][0]["d_bare"].get<double>() == doctest::Approx(0.1));
  CHECK(doc["records"][0]["ratio"].get<double>() == doctest::Approx(0.95));

  write(reg / "dup.jsonl", "{\"id\": 1, \"width\": 2, \"counts\": {\"00\": 1}}\n"
                           "{\"id\": 1, \"width\": 2, \"counts\": {\"01\": 1}}\n");
  CHECK(invoke({"import", (reg / "dup.jsonl").string(), "--out", reg.string()}).status == kExitValidation);
}

TEST_CASE("t2 at zero coupling reports no decay") {
  const fs::path reg = fresh_dir("t2");
  const auto t2 = invoke({"t2", "--lambda", "0", "--ne", "5", "--samples", "8", "--window", "5", "--out", reg.string()});
  REQUIRE(t2.status == 0);
  const json doc = json::parse(std::ifstream(stored(t2).second / "result.json"));
  CHECK(doc["decay_time_ns"].is_null());
  CHECK(doc["times"].size() == 8);
}

TEST_CASE("optimize logs a non-increasing delta history") {
  const fs::path reg = fresh_dir("opt");
  const auto opt = invoke({"optimize", "--device", "reduced-q0r1", "--gate", "xpih", "--withf", "--tau", "0.01",
                           "--max-iters", "4", "--out", reg.string()});
  REQUIRE(opt.status == 0);
  std::istringstream log(opt.out);
  std::vector<double> deltas;
  for (std::string word; log >> word;) {
    if (word == "delta") {
      double d = 0;
      log >> d;
      deltas.push_back(d);
    }
  }
  REQUIRE(deltas.size() == 4);
  for (std::size_t k = 1; k < deltas.size(); ++k) CHECK(deltas[k] <= deltas[k - 1]);
  const auto dir = [&] {
    for (const auto& e : fs::directory_iterator(reg / "optimize")) return e.path();
    return fs::path{};
  }();
  const json doc = json::parse(std::ifstream(dir / "result.json"));
  CHECK(doc["best_metrics"]["delta"].get<double>() <= doc["initial_metrics"]["delta"].get<double>());
  CHECK(doc["history"].size() == 4);
}
