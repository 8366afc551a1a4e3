#include "qcduality/cli.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qcd;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qcduality");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string without_timing(json j) {
  j.erase("timing");
  return j.dump();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qcduality_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("[PAPER] duality C, N=2 at xi=0 passes") {
  auto o = invoke({"duality", "--kind", "C", "--n", "2", "--z", "1,2", "--xi", "0"});
  CHECK(o.code == cli::exit_pass);
  auto r = o.report();
  CHECK(r["summary"]["status"] == "pass");
  CHECK(r["summary"]["pass"].get<int>() >= 3);  // sectors 0 and 1
  for (const auto& v : r["verdicts"])
    if (v["verdict"] == "pass") CHECK(v["relative"].get<double>() <= 1e-8);
}

TEST_CASE("[PAPER] identity B, N=1, M=1 holds exactly") {
  auto o = invoke({"identity", "--kind", "B", "--n", "1", "--m", "1", "--mode", "rational", "--samples", "10"});
  CHECK(o.code == cli::exit_pass);
  auto r = o.report();
  CHECK(r["verdicts"].size() == 10);
  CHECK(r["summary"]["exact_zero"] == 10);
  for (const auto& v : r["verdicts"]) {
    CHECK(v["residual"].get<double>() == 0.0);
    CHECK(v["mode"] == "rational");
  }
}

TEST_CASE("[PAPER] g1=1, g2=g4=0 violates the coupling constraint") {
  auto o = invoke({"validate", "--kind", "B", "--g1", "1", "--g2", "0", "--g4", "0"});
  CHECK(o.code == cli::exit_fail);
  auto r = o.report();
  REQUIRE(r["verdicts"].size() == 1);
  CHECK(r["verdicts"][0]["verdict"] == "fail");
  CHECK(r["verdicts"][0]["error"] == "ConstraintViolated");
}

TEST_CASE("[DERIVED] preset couplings validate") {
  for (const char* k : {"A", "B", "C", "D"}) {
    CAPTURE(k);
    CHECK(invoke({"validate", "--kind", k, "--n", "3"}).code == cli::exit_pass);
  }
  // g2 = 1, g4 = sqrt2 / 2 (1 - 2 + 1 = 0)
  CHECK(invoke({"validate", "--kind", "B", "--g1", "1", "--g2", "1", "--g4", "0.7071067811865476"}).code ==
        cli::exit_pass);
}

TEST_CASE("[TRIVIAL] configuration errors exit with 2") {
  CHECK(invoke({"bethe", "--kind", "Q"}).code == cli::exit_config);
  CHECK(invoke({"bethe", "--kind", "C", "--z", "1,1", "--m", "1"}).code == cli::exit_config);
  CHECK(invoke({"bethe", "--kind", "C", "--z", "0,1", "--m", "1"}).code == cli::exit_config);
  CHECK(invoke({"bethe", "--kind", "C", "--n", "2", "--m", "2"}).code == cli::exit_config);
  CHECK(invoke({"identity", "--mode", "decimal"}).code == cli::exit_config);
  CHECK(invoke({"quantum-oracle", "--kind", "A", "--n", "2"}).code == cli::exit_config);
  CHECK(invoke({"frobnicate"}).code == cli::exit_config);
  CHECK(invoke({}).code == cli::exit_config);
  CHECK(invoke({"duality", "--config", scratch("missing.json").string()}).code == cli::exit_config);
  auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"model\": {\"root_system\": 7}}";
  auto o = invoke({"duality", "--config", bad.string()});
  CHECK(o.code == cli::exit_config);
  CHECK(o.err.find("configuration error") != std::string::npos);
  std::ofstream(bad) << "{not json";
  CHECK(invoke({"duality", "--config", bad.string()}).code == cli::exit_config);
}

TEST_CASE("[TRIVIAL] help documents the CSV columns and exits 0") {
  auto o = invoke({"--help"});
  CHECK(o.code == cli::exit_pass);
  CHECK(o.out.find("sector,state,index,re,im") != std::string::npos);
  CHECK(o.out.find("quantum-oracle") != std::string::npos);
  auto v = invoke({"--version"});
  CHECK(v.code == cli::exit_pass);
  CHECK(v.out.find(cli::version()) != std::string::npos);
}

TEST_CASE("[DERIVED] configuration round-trips through its JSON form") {
  cli::RunConfig c;
  c.model.root_system = RootSystem::D;
  c.model.n = 3;
  c.model.z = {Complex(0.5, 0.25), 1.75, 3.0};
  c.model.hbar = Complex(0.3, -0.1);
  c.model.m = 1;
  c.m_given = true;
  c.g2 = Complex(0.1, 0.2);
  c.seeds = 17;
  c.rng_seed = 99;
  c.tol = 1.5e-9;
  c.mode = "float";
  c.p = {0.1, 0.2, 1.0 / 3.0};
  c.replay = json{{"q", {"1/2"}}};
  const json j = c;
  const json back = j.get<cli::RunConfig>();
  CHECK(back.dump() == j.dump());

  auto path = scratch("config.json");
  std::ofstream(path) << j.dump(2);
  std::ifstream f(path);
  const json reread = json::parse(f).get<cli::RunConfig>();
  CHECK(reread.dump() == j.dump());

  cli::RunConfig d;  // m absent stays absent
  const json jd = d;
  CHECK_FALSE(jd["model"].contains("m"));
  CHECK(json(jd.get<cli::RunConfig>()).dump() == jd.dump());
}

TEST_CASE("[DERIVED] flags override the configuration file") {
  auto path = scratch("override.json");
  std::ofstream(path) << R"({"model": {"root_system": "D", "z": [1, 2, 3]}, "seeds": 8})";
  auto r = invoke({"bethe", "--config", path.string(), "--m", "1", "--seeds", "12"}).report();
  CHECK(r["config"]["model"]["root_system"] == "D");
  CHECK(r["config"]["model"]["n"] == 3);
  CHECK(r["config"]["seeds"] == 12);
  CHECK(r["summary"]["solver"]["attempts"] == 12);
}

TEST_CASE("[DERIVED] reports are identical apart from timing") {
  const std::vector<std::string> runs[] = {
      {"bethe", "--kind", "C", "--n", "3", "--m", "1", "--xi", "0.5"},
      {"duality", "--kind", "B", "--n", "3"},
      {"identity", "--kind", "D", "--n", "2", "--m", "2", "--samples", "5"},
      {"quantum-oracle", "--kind", "C", "--n", "3", "--m", "1"},
  };
  for (const auto& args : runs) {
    CAPTURE(args[0]);
    auto a = invoke(args);
    auto one = args;
    one.insert(one.end(), {"--jobs", "1"});
    auto b = invoke(one);
    CHECK(a.code == b.code);
    auto ra = a.report(), rb = b.report();
    ra["config"].erase("jobs");
    rb["config"].erase("jobs");
    CHECK(without_timing(ra) == without_timing(rb));
    CHECK(ra.contains("timing"));
  }
}

TEST_CASE("[DERIVED] identity certificates replay") {
  auto r = invoke({"identity", "--kind", "C", "--n", "2", "--m", "1", "--samples", "3", "--rng-seed", "7"}).report();
  for (const auto& v : r["verdicts"]) {
    auto path = scratch("replay.json");
    std::ofstream(path) << json{{"model", {{"root_system", "C"}, {"n", 2}}}, {"replay", v["inputs"]}}.dump();
    auto again = invoke({"identity", "--config", path.string()});
    CHECK(again.code == cli::exit_pass);
    auto rr = again.report();
    REQUIRE(rr["verdicts"].size() == 1);
    CHECK(rr["verdicts"][0]["inputs"] == v["inputs"]);
    CHECK(rr["verdicts"][0]["residual"] == v["residual"]);
  }
  // float mode on the same inputs
  auto f = invoke({"identity", "--kind", "C", "--n", "2", "--m", "1", "--samples", "3", "--rng-seed", "7",
                   "--mode", "float"});
  CHECK(f.code == cli::exit_pass);
}

TEST_CASE("[DERIVED] factorization in both modes") {
  auto r = invoke({"factorization", "--kind", "C", "--n", "3", "--xi", "1/2", "--samples", "5"});
  CHECK(r.code == cli::exit_config);  // xi is a complex literal, not a fraction
  r = invoke({"factorization", "--kind", "C", "--n", "3", "--xi", "0.5", "--samples", "5"});
  CHECK(r.code == cli::exit_pass);
  for (const auto& v : r.report()["verdicts"]) CHECK(v["nilpotent_charpoly"] == true);
  CHECK(invoke({"factorization", "--kind", "B", "--n", "4", "--samples", "3"}).code == cli::exit_pass);
  CHECK(invoke({"factorization", "--kind", "D", "--z", "1,2.5,4", "--mode", "float"}).code == cli::exit_pass);
  CHECK(invoke({"factorization", "--kind", "C", "--xi", "0.5i", "--n", "2"}).code == cli::exit_config);
  CHECK(invoke({"factorization", "--kind", "A", "--n", "2"}).code == cli::exit_config);
}

TEST_CASE("[DERIVED] A-type duality spectrum") {
  auto o = invoke({"duality", "--kind", "A", "--z", "0.5,1.7", "--omega", "0.8"});
  CHECK(o.code == cli::exit_pass);
  CHECK(o.report()["summary"]["worst_spectrum_deviation"].get<double>() <= 1e-8);
}

TEST_CASE("[DERIVED] quantum oracle writes the spectrum CSV next to the report") {
  auto out = scratch("oracle.json");
  std::filesystem::remove(scratch("oracle.csv"));
  auto o = invoke({"quantum-oracle", "--kind", "D", "--n", "3", "--out", out.string()});
  CHECK(o.code == cli::exit_pass);
  CHECK(o.out.empty());
  auto r = json::parse(slurp(out));
  CHECK(r["command"] == "quantum-oracle");
  CHECK(r["schema"] == 1);
  const auto csv = slurp(scratch("oracle.csv"));
  CHECK(csv.rfind("sector,", 0) == 0);
}

TEST_CASE("[DERIVED] evolve conserves the Lax invariants") {
  auto csv = scratch("traj.csv");
  auto o = invoke({"evolve", "--kind", "C", "--z", "2,4,6.5", "--p", "0.5,0.8,1.1", "--hbar", "0.5", "--steps", "200",
                   "--csv", csv.string()});
  CHECK(o.code == cli::exit_pass);
  auto r = o.report();
  CHECK(r["verdicts"].size() == 5);  // tr L^k, k = 1..4, and the spectrum
  CHECK(r["summary"]["final"]["t"].get<double>() == doctest::Approx(0.2));
  CHECK(slurp(csv).rfind("t,q_1,q_2,q_3,p_1,p_2,p_3", 0) == 0);
  // explicit couplings must satisfy the constraint
  CHECK(invoke({"evolve", "--kind", "B", "--g1", "1", "--g2", "0", "--g4", "0", "--z", "2,4"}).code ==
        cli::exit_config);
}

TEST_CASE("[DERIVED] acceptance suite through the CLI") {
  auto o = invoke({"all", "--jobs", "1"});
  CHECK(o.code == cli::exit_pass);
  auto r = o.report();
  CHECK(r["verdicts"].size() == 9);
  CHECK(r["timing"]["criteria_seconds"].size() == 9);
  for (const auto& v : r["verdicts"]) CHECK_FALSE(v.contains("seconds"));
}
