#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "peh/commands.hpp"
#include "peh/report.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run invoke(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(PEH_BINARY) + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  Run r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Json json_of(const Run& r) {
  INFO(r.out);
  return Json::parse(r.out);
}

Json without_timing(Json j) {
  j.erase("timing");
  return j;
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("peh_cli_" + std::to_string(getpid()));
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const std::vector<std::string> kFixtures = {"fibonacci",         "thue-morse",        "dyadic",
                                            "arnoux-rauzy-3",    "penrose-kite-dart", "pentagonal-bs",
                                            "pentagonal-bs-plain", "periodic-triangle", "periodic-square",
                                            "periodic-square-translation"};

}  // namespace

TEST_CASE("compute fibonacci") {
  Run r = invoke("compute fibonacci --format json");
  CHECK(r.code == 0);
  Json j = json_of(r);
  CHECK(j["status"] == "ok");
  CHECK(j["limits"][0]["group"]["free_rank"] == 2);
  CHECK(j["limits"][0]["group"]["localized"].empty());
  CHECK(j["limits"][1]["group"]["free_rank"] == 1);
  CHECK(j["expectations"]["checked"] == true);
}

TEST_CASE("compute penrose dagger") {
  Run r = invoke("compute penrose-kite-dart --dagger --format json");
  CHECK(r.code == 0);
  Json j = json_of(r);
  CHECK(j["dagger"] == true);
  CHECK(j["limits"][0]["group"]["free_rank"] == 2);
  CHECK(j["limits"][0]["group"]["torsion"].empty());
  CHECK(j["duality_gap"]["cokernel"]["torsion"] == Json::array({5, 5}));
  CHECK(j["duality_gap"]["kernel"]["text"] == "0");
}

TEST_CASE("every fixture computes and meets its expectations") {
  for (const auto& f : kFixtures) {
    CAPTURE(f);
    Run r = invoke("compute " + f + " --format json");
    CHECK(r.code == 0);
    Json j = json_of(r);
    CHECK(j["status"] == "ok");
    CHECK(j["expectations"]["checked"] == true);
    CHECK(j["expectations"]["mismatches"].empty());
  }
}

TEST_CASE("limit examples") {
  auto group = [](const std::string& m) {
    Run r = invoke("limit '" + m + "' --format json");
    CHECK(r.code == 0);
    return json_of(r)["limits"][0]["group"];
  };
  Json fib = group("[[1,1],[1,0]]");
  CHECK(fib["kind"] == "normal_form");
  CHECK(fib["free_rank"] == 2);
  Json tm = group("[[1,1,1],[1,0,0],[1,0,0]]");
  CHECK(tm["text"] == "Z + Z[1/2]");
  CHECK(tm["verified_depth"] == 12);
  CHECK(group("[[2]]")["text"] == "Z[1/2]");
  CHECK(group("{\"matrix\": [[3]]}")["text"] == "Z[1/3]");

  fs::path m = scratch() / "m.json";
  write(m, "{\"matrix\": [[\"6\", 0], [0, 1]]}");
  Run r = invoke("limit " + m.string() + " --format json --verified-depth 5");
  CHECK(r.code == 0);
  CHECK(json_of(r)["limits"][0]["group"]["text"] == "Z + Z[1/6]");
  CHECK(json_of(r)["limits"][0]["group"]["verified_depth"] == 5);
  CHECK(invoke("limit '[[1,2]]'").code == 1);
  CHECK(invoke("limit '[[1,2'").code == 1);
  CHECK(invoke("limit '[[1,2],[3]]'").code == 1);
  CHECK(invoke("limit '[[\"x\"]]'").code == 1);
}

TEST_CASE("snf diag(2,3)") {
  Run r = invoke("snf '[[2,0],[0,3]]' --format json");
  CHECK(r.code == 0);
  Json j = json_of(r);
  CHECK(j["snf"]["invariant_factors"] == Json::array({1, 6}));
  CHECK(j["snf"]["cokernel"]["text"] == "Z/6");
  peh::IntMatrix U = peh::cli::matrix_from_json(j["snf"]["U"]);
  peh::IntMatrix V = peh::cli::matrix_from_json(j["snf"]["V"]);
  peh::IntMatrix D = peh::cli::matrix_from_json(j["snf"]["D"]);
  peh::IntMatrix A{{2, 0}, {0, 3}};
  CHECK(U * A * V == D);
}

TEST_CASE("big integers serialize as decimal strings") {
  Run r = invoke("snf '[[\"123456789012345678901234567890\"]]' --format json");
  CHECK(r.code == 0);
  Json j = json_of(r);
  CHECK(j["snf"]["invariant_factors"][0] == "123456789012345678901234567890");
  CHECK(j["snf"]["input"]["entries"][0][0] == "123456789012345678901234567890");
}

TEST_CASE("validate") {
  Run r = invoke("validate penrose-kite-dart");
  CHECK(r.code == 0);
  CHECK(r.out.find("valid") != std::string::npos);
  CHECK(r.out.find("invalid") == std::string::npos);
  CHECK(invoke("validate fibonacci").code == 0);

  Json doc = Json::parse(slurp(std::string(PEH_FIXTURES_DIR) + "/penrose-kite-dart.json"));
  Json& d1 = doc["boundaries"]["1"];
  d1[0][2] = d1[0][2].get<long>() + 1;
  fs::path bad = scratch() / "corrupted.json";
  write(bad, doc.dump());
  for (const std::string cmd : {"validate", "compute"}) {
    CAPTURE(cmd);
    Run v = invoke(cmd + " " + bad.string() + " --format json");
    CHECK(v.code == 1);
    Json j = json_of(v);
    CHECK(j["status"] == "invalid");
    CHECK(j["error"]["kind"] == "InvariantViolation");
    REQUIRE(j["validation"]["violations"].size() >= 1);
    CHECK(j["validation"]["violations"][0]["check"] == "boundary_composition");
  }
}

TEST_CASE("examples catalog") {
  Run r = invoke("examples --format json");
  CHECK(r.code == 0);
  Json j = json_of(r);
  std::vector<std::string> names;
  for (const auto& e : j["examples"]) names.push_back(e["name"]);
  for (const auto& f : kFixtures) CHECK(std::find(names.begin(), names.end(), f) != names.end());

  fs::path dir = scratch() / "fixtures";
  fs::create_directories(dir);
  fs::copy_file(std::string(PEH_FIXTURES_DIR) + "/dyadic.toml", dir / "dyadic.toml", fs::copy_options::overwrite_existing);
  Run o = invoke("examples --format json", "PEH_FIXTURES='" + dir.string() + "'");
  CHECK(o.code == 0);
  Json k = json_of(o);
  REQUIRE(k["examples"].size() == 1);
  CHECK(k["examples"][0]["name"] == "dyadic");
  CHECK(invoke("compute dyadic", "PEH_FIXTURES='" + dir.string() + "'").code == 0);
  CHECK(invoke("compute fibonacci", "PEH_FIXTURES='" + dir.string() + "'").code == 1);
}

TEST_CASE("exit codes") {
  fs::path d = scratch();
  CHECK(invoke("compute no-such-fixture").code == 1);
  CHECK(invoke("compute").code == 1);
  CHECK(invoke("frobnicate").code == 1);
  CHECK(invoke("compute fibonacci --levels 0").code == 1);
  CHECK(invoke("compute fibonacci --mode R").code == 1);
  CHECK(invoke("compute fibonacci --dagger").code == 1);
  CHECK(invoke("--help").code == 0);

  // computation errors
  Run ns = invoke("compute arnoux-rauzy-3 --horizon 1 --format json");
  CHECK(ns.code == 2);
  CHECK(json_of(ns)["error"]["kind"] == "NotStabilized");

  write(d / "wrong.toml", "name = \"wrong\"\nalphabet = [\"a\"]\n[rules.r]\na = \"aa\"\n"
                          "[direction]\nprefix = []\nperiod = [\"r\"]\n[expected]\nH0 = \"Z\"\n");
  Run w = invoke("compute " + (d / "wrong.toml").string() + " --format json");
  CHECK(w.code == 2);
  CHECK(json_of(w)["status"] == "expectation_mismatch");
  CHECK(json_of(w)["expectations"]["mismatches"].size() == 1);

  // malformed input never aborts
  const std::vector<std::pair<std::string, std::string>> junk = {
      {"empty.json", ""},
      {"trunc.json", "{\"name\": \"x\", \"dimension\": "},
      {"types.json", "{\"name\": 3, \"dimension\": \"two\"}"},
      {"array.json", "[1, 2, 3]"},
      {"empty.toml", ""},
      {"broken.toml", "name = \"x\nalphabet = [\n"},
      {"norules.toml", "name = \"x\"\nalphabet = [\"a\"]\n"},
      {"badletter.toml", "name=\"x\"\nalphabet=[\"a\"]\n[rules.r]\na=\"ab\"\n[direction]\nprefix=[]\nperiod=[\"r\"]\n"},
      {"binary.json", std::string("\x00\xff\xfe\x01", 4)},
  };
  for (const auto& [name, text] : junk) {
    CAPTURE(name);
    write(d / name, text);
    for (const std::string cmd : {"compute", "validate"}) {
      Run r = invoke(cmd + " " + (d / name).string() + " --format json");
      CHECK(r.code == 1);
      CHECK(json_of(r)["error"]["kind"] == "ParseError");
    }
  }
}

TEST_CASE("output flag writes the report") {
  fs::path out = scratch() / "report.json";
  fs::remove(out);
  Run r = invoke("compute dyadic --format json --output " + out.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  Json j = Json::parse(slurp(out));
  CHECK(j["limits"][0]["group"]["text"] == "Z[1/2]");
}

TEST_CASE("json round trip is lossless") {
  std::vector<std::string> runs = {"limit '[[4,1],[2,1]]'", "limit '[[2,1],[0,2]]' --mode Q", "snf '[[2,4],[6,8],[0,0]]'",
                                   "snf '[[]]'",           "validate penrose-kite-dart",     "examples",
                                   "compute penrose-kite-dart --dagger", "compute pentagonal-bs --dagger",
                                   "compute fibonacci --mode Q", "compute no-such-fixture"};
  for (const auto& f : kFixtures) runs.push_back("compute " + f);
  for (const auto& args : runs) {
    CAPTURE(args);
    Json j = json_of(invoke(args + " --format json"));
    peh::cli::PipelineReport r = peh::cli::from_json(j);
    CHECK(peh::cli::to_json(r) == j);
    CHECK(peh::cli::render_json(r) == j.dump(2) + "\n");
  }
}

TEST_CASE("deterministic json") {
  for (const std::string args : {"compute thue-morse", "compute penrose-kite-dart --dagger", "compute pentagonal-bs",
                                 "limit '[[1,1,1],[1,0,0],[1,0,0]]'", "examples"}) {
    CAPTURE(args);
    Json a = without_timing(json_of(invoke(args + " --format json")));
    Json b = without_timing(json_of(invoke(args + " --format json")));
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("text and json carry the same groups") {
  for (const auto& f : kFixtures) {
    for (const std::string extra : {"", " --dagger"}) {
      if (!extra.empty() && fs::path(peh::cli::resolve_input(f)).extension() == ".toml") continue;
      CAPTURE(f + extra);
      Run t = invoke("compute " + f + extra);
      Json j = json_of(invoke("compute " + f + extra + " --format json"));
      for (const auto& l : j["limits"]) {
        std::string line = "H" + std::to_string(l["degree"].get<int>()) + " = " + l["group"]["text"].get<std::string>();
        CHECK(t.out.find(line) != std::string::npos);
      }
      for (const auto& lv : j["levels"])
        for (const auto& h : lv["homology"]) {
          std::string g = h["rational"] ? h["text"].get<std::string>() : h["group"]["text"].get<std::string>();
          CHECK(t.out.find("H" + std::to_string(h["degree"].get<int>()) + " = " + g) != std::string::npos);
        }
    }
  }
}

TEST_CASE("in-process run matches the binary") {
  std::ostringstream out, err;
  const char* argv[] = {"peh", "compute", "dyadic", "--format", "json"};
  CHECK(peh::cli::run(5, argv, out, err) == 0);
  Json a = without_timing(Json::parse(out.str()));
  Json b = without_timing(json_of(invoke("compute dyadic --format json")));
  CHECK(a == b);
}
