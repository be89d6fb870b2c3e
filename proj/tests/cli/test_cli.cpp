#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hodgekit/cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result hk(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = hodgekit::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("hodgekit_cli_" + std::to_string(std::rand()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    setenv("HODGEKIT_OUT_DIR", dir.c_str(), 1);
    setenv("HODGEKIT_FIXED_TIME", "2000-01-01T00:00:00Z", 1);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("verify writes a certificate and exits 0") {
  Workdir w;
  const auto r = hk({"verify", "--n", "3", "--r", "2", "--seed", "7"});
  CHECK(r.code == hodgekit::kExitPass);
  const Json j = load(w / "certificate.json");
  CHECK(j["manifest"]["command"].get<std::string>().rfind("verify", 0) == 0);
  CHECK(j["manifest"]["seed"] == 7);
  CHECK(j["certificate"]["verified"] == true);
  CHECK(j["certificate"]["entries"].size() == 3);  // (0,0), (1,0), (0,1)
}

TEST_CASE("verify reports a degenerate nu with exit 1") {
  Workdir w;
  spit(w.dir / "nu.json", R"({"n": 3, "p": 1, "q": 1, "coeffs": [{"I": [0], "J": [0], "re": 0, "im": 1}]})");
  const auto r = hk({"verify", "--n", "3", "--nu-file", w / "nu.json", "--out", w / "cert.json"});
  CHECK(r.code == hodgekit::kExitCheckFailed);
  const Json j = load(w / "cert.json");
  CHECK(j["certificate"]["verified"] == false);
  CHECK_FALSE(j["certificate"]["first_failure"].is_null());
}

TEST_CASE("usage and input errors exit 2") {
  Workdir w;
  CHECK(hk({"verify", "--n", "7"}).code == hodgekit::kExitInput);
  CHECK(hk({"sweep", "local1", "--n", "7"}).code == hodgekit::kExitInput);
  CHECK(hk({"verify", "--bogus"}).code == hodgekit::kExitInput);
  CHECK(hk({}).code == hodgekit::kExitInput);
  CHECK(hk({"ring", "validate", w / "missing.json"}).code == hodgekit::kExitInput);
  spit(w.dir / "bad.json", R"({"n": 2, "p": 1, "q": 1, "coeffs": [{"I": [1, 0], "J": [0], "re": 1, "im": 0}]})");
  const auto r = hk({"verify", "--n", "2", "--nu-file", w / "bad.json"});
  CHECK(r.code == hodgekit::kExitInput);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits 0") {
  CHECK(hk({"--help"}).code == hodgekit::kExitPass);
  CHECK(hk({"sweep", "local2", "--help"}).code == hodgekit::kExitPass);
}

TEST_CASE("fixed time makes output byte-identical") {
  Workdir w;
  REQUIRE(hk({"sweep", "triangle", "--n", "2", "--samples", "10", "--out-dir", w / "a"}).code == 0);
  REQUIRE(hk({"sweep", "triangle", "--n", "2", "--samples", "10", "--out-dir", w / "b", "--threads", "2"}).code == 0);
  const std::string a = slurp(w.dir / "a" / "sweep_triangle.json");
  const std::string b = slurp(w.dir / "b" / "sweep_triangle.json");
  CHECK_FALSE(a.empty());
  // the thread count is part of the recorded config, so compare the records
  CHECK(load(w.dir / "a" / "sweep_triangle.json")["report"]["records"] == load(w.dir / "b" / "sweep_triangle.json")["report"]["records"]);
  REQUIRE(hk({"sweep", "triangle", "--n", "2", "--samples", "10", "--out-dir", w / "c"}).code == 0);
  CHECK(slurp(w.dir / "c" / "sweep_triangle.json") == a);
  CHECK(slurp(w.dir / "c" / "sweep_triangle.csv") == slurp(w.dir / "a" / "sweep_triangle.csv"));
}

TEST_CASE("sweep csv carries the manifest and one row per sample") {
  Workdir w;
  REQUIRE(hk({"sweep", "local1", "--n", "3", "--r", "1", "--samples", "12", "--name", "l1"}).code == 0);
  std::istringstream csv(slurp(w.dir / "l1.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# manifest: ", 0) == 0);
  Json m = Json::parse(line.substr(12));
  CHECK(m["command"].get<std::string>().find("sweep local1") != std::string::npos);
  std::getline(csv, line);
  CHECK(line == "seed,n,r,s,N,ratio,margin");
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);
  const Json j = load(w.dir / "l1.json");
  CHECK(j["report"]["records"].size() == 12);
  CHECK(j["report"]["eps_floor"].get<double>() == doctest::Approx(1e-6));
}

TEST_CASE("local2 reports a slope near the grid bottom") {
  Workdir w;
  const auto r = hk({"sweep", "local2", "--n", "3", "--m", "1", "--r", "1", "--seed", "5", "--samples", "20"});
  CHECK(r.code == hodgekit::kExitPass);
  const Json j = load(w.dir / "sweep_local2.json");
  CHECK(j["report"]["min_slope"].get<double>() >= 0.9);
  CHECK(j["report"].contains("eps_floor_effective"));
  CHECK(j["report"]["records"][0].contains("rho"));
}

TEST_CASE("ring commands chain through files") {
  Workdir w;
  REQUIRE(hk({"ring", "torus", "--n", "1", "--out", w / "t1.json"}).code == 0);
  REQUIRE(hk({"ring", "torus", "--n", "2", "--out", w / "t2.json"}).code == 0);
  CHECK(hk({"ring", "validate", w / "t2.json", "--out", w / "v.json"}).code == 0);
  CHECK(load(w / "v.json")["diagnostics"]["pass"] == true);
  REQUIRE(hk({"ring", "kunneth", "--a", w / "t1.json", "--b", w / "t2.json", "--out", w / "prod.json"}).code == 0);
  CHECK(load(w / "prod.json")["construction"]["kind"] == "kunneth");

  const auto th2 = hk({"ring", "theorem2", "--y", w / "prod.json", "--s", "1", "--r", "2", "--out", w / "th2.json"});
  CHECK(th2.code == 0);
  for (const auto& rep : load(w / "th2.json")["reports"]) CHECK(rep["angle"].get<double>() <= 1e-8);

  // a torus carries no freeness guarantee
  CHECK(hk({"ring", "theorem2", "--y", w / "t2.json", "--r", "1", "--p", "1", "--q", "0"}).code == hodgekit::kExitRefused);

  spit(w.dir / "c.json",
       R"({"chern": [{"terms": [{"name": "dz0dzb0", "re": 0, "im": 1}, {"name": "dz1dzb1", "re": 0, "im": 1}]},)"
       R"( {"terms": [{"name": "dz0dz1dzb0dzb1", "re": -1, "im": 0}]}]})");
  const auto pb = hk({"ring", "projbundle", "--base", w / "t2.json", "--rank", "2", "--chern", w / "c.json",
                      "--out", w / "pb.json"});
  CHECK(pb.code == 0);
  const Json pbj = load(w / "pb.json");
  CHECK(pbj["construction"]["kind"] == "projbundle");
  CHECK(pbj["basis"].size() == 32);
  CHECK(hk({"ring", "theorem2", "--y", w / "pb.json", "--s", "1", "--r", "2"}).code == 0);

  const auto th3 = hk({"ring", "theorem3", "--x", w / "t2.json", "--chern", w / "c.json", "--k", "0",
                       "--out", w / "th3.json"});
  CHECK(th3.code == 0);
  CHECK(load(w / "th3.json")["reports"][0]["identity_residual"].get<double>() <= 1e-10);
}

TEST_CASE("ring metric defaults to the classical metric") {
  Workdir w;
  REQUIRE(hk({"ring", "torus", "--n", "1", "--out", w / "t1.json"}).code == 0);
  spit(w.dir / "w.json", R"({"terms": [{"name": "dz0dzb0", "re": 0, "im": 1}]})");
  spit(w.dir / "a.json", R"({"terms": [{"name": "1", "re": 3, "im": 0}]})");
  const auto r = hk({"ring", "metric", "--ring", w / "t1.json", "--w", w / "w.json", "--a", w / "a.json",
                     "--out", w / "m.json"});
  CHECK(r.code == 0);
  CHECK(load(w / "m.json")["result"]["metric"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("manifest timestamps honour the fixed time") {
  setenv("HODGEKIT_FIXED_TIME", "2001-02-03T04:05:06Z", 1);
  CHECK(hodgekit::timestamp_now() == "2001-02-03T04:05:06Z");
  unsetenv("HODGEKIT_FIXED_TIME");
  const std::string now = hodgekit::timestamp_now();
  CHECK(now.size() == 20);
  CHECK(now.back() == 'Z');
  CHECK_FALSE(hodgekit::tool_version().empty());
}
