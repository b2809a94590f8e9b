#include "cli.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace newtonflux;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("families lists the catalog") {
  const Outcome o = run_cli({"families"});
  CHECK(o.code == cli::kExitPass);
  CHECK_THAT(o.out, ContainsSubstring("euclidean_cap") && ContainsSubstring("perturbed_tangent_graph"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"bogus"}).code == cli::kExitUsage);
  CHECK(run_cli({"flux", "--catalog", "euclidean_cap", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run_cli({"flux", "--catalog", "euclidean_cap:R=abc"}).code == cli::kExitUsage);
  CHECK(run_cli({"flux", "--catalog", "euclidean_cap:n=2,R=0.5,rho=1"}).code == cli::kExitUsage);
  CHECK(run_cli({"flux"}).code == cli::kExitUsage);
  CHECK(run_cli({"sweep", "--catalog", "euclidean_cap"}).code == cli::kExitUsage);
  CHECK(run_cli({"sweep", "--catalog", "euclidean_cap", "--sweep", "R=1:2"}).code == cli::kExitUsage);
  const Outcome o = run_cli({"identity", "--catalog", "euclidean_cap:R=2,rho=1,Q=1"});
  CHECK(o.code == cli::kExitUsage);
  CHECK_THAT(o.err, ContainsSubstring("'Q'"));
}

TEST_CASE("passing checks exit with 0") {
  const Outcome id = run_cli({"identity", "--catalog", "euclidean_cap:n=2,R=2,rho=1"});
  CHECK(id.code == cli::kExitPass);
  CHECK_THAT(id.out, ContainsSubstring("PASS identity umbilic r=1"));
  CHECK(run_cli({"flux", "--catalog", "euclidean_cap:n=2,R=2,rho=1", "--r", "1,2"}).code == cli::kExitPass);
  CHECK(run_cli({"flux", "--catalog", "flat_disk:n=2,rho=1"}).code == cli::kExitPass);
  CHECK(run_cli({"estimate", "--catalog", "euclidean_cap:n=2,R=1,rho=1"}).code == cli::kExitPass);
  CHECK(run_cli({"volume", "--catalog", "flat_disk:n=2,rho=1"}).code == cli::kExitPass);
  CHECK(run_cli({"transverse", "--catalog", "euclidean_cap:n=2,R=2,rho=1"}).code == cli::kExitPass);
}

TEST_CASE("failures exit with 1") {
  const Outcome p = run_cli({"flux", "--catalog", "perturbed_euclidean_cap:n=2,R=2,rho=1"});
  CHECK(p.code == cli::kExitFail);
  CHECK_THAT(p.out, ContainsSubstring("FAIL"));
  CHECK(run_cli({"transverse", "--catalog", "tangent_graph:n=2,rho=1,k=0.5"}).code == cli::kExitFail);
  CHECK(run_cli({"volume", "--catalog", "euclidean_cap:n=2,R=2,rho=1,zP=0.5"}).code == cli::kExitFail);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> base = {"sweep", "--catalog", "euclidean_cap:n=2,R=1,rho=1", "--sweep", "R=1:3:5"};
  std::vector<std::string> a = base, b = base;
  a.insert(a.end(), {"--out", "cli_sweep_a.csv"});
  b.insert(b.end(), {"--out", "cli_sweep_b.csv"});
  REQUIRE(run_cli(a).code == cli::kExitPass);
  REQUIRE(run_cli(b).code == cli::kExitPass);
  const std::string csv = slurp("cli_sweep_a.csv");
  CHECK(csv == slurp("cli_sweep_b.csv"));
  CHECK(csv.rfind("param,value,r,H_r,bound,bound_round,slack,identity_residual,flux_rel_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  const std::vector<std::string> fj = {"flux", "--catalog", "hyperbolic_cap:kind=horosphere,n=2,rho=0.7", "--format", "json"};
  std::vector<std::string> x = fj, y = fj;
  x.insert(x.end(), {"--out", "cli_flux_a.json"});
  y.insert(y.end(), {"--out", "cli_flux_b.json"});
  REQUIRE(run_cli(x).code == cli::kExitPass);
  REQUIRE(run_cli(y).code == cli::kExitPass);
  CHECK(slurp("cli_flux_a.json") == slurp("cli_flux_b.json"));
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_flux_a.json"));
  CHECK(j.at("schema") == "newtonflux/1");
  CHECK(j.at("command") == "flux");
  CHECK(j.at("pass") == true);
  CHECK(j.at("reports").is_array());
  CHECK(!j.at("reports").empty());
}

TEST_CASE("descriptor files") {
  {
    std::ofstream f("cli_descriptor.json");
    f << R"({"family": "spherical_cap", "params": {"n": 2, "rho_c": 1, "rho": 0.6}})";
  }
  CHECK(run_cli({"identity", "--descriptor", "cli_descriptor.json"}).code == cli::kExitPass);
  {
    std::ofstream f("cli_bad_descriptor.json");
    f << R"({"family": "spherical_cap", "params": [1, 2]})";
  }
  CHECK(run_cli({"identity", "--descriptor", "cli_bad_descriptor.json"}).code == cli::kExitUsage);
  CHECK(run_cli({"identity", "--descriptor", "no_such_file.json"}).code == cli::kExitUsage);
  CHECK(run_cli({"identity", "--descriptor", "cli_descriptor.json", "--catalog", "flat_disk"}).code == cli::kExitUsage);
}

TEST_CASE("csv output of the identity check") {
  const Outcome o = run_cli({"identity", "--catalog", "euclidean_cap:n=2,R=2,rho=1", "--order", "4", "--format", "csv",
                             "--out", "cli_identity.csv"});
  CHECK(o.code == cli::kExitPass);
  const std::string csv = slurp("cli_identity.csv");
  CHECK(csv.rfind("index,t,check,r,lhs,rhs,residual\n", 0) == 0);
  std::filesystem::remove("cli_identity.csv");
}
