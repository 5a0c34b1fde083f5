#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pulsedg/error.hpp"
#include "pulsedg/expression.hpp"
#include "pulsedg/harness.hpp"
#include "pulsedg/run_config.hpp"

using namespace pulsedg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pulsedg_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string first_line(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  return line;
}

json small_soliton() {
  return json::parse(R"({
    "scheme": "h1", "system": "cd",
    "solution": {"name": "cd_soliton", "params": {"p": [1.0], "alpha": [4.0]}},
    "domain": [-10, 10], "boundary": "dirichlet_exact",
    "degree": 1, "n_cells": 20, "T": 0.5, "step": {"cfl": 0.1},
    "meshes": [10, 20], "quantities": ["H0", "H1"],
    "output": {"times": [0.25], "curves": true, "every": 2}
  })");
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(PULSEDG_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(evaluate_real_expression("exp(-2)") == doctest::Approx(std::exp(-2.0)));
  CHECK(evaluate_real_expression("-exp(-8)") == doctest::Approx(-std::exp(-8.0)));
  CHECK(evaluate_real_expression("2^3*(1+1)/4") == doctest::Approx(4.0));
  CHECK(evaluate_real_expression("sqrt(4)+sin(0)+cos(0)+log(e)") == doctest::Approx(4.0));
  const auto z = evaluate_expression("0.5+1*i");
  CHECK(z.real() == doctest::Approx(0.5));
  CHECK(z.imag() == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluate_expression("exp(2"), ConfigError);
  CHECK_THROWS_AS(evaluate_expression("3 +"), ConfigError);
  CHECK_THROWS_AS(evaluate_real_expression("i"), ConfigError);
}

TEST_CASE("config round trip") {
  const RunConfig a = parse_config(small_soliton());
  CHECK(a.scheme == SchemeKind::h1);
  CHECK(a.degree == 1);
  CHECK(a.y_left == -10.0);
  const RunConfig b = parse_config(to_json(a));
  CHECK(a == b);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("flux spellings") {
  json doc = small_soliton();
  doc["scheme"] = "h0_diss";
  doc["flux"] = "table";
  CHECK(parse_config(doc).effective_flux().alpha == doctest::Approx(0.1));
  doc["flux"] = "dissipative";
  CHECK(parse_config(doc).effective_flux().beta == doctest::Approx(0.5));
  doc["flux"] = json{{"alpha", 0.0}, {"beta", 0.25}, {"mu", 0.5}};
  CHECK(parse_config(doc).effective_flux().beta == doctest::Approx(0.25));
  doc["scheme"] = "h0_cons";
  doc.erase("flux");
  CHECK(parse_config(doc).effective_flux().is_conserved());
}

TEST_CASE("config validation names the offending field") {
  auto fails = [](json doc, const std::string& field) {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return std::string(e.what()).find(field) != std::string::npos;
    }
    return false;
  };
  json d = small_soliton();
  d["scheme"] = "e0";
  CHECK(fails(d, "scheme"));
  d = small_soliton();
  d["degree"] = -1;
  CHECK(fails(d, "degree"));
  d = small_soliton();
  d["domain"] = json::array({1, 0});
  CHECK(fails(d, "domain"));
  d = small_soliton();
  d["scheme"] = "sg";
  CHECK(fails(d, "scheme"));
  d = small_soliton();
  d["T"] = -1;
  CHECK(fails(d, "T"));
  d = small_soliton();
  d["mystery"] = 1;
  CHECK(fails(d, "mystery"));
}

TEST_CASE("csv headers and number format") {
  const RunConfig cfg = parse_config(small_soliton());
  const fs::path dir = scratch("headers");
  cmd_run(cfg, dir / "run");
  CHECK(first_line(dir / "run" / "errors.csv") == "field,s,L2,Linf");
  CHECK(first_line(dir / "run" / "curve_0.25.csv") == "y,x,u");
  CHECK(fs::exists(dir / "run" / "run_meta.json"));
  CHECK(fs::exists(dir / "run" / "snapshots" / "index.csv"));
  cmd_convergence(cfg, dir / "conv");
  CHECK(first_line(dir / "conv" / "convergence.csv") ==
        "N,L2_u,order_u,Linf_u,order_Linf_u,L2_rho,order_rho,Linf_rho,order_Linf_rho");
  cmd_drift(cfg, dir / "drift");
  CHECK(first_line(dir / "drift" / "drift.csv") == "quantity,s,value,delta_cells,global_change");

  CHECK(format_number(1.0) == "1.000000000000000e+00");
  CHECK(format_number(-3.25e-7) == "-3.250000000000000e-07");

  std::ifstream in(dir / "conv" / "convergence.csv");
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(row1.rfind("10,", 0) == 0);
  CHECK(row1.find(",,") != std::string::npos);  // empty orders on the first row
  CHECK(row2.find(",,") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("T = 0 reports the projection error") {
  json doc = small_soliton();
  doc["T"] = 0;
  doc.erase("output");
  const RunOutput r = simulate(parse_config(doc));
  CHECK(r.steps == 0);
  REQUIRE(!r.errors.empty());
  CHECK(r.errors[0].l2 > 0.0);
  CHECK(r.errors[0].l2 < 0.5);
}

TEST_CASE("observed order") {
  CHECK(*observed_order(8.0, 1.0) == doctest::Approx(3.0));
  CHECK_FALSE(observed_order(0.0, 1.0).has_value());
}

TEST_CASE("non-doubling mesh sequence is rejected") {
  json doc = small_soliton();
  doc["meshes"] = json::array({10, 30});
  CHECK_THROWS_AS(convergence(parse_config(doc)), ConfigError);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "good.json") << small_soliton().dump();
    json bad = small_soliton();
    bad["degree"] = "two";
    std::ofstream(dir / "bad.json") << bad.dump();
    std::ofstream(dir / "broken.json") << "{ not json";
    json blowup = small_soliton();
    blowup["step"] = json{{"dt", 50.0}};
    blowup["T"] = 2000;
    std::ofstream(dir / "blowup.json") << blowup.dump();
  }
  const std::string d = dir.string();
  CHECK(run_cli("run --config " + d + "/good.json --out " + d + "/o1") == 0);
  CHECK(run_cli("run --config " + d + "/bad.json --out " + d + "/o2") == 2);
  CHECK(run_cli("run --config " + d + "/broken.json --out " + d + "/o3") == 2);
  CHECK(run_cli("run --config " + d + "/missing.json --out " + d + "/o4") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("drift --config " + d + "/blowup.json --out " + d + "/o5") == 3);
  CHECK(run_cli("reconstruct --config " + d + "/good.json --out " + d + "/o6") == 0);
  CHECK(fs::exists(dir / "o6" / "curve_0.25.csv"));
  fs::remove_all(dir);
}

TEST_CASE("shipped configurations parse") {
  for (const auto& e : fs::directory_iterator(PULSEDG_CONFIG_DIR)) {
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
  }
}
