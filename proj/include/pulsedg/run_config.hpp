#pragma once

// JSON run configuration. Parameters of exact solutions may be written as
// expressions ("exp(-2)", "0.5+i") and are evaluated when loading; complex
// values are stored as [re, im].

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pulsedg/mesh_basis.hpp"
#include "pulsedg/schemes_cd.hpp"
#include "pulsedg/systems.hpp"
#include "pulsedg/time_integration.hpp"

namespace pulsedg {

enum class SchemeKind { e0, h0_cons, h0_diss, h1, cd_integration, cd_integration_h0, sg, sg_integration };

std::string_view scheme_kind_name(SchemeKind kind);
SchemeKind parse_scheme_kind(std::string_view name);

struct OutputSpec {
  std::vector<double> times;        // curve / snapshot times in (0, T]
  std::size_t every = 0;            // snapshot cadence in steps; 0 disables
  std::size_t samples_per_cell = 8;
  bool curves = false;

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  SchemeKind scheme = SchemeKind::h1;
  Family system = Family::cd;
  std::string solution = "cd_soliton";
  nlohmann::json params = nlohmann::json::object();  // evaluated parameter record
  double y_left = -10.0;
  double y_right = 10.0;
  std::size_t n_cells = 40;
  int degree = 2;
  double T = 1.0;
  StepPolicy step;
  std::optional<FluxParams> flux;
  Boundary boundary = Boundary::dirichlet_exact;
  std::string recovery = "upwind";  // sine-Gordon z recovery
  OutputSpec output;
  std::vector<std::size_t> meshes;      // convergence sweep
  std::vector<std::string> quantities;  // drift

  // Flux actually used by the H0-type schemes.
  FluxParams effective_flux() const;
  // Scheme/system compatibility and value ranges; throws ConfigError naming the field.
  void validate() const;

  bool operator==(const RunConfig& other) const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace pulsedg
