#include "pulsedg/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "pulsedg/elliptic.hpp"
#include "pulsedg/error.hpp"
#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/expression.hpp"

namespace pulsedg {

using nlohmann::json;

namespace {

struct SchemeName {
  SchemeKind kind;
  std::string_view name;
};

constexpr SchemeName kSchemes[] = {
    {SchemeKind::e0, "e0"},
    {SchemeKind::h0_cons, "h0_cons"},
    {SchemeKind::h0_diss, "h0_diss"},
    {SchemeKind::h1, "h1"},
    {SchemeKind::cd_integration, "cd_integration"},
    {SchemeKind::cd_integration_h0, "cd_integration_h0"},
    {SchemeKind::sg, "sg"},
    {SchemeKind::sg_integration, "sg_integration"},
};

const std::vector<std::string> kSolutions = {"cd_soliton", "cn_wave", "sg_kink", "cuspon", "defocusing", "piecewise"};

json evaluate_params(const json& node, const std::string& where) {
  if (node.is_string()) {
    const auto text = node.get<std::string>();
    std::complex<double> v;
    try {
      v = evaluate_expression(text);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (v.imag() == 0.0) return v.real();
    return json::array({v.real(), v.imag()});
  }
  if (node.is_array()) {
    json out = json::array();
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(evaluate_params(node[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (node.is_object()) {
    json out = json::object();
    for (auto it = node.begin(); it != node.end(); ++it) out[it.key()] = evaluate_params(it.value(), where + "." + it.key());
    return out;
  }
  return node;
}

template <class T>
T get_field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

double get_number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return evaluate_real_expression(v.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
  }
  throw ConfigError(std::string("field '") + key + "' must be a number");
}

Boundary parse_boundary(const std::string& name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "dirichlet_exact") return Boundary::dirichlet_exact;
  throw ConfigError("field 'boundary': unknown value '" + name + "'");
}

std::string boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "dirichlet_exact"; }

EllipticParams elliptic_from(const json& p) {
  EllipticParams e;
  e.kappa = get_number(p, "kappa", e.kappa);
  e.a = get_number(p, "a", e.a);
  e.x0 = get_number(p, "x0", e.x0);
  e.eta0 = get_number(p, "eta0", e.eta0);
  e.d = get_number(p, "d", e.d);
  return e;
}

bool is_sg_scheme(SchemeKind k) { return k == SchemeKind::sg || k == SchemeKind::sg_integration; }

}  // namespace

std::string_view scheme_kind_name(SchemeKind kind) {
  for (const auto& s : kSchemes)
    if (s.kind == kind) return s.name;
  return "?";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  for (const auto& s : kSchemes)
    if (s.name == name) return s.kind;
  throw ConfigError("field 'scheme': unknown value '" + std::string(name) + "'");
}

FluxParams RunConfig::effective_flux() const {
  if (flux) return *flux;
  if (scheme == SchemeKind::h0_diss) return FluxParams::dissipative();
  return FluxParams::conserved();
}

void RunConfig::validate() const {
  const SystemDescriptor sys = describe(system);
  if (scheme == SchemeKind::e0) {
    if (system != Family::sp_direct) throw ConfigError("field 'system': scheme e0 needs sp_direct");
    if (solution != "cn_wave") throw ConfigError("field 'solution': scheme e0 runs the cn_wave solution");
    if (boundary != Boundary::periodic) throw ConfigError("field 'boundary': scheme e0 needs periodic");
  } else if (is_sg_scheme(scheme)) {
    if (!sys.is_sg_family()) throw ConfigError("field 'system': sine-Gordon schemes need a sine-Gordon system");
  } else if (!sys.is_cd_family()) {
    throw ConfigError("field 'system': CD schemes need a CD-family system");
  }
  if (std::find(kSolutions.begin(), kSolutions.end(), solution) == kSolutions.end()) {
    throw ConfigError("field 'solution.name': unknown value '" + solution + "'");
  }
  if (!(y_right > y_left) || !std::isfinite(y_left) || !std::isfinite(y_right)) throw ConfigError("field 'domain': need y_left < y_right");
  if (n_cells < 1) throw ConfigError("field 'n_cells' must be at least 1");
  if (degree < 0 || degree > 6) throw ConfigError("field 'degree' must lie in 0..6");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("field 'T' must be non-negative");
  try {
    step.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("field 'step': ") + e.what());
  }
  if (flux) {
    try {
      flux->validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("field 'flux': ") + e.what());
    }
    if (scheme == SchemeKind::h0_cons && !flux->is_conserved()) {
      throw ConfigError("field 'flux': h0_cons needs alpha = beta = mu = 0");
    }
  }
  if (recovery != "upwind" && recovery != "conservative") throw ConfigError("field 'recovery': expected upwind or conservative");
  if (recovery == "conservative" && scheme != SchemeKind::sg) throw ConfigError("field 'recovery': conservative needs scheme sg");
  for (double t : output.times)
    if (!(t >= 0.0 && t <= T)) throw ConfigError("field 'output.times': times must lie in [0, T]");
  if (!std::is_sorted(output.times.begin(), output.times.end())) throw ConfigError("field 'output.times' must be sorted");
  if (output.samples_per_cell < 1) throw ConfigError("field 'output.samples_per_cell' must be positive");
  for (std::size_t i = 1; i < meshes.size(); ++i)
    if (meshes[i] != 2 * meshes[i - 1]) throw ConfigError("field 'meshes': each mesh must double the previous one");
  for (const auto& q : quantities) {
    const bool ok = (q == "E0" && scheme == SchemeKind::e0) || (q == "H2" && is_sg_scheme(scheme)) ||
                    ((q == "H0" || q == "H1") && sys.is_cd_family());
    if (!ok) throw ConfigError("field 'quantities': '" + q + "' is not available for this scheme");
  }
}

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_flux = [](const std::optional<FluxParams>& a, const std::optional<FluxParams>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || (a->alpha == b->alpha && a->beta == b->beta && a->mu == b->mu);
  };
  return scheme == o.scheme && system == o.system && solution == o.solution && params == o.params &&
         y_left == o.y_left && y_right == o.y_right && n_cells == o.n_cells && degree == o.degree && T == o.T &&
         step.cfl == o.step.cfl && step.dt == o.step.dt && step.scaling == o.step.scaling && same_flux(flux, o.flux) &&
         boundary == o.boundary && recovery == o.recovery && output == o.output && meshes == o.meshes &&
         quantities == o.quantities;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::set<std::string> known{"scheme", "system",  "solution", "domain", "boundary",   "degree",
                                           "n_cells", "T",      "step",     "flux",   "recovery",   "output",
                                           "meshes", "quantities"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ConfigError("field '" + item.key() + "': unknown key");
  }
  RunConfig c;
  c.scheme = parse_scheme_kind(get_field<std::string>(doc, "scheme", "h1"));
  try {
    c.system = parse_family(get_field<std::string>(doc, "system", "cd"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'system': ") + e.what());
  }
  if (doc.contains("solution")) {
    const json& s = doc.at("solution");
    if (s.is_string()) {
      c.solution = s.get<std::string>();
    } else {
      c.solution = get_field<std::string>(s, "name", c.solution);
      if (s.contains("params")) c.params = evaluate_params(s.at("params"), "solution.params");
    }
  }
  c.n_cells = get_field<std::size_t>(doc, "n_cells", c.n_cells);
  c.degree = get_field<int>(doc, "degree", c.degree);
  c.T = get_number(doc, "T", c.T);
  c.boundary = parse_boundary(get_field<std::string>(doc, "boundary", c.scheme == SchemeKind::e0 ? "periodic" : "dirichlet_exact"));
  c.recovery = get_field<std::string>(doc, "recovery", c.recovery);
  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    if (d.is_string() && d.get<std::string>() == "period") {
      if (c.solution != "cn_wave") throw ConfigError("field 'domain': 'period' needs the cn_wave solution");
      const EllipticParams e = elliptic_from(c.params);
      c.y_left = 0.0;
      // One wavelength in x for the direct scheme, in y for the hodograph route.
      c.y_right = c.scheme == SchemeKind::e0 ? period_of_cn(e) : 4.0 * elliptic::K(e.kappa) / e.a;
    } else if (d.is_array() && d.size() == 2) {
      c.y_left = get_number(json{{"v", d[0]}}, "v", 0.0);
      c.y_right = get_number(json{{"v", d[1]}}, "v", 0.0);
    } else {
      throw ConfigError("field 'domain': expected [left, right] or \"period\"");
    }
  }
  if (doc.contains("step")) {
    const json& s = doc.at("step");
    c.step.cfl = get_number(s, "cfl", c.step.cfl);
    if (s.contains("dt") && !s.at("dt").is_null()) c.step.dt = get_number(s, "dt", 0.0);
    const auto scaling = get_field<std::string>(s, "scaling", "linear_h");
    if (scaling == "linear_h") c.step.scaling = StepScaling::linear_h;
    else if (scaling == "matched_order") c.step.scaling = StepScaling::matched_order;
    else throw ConfigError("field 'step.scaling': unknown value '" + scaling + "'");
  }
  if (doc.contains("flux") && !doc.at("flux").is_null()) {
    const json& f = doc.at("flux");
    FluxParams p = c.scheme == SchemeKind::h0_diss ? FluxParams::dissipative() : FluxParams::conserved();
    if (f.is_string()) {
      const auto name = f.get<std::string>();
      if (name == "conserved") p = FluxParams::conserved();
      else if (name == "dissipative") p = FluxParams::dissipative();
      else if (name == "table") p = FluxParams::table_preset();
      else throw ConfigError("field 'flux': unknown preset '" + name + "'");
    } else {
      p.alpha = get_number(f, "alpha", p.alpha);
      p.beta = get_number(f, "beta", p.beta);
      p.mu = get_number(f, "mu", p.mu);
    }
    c.flux = p;
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (o.contains("times")) {
      for (const auto& t : o.at("times")) c.output.times.push_back(get_number(json{{"v", t}}, "v", 0.0));
    }
    c.output.every = get_field<std::size_t>(o, "every", c.output.every);
    c.output.samples_per_cell = get_field<std::size_t>(o, "samples_per_cell", c.output.samples_per_cell);
    c.output.curves = get_field<bool>(o, "curves", c.output.curves);
  }
  c.meshes = get_field<std::vector<std::size_t>>(doc, "meshes", {});
  c.quantities = get_field<std::vector<std::string>>(doc, "quantities", {});
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration file '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["scheme"] = std::string(scheme_kind_name(c.scheme));
  j["system"] = std::string(family_name(c.system));
  j["solution"] = {{"name", c.solution}, {"params", c.params}};
  j["domain"] = json::array({c.y_left, c.y_right});
  j["n_cells"] = c.n_cells;
  j["degree"] = c.degree;
  j["T"] = c.T;
  j["step"] = {{"cfl", c.step.cfl},
               {"dt", c.step.dt ? json(*c.step.dt) : json(nullptr)},
               {"scaling", c.step.scaling == StepScaling::linear_h ? "linear_h" : "matched_order"}};
  if (c.flux) j["flux"] = {{"alpha", c.flux->alpha}, {"beta", c.flux->beta}, {"mu", c.flux->mu}};
  else j["flux"] = nullptr;
  j["boundary"] = boundary_name(c.boundary);
  j["recovery"] = c.recovery;
  j["output"] = {{"times", c.output.times},
                 {"every", c.output.every},
                 {"samples_per_cell", c.output.samples_per_cell},
                 {"curves", c.output.curves}};
  j["meshes"] = c.meshes;
  j["quantities"] = c.quantities;
  return j;
}

}  // namespace pulsedg
