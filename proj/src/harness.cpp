#include "pulsedg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "pulsedg/error.hpp"
#include "pulsedg/kernels.hpp"
#include "pulsedg/scheme_sp.hpp"
#include "pulsedg/schemes_cd.hpp"
#include "pulsedg/schemes_sg.hpp"

namespace pulsedg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool is_sg(SchemeKind k) { return k == SchemeKind::sg || k == SchemeKind::sg_integration; }

cplx complex_from(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("solution.params." + what + ": expected a number or [re, im]");
}

std::vector<cplx> complex_list(const json& p, const char* key, bool required) {
  std::vector<cplx> out;
  if (!p.contains(key)) {
    if (required) throw ConfigError(std::string("solution.params.") + key + " is required");
    return out;
  }
  const json& v = p.at(key);
  if (!v.is_array()) throw ConfigError(std::string("solution.params.") + key + " must be a list");
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex_from(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

double number(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw ConfigError(std::string("solution.params.") + key + " must be a number");
  return p.at(key).get<double>();
}

EllipticParams elliptic_params(const json& p) {
  EllipticParams e;
  e.kappa = number(p, "kappa", e.kappa);
  e.a = number(p, "a", e.a);
  e.x0 = number(p, "x0", e.x0);
  e.eta0 = number(p, "eta0", e.eta0);
  e.d = number(p, "d", e.d);
  return e;
}

KinkParams kink_params(const json& p) {
  KinkParams k;
  k.lambda = number(p, "lambda", k.lambda);
  k.shift = number(p, "shift", k.shift);
  k.polarity = number(p, "polarity", k.polarity);
  return k;
}

std::shared_ptr<const ExactSolution> make_exact(const RunConfig& cfg, const SystemDescriptor& sys) {
  const json& p = cfg.params;
  if (cfg.solution == "cd_soliton") {
    SolitonParams sp;
    sp.p = complex_list(p, "p", true);
    sp.alpha = complex_list(p, "alpha", true);
    sp.y0 = complex_list(p, "y0", false);
    sp.conjugate_pairing = p.contains("conjugate") ? p.at("conjugate").get<bool>() : sys.scalar_kind == ScalarKind::complex;
    return make_cd_soliton(sys, sp);
  }
  if (cfg.solution == "cn_wave") return make_cn_wave(sys, elliptic_params(p));
  if (cfg.solution == "cuspon") {
    CusponParams c;
    c.a1 = number(p, "a1", c.a1);
    c.b1 = number(p, "b1", c.b1);
    c.p1 = number(p, "p1", c.p1);
    c.xi10 = number(p, "xi10", c.xi10);
    return make_cuspon(sys, c);
  }
  if (cfg.solution == "defocusing") {
    DefocusParams d;
    d.kappa = number(p, "kappa", d.kappa);
    d.gamma = number(p, "gamma", d.gamma);
    d.phi = number(p, "phi", d.phi);
    return make_defocusing(sys, d);
  }
  if (cfg.solution == "sg_kink") {
    std::vector<KinkParams> kinks;
    if (p.contains("kinks")) {
      for (const auto& k : p.at("kinks")) kinks.push_back(kink_params(k));
    } else {
      kinks.push_back(kink_params(p));
    }
    return make_sg_kink(sys, kinks);
  }
  return nullptr;
}

// Piecewise-constant omega (and rho) data on a periodic mesh:
// params {breaks: [b0..bm], rho: [m values], omega: [m lists of n_real], mean: [n_real]}.
FieldSet piecewise_state(const RunConfig& cfg, const SystemDescriptor& sys, const Mesh1D& mesh, bool with_rho,
                         std::vector<double>& means) {
  const json& p = cfg.params;
  if (cfg.boundary != Boundary::periodic) throw ConfigError("piecewise initial data needs a periodic boundary");
  std::vector<double> breaks = p.value("breaks", std::vector<double>{mesh.y_left, mesh.y_right});
  const std::size_t m = breaks.size() - 1;
  if (breaks.size() < 2 || !std::is_sorted(breaks.begin(), breaks.end())) throw ConfigError("solution.params.breaks must be sorted");
  std::vector<double> rho = p.value("rho", std::vector<double>(m, 1.0));
  std::vector<std::vector<double>> omega = p.value("omega", std::vector<std::vector<double>>(m, std::vector<double>(sys.n_real, 0.0)));
  means = p.value("mean", std::vector<double>(sys.n_real, 0.0));
  if (rho.size() != m || omega.size() != m || means.size() != sys.n_real) throw ConfigError("solution.params: piece counts do not match breaks");
  auto piece = [&](double y) {
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), y);
    const auto i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - breaks.begin() - 1, 0, static_cast<std::ptrdiff_t>(m) - 1));
    return i;
  };
  FieldSet state;
  const int k = cfg.degree;
  if (with_rho) state.push_back(project_L2([&](double y) { return rho[piece(y)]; }, mesh, k));
  for (std::size_t c = 0; c < sys.n_real; ++c) {
    if (omega[0].size() != sys.n_real) throw ConfigError("solution.params.omega: one value per wave component");
    state.push_back(project_L2([&, c](double y) { return omega[piece(y)][c]; }, mesh, k));
  }
  return state;
}

double exact_anchor(const Problem& pb, double s) {
  if (pb.exact) return pb.exact->evaluate(pb.mesh.y_left, s).x;
  return pb.mesh.y_left;
}

std::vector<std::string> evolved_names(SchemeKind k) {
  if (k == SchemeKind::e0) return {"v"};
  if (is_sg(k)) return {"omega"};
  return {"rho", "omega"};
}

std::vector<std::string> recovered_names(SchemeKind k) {
  if (k == SchemeKind::e0) return {"u", "omega"};
  if (is_sg(k)) return {"z"};
  if (k == SchemeKind::h0_cons || k == SchemeKind::h0_diss || k == SchemeKind::cd_integration_h0) return {"u", "gamma"};
  return {"u"};
}

// Field name and component index for entry i of a field set whose first
// entries form a multi-component group.
std::pair<std::string, std::size_t> field_label(const std::vector<std::string>& names, std::size_t i, std::size_t n_real,
                                                bool leading_scalar) {
  if (leading_scalar) {
    if (i == 0) return {names[0], 0};
    if (i <= n_real) return {names[1], i - 1};
    return {names.size() > 2 ? names[2] : "extra", i - 1 - n_real};
  }
  if (i < n_real) return {names[0], i};
  return {names.size() > 1 ? names[1] : "extra", i - n_real};
}

void write_snapshot(const fs::path& file, const Problem& pb, const IntegratorState& st, const Recovered& aux) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "field,component,cell,mode,value\n";
  const SchemeKind k = pb.config.scheme;
  const std::size_t nr = pb.system.n_real;
  auto dump = [&](const FieldSet& fs_, const std::vector<std::string>& names, bool leading_scalar) {
    for (std::size_t i = 0; i < fs_.size(); ++i) {
      const auto [name, comp] = k == SchemeKind::e0 ? std::pair<std::string, std::size_t>{names[i], 0}
                                                    : field_label(names, i, nr, leading_scalar);
      const DGField& f = fs_[i];
      for (std::size_t j = 0; j < f.n_cells(); ++j)
        for (int m = 0; m < f.modes(); ++m)
          out << name << ',' << comp << ',' << j << ',' << m << ',' << format_number(f.coeff(j, m)) << '\n';
    }
  };
  const bool cd = !is_sg(k) && k != SchemeKind::e0;
  dump(st.fields, evolved_names(k), cd);
  dump(aux.fields, recovered_names(k), false);
}

// Curve columns: real layout -> u[, v] plus moduli for complex systems.
void finish_columns(const SystemDescriptor& sys, ParametricCurve& c) {
  if (sys.scalar_kind != ScalarKind::complex) return;
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols, mods;
  const std::size_t n = c.y.size();
  const char* labels[] = {"u", "v"};
  for (int comp = 0; comp < sys.n_wave_components; ++comp) {
    const auto& re = c.columns[2 * comp];
    const auto& im = c.columns[2 * comp + 1];
    std::vector<double> mod(n);
    for (std::size_t i = 0; i < n; ++i) mod[i] = std::hypot(re[i], im[i]);
    names.emplace_back(labels[comp]);
    cols.push_back(re);
    mods.push_back(std::move(mod));
  }
  for (int comp = 0; comp < sys.n_wave_components; ++comp) {
    names.push_back(std::string("|") + labels[comp] + "|");
    cols.push_back(std::move(mods[comp]));
  }
  c.names = std::move(names);
  c.columns = std::move(cols);
}

std::vector<std::string> raw_curve_names(const SystemDescriptor& sys, std::size_t n_fields) {
  std::vector<std::string> names;
  if (sys.scalar_kind == ScalarKind::complex) {
    for (std::size_t i = 0; i < n_fields; ++i) names.push_back("w" + std::to_string(i));
  } else {
    const char* labels[] = {"u", "v"};
    for (std::size_t i = 0; i < n_fields; ++i) names.emplace_back(labels[i]);
  }
  return names;
}

std::vector<double> sample_at(const DGField& f, const ParametricCurve& c) {
  std::vector<double> out;
  for (double y : c.y) {
    const std::size_t j = f.mesh().locate(y);
    out.push_back(f.eval_local(j, std::clamp(f.mesh().to_reference(j, y), -1.0, 1.0)));
  }
  return out;
}

CurveRecord curve_cd(const Problem& pb, double t_req, const IntegratorState& st, const Recovered& aux) {
  const auto* cd = dynamic_cast<const CDScheme*>(pb.scheme.get());
  const FieldSet u = cd->wave(aux);
  const bool periodic = pb.mesh.boundary == Boundary::periodic;
  const double anchor = periodic && pb.exact ? exact_anchor(pb, st.s) : st.anchor;
  const DGField x = x_from_rho(st.fields[0], anchor);
  const auto names = raw_curve_names(pb.system, u.size());
  CurveRecord rec{t_req, st.s, emit_curve(x, u, names, pb.config.output.samples_per_cell), {}};
  rec.rho = sample_at(st.fields[0], rec.curve);
  finish_columns(pb.system, rec.curve);
  return rec;
}

CurveRecord curve_sg(const Problem& pb, double t_req, double s, double anchor, const FieldSet& z, const FieldSet& zs) {
  const bool periodic = pb.mesh.boundary == Boundary::periodic;
  if (periodic && pb.exact) anchor = exact_anchor(pb, s);
  const DGField x = x_from_z(z, anchor);
  const auto names = raw_curve_names(pb.system, zs.size());
  CurveRecord rec{t_req, s, emit_curve(x, zs, names, pb.config.output.samples_per_cell), {}};
  std::vector<double> c(rec.curve.y.size(), 0.0);
  for (const auto& f : z) {
    const auto v = sample_at(f, rec.curve);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += std::cos(v[i]) / static_cast<double>(z.size());
  }
  rec.rho = std::move(c);
  return rec;
}

CurveRecord curve_e0(const Problem& pb, double t_req, const IntegratorState& st, const Recovered& aux) {
  // Physical plane: x is the mesh coordinate.
  DGField x(pb.mesh, 1);
  for (std::size_t j = 0; j < pb.mesh.n_cells; ++j) {
    x.coeff(j, 0) = pb.mesh.center(j);
    x.coeff(j, 1) = 0.5 * pb.mesh.width();
  }
  const std::vector<DGField> u = {aux.fields[0]};
  const std::vector<std::string> names = {"u"};
  CurveRecord rec{t_req, st.s, emit_curve(x, u, names, pb.config.output.samples_per_cell), {}};
  rec.rho.assign(rec.curve.y.size(), 1.0);
  return rec;
}

std::vector<std::string> default_quantities(const RunConfig& cfg) {
  if (!cfg.quantities.empty()) return cfg.quantities;
  if (cfg.scheme == SchemeKind::e0) return {"E0"};
  if (is_sg(cfg.scheme)) return {"H2"};
  return {"H0", "H1"};
}

std::vector<double> quantity_cells(const Problem& pb, const std::string& q, const IntegratorState& st, const Recovered& aux) {
  const std::size_t nr = pb.system.n_real;
  if (q == "E0") return cell_E0(aux.fields[0]);
  if (q == "H2") return cell_H2(st.fields);
  const FieldSet omega(st.fields.begin() + 1, st.fields.end());
  if (q == "H1") return cell_H1(pb.system, st.fields[0], omega);
  if (q == "H0") {
    const FieldSet u(aux.fields.begin(), aux.fields.begin() + static_cast<std::ptrdiff_t>(nr));
    return cell_H0(pb.system, st.fields[0], u);
  }
  throw ConfigError("unknown quantity '" + q + "'");
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  cfg.validate();
  Problem pb;
  pb.config = cfg;
  pb.system = describe(cfg.system);
  pb.mesh = build_mesh(cfg.y_left, cfg.y_right, cfg.n_cells, cfg.boundary);
  const int k = cfg.degree;

  if (cfg.scheme == SchemeKind::e0) {
    const EllipticParams e = elliptic_params(cfg.params);
    auto scheme = std::make_unique<SPScheme>(pb.mesh, k, 0.0);
    pb.initial.fields = scheme->initial_state([e](double x) { return sp_periodic_u_xt(e, x, 0.0); });
    pb.initial.anchor = pb.mesh.y_left;
    pb.scheme = std::move(scheme);
    return pb;
  }

  if (cfg.solution != "piecewise") pb.exact = make_exact(cfg, pb.system);
  if (!pb.exact && cfg.boundary != Boundary::periodic) throw ConfigError("dirichlet_exact boundary needs an exact solution");

  if (is_sg(cfg.scheme)) {
    const SGSchemeKind kind = cfg.scheme == SchemeKind::sg ? SGSchemeKind::dg : SGSchemeKind::integration;
    const SGRecovery rec = cfg.recovery == "conservative" ? SGRecovery::conservative : SGRecovery::upwind;
    auto scheme = std::make_unique<SGScheme>(pb.system, kind, pb.mesh, k, pb.exact, rec);
    if (pb.exact) {
      pb.initial.fields = scheme->initial_state(*pb.exact);
    } else {
      std::vector<double> means;
      pb.initial.fields = piecewise_state(cfg, pb.system, pb.mesh, false, means);
    }
    pb.scheme = std::move(scheme);
  } else {
    CDSchemeKind kind = CDSchemeKind::h1;
    switch (cfg.scheme) {
      case SchemeKind::h0_cons:
      case SchemeKind::h0_diss: kind = CDSchemeKind::h0; break;
      case SchemeKind::cd_integration: kind = CDSchemeKind::integration; break;
      case SchemeKind::cd_integration_h0: kind = CDSchemeKind::integration_h0; break;
      default: break;
    }
    CDBoundary bnd{pb.exact, {}};
    FieldSet init;
    if (!pb.exact) init = piecewise_state(cfg, pb.system, pb.mesh, true, bnd.means);
    auto scheme = std::make_unique<CDScheme>(pb.system, kind, pb.mesh, k, cfg.effective_flux(), bnd);
    pb.initial.fields = pb.exact ? scheme->initial_state(*pb.exact) : init;
    pb.scheme = std::move(scheme);
  }
  pb.initial.anchor = exact_anchor(pb, 0.0);
  return pb;
}

std::vector<ErrorNorms> measure_errors(const Problem& pb, const IntegratorState& st, const Recovered& aux) {
  std::vector<ErrorNorms> out;
  const double s = st.s;
  if (pb.config.scheme == SchemeKind::e0) {
    const EllipticParams e = elliptic_params(pb.config.params);
    const auto exact = [&](double x) { return sp_periodic_u_xt(e, x, s); };
    out.push_back({"u", norm_L2(aux.fields[0], exact), norm_Linf(aux.fields[0], exact)});
    return out;
  }
  if (!pb.exact) return out;
  const std::size_t nr = pb.system.n_real;
  const VectorFunction w = [&](double y, std::span<double> v) {
    const ExactPoint pt = pb.exact->evaluate(y, s);
    std::copy(pt.w.begin(), pt.w.end(), v.begin());
  };
  if (is_sg(pb.config.scheme)) {
    out.push_back({"z", norm_L2(aux.fields, w), norm_Linf(aux.fields, w)});
    return out;
  }
  const std::span<const DGField> u(aux.fields.data(), nr);
  out.push_back({"u", norm_L2(u, w), norm_Linf(u, w)});
  const PointFunction rho = [&](double y) { return pb.exact->evaluate(y, s).rho; };
  out.push_back({"rho", norm_L2(st.fields[0], rho), norm_Linf(st.fields[0], rho)});
  return out;
}

RunOutput simulate(const RunConfig& cfg, const fs::path* snapshot_dir) {
  Problem pb = build_problem(cfg);
  RunOutput res;
  res.config = cfg;
  const double h = pb.mesh.width();
  const std::size_t n_steps = cfg.step.steps_for(cfg.T, h, cfg.degree);
  const double ds = n_steps > 0 ? cfg.T / static_cast<double>(n_steps) : 0.0;

  // Requested output times snapped to the uniform step grid.
  std::vector<double> times = cfg.output.times;
  if (cfg.output.curves && times.empty()) times.push_back(cfg.T);
  std::vector<std::size_t> targets;
  for (double t : times) {
    targets.push_back(ds > 0.0 ? static_cast<std::size_t>(std::llround(t / ds)) : 0);
  }

  const auto quantities = default_quantities(cfg);
  std::vector<std::vector<DriftSample>> history(quantities.size());
  const std::size_t drift_every = std::max<std::size_t>(1, n_steps / 1000);

  const bool sg = is_sg(cfg.scheme);
  ZHistory zhist;
  std::deque<double> anchors;
  std::vector<bool> done(targets.size(), false);
  const auto* sg_scheme = dynamic_cast<const SGScheme*>(pb.scheme.get());

  if (snapshot_dir && cfg.output.every > 0) fs::create_directories(*snapshot_dir);
  std::ofstream index;
  if (snapshot_dir && cfg.output.every > 0) {
    index.open(*snapshot_dir / "index.csv");
    index << "index,s,anchor_x\n";
  }

  auto observer = [&](const IntegratorState& st, const Recovered& aux, std::size_t step) {
    if (step % drift_every == 0 || step == n_steps) {
      for (std::size_t q = 0; q < quantities.size(); ++q)
        history[q].push_back({st.s, quantity_cells(pb, quantities[q], st, aux)});
    }
    if (index.is_open() && (step % cfg.output.every == 0 || step == n_steps)) {
      index << res.snapshots << ',' << format_number(st.s) << ',' << format_number(st.anchor) << '\n';
      write_snapshot(*snapshot_dir / ("snap_" + std::to_string(res.snapshots) + ".csv"), pb, st, aux);
      ++res.snapshots;
    }
    if (sg) {
      zhist.push(st.s, aux.fields);
      anchors.push_back(st.anchor);
      if (anchors.size() > 4) anchors.pop_front();
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (done[i]) continue;
      if (!sg) {
        if (step != targets[i]) continue;
        res.curves.push_back(cfg.scheme == SchemeKind::e0 ? curve_e0(pb, times[i], st, aux) : curve_cd(pb, times[i], st, aux));
        done[i] = true;
      } else if (step == targets[i] + 1 && zhist.ready()) {
        // The stencil centre sits one level behind the newest.
        res.curves.push_back(curve_sg(pb, times[i], zhist.level(2).first, anchors[2], zhist.level(2).second, zhist.reconstruct_u()));
        done[i] = true;
      } else if (step == targets[i] && step == n_steps && zhist.ready()) {
        res.curves.push_back(curve_sg(pb, times[i], zhist.level(2).first, anchors[2], zhist.level(2).second, zhist.reconstruct_u()));
        done[i] = true;
      } else if (step == targets[i] && step < 2) {
        // Too early for the four-level stencil: use the semi-discrete rate.
        res.curves.push_back(curve_sg(pb, times[i], st.s, st.anchor, aux.fields, sg_scheme->z_rate(st.s, st.fields, aux)));
        done[i] = true;
      }
    }
  };

  RunResult rr;
  try {
    rr = run_steps(*pb.scheme, pb.initial, cfg.T, n_steps, observer);
  } catch (const NumericalError&) {
    throw;
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!done[i]) throw NumericalError("no snapshot available for output time " + format_number(times[i]));
  }

  res.steps = rr.steps;
  res.ds = rr.ds;
  res.final_state = rr.state;
  res.final_recovered = rr.recovered;
  res.errors = measure_errors(pb, rr.state, rr.recovered);
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    if (history[q].size() < 2) history[q].push_back(history[q].back());
    res.drift.push_back({quantities[q], drift(history[q])});
  }

  json meta;
  meta["config"] = to_json(cfg);
  meta["steps"] = res.steps;
  meta["ds"] = res.ds;
  meta["kernels"] = std::string(kernels::isa_name(kernels::active_isa()));
  meta["error_plane"] = cfg.scheme == SchemeKind::e0 ? "(x,t)" : "(y,s)";
  meta["primary_field"] = sg ? "z" : "u";
  meta["time_steps"] = "uniform: ds = T / ceil(T / ds_target)";
  json choices;
  if (cfg.scheme == SchemeKind::e0) {
    choices["u_recovery"] = "central flux, zero mean, top-mode constraint where the central operator has a second null vector";
  } else if (sg) {
    choices["z_recovery"] = cfg.scheme == SchemeKind::sg ? "z_hat = z^+ (" + cfg.recovery + ")" : "continuous antiderivative";
    choices["u_reconstruction"] = "four-level stencil centred one step behind the newest level; semi-discrete z_s before four levels exist";
  } else {
    const FluxParams f = cfg.effective_flux();
    choices["flux"] = {{"alpha", f.alpha}, {"beta", f.beta}, {"mu", f.mu}};
    choices["flux_satisfies_dissipation_conditions"] = f.satisfies_dissipation_conditions();
    choices["periodic_closure"] = "mean of u held at its initial value";
  }
  choices["anchor"] = cfg.boundary == Boundary::periodic && pb.exact ? "exact x(y_L, s)" : "left boundary, dx/ds = -G(u) by RK4";
  choices["drift_delta"] = "sum over cells of |change|; global_change = |H(T) - H(0)|";
  meta["choices"] = choices;
  json errs = json::array();
  for (const auto& e : res.errors) errs.push_back({{"field", e.field}, {"L2", e.l2}, {"Linf", e.linf}});
  meta["errors"] = errs;
  res.meta = meta;
  return res;
}

std::optional<double> observed_order(double prev, double curr) {
  if (!(prev > 0.0) || !(curr > 0.0) || !std::isfinite(prev) || !std::isfinite(curr)) return std::nullopt;
  return std::log2(prev / curr);
}

std::vector<ConvergenceRow> convergence(const RunConfig& cfg, unsigned max_threads) {
  if (cfg.meshes.size() < 2) throw ConfigError("field 'meshes': at least two meshes are required");
  for (std::size_t i = 1; i < cfg.meshes.size(); ++i)
    if (cfg.meshes[i] != 2 * cfg.meshes[i - 1]) throw ConfigError("field 'meshes': each mesh must double the previous one");
  std::vector<ConvergenceRow> rows(cfg.meshes.size());
  std::vector<std::exception_ptr> errors(cfg.meshes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        RunConfig c = cfg;
        c.n_cells = cfg.meshes[i];
        c.output = OutputSpec{};
        const RunOutput r = simulate(c);
        rows[i] = {c.n_cells, r.errors};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

void write_json(const json& doc, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
}

void write_errors_csv(const std::vector<ErrorNorms>& errors, double s, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "field,s,L2,Linf\n";
  for (const auto& e : errors) out << e.field << ',' << format_number(s) << ',' << format_number(e.l2) << ',' << format_number(e.linf) << '\n';
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  const bool with_rho = !rows.empty() && rows[0].errors.size() > 1;
  out << "N,L2_u,order_u,Linf_u,order_Linf_u";
  if (with_rho) out << ",L2_rho,order_rho,Linf_rho,order_Linf_rho";
  out << '\n';
  auto order = [](const std::optional<double>& o) { return o ? format_number(*o) : std::string(); };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << rows[i].n_cells;
    for (std::size_t f = 0; f < (with_rho ? 2u : 1u); ++f) {
      const auto& e = rows[i].errors[f];
      std::optional<double> o2, oi;
      if (i > 0) {
        o2 = observed_order(rows[i - 1].errors[f].l2, e.l2);
        oi = observed_order(rows[i - 1].errors[f].linf, e.linf);
      }
      out << ',' << format_number(e.l2) << ',' << order(o2) << ',' << format_number(e.linf) << ',' << order(oi);
    }
    out << '\n';
  }
}

void write_drift_csv(const std::vector<DriftSeries>& drift, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "quantity,s,value,delta_cells,global_change\n";
  for (const auto& d : drift) {
    for (std::size_t i = 0; i < d.report.times.size(); ++i) {
      out << d.quantity << ',' << format_number(d.report.times[i]) << ',' << format_number(d.report.series[i]) << ",,\n";
    }
    out << d.quantity << ',' << format_number(d.report.times.empty() ? 0.0 : d.report.times.back()) << ','
        << format_number(d.report.final) << ',' << format_number(d.report.delta) << ',' << format_number(d.report.global_change)
        << '\n';
  }
}

void write_curve_csv(const ParametricCurve& c, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "y,x";
  for (const auto& n : c.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    out << format_number(c.y[i]) << ',' << format_number(c.x[i]);
    for (const auto& col : c.columns) out << ',' << format_number(col[i]);
    out << '\n';
  }
}

namespace {

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

void write_curves(const RunOutput& r, const fs::path& dir) {
  for (const auto& c : r.curves) write_curve_csv(c.curve, dir / ("curve_" + time_tag(c.t_requested) + ".csv"));
}

}  // namespace

void write_run(const RunOutput& r, const fs::path& dir) {
  fs::create_directories(dir);
  json meta = r.meta;
  json curves = json::array();
  for (const auto& c : r.curves) curves.push_back({{"t", c.t_requested}, {"s", c.s}, {"file", "curve_" + time_tag(c.t_requested) + ".csv"}});
  meta["curves"] = curves;
  meta["snapshots"] = r.snapshots;
  write_json(meta, dir / "run_meta.json");
  if (!r.errors.empty()) write_errors_csv(r.errors, r.final_state.s, dir / "errors.csv");
  write_curves(r, dir);
}

void cmd_run(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path snaps = dir / "snapshots";
  const RunOutput r = simulate(cfg, &snaps);
  write_run(r, dir);
}

void cmd_convergence(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  const auto rows = convergence(cfg);
  write_convergence_csv(rows, dir / "convergence.csv");
  json meta;
  meta["config"] = to_json(cfg);
  meta["kernels"] = std::string(kernels::isa_name(kernels::active_isa()));
  meta["error_plane"] = cfg.scheme == SchemeKind::e0 ? "(x,t)" : "(y,s)";
  meta["primary_field"] = is_sg(cfg.scheme) ? "z" : "u";
  write_json(meta, dir / "run_meta.json");
}

void cmd_drift(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  const RunOutput r = simulate(cfg);
  write_drift_csv(r.drift, dir / "drift.csv");
  json meta = r.meta;
  json d = json::object();
  for (const auto& s : r.drift) d[s.quantity] = {{"delta_cells", s.report.delta}, {"global_change", s.report.global_change}};
  meta["drift"] = d;
  write_json(meta, dir / "run_meta.json");
}

void cmd_reconstruct(const RunConfig& cfg, const fs::path& dir) {
  RunConfig c = cfg;
  c.output.curves = true;
  fs::create_directories(dir);
  const RunOutput r = simulate(c);
  write_run(r, dir);
}

}  // namespace pulsedg
