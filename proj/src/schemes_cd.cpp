#include "pulsedg/schemes_cd.hpp"

#include <cmath>

#include "pulsedg/error.hpp"
#include "pulsedg/kernels.hpp"

namespace pulsedg {

std::string_view cd_scheme_name(CDSchemeKind kind) {
  switch (kind) {
    case CDSchemeKind::h0: return "h0";
    case CDSchemeKind::h1: return "h1";
    case CDSchemeKind::integration: return "cd_integration";
    case CDSchemeKind::integration_h0: return "cd_integration_h0";
  }
  return "?";
}

bool FluxParams::satisfies_dissipation_conditions() const {
  return alpha == 0.0 && beta >= 0.0 && mu >= 0.0 && beta + mu > 0.0;
}

void FluxParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(mu)) throw ConfigError("flux parameters must be finite");
  if (alpha < 0.0 || beta < 0.0 || mu < 0.0) throw ConfigError("flux parameters must be non-negative");
  if (mu > 0.5) throw ConfigError("flux parameter mu must not exceed 1/2");
}

namespace {

bool has_gamma(CDSchemeKind kind) { return kind == CDSchemeKind::h0 || kind == CDSchemeKind::integration_h0; }
bool integrates(CDSchemeKind kind) { return kind == CDSchemeKind::integration || kind == CDSchemeKind::integration_h0; }

}  // namespace

CDScheme::CDScheme(SystemDescriptor sys, CDSchemeKind kind, const Mesh1D& mesh, int degree, FluxParams flux,
                   CDBoundary boundary)
    : sys_(std::move(sys)), kind_(kind), mesh_(mesh), degree_(degree), flux_(flux), boundary_(std::move(boundary)),
      basis_(make_basis(degree + 1, static_cast<std::size_t>(degree) + 4)),
      basis_k_(make_basis(degree, static_cast<std::size_t>(degree) + 4)) {
  if (!sys_.is_cd_family()) throw ConfigError("CD schemes need a CD-family system");
  if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
  flux_.validate();
  const bool periodic = mesh.boundary == Boundary::periodic;
  if (!periodic && !boundary_.exact) throw ConfigError("dirichlet_exact boundary needs an exact solution");
  if (periodic && boundary_.means.empty()) {
    boundary_.means.assign(sys_.n_real, 0.0);
    if (boundary_.exact) {
      const CellBasis b = make_basis(degree);
      const auto ys = nodal_positions(mesh, b);
      for (std::size_t a = 0; a < sys_.n_real; ++a) {
        std::vector<double> vals(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) vals[i] = boundary_.exact->evaluate(ys[i], 0.0).w[a];
        boundary_.means[a] = field_mean(project_nodal(vals, mesh, b));
      }
    }
  }
  if (periodic && boundary_.means.size() != sys_.n_real) {
    throw ConfigError("one mean per wave component is required");
  }
  if (!integrates(kind)) {
    const TraceFlux tf = kind == CDSchemeKind::h1 ? TraceFlux::upwind_plus() : TraceFlux{flux_.mu};
    op_ = std::make_unique<DerivativeOperator>(mesh, degree, tf, true);
  }
}

std::string CDScheme::name() const { return std::string(cd_scheme_name(kind_)); }

std::vector<double> CDScheme::boundary_values(double s) const {
  if (mesh_.boundary == Boundary::periodic) return boundary_.means;
  return boundary_.exact->evaluate(mesh_.y_right, s).w;
}

FieldSet CDScheme::initial_state(const ExactSolution& exact, double s0) const {
  const CellBasis b = make_basis(degree_);
  const auto ys = nodal_positions(mesh_, b);
  const std::size_t n = sys_.n_real;
  std::vector<std::vector<double>> vals(n + 1, std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const ExactPoint pt = exact.evaluate(ys[i], s0);
    vals[0][i] = pt.rho;
    for (std::size_t a = 0; a < n; ++a) vals[a + 1][i] = pt.w_y[a];
  }
  FieldSet state;
  for (const auto& v : vals) state.push_back(project_nodal(v, mesh_, b));
  return state;
}

DGField CDScheme::recover_component(const DGField& omega, double u_right, double mean) const {
  const bool periodic = mesh_.boundary == Boundary::periodic;
  if (integrates(kind_)) return periodic ? integrate_with_mean(omega, mean) : integrate_from_right(omega, u_right);
  return op_->recover(omega, u_right, mean).u;
}

DGField CDScheme::project_gamma(const FieldSet& u) const {
  const std::size_t n = mesh_.n_cells;
  const std::size_t nq = basis_.n_quad();
  std::vector<std::vector<double>> nodal;
  for (const auto& f : u) nodal.push_back(to_nodal(f, basis_));
  std::vector<double> g(nq * n, 0.0);
  for (std::size_t a = 0; a < sys_.n_real; ++a)
    for (std::size_t b = 0; b < sys_.n_real; ++b) {
      const double q = sys_.flux_matrix[a * sys_.n_real + b];
      if (q != 0.0) kernels::active().multiply_add(0.5 * q, nodal[a], nodal[b], g);
    }
  const CellBasis& bk = basis_k_;
  return project_nodal(g, mesh_, bk);
}

Recovered CDScheme::recover(double s, const FieldSet& state) const {
  if (state.size() != sys_.n_real + 1) throw std::invalid_argument("CD state has the wrong number of fields");
  const auto bv = boundary_values(s);
  Recovered out;
  for (std::size_t a = 0; a < sys_.n_real; ++a) {
    out.fields.push_back(recover_component(state[a + 1], bv[a], bv[a]));
  }
  if (has_gamma(kind_)) out.fields.push_back(project_gamma(out.fields));
  return out;
}

FieldSet CDScheme::wave(const Recovered& aux) const {
  return FieldSet(aux.fields.begin(), aux.fields.begin() + static_cast<std::ptrdiff_t>(sys_.n_real));
}

FieldSet CDScheme::rhs(double s, const FieldSet& state, const Recovered& aux) const {
  const std::size_t n = mesh_.n_cells;
  const std::size_t nq = basis_.n_quad();
  const std::size_t nr = sys_.n_real;
  const auto& kt = kernels::active();
  const CellBasis& bk = basis_k_;

  const auto rho_n = to_nodal(state[0], basis_);
  std::vector<std::vector<double>> u_n, om_n;
  for (std::size_t a = 0; a < nr; ++a) {
    u_n.push_back(to_nodal(aux.fields[a], basis_));
    om_n.push_back(to_nodal(state[a + 1], basis_));
  }

  FieldSet out;
  if (has_gamma(kind_)) {
    const DGField& gamma = aux.fields[nr];
    const bool periodic = mesh_.boundary == Boundary::periodic;
    std::optional<double> rho_l, rho_r, g_l, g_r;
    if (!periodic) {
      const ExactPoint pl = boundary_.exact->evaluate(mesh_.y_left, s);
      const ExactPoint pr = boundary_.exact->evaluate(mesh_.y_right, s);
      rho_l = pl.rho;
      rho_r = pr.rho;
      g_l = sys_.G(pl.w);
      g_r = sys_.G(pr.w);
    }
    std::vector<double> ghat(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const std::optional<double> rx = i == 0 ? rho_l : (i == n ? rho_r : std::nullopt);
      const std::optional<double> gx = i == 0 ? g_l : (i == n ? g_r : std::nullopt);
      const Traces tg = traces(gamma, i, gx);
      const Traces tr = traces(state[0], i, rx);
      ghat[i] = tg.average() - flux_.alpha * tr.jump() - flux_.beta * tg.jump();
    }
    DGField rho_dot = weak_derivative(to_nodal(gamma, bk), ghat, mesh_, bk);
    for (auto& c : rho_dot.data()) c = -c;
    out.push_back(std::move(rho_dot));
  } else {
    std::vector<double> acc(nq * n, 0.0);
    for (std::size_t a = 0; a < nr; ++a)
      for (std::size_t b = 0; b < nr; ++b) {
        const double q = sys_.flux_matrix[a * nr + b];
        if (q != 0.0) kt.multiply_add(-q, u_n[a], om_n[b], acc);
      }
    out.push_back(project_nodal(acc, mesh_, bk));
  }

  std::vector<double> mass(nq * n, sys_.mass_offset);
  kt.axpy(sys_.mass_slope, rho_n, mass);
  std::vector<double> prod(nq * n);
  for (std::size_t a = 0; a < nr; ++a) {
    kt.multiply(mass, u_n[a], prod);
    out.push_back(project_nodal(prod, mesh_, bk));
  }
  return out;
}

double CDScheme::anchor_rate(double, const FieldSet&, const Recovered& aux) const {
  std::vector<double> w(sys_.n_real);
  for (std::size_t a = 0; a < sys_.n_real; ++a) w[a] = aux.fields[a].left_trace(0);
  return -sys_.G(w);
}

}  // namespace pulsedg
