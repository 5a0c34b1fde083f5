#include "pulsedg/scheme_sp.hpp"

#include <cmath>

#include "pulsedg/error.hpp"

namespace pulsedg {

double nonlinear_flux(double u_minus, double u_plus) {
  const double du = u_plus - u_minus;
  const double avg = 0.5 * (u_minus + u_plus);
  if (std::abs(du) <= 1e-12 * (1.0 + std::abs(avg))) return avg * avg * avg / 6.0;
  // (b^4 - a^4) / (24 (b - a)) without the cancellation of the quotient
  const double a = u_minus, b = u_plus;
  return (a * a * a + a * a * b + a * b * b + b * b * b) / 24.0;
}

SPScheme::SPScheme(const Mesh1D& mesh, int degree, double mean)
    : mesh_(mesh), degree_(degree), mean_(mean), basis_(make_basis(degree)),
      op_(mesh, degree, TraceFlux::central(), true) {
  if (mesh.boundary != Boundary::periodic) throw ConfigError("the E0 scheme runs on periodic meshes");
}

FieldSet SPScheme::initial_state(const PointFunction& u0) const {
  return {op_.apply(project_L2(u0, mesh_, degree_))};
}

Recovered SPScheme::recover(double, const FieldSet& state) const {
  Recovered out;
  out.fields.push_back(op_.recover(state.at(0), 0.0, mean_).u);
  const DGField& u = out.fields[0];
  const std::size_t n = mesh_.n_cells;
  auto f = to_nodal(u, basis_);
  for (auto& v : f) v = v * v * v / 6.0;
  std::vector<double> fhat(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const Traces t = traces(u, i);
    fhat[i] = nonlinear_flux(t.minus, t.plus);
  }
  out.fields.push_back(weak_derivative(f, fhat, mesh_, basis_));
  return out;
}

FieldSet SPScheme::rhs(double, const FieldSet&, const Recovered& aux) const {
  DGField vdot = op_.apply(aux.fields[1]);
  const DGField& u = aux.fields[0];
  for (std::size_t i = 0; i < vdot.data().size(); ++i) vdot.data()[i] += u.data()[i];
  return {std::move(vdot)};
}

}  // namespace pulsedg
