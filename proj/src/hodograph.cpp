#include "pulsedg/hodograph.hpp"

#include <cmath>
#include <stdexcept>

#include "pulsedg/derivative.hpp"

namespace pulsedg {

DGField x_from_rho(const DGField& rho, double x_left) { return integrate_from_left(rho, x_left); }

DGField x_from_z(std::span<const DGField> z, double x_left) {
  if (z.empty()) throw std::invalid_argument("x_from_z needs at least one field");
  const Mesh1D& mesh = z[0].mesh();
  const int degree = z[0].degree();
  const CellBasis basis = make_basis(degree);
  std::vector<double> c(basis.n_quad() * mesh.n_cells, 0.0);
  const double w = 1.0 / static_cast<double>(z.size());
  for (const auto& f : z) {
    if (!f.same_space(z[0])) throw std::invalid_argument("x_from_z fields must share a space");
    const auto nodal = to_nodal(f, basis);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += w * std::cos(nodal[i]);
  }
  return integrate_from_left(project_nodal(c, mesh, basis), x_left);
}

double advance_anchor(double x, const std::function<double(double)>& rate, double s, double ds) {
  const double r1 = rate(s);
  const double r2 = rate(s + 0.5 * ds);
  const double r4 = rate(s + ds);
  return x + ds / 6.0 * (r1 + 4.0 * r2 + r4);
}

ParametricCurve emit_curve(const DGField& x, std::span<const DGField> fields, std::span<const std::string> names,
                           std::size_t samples_per_cell) {
  if (fields.size() != names.size()) throw std::invalid_argument("one name per curve field");
  if (samples_per_cell == 0) throw std::invalid_argument("samples_per_cell must be positive");
  const Mesh1D& mesh = x.mesh();
  ParametricCurve curve;
  curve.names.assign(names.begin(), names.end());
  curve.columns.resize(fields.size());
  auto sample = [&](std::size_t j, double xi) {
    curve.y.push_back(mesh.to_physical(j, xi));
    curve.x.push_back(x.eval_local(j, xi));
    for (std::size_t f = 0; f < fields.size(); ++f) curve.columns[f].push_back(fields[f].eval_local(j, xi));
  };
  const double step = 2.0 / static_cast<double>(samples_per_cell);
  for (std::size_t j = 0; j < mesh.n_cells; ++j)
    for (std::size_t i = 0; i < samples_per_cell; ++i) sample(j, -1.0 + step * static_cast<double>(i));
  sample(mesh.n_cells - 1, 1.0);
  curve.y_anchor = mesh.y_left;
  curve.x_anchor = x.left_trace(0);
  return curve;
}

std::vector<std::size_t> fold_indices(const ParametricCurve& curve) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < curve.x.size(); ++i)
    if (curve.x[i] < curve.x[i - 1]) out.push_back(i);
  return out;
}

}  // namespace pulsedg
