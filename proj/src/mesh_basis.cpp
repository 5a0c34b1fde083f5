#include "pulsedg/mesh_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsedg/error.hpp"
#include "pulsedg/kernels.hpp"

namespace pulsedg {

std::size_t Mesh1D::locate(double y) const {
  const double t = (y - y_left) / width();
  if (!(t > 0.0)) return 0;
  const auto j = static_cast<std::size_t>(std::floor(t));
  return std::min(j, n_cells - 1);
}

Mesh1D build_mesh(double y_left, double y_right, std::size_t n_cells, Boundary boundary) {
  if (n_cells == 0) throw ConfigError("mesh needs at least one cell");
  if (!(y_left < y_right)) throw ConfigError("mesh interval is empty or inverted");
  return Mesh1D{y_left, y_right, n_cells, boundary};
}

double legendre(int m, double xi) {
  if (m == 0) return 1.0;
  double p0 = 1.0, p1 = xi;
  for (int n = 1; n < m; ++n) {
    const double p2 = ((2.0 * n + 1.0) * xi * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int m, double xi) {
  // L'_m = sum over n = m-1, m-3, ... of (2n+1) L_n
  double d = 0.0;
  for (int n = m - 1; n >= 0; n -= 2) d += (2.0 * n + 1.0) * legendre(n, xi);
  return d;
}

Quadrature gauss_nodes(std::size_t n) {
  if (n == 0) throw ConfigError("quadrature needs at least one point");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int ni = static_cast<int>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre(ni, x);
      dp = ni * (x * p - legendre(ni - 1, x)) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre(ni, x);
    dp = ni * (x * p - legendre(ni - 1, x)) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

CellBasis make_basis(int degree, std::size_t n_quad) {
  if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
  CellBasis b;
  b.degree = degree;
  b.quad = gauss_nodes(n_quad);
  const auto modes = static_cast<std::size_t>(degree + 1);
  b.values.resize(n_quad * modes);
  b.derivatives.resize(n_quad * modes);
  b.projector.resize(modes * n_quad);
  b.stiffness.resize(modes * n_quad);
  for (std::size_t q = 0; q < n_quad; ++q) {
    const double xi = b.quad.nodes[q];
    const double w = b.quad.weights[q];
    for (std::size_t m = 0; m < modes; ++m) {
      const int mi = static_cast<int>(m);
      const double l = legendre(mi, xi);
      const double dl = legendre_derivative(mi, xi);
      b.values[q * modes + m] = l;
      b.derivatives[q * modes + m] = dl;
      b.projector[m * n_quad + q] = 0.5 * (2.0 * m + 1.0) * w * l;
      b.stiffness[m * n_quad + q] = w * dl;
    }
  }
  return b;
}

DGField::DGField(const Mesh1D& mesh, int degree)
    : mesh_(mesh), degree_(degree), coeffs_(static_cast<std::size_t>(degree + 1) * mesh.n_cells, 0.0) {
  if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
}

double DGField::eval_local(std::size_t cell, double xi) const {
  double v = 0.0;
  for (int m = 0; m <= degree_; ++m) v += coeff(cell, m) * legendre(m, xi);
  return v;
}

double DGField::derivative_local(std::size_t cell, double xi) const {
  double v = 0.0;
  for (int m = 1; m <= degree_; ++m) v += coeff(cell, m) * legendre_derivative(m, xi);
  return 2.0 * v / mesh_.width();
}

double DGField::left_trace(std::size_t cell) const {
  double v = 0.0;
  for (int m = 0; m <= degree_; ++m) v += (m % 2 == 0 ? 1.0 : -1.0) * coeff(cell, m);
  return v;
}

double DGField::right_trace(std::size_t cell) const {
  double v = 0.0;
  for (int m = 0; m <= degree_; ++m) v += coeff(cell, m);
  return v;
}

DGField DGField::with_degree(int degree) const {
  DGField out(mesh_, degree);
  for (int m = 0; m <= std::min(degree, degree_); ++m) {
    std::copy(mode(m).begin(), mode(m).end(), out.mode(m).begin());
  }
  return out;
}

std::vector<double> to_nodal(const DGField& field, const CellBasis& basis) {
  const std::size_t n = field.n_cells();
  const std::size_t nq = basis.n_quad();
  const auto modes = static_cast<std::size_t>(field.modes());
  // The basis may tabulate more modes than the field carries; take the leading columns.
  std::vector<double> table(nq * modes);
  const auto bmodes = static_cast<std::size_t>(basis.modes());
  if (modes > bmodes) throw std::invalid_argument("basis degree below field degree");
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t m = 0; m < modes; ++m) table[q * modes + m] = basis.values[q * bmodes + m];
  std::vector<double> out(nq * n);
  kernels::active().apply_rows(table, nq, modes, field.data(), n, out);
  return out;
}

std::vector<double> nodal_positions(const Mesh1D& mesh, const CellBasis& basis) {
  const std::size_t n = mesh.n_cells;
  std::vector<double> y(basis.n_quad() * n);
  for (std::size_t q = 0; q < basis.n_quad(); ++q)
    for (std::size_t j = 0; j < n; ++j) y[q * n + j] = mesh.to_physical(j, basis.quad.nodes[q]);
  return y;
}

std::vector<double> sample_nodal(const PointFunction& f, const Mesh1D& mesh, const CellBasis& basis) {
  auto y = nodal_positions(mesh, basis);
  for (double& v : y) v = f(v);
  return y;
}

DGField project_nodal(std::span<const double> nodal, const Mesh1D& mesh, const CellBasis& basis) {
  DGField out(mesh, basis.degree);
  kernels::active().apply_rows(basis.projector, static_cast<std::size_t>(basis.modes()), basis.n_quad(), nodal,
                               mesh.n_cells, out.data());
  return out;
}

std::vector<double> cell_integrals(std::span<const double> nodal, const Mesh1D& mesh, const CellBasis& basis) {
  const std::size_t n = mesh.n_cells;
  std::vector<double> out(n, 0.0);
  const double half_h = 0.5 * mesh.width();
  for (std::size_t q = 0; q < basis.n_quad(); ++q) {
    kernels::active().axpy(half_h * basis.quad.weights[q], nodal.subspan(q * n, n), out);
  }
  return out;
}

DGField project_L2(const PointFunction& f, const Mesh1D& mesh, int degree, std::size_t n_quad) {
  const auto basis = make_basis(degree, n_quad == 0 ? static_cast<std::size_t>(degree) + 3 : n_quad);
  return project_nodal(sample_nodal(f, mesh, basis), mesh, basis);
}

namespace {

DGField project_endpoint(const PointFunction& f, const Mesh1D& mesh, int degree, bool left) {
  DGField out(mesh, degree);
  if (degree > 0) {
    const DGField low = project_L2(f, mesh, degree - 1, static_cast<std::size_t>(degree) + 3);
    for (int m = 0; m < degree; ++m) std::copy(low.mode(m).begin(), low.mode(m).end(), out.mode(m).begin());
  }
  const double sign_k = left && degree % 2 == 1 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    const double target = f(left ? mesh.interface(j) : mesh.interface(j + 1));
    double partial = 0.0;
    for (int m = 0; m < degree; ++m) partial += (left && m % 2 == 1 ? -1.0 : 1.0) * out.coeff(j, m);
    out.coeff(j, degree) = sign_k * (target - partial);
  }
  return out;
}

}  // namespace

DGField project_plus(const PointFunction& f, const Mesh1D& mesh, int degree) {
  return project_endpoint(f, mesh, degree, true);
}

DGField project_minus(const PointFunction& f, const Mesh1D& mesh, int degree) {
  return project_endpoint(f, mesh, degree, false);
}

Traces traces(const DGField& field, std::size_t iface, std::optional<double> exterior) {
  const std::size_t n = field.n_cells();
  if (iface > n) throw std::out_of_range("interface index out of range");
  const bool periodic = field.mesh().boundary == Boundary::periodic;
  Traces t{};
  if (iface == 0) {
    t.plus = field.left_trace(0);
    if (periodic) {
      t.minus = field.right_trace(n - 1);
    } else if (exterior) {
      t.minus = *exterior;
    } else {
      throw std::invalid_argument("boundary interface needs an exterior value");
    }
  } else if (iface == n) {
    t.minus = field.right_trace(n - 1);
    if (periodic) {
      t.plus = field.left_trace(0);
    } else if (exterior) {
      t.plus = *exterior;
    } else {
      throw std::invalid_argument("boundary interface needs an exterior value");
    }
  } else {
    t.minus = field.right_trace(iface - 1);
    t.plus = field.left_trace(iface);
  }
  return t;
}

double jump(const DGField& field, std::size_t iface, std::optional<double> exterior) {
  return traces(field, iface, exterior).jump();
}

double average(const DGField& field, std::size_t iface, std::optional<double> exterior) {
  return traces(field, iface, exterior).average();
}

namespace {

constexpr int kLinfSamples = 10;

double sample_xi(int i) { return -1.0 + 2.0 * i / (kLinfSamples - 1); }

}  // namespace

double norm_L2(const DGField& field, const PointFunction& exact) {
  const DGField fields[] = {field};
  return norm_L2(fields, [&](double y, std::span<double> out) { out[0] = exact(y); });
}

double norm_Linf(const DGField& field, const PointFunction& exact) {
  const DGField fields[] = {field};
  return norm_Linf(fields, [&](double y, std::span<double> out) { out[0] = exact(y); });
}

double norm_L2(std::span<const DGField> fields, const VectorFunction& exact) {
  if (fields.empty()) return 0.0;
  const Mesh1D& mesh = fields[0].mesh();
  int degree = 0;
  for (const auto& f : fields) degree = std::max(degree, f.degree());
  const auto basis = make_basis(degree);
  std::vector<double> ex(fields.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    for (std::size_t q = 0; q < basis.n_quad(); ++q) {
      const double xi = basis.quad.nodes[q];
      exact(mesh.to_physical(j, xi), ex);
      double e2 = 0.0;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const double e = fields[c].eval_local(j, xi) - ex[c];
        e2 += e * e;
      }
      sum += 0.5 * mesh.width() * basis.quad.weights[q] * e2;
    }
  }
  return std::sqrt(sum);
}

double norm_Linf(std::span<const DGField> fields, const VectorFunction& exact) {
  if (fields.empty()) return 0.0;
  const Mesh1D& mesh = fields[0].mesh();
  std::vector<double> ex(fields.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    for (int i = 0; i < kLinfSamples; ++i) {
      const double xi = sample_xi(i);
      exact(mesh.to_physical(j, xi), ex);
      double e2 = 0.0;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const double e = fields[c].eval_local(j, xi) - ex[c];
        e2 += e * e;
      }
      worst = std::max(worst, std::sqrt(e2));
    }
  }
  return worst;
}

}  // namespace pulsedg
