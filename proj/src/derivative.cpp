#include "pulsedg/derivative.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pulsedg/error.hpp"
#include "pulsedg/kernels.hpp"

namespace pulsedg {

std::string TraceFlux::name() const {
  if (mu == 0.0) return "central";
  if (mu == 0.5) return "upwind_plus";
  std::ostringstream os;
  os << "weighted(mu=" << mu << ")";
  return os.str();
}

std::vector<double> stiffness_matrix(int degree) {
  const int modes = degree + 1;
  const auto q = gauss_nodes(static_cast<std::size_t>(modes) + 1);
  std::vector<double> s(static_cast<std::size_t>(modes * modes), 0.0);
  for (int n = 0; n < modes; ++n)
    for (int m = 0; m < modes; ++m)
      for (std::size_t i = 0; i < q.order(); ++i)
        s[n * modes + m] += q.weights[i] * legendre(n, q.nodes[i]) * legendre_derivative(m, q.nodes[i]);
  return s;
}

namespace {

double parity(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

// omega_jm = (2m+1)/h [flux_{j+1} - (-1)^m flux_j - vol_jm], vol given mode-major.
void finish_weak_derivative(std::span<const double> iface_flux, std::span<const double> vol, const Mesh1D& mesh,
                            DGField& out) {
  const std::size_t n = mesh.n_cells;
  const double h = mesh.width();
  for (int m = 0; m < out.modes(); ++m) {
    const double scale = (2.0 * m + 1.0) / h;
    const double sg = parity(m);
    auto dst = out.mode(m);
    const double* v = vol.data() + static_cast<std::size_t>(m) * n;
    for (std::size_t j = 0; j < n; ++j) dst[j] = scale * (iface_flux[j + 1] - sg * iface_flux[j] - v[j]);
  }
}

std::vector<double> to_cell_major(const DGField& f) {
  const std::size_t n = f.n_cells();
  const auto modes = static_cast<std::size_t>(f.modes());
  std::vector<double> v(n * modes);
  for (std::size_t m = 0; m < modes; ++m)
    for (std::size_t j = 0; j < n; ++j) v[j * modes + m] = f.data()[m * n + j];
  return v;
}

void from_cell_major(const double* v, DGField& f) {
  const std::size_t n = f.n_cells();
  const auto modes = static_cast<std::size_t>(f.modes());
  for (std::size_t m = 0; m < modes; ++m)
    for (std::size_t j = 0; j < n; ++j) f.data()[m * n + j] = v[j * modes + m];
}

double max_abs(std::span<const double> v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

std::string describe(const Mesh1D& mesh, int degree, TraceFlux flux) {
  std::ostringstream os;
  os << "flux=" << flux.name() << ", boundary=" << (mesh.boundary == Boundary::periodic ? "periodic" : "dirichlet_exact")
     << ", N=" << mesh.n_cells << ", k=" << degree;
  return os.str();
}

}  // namespace

DGField weak_derivative(std::span<const double> nodal_g, std::span<const double> iface_flux, const Mesh1D& mesh,
                        const CellBasis& basis) {
  DGField out(mesh, basis.degree);
  std::vector<double> vol(out.data().size());
  kernels::active().apply_rows(basis.stiffness, static_cast<std::size_t>(basis.modes()), basis.n_quad(), nodal_g,
                               mesh.n_cells, vol);
  finish_weak_derivative(iface_flux, vol, mesh, out);
  return out;
}

struct DerivativeOperator::Factor {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::PartialPivLU<Eigen::MatrixXd> local;
  bool bordered = false;
  double matrix_norm = 1.0;
  bool filtered = false;
  double pattern(int cell, int degree) const { return degree % 2 == 1 ? 1.0 : parity(cell); }
};

DerivativeOperator::~DerivativeOperator() = default;
DerivativeOperator::DerivativeOperator(DerivativeOperator&&) noexcept = default;
DerivativeOperator& DerivativeOperator::operator=(DerivativeOperator&&) noexcept = default;

DerivativeOperator::DerivativeOperator(const Mesh1D& mesh, int degree, TraceFlux flux, bool mean_constraint)
    : mesh_(mesh), degree_(degree), flux_(flux), mean_constraint_(mean_constraint),
      stiffness_(stiffness_matrix(degree)), factor_(std::make_unique<Factor>()) {
  const int modes = degree + 1;
  const auto n = static_cast<int>(mesh.n_cells);
  const double h = mesh.width();
  const bool periodic = mesh.boundary == Boundary::periodic;

  // Interface i as a combination of unknowns (col, weight).
  auto iface = [&](int i) {
    std::vector<std::pair<int, double>> terms;
    const bool left_boundary = !periodic && i == 0;
    const bool right_boundary = !periodic && i == n;
    if (right_boundary) return terms;
    const double wm = left_boundary ? 0.0 : 0.5 - flux.mu;
    const double wp = left_boundary ? 1.0 : 0.5 + flux.mu;
    const int jm = (i - 1 + n) % n;
    const int jp = i % n;
    for (int k = 0; k < modes; ++k) {
      if (wm != 0.0) terms.emplace_back(jm * modes + k, wm);
      if (wp != 0.0) terms.emplace_back(jp * modes + k, wp * parity(k));
    }
    return terms;
  };

  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < modes; ++m) {
      const int row = j * modes + m;
      const double c = (2.0 * m + 1.0) / h;
      for (int k = 0; k < modes; ++k) trip.emplace_back(row, j * modes + k, -c * stiffness_[k * modes + m]);
      for (const auto& [col, w] : iface(j + 1)) trip.emplace_back(row, col, c * w);
      for (const auto& [col, w] : iface(j)) trip.emplace_back(row, col, -c * parity(m) * w);
    }
  }
  const int size = n * modes;
  matrix_.resize(size, size);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  double norm = 0.0;
  {
    std::vector<double> rows(static_cast<std::size_t>(size), 0.0);
    for (int c = 0; c < matrix_.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, c); it; ++it)
        rows[static_cast<std::size_t>(it.row())] += std::abs(it.value());
    norm = *std::max_element(rows.begin(), rows.end());
  }
  factor_->matrix_norm = norm;

  sweep_ = !periodic && flux.is_upwind_plus();
  if (sweep_) {
    Eigen::MatrixXd a(modes, modes);
    for (int m = 0; m < modes; ++m)
      for (int k = 0; k < modes; ++k) a(m, k) = -parity(m + k) - stiffness_[k * modes + m];
    factor_->local.compute(a);
    return;
  }
  if (periodic && !mean_constraint) return;  // rank deficient; recover() reports it
  Eigen::SparseMatrix<double> sys = matrix_;
  if (periodic) {
    factor_->bordered = true;
    // The central flux also annihilates the top mode with a constant (odd k)
    // or alternating (even k, even N) sign pattern; that component is set to zero.
    if (flux.mu == 0.0 && (degree % 2 == 1 || n % 2 == 0)) factor_->filtered = true;
    std::vector<Eigen::Triplet<double>> extra = trip;
    for (int j = 0; j < n; ++j) {
      extra.emplace_back(j * modes, size, 1.0);
      extra.emplace_back(size, j * modes, 1.0 / n);
      if (factor_->filtered) {
        const double sign = factor_->pattern(j, degree);
        extra.emplace_back(j * modes + degree, size + 1, sign);
        extra.emplace_back(size + 1, j * modes + degree, sign / n);
      }
    }
    const int extra_rows = factor_->filtered ? 2 : 1;
    sys.resize(size + extra_rows, size + extra_rows);
    sys.setFromTriplets(extra.begin(), extra.end());
  }
  sys.makeCompressed();
  factor_->lu.analyzePattern(sys);
  factor_->lu.factorize(sys);
  if (factor_->lu.info() != Eigen::Success) {
    throw NumericalError("derivative operator is singular (" + describe(mesh, degree, flux) + ")");
  }
  // A zero pivot may survive as rounding noise; a probe solve exposes it by its growth.
  Eigen::VectorXd probe(sys.rows());
  for (Eigen::Index i = 0; i < probe.size(); ++i) probe(i) = std::sin(1.0 + 0.7 * static_cast<double>(i));
  const Eigen::VectorXd x = factor_->lu.solve(probe);
  const double growth = x.lpNorm<Eigen::Infinity>() / probe.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(growth) || growth > 1e8 * (1.0 + mesh.length())) {
    throw NumericalError("derivative operator is rank deficient (" + describe(mesh, degree, flux) + ")");
  }
}

bool DerivativeOperator::filters_top_mode() const { return factor_->filtered; }

std::vector<double> DerivativeOperator::interface_values(const DGField& u, double u_right) const {
  const std::size_t n = mesh_.n_cells;
  const bool periodic = mesh_.boundary == Boundary::periodic;
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (!periodic && i == n) {
      f[i] = u_right;
    } else if (!periodic && i == 0) {
      f[i] = u.left_trace(0);
    } else {
      const double minus = u.right_trace((i + n - 1) % n);
      const double plus = u.left_trace(i % n);
      f[i] = flux_.combine(minus, plus);
    }
  }
  return f;
}

DGField DerivativeOperator::apply(const DGField& u, double u_right) const {
  if (u.degree() != degree_ || !(u.mesh() == mesh_)) throw std::invalid_argument("field does not match operator");
  const auto flux = interface_values(u, u_right);
  DGField out(mesh_, degree_);
  const auto modes = static_cast<std::size_t>(degree_ + 1);
  // St[m * modes + k] = S_km so that vol_m = sum_k S_km u_k.
  std::vector<double> st(modes * modes);
  for (std::size_t m = 0; m < modes; ++m)
    for (std::size_t k = 0; k < modes; ++k) st[m * modes + k] = stiffness_[k * modes + m];
  std::vector<double> vol(u.data().size());
  kernels::active().apply_rows(st, modes, modes, u.data(), mesh_.n_cells, vol);
  finish_weak_derivative(flux, vol, mesh_, out);
  return out;
}

RecoveryResult DerivativeOperator::recover(const DGField& omega, double u_right, double mean) const {
  if (omega.degree() != degree_ || !(omega.mesh() == mesh_)) throw std::invalid_argument("field does not match operator");
  const int modes = degree_ + 1;
  const auto n = static_cast<int>(mesh_.n_cells);
  const double h = mesh_.width();
  const bool periodic = mesh_.boundary == Boundary::periodic;
  RecoveryResult res{DGField(mesh_, degree_)};

  if (sweep_) {
    Eigen::VectorXd rhs(modes), sol(modes);
    double right_value = u_right;
    for (int j = n - 1; j >= 0; --j) {
      for (int m = 0; m < modes; ++m) rhs(m) = h / (2.0 * m + 1.0) * omega.coeff(j, m) - right_value;
      sol = factor_->local.solve(rhs);
      double left = 0.0;
      for (int m = 0; m < modes; ++m) {
        res.u.coeff(j, m) = sol(m);
        left += parity(m) * sol(m);
      }
      right_value = left;
    }
  } else {
    if (periodic && !mean_constraint_) {
      throw NumericalError("rank-deficient recovery: constants are in the null space (" +
                           describe(mesh_, degree_, flux_) + "); enable the mean constraint");
    }
    const int size = n * modes;
    const int extra_rows = factor_->bordered ? (factor_->filtered ? 2 : 1) : 0;
    Eigen::VectorXd rhs(size + extra_rows);
    const auto cm = to_cell_major(omega);
    for (int i = 0; i < size; ++i) rhs(i) = cm[static_cast<std::size_t>(i)];
    if (!periodic) {
      for (int m = 0; m < modes; ++m) rhs((n - 1) * modes + m) -= (2.0 * m + 1.0) / h * u_right;
    }
    if (factor_->bordered) rhs(size) = mean;
    if (factor_->filtered) rhs(size + 1) = 0.0;
    const Eigen::VectorXd sol = factor_->lu.solve(rhs);
    from_cell_major(sol.data(), res.u);
    if (factor_->bordered) res.defect = sol(size);
    if (factor_->filtered) res.filter_defect = sol(size + 1);
  }

  // Residual of the weak relation, relative to the data and the operator scale.
  const DGField back = apply(res.u, u_right);
  double r = 0.0;
  for (int m = 0; m < modes; ++m)
    for (int j = 0; j < n; ++j) {
      double lam = (m == 0 && periodic) ? res.defect : 0.0;
      if (m == degree_ && factor_->filtered) lam += factor_->pattern(j, degree_) * res.filter_defect;
      r = std::max(r, std::abs(back.coeff(j, m) + lam - omega.coeff(j, m)));
    }
  const double scale = max_abs(omega.data()) + factor_->matrix_norm * max_abs(res.u.data()) + 1e-300;
  res.residual = r / scale;
  if (!(res.residual < 1e-9)) {
    throw NumericalError("recovery residual too large (" + describe(mesh_, degree_, flux_) + ")");
  }
  return res;
}

namespace {

// Per-cell antiderivative coefficients: u_j = value * L_0 - (h/2) * sum_m omega_m I_m
// with I_m = int_xi^1 L_m.
void antiderivative_cell(const DGField& omega, std::size_t j, double right_value, DGField& u) {
  const double half_h = 0.5 * omega.mesh().width();
  const int k = omega.degree();
  for (int m = 0; m <= k + 1; ++m) u.coeff(j, m) = 0.0;
  u.coeff(j, 0) = right_value;
  const double w0 = omega.coeff(j, 0);
  u.coeff(j, 0) -= half_h * w0;
  u.coeff(j, 1) += half_h * w0;
  for (int m = 1; m <= k; ++m) {
    const double c = half_h * omega.coeff(j, m) / (2.0 * m + 1.0);
    u.coeff(j, m - 1) -= c;
    u.coeff(j, m + 1) += c;
  }
}

}  // namespace

DGField integrate_from_right(const DGField& omega, double u_right) {
  DGField u(omega.mesh(), omega.degree() + 1);
  double right = u_right;
  for (std::size_t jj = omega.n_cells(); jj-- > 0;) {
    antiderivative_cell(omega, jj, right, u);
    right -= omega.mesh().width() * omega.coeff(jj, 0);
  }
  return u;
}

DGField integrate_with_mean(const DGField& omega, double mean) {
  DGField u = integrate_from_right(omega, 0.0);
  const double shift = mean - field_mean(u);
  for (std::size_t j = 0; j < u.n_cells(); ++j) u.coeff(j, 0) += shift;
  return u;
}

DGField integrate_from_left(const DGField& omega, double u_left) {
  double total = 0.0;
  for (std::size_t j = 0; j < omega.n_cells(); ++j) total += omega.mesh().width() * omega.coeff(j, 0);
  return integrate_from_right(omega, u_left + total);
}

double field_mean(const DGField& u) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.n_cells(); ++j) s += u.coeff(j, 0);
  return s / static_cast<double>(u.n_cells());
}

}  // namespace pulsedg
