#pragma once

// Brute-force reference implementations for the tests: Golub-Welsch Gauss
// rules, Legendre polynomials by recurrence, dense assembly of the weak
// derivative from its defining relation, dense bordered recovery, and
// pointwise-quadrature versions of the scheme right-hand sides.
// Nothing here calls the library's quadrature, basis tables or kernels.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/mesh_basis.hpp"
#include "pulsedg/systems.hpp"

namespace oracle {

using pulsedg::Boundary;
using pulsedg::DGField;
using pulsedg::Mesh1D;

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Legendre nodes as eigenvalues of the Jacobi matrix.
inline Rule golub_welsch(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w.push_back(2.0 * v * v);
  }
  return r;
}

inline const Rule& rule() {
  static const Rule r = golub_welsch(24);
  return r;
}

// Bonnet recurrence; returns {P_m(x), P_m'(x)}.
inline std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0;
  if (m == 0) return {1.0, 0.0};
  for (int n = 1; n < m; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    const double d2 = d0 + (2.0 * n + 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

inline double eval(const DGField& f, std::size_t j, double xi) {
  double v = 0.0;
  for (int m = 0; m < f.modes(); ++m) v += f.coeff(j, m) * legendre(m, xi).first;
  return v;
}

// Local mass matrix on the reference cell, assembled by quadrature and inverted densely.
inline Eigen::MatrixXd inverse_mass(int modes, double h) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(modes, modes);
  const Rule& q = rule();
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (std::size_t i = 0; i < q.x.size(); ++i)
        M(a, b) += 0.5 * h * q.w[i] * legendre(a, q.x[i]).first * legendre(b, q.x[i]).first;
  return M.inverse();
}

// L2 projection of a pointwise function of (cell, xi) onto degree k.
inline DGField project(const Mesh1D& mesh, int k, const std::function<double(std::size_t, double)>& f,
                       const Rule& q = rule()) {
  DGField out(mesh, k);
  const Eigen::MatrixXd Minv = inverse_mass(k + 1, mesh.width());
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
    for (int m = 0; m <= k; ++m)
      for (std::size_t i = 0; i < q.x.size(); ++i)
        b(m) += 0.5 * mesh.width() * q.w[i] * f(j, q.x[i]) * legendre(m, q.x[i]).first;
    const Eigen::VectorXd c = Minv * b;
    for (int m = 0; m <= k; ++m) out.coeff(j, m) = c(m);
  }
  return out;
}

// (w, psi)_j = <g_hat, psi>_j - (g, psi_y)_j with g pointwise and g_hat given.
inline DGField weak_derivative(const Mesh1D& mesh, int k, const std::function<double(std::size_t, double)>& g,
                               const std::vector<double>& ghat) {
  DGField out(mesh, k);
  const Rule& q = rule();
  const double h = mesh.width();
  const Eigen::MatrixXd Minv = inverse_mass(k + 1, h);
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
    for (int m = 0; m <= k; ++m) {
      b(m) = ghat[j + 1] * legendre(m, 1.0).first - ghat[j] * legendre(m, -1.0).first;
      for (std::size_t i = 0; i < q.x.size(); ++i)
        b(m) -= q.w[i] * g(j, q.x[i]) * legendre(m, q.x[i]).second;  // psi_y dy = psi_xi dxi
    }
    const Eigen::VectorXd c = Minv * b;
    for (int m = 0; m <= k; ++m) out.coeff(j, m) = c(m);
  }
  return out;
}

// Interface traces; exterior values replace the missing side on non-periodic meshes.
inline std::pair<double, double> traces(const DGField& f, std::size_t i, double exterior_left, double exterior_right) {
  const std::size_t n = f.n_cells();
  const bool periodic = f.mesh().boundary == Boundary::periodic;
  double minus, plus;
  if (i == 0) minus = periodic ? eval(f, n - 1, 1.0) : exterior_left;
  else minus = eval(f, i - 1, 1.0);
  if (i == n) plus = periodic ? eval(f, 0, -1.0) : exterior_right;
  else plus = eval(f, i, -1.0);
  return {minus, plus};
}

// Dense weak derivative with u_hat = (1/2 - mu) u^- + (1/2 + mu) u^+; on
// non-periodic meshes u_hat = u^+ at y_L and u_R at y_R. omega = A u + b u_R
// in cell-major ordering.
struct DenseDerivative {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

inline DGField apply_definition(const DGField& u, double mu, double u_right) {
  const std::size_t n = u.n_cells();
  const bool periodic = u.mesh().boundary == Boundary::periodic;
  std::vector<double> uhat(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (!periodic && i == n) {
      uhat[i] = u_right;
    } else if (!periodic && i == 0) {
      uhat[i] = eval(u, 0, -1.0);
    } else {
      const auto [m, p] = traces(u, i, 0.0, 0.0);
      uhat[i] = (0.5 - mu) * m + (0.5 + mu) * p;
    }
  }
  return weak_derivative(u.mesh(), u.degree(), [&](std::size_t j, double xi) { return eval(u, j, xi); }, uhat);
}

inline Eigen::VectorXd cell_major(const DGField& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(f.n_cells()) * f.modes());
  for (std::size_t j = 0; j < f.n_cells(); ++j)
    for (int m = 0; m < f.modes(); ++m) v(static_cast<Eigen::Index>(j) * f.modes() + m) = f.coeff(j, m);
  return v;
}

inline DGField from_cell_major(const Mesh1D& mesh, int k, const Eigen::VectorXd& v) {
  DGField f(mesh, k);
  for (std::size_t j = 0; j < mesh.n_cells; ++j)
    for (int m = 0; m <= k; ++m) f.coeff(j, m) = v(static_cast<Eigen::Index>(j) * (k + 1) + m);
  return f;
}

inline DenseDerivative dense_derivative(const Mesh1D& mesh, int k, double mu) {
  const auto size = static_cast<Eigen::Index>(mesh.n_cells) * (k + 1);
  DenseDerivative d{Eigen::MatrixXd::Zero(size, size), Eigen::VectorXd::Zero(size)};
  DGField e(mesh, k);
  for (Eigen::Index c = 0; c < size; ++c) {
    e = from_cell_major(mesh, k, Eigen::VectorXd::Unit(size, c));
    d.A.col(c) = cell_major(apply_definition(e, mu, 0.0));
  }
  d.b = cell_major(apply_definition(DGField(mesh, k), mu, 1.0));
  return d;
}

// Null space dimension of the dense operator by SVD.
inline int null_dimension(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  int z = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) <= 1e-10 * s(0)) ++z;
  return z;
}

// Recovery: Dirichlet meshes solve A u = omega - b u_R. Periodic meshes border
// the system with the mean constraint (multiplier on the mode-0 rows) and,
// when the SVD shows a second null vector, a top-mode constraint with
// pattern(j) = 1 (odd k) or (-1)^j (even k) whose multiplier sits on the
// mode-k rows.
inline DGField dense_recover(const Mesh1D& mesh, int k, double mu, const DGField& omega, double u_right, double mean) {
  const DenseDerivative d = dense_derivative(mesh, k, mu);
  const Eigen::Index size = d.A.rows();
  const auto n = static_cast<Eigen::Index>(mesh.n_cells);
  if (mesh.boundary != Boundary::periodic) {
    const Eigen::VectorXd rhs = cell_major(omega) - d.b * u_right;
    return from_cell_major(mesh, k, d.A.fullPivLu().solve(rhs));
  }
  const int extra = null_dimension(d.A);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(size + extra, size + extra);
  S.topLeftCorner(size, size) = d.A;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size + extra);
  rhs.head(size) = cell_major(omega);
  for (Eigen::Index j = 0; j < n; ++j) {
    S(j * (k + 1), size) = 1.0;
    S(size, j * (k + 1)) = 1.0 / static_cast<double>(n);
    if (extra == 2) {
      const double sgn = k % 2 == 1 ? 1.0 : (j % 2 == 0 ? 1.0 : -1.0);
      S(j * (k + 1) + k, size + 1) = sgn;
      S(size + 1, j * (k + 1) + k) = sgn / static_cast<double>(n);
    }
  }
  rhs(size) = mean;
  const Eigen::VectorXd sol = S.fullPivLu().solve(rhs);
  return from_cell_major(mesh, k, sol.head(size));
}

// Continuous degree-(k+1) antiderivative from the right end value, by nested quadrature.
inline DGField antiderivative(const DGField& omega, double u_right) {
  const Mesh1D& mesh = omega.mesh();
  const double h = mesh.width();
  const Rule& q = rule();
  std::vector<double> right(mesh.n_cells);
  double acc = u_right;
  for (std::size_t j = mesh.n_cells; j-- > 0;) {
    right[j] = acc;
    double integral = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) integral += 0.5 * h * q.w[i] * eval(omega, j, q.x[i]);
    acc -= integral;
  }
  return project(mesh, omega.degree() + 1, [&](std::size_t j, double xi) {
    // u(xi) = right_j - int_xi^1 omega
    double integral = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double t = xi + (1.0 - xi) * 0.5 * (q.x[i] + 1.0);
      integral += 0.5 * (1.0 - xi) * q.w[i] * eval(omega, j, t);
    }
    return right[j] - 0.5 * h * integral;
  });
}

inline double mean(const DGField& f) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.n_cells(); ++j) s += f.coeff(j, 0);
  return s / static_cast<double>(f.n_cells());
}

// Broken L2 inner product by quadrature.
inline double inner(const DGField& a, const DGField& b) {
  const Rule& q = rule();
  double s = 0.0;
  for (std::size_t j = 0; j < a.n_cells(); ++j)
    for (std::size_t i = 0; i < q.x.size(); ++i) s += 0.5 * a.mesh().width() * q.w[i] * eval(a, j, q.x[i]) * eval(b, j, q.x[i]);
  return s;
}

inline double max_diff(const DGField& a, const DGField& b) {
  double r = 0.0;
  for (std::size_t j = 0; j < a.n_cells(); ++j)
    for (int m = 0; m < std::max(a.modes(), b.modes()); ++m) {
      const double x = m < a.modes() ? a.coeff(j, m) : 0.0;
      const double y = m < b.modes() ? b.coeff(j, m) : 0.0;
      r = std::max(r, std::abs(x - y));
    }
  return r;
}

inline double max_abs(const DGField& a) {
  double r = 0.0;
  for (double v : a.data()) r = std::max(r, std::abs(v));
  return r;
}

// Random DG field with coefficients decaying by mode.
inline DGField random_field(const Mesh1D& mesh, int k, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DGField f(mesh, k);
  for (std::size_t j = 0; j < mesh.n_cells; ++j)
    for (int m = 0; m <= k; ++m) f.coeff(j, m) = scale * U(rng) / (1.0 + m);
  return f;
}

// Random smooth periodic function: a few low Fourier modes on the mesh interval.
struct Trig {
  std::vector<double> amp, phase;
  std::vector<int> freq;
  double offset = 0.0;
  double length = 1.0, left = 0.0;
  double operator()(double y) const {
    double v = offset;
    const double w = 2.0 * M_PI / length;
    for (std::size_t i = 0; i < amp.size(); ++i) v += amp[i] * std::sin(freq[i] * w * (y - left) + phase[i]);
    return v;
  }
  double derivative(double y) const {
    double v = 0.0;
    const double w = 2.0 * M_PI / length;
    for (std::size_t i = 0; i < amp.size(); ++i) v += amp[i] * freq[i] * w * std::cos(freq[i] * w * (y - left) + phase[i]);
    return v;
  }
};

inline Trig random_trig(const Mesh1D& mesh, std::mt19937_64& rng, double amplitude, double offset, int modes = 3) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 2.0 * M_PI);
  Trig t;
  t.offset = offset;
  t.length = mesh.length();
  t.left = mesh.y_left;
  for (int i = 1; i <= modes; ++i) {
    t.amp.push_back(amplitude * U(rng) / i);
    t.phase.push_back(P(rng));
    t.freq.push_back(i);
  }
  return t;
}

inline DGField project_function(const Mesh1D& mesh, int k, const std::function<double(double)>& f) {
  return project(mesh, k, [&](std::size_t j, double xi) { return f(mesh.to_physical(j, xi)); });
}

// ---- CD scheme right-hand sides from the definitions ----

enum class CDKind { h0, h1, integration, integration_h0 };

struct CDOracleInput {
  pulsedg::SystemDescriptor sys;
  CDKind kind = CDKind::h1;
  double alpha = 0.0, beta = 0.0, mu = 0.0;
  const pulsedg::ExactSolution* exact = nullptr;  // boundary data on dirichlet_exact meshes
  std::vector<double> means;                       // periodic means of u
  double s = 0.0;
};

struct CDOracleOutput {
  std::vector<DGField> u;
  DGField gamma;
  std::vector<DGField> rate;  // [rho_dot, omega_dot...]
};

inline CDOracleOutput cd_rhs(const CDOracleInput& in, const std::vector<DGField>& state) {
  const Mesh1D& mesh = state[0].mesh();
  const int k = state[0].degree();
  const std::size_t nr = in.sys.n_real;
  const bool periodic = mesh.boundary == Boundary::periodic;
  const bool integ = in.kind == CDKind::integration || in.kind == CDKind::integration_h0;
  const bool h0 = in.kind == CDKind::h0 || in.kind == CDKind::integration_h0;
  std::vector<double> right(nr, 0.0);
  pulsedg::ExactPoint pl, pr;
  if (!periodic) {
    pl = in.exact->evaluate(mesh.y_left, in.s);
    pr = in.exact->evaluate(mesh.y_right, in.s);
    right = pr.w;
  }
  CDOracleOutput out;
  for (std::size_t a = 0; a < nr; ++a) {
    const DGField& om = state[a + 1];
    if (integ) {
      DGField u = antiderivative(om, periodic ? 0.0 : right[a]);
      if (periodic) {
        const double shift = in.means[a] - mean(u);
        for (std::size_t j = 0; j < u.n_cells(); ++j) u.coeff(j, 0) += shift;
      }
      out.u.push_back(u);
    } else {
      const double mu = in.kind == CDKind::h1 ? 0.5 : in.mu;
      out.u.push_back(dense_recover(mesh, k, mu, om, right[a], periodic ? in.means[a] : 0.0));
    }
  }
  auto wave = [&](std::size_t j, double xi) {
    std::vector<double> w(nr);
    for (std::size_t a = 0; a < nr; ++a) w[a] = eval(out.u[a], j, xi);
    return w;
  };
  auto G = [&](const std::vector<double>& w) {
    double g = 0.0;
    for (std::size_t a = 0; a < nr; ++a)
      for (std::size_t b = 0; b < nr; ++b) g += 0.5 * w[a] * in.sys.flux_matrix[a * nr + b] * w[b];
    return g;
  };
  if (h0) {
    out.gamma = project(mesh, k, [&](std::size_t j, double xi) { return G(wave(j, xi)); });
    const std::size_t n = mesh.n_cells;
    std::vector<double> ghat(n + 1);
    const double gl = periodic ? 0.0 : G(pl.w), gr = periodic ? 0.0 : G(pr.w);
    for (std::size_t i = 0; i <= n; ++i) {
      const auto [gm, gp] = traces(out.gamma, i, gl, gr);
      const auto [rm, rp] = traces(state[0], i, periodic ? 0.0 : pl.rho, periodic ? 0.0 : pr.rho);
      ghat[i] = 0.5 * (gm + gp) - in.alpha * (rp - rm) - in.beta * (gp - gm);
    }
    DGField d = weak_derivative(mesh, k, [&](std::size_t j, double xi) { return eval(out.gamma, j, xi); }, ghat);
    for (auto& c : d.data()) c = -c;
    out.rate.push_back(d);
  } else {
    out.rate.push_back(project(mesh, k, [&](std::size_t j, double xi) {
      double acc = 0.0;
      for (std::size_t a = 0; a < nr; ++a)
        for (std::size_t b = 0; b < nr; ++b)
          acc -= in.sys.flux_matrix[a * nr + b] * eval(out.u[a], j, xi) * eval(state[b + 1], j, xi);
      return acc;
    }));
  }
  for (std::size_t a = 0; a < nr; ++a) {
    out.rate.push_back(project(mesh, k, [&](std::size_t j, double xi) {
      return in.sys.M(eval(state[0], j, xi)) * eval(out.u[a], j, xi);
    }));
  }
  return out;
}

// ---- E0 scheme ----

struct SPOracleOutput {
  DGField u, omega, vdot;
};

inline SPOracleOutput sp_rhs(const DGField& v) {
  const Mesh1D& mesh = v.mesh();
  const int k = v.degree();
  SPOracleOutput out;
  out.u = dense_recover(mesh, k, 0.0, v, 0.0, 0.0);
  const std::size_t n = mesh.n_cells;
  std::vector<double> fhat(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const auto [a, b] = traces(out.u, i, 0.0, 0.0);
    fhat[i] = (a * a * a + a * a * b + a * b * b + b * b * b) / 24.0;  // [u^4/24] / [u]
  }
  out.omega = weak_derivative(mesh, k, [&](std::size_t j, double xi) { return std::pow(eval(out.u, j, xi), 3) / 6.0; }, fhat);
  const DGField dw = apply_definition(out.omega, 0.0, 0.0);
  out.vdot = out.u;
  for (std::size_t i = 0; i < out.vdot.data().size(); ++i) out.vdot.data()[i] += dw.data()[i];
  return out;
}

// ---- sine-Gordon schemes ----

struct SGOracleOutput {
  std::vector<DGField> z, rate;
};

inline SGOracleOutput sg_rhs(const pulsedg::SystemDescriptor& sys, bool integration, const std::vector<DGField>& omega,
                             const pulsedg::ExactSolution* exact, const std::vector<double>& means, double s) {
  const Mesh1D& mesh = omega[0].mesh();
  const int k = omega[0].degree();
  const bool periodic = mesh.boundary == Boundary::periodic;
  std::vector<double> right(omega.size(), 0.0);
  if (!periodic) right = exact->evaluate(mesh.y_right, s).w;
  SGOracleOutput out;
  for (std::size_t c = 0; c < omega.size(); ++c) {
    DGField z;
    if (integration) {
      z = antiderivative(omega[c], periodic ? 0.0 : right[c]);
      if (periodic) {
        const double shift = means[c] - mean(z);
        for (std::size_t j = 0; j < z.n_cells(); ++j) z.coeff(j, 0) += shift;
      }
    } else {
      z = dense_recover(mesh, k, 0.5, omega[c], right[c], periodic ? means[c] : 0.0);
    }
    // Non-polynomial source: same (k + 4)-point Gauss rule as the scheme.
    out.rate.push_back(project(mesh, k, [&](std::size_t j, double xi) { return sys.source_term(eval(z, j, xi)); },
                               golub_welsch(k + 4)));
    out.z.push_back(std::move(z));
  }
  return out;
}

}  // namespace oracle
