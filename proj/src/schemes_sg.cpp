#include "pulsedg/schemes_sg.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "pulsedg/error.hpp"

namespace pulsedg {

double conservative_flux_z(double z_minus, double z_plus, double eta_minus, double eta_plus) {
  const double d_eta = eta_plus - eta_minus;
  const double scale = 1.0 + std::abs(eta_minus) + std::abs(eta_plus);
  if (std::abs(d_eta) <= 1e-10 * scale) return 0.5 * (z_minus + z_plus);
  const double num = (z_plus * eta_plus - z_minus * eta_minus) + (std::cos(z_plus) - std::cos(z_minus));
  return num / d_eta;
}

SGScheme::SGScheme(SystemDescriptor sys, SGSchemeKind kind, const Mesh1D& mesh, int degree,
                   std::shared_ptr<const ExactSolution> exact, SGRecovery recovery)
    : sys_(std::move(sys)), kind_(kind), mesh_(mesh), degree_(degree), exact_(std::move(exact)), recovery_(recovery),
      basis_(make_basis(degree + 1, static_cast<std::size_t>(degree) + 4)),
      basis_k_(make_basis(degree, static_cast<std::size_t>(degree) + 4)) {
  if (!sys_.is_sg_family()) throw ConfigError("sine-Gordon schemes need a sine-Gordon system");
  if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
  const bool periodic = mesh.boundary == Boundary::periodic;
  if (!periodic && !exact_) throw ConfigError("dirichlet_exact boundary needs an exact solution");
  if (recovery_ == SGRecovery::conservative && (periodic || kind_ != SGSchemeKind::dg)) {
    throw ConfigError("conservative z recovery is available for the DG scheme on dirichlet_exact meshes");
  }
  means_.assign(sys_.n_real, 0.0);
  if (periodic && exact_) {
    const auto ys = nodal_positions(mesh, basis_k_);
    for (std::size_t c = 0; c < sys_.n_real; ++c) {
      std::vector<double> vals(ys.size());
      for (std::size_t i = 0; i < ys.size(); ++i) vals[i] = exact_->evaluate(ys[i], 0.0).w[c];
      means_[c] = field_mean(project_nodal(vals, mesh, basis_k_));
    }
  }
  if (kind_ == SGSchemeKind::dg) {
    op_ = std::make_unique<DerivativeOperator>(mesh, degree, TraceFlux::upwind_plus(), true);
  }
}

FieldSet SGScheme::initial_state(const ExactSolution& exact, double s0) const {
  const auto ys = nodal_positions(mesh_, basis_k_);
  std::vector<std::vector<double>> vals(sys_.n_real, std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const ExactPoint pt = exact.evaluate(ys[i], s0);
    for (std::size_t c = 0; c < sys_.n_real; ++c) vals[c][i] = pt.w_y[c];
  }
  FieldSet state;
  for (const auto& v : vals) state.push_back(project_nodal(v, mesh_, basis_k_));
  return state;
}

DGField SGScheme::recover_component(const DGField& omega, double z_right, double mean) const {
  const bool periodic = mesh_.boundary == Boundary::periodic;
  if (kind_ == SGSchemeKind::integration) {
    return periodic ? integrate_with_mean(omega, mean) : integrate_from_right(omega, z_right);
  }
  DGField z = op_->recover(omega, z_right, mean).u;
  if (recovery_ == SGRecovery::conservative) z = recover_conservative(omega, z_right, z);
  return z;
}

Recovered SGScheme::recover(double s, const FieldSet& state) const {
  if (state.size() != sys_.n_real) throw std::invalid_argument("SG state has the wrong number of fields");
  std::vector<double> zr = means_;
  if (mesh_.boundary != Boundary::periodic) zr = exact_->evaluate(mesh_.y_right, s).w;
  Recovered out;
  for (std::size_t c = 0; c < sys_.n_real; ++c) out.fields.push_back(recover_component(state[c], zr[c], means_[c]));
  return out;
}

FieldSet SGScheme::rhs(double, const FieldSet&, const Recovered& aux) const {
  FieldSet out;
  for (const auto& z : aux.fields) {
    auto nodal = to_nodal(z, basis_);
    for (auto& v : nodal) v = sys_.source_term(v);
    out.push_back(project_nodal(nodal, mesh_, basis_k_));
  }
  return out;
}

FieldSet SGScheme::z_rate(double s, const FieldSet& state, const Recovered& aux) const {
  const FieldSet rate = rhs(s, state, aux);
  const bool periodic = mesh_.boundary == Boundary::periodic;
  std::vector<double> zs_right(sys_.n_real, 0.0);
  if (!periodic) zs_right = exact_->evaluate(mesh_.y_right, s).w_s;
  FieldSet out;
  for (std::size_t c = 0; c < sys_.n_real; ++c) {
    if (kind_ == SGSchemeKind::integration) {
      out.push_back(periodic ? integrate_with_mean(rate[c], 0.0) : integrate_from_right(rate[c], zs_right[c]));
    } else {
      out.push_back(op_->recover(rate[c], zs_right[c], 0.0).u);
    }
  }
  return out;
}

double SGScheme::anchor_rate(double s, const FieldSet& state, const Recovered& aux) const {
  double acc = 0.0;
  for (const auto& zs : z_rate(s, state, aux)) {
    const double v = zs.left_trace(0);
    acc += v * v;
  }
  return -0.5 * acc;
}

DGField SGScheme::conservative_derivative(const DGField& z, double z_right) const {
  const std::size_t n = mesh_.n_cells;
  const bool periodic = mesh_.boundary == Boundary::periodic;
  auto sz = to_nodal(z, basis_k_);
  for (auto& v : sz) v = std::sin(v);
  const DGField eta = project_nodal(sz, mesh_, basis_k_);
  std::vector<double> zhat(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (!periodic && i == n) {
      zhat[i] = z_right;
    } else if (!periodic && i == 0) {
      zhat[i] = z.left_trace(0);
    } else {
      const Traces tz = traces(z, i);
      const Traces te = traces(eta, i);
      zhat[i] = conservative_flux_z(tz.minus, tz.plus, te.minus, te.plus);
    }
  }
  return weak_derivative(to_nodal(z, basis_k_), zhat, mesh_, basis_k_);
}

DGField SGScheme::recover_conservative(const DGField& omega, double z_right, const DGField& guess) const {
  const std::size_t n = mesh_.n_cells;
  const int modes = degree_ + 1;
  const auto size = static_cast<Eigen::Index>(n * static_cast<std::size_t>(modes));
  DGField z = guess;
  auto residual = [&](const DGField& zz) {
    DGField r = conservative_derivative(zz, z_right);
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] -= omega.data()[i];
    return r;
  };
  auto index = [&](std::size_t j, int m) { return static_cast<Eigen::Index>(j * static_cast<std::size_t>(modes) + static_cast<std::size_t>(m)); };
  double omega_scale = 1e-300;
  for (double v : omega.data()) omega_scale = std::max(omega_scale, std::abs(v));

  for (int it = 0; it < 30; ++it) {
    const DGField r0 = residual(z);
    double rmax = 0.0;
    for (double v : r0.data()) rmax = std::max(rmax, std::abs(v));
    if (rmax <= 1e-11 * (1.0 + omega_scale)) return z;

    // Coefficient (j, m) only reaches cells j-1..j+1: colour cells by j mod 3.
    std::vector<Eigen::Triplet<double>> trip;
    const double eps = 1e-7;
    for (int m = 0; m < modes; ++m) {
      for (std::size_t color = 0; color < 3; ++color) {
        DGField zp = z;
        for (std::size_t j = color; j < n; j += 3) zp.coeff(j, m) += eps;
        const DGField rp = residual(zp);
        for (std::size_t j = color; j < n; j += 3) {
          for (std::size_t dj : {n - 1, std::size_t{0}, std::size_t{1}}) {
            const std::size_t row_cell = (j + dj) % n;
            if (mesh_.boundary != Boundary::periodic && ((dj == n - 1 && j == 0) || (dj == 1 && j + 1 == n))) continue;
            for (int mm = 0; mm < modes; ++mm) {
              const double d = (rp.coeff(row_cell, mm) - r0.coeff(row_cell, mm)) / eps;
              if (d != 0.0) trip.emplace_back(index(row_cell, mm), index(j, m), d);
            }
          }
        }
      }
    }
    Eigen::SparseMatrix<double> jac(size, size);
    jac.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw NumericalError("conservative z recovery: singular Newton matrix");
    Eigen::VectorXd rhs(size);
    for (std::size_t j = 0; j < n; ++j)
      for (int m = 0; m < modes; ++m) rhs(index(j, m)) = -r0.coeff(j, m);
    const Eigen::VectorXd dz = lu.solve(rhs);
    for (std::size_t j = 0; j < n; ++j)
      for (int m = 0; m < modes; ++m) z.coeff(j, m) += dz(index(j, m));
  }
  throw NumericalError("conservative z recovery: Newton iteration did not converge");
}

void ZHistory::push(double s, FieldSet z) {
  levels_.emplace_back(s, std::move(z));
  while (levels_.size() > 4) levels_.pop_front();
}

double ZHistory::reconstruction_time() const {
  if (!ready()) throw std::logic_error("z history needs four levels");
  return levels_[2].first;
}

FieldSet ZHistory::reconstruct_u() const {
  if (!ready()) throw std::logic_error("z history needs four levels");
  const double ds = levels_[3].first - levels_[2].first;
  for (std::size_t i = 1; i < 4; ++i) {
    const double d = levels_[i].first - levels_[i - 1].first;
    if (std::abs(d - ds) > 1e-9 * std::abs(ds)) throw std::logic_error("z history needs uniform steps");
  }
  const FieldSet& zp = levels_[3].second;
  const FieldSet& z0 = levels_[2].second;
  const FieldSet& zm = levels_[1].second;
  const FieldSet& zmm = levels_[0].second;
  FieldSet out = z0;
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto o = out[c].data();
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] = (2.0 * zp[c].data()[i] + 3.0 * z0[c].data()[i] - 6.0 * zm[c].data()[i] + zmm[c].data()[i]) / (6.0 * ds);
    }
  }
  return out;
}

}  // namespace pulsedg
