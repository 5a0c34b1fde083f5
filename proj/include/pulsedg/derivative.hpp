#pragma once

// Weak derivative operators on the broken space and their inverses.
//
// For a trace flux u_hat = (1/2 - mu) u^- + (1/2 + mu) u^+ the operator maps
// u to omega with (omega, psi)_j = <u_hat, psi>_j - (u, psi_y)_j.  On
// dirichlet_exact meshes the right boundary flux is the supplied value u_R and
// the left boundary flux is the interior trace.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pulsedg/mesh_basis.hpp"

namespace pulsedg {

struct TraceFlux {
  double mu = 0.0;
  static TraceFlux central() { return {0.0}; }
  static TraceFlux upwind_plus() { return {0.5}; }
  bool is_upwind_plus() const { return mu == 0.5; }
  std::string name() const;
  double combine(double minus, double plus) const { return (0.5 - mu) * minus + (0.5 + mu) * plus; }
};

// S[n * modes + m] = int_{-1}^{1} L_n L_m'
std::vector<double> stiffness_matrix(int degree);

// (omega, psi)_j = <g_hat, psi>_j - (g, psi_y)_j for g given at the quadrature
// nodes of `basis` (lane-major) and g_hat at the n_cells+1 interfaces.
DGField weak_derivative(std::span<const double> nodal_g, std::span<const double> iface_flux, const Mesh1D& mesh,
                        const CellBasis& basis);

struct RecoveryResult {
  DGField u;
  double defect = 0.0;         // multiplier of the mean constraint (periodic meshes)
  double filter_defect = 0.0;  // multiplier of the top-mode constraint (central flux, periodic)
  double residual = 0.0;  // relative residual of the solved system
};

class DerivativeOperator {
 public:
  // mean_constraint applies to periodic meshes, whose operator always
  // annihilates constants.
  DerivativeOperator(const Mesh1D& mesh, int degree, TraceFlux flux, bool mean_constraint = true);
  ~DerivativeOperator();
  DerivativeOperator(DerivativeOperator&&) noexcept;
  DerivativeOperator& operator=(DerivativeOperator&&) noexcept;

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  TraceFlux flux() const { return flux_; }

  // Interface fluxes u_hat at the n_cells+1 interfaces.
  std::vector<double> interface_values(const DGField& u, double u_right = 0.0) const;
  DGField apply(const DGField& u, double u_right = 0.0) const;

  // Solve apply(u, u_right) = omega. On periodic meshes the mean of u is set
  // to `mean` and the compatibility defect is returned. With the central flux
  // the top-mode null vector is removed as well.
  RecoveryResult recover(const DGField& omega, double u_right = 0.0, double mean = 0.0) const;

  // Assembled matrix in cell-major ordering (row j*(k+1)+m), boundary data excluded.
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  bool uses_sweep() const { return sweep_; }
  bool filters_top_mode() const;

 private:
  struct Factor;
  Mesh1D mesh_;
  int degree_;
  TraceFlux flux_;
  bool mean_constraint_;
  bool sweep_ = false;
  std::vector<double> stiffness_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Factor> factor_;
};

// Continuous degree-(k+1) antiderivative of omega, chained right to left from u(y_R) = u_right.
DGField integrate_from_right(const DGField& omega, double u_right);
// Same chain with the right value chosen so that the mean of u equals `mean`.
DGField integrate_with_mean(const DGField& omega, double mean);
// Continuous antiderivative chained left to right from u(y_L) = u_left.
DGField integrate_from_left(const DGField& omega, double u_left);

double field_mean(const DGField& u);

}  // namespace pulsedg
