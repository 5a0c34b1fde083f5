#pragma once

// E0-conserving DG scheme for the short pulse equation on a periodic x-mesh.
//   v = u_x,  v_t = u + omega_x,  omega = f(u)_x,  f(u) = u^3 / 6.
// u is recovered from v with the central flux and zero mean; omega uses the
// entropy-conservative flux f_hat = [F(u)] / [u] with F = u^4 / 24, and v_t
// uses the central flux for omega.

#include "pulsedg/derivative.hpp"
#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/scheme.hpp"

namespace pulsedg {

// [F(u)] / [u], with f({u}) when the jump vanishes.
double nonlinear_flux(double u_minus, double u_plus);

class SPScheme final : public SemiDiscreteScheme {
 public:
  SPScheme(const Mesh1D& mesh, int degree, double mean = 0.0);

  std::string name() const override { return "e0"; }
  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }

  // v_h = D_c(Pi u0).
  FieldSet initial_state(const PointFunction& u0) const;
  // state = [v]; recovered = [u, omega].
  Recovered recover(double s, const FieldSet& state) const override;
  FieldSet rhs(double s, const FieldSet& state, const Recovered& aux) const override;
  double anchor_rate(double, const FieldSet&, const Recovered&) const override { return 0.0; }

  const DerivativeOperator& central() const { return op_; }

 private:
  Mesh1D mesh_;
  int degree_;
  double mean_;
  CellBasis basis_;
  DerivativeOperator op_;
};

}  // namespace pulsedg
