#pragma once

// DG schemes for the sine-Gordon family z_ys = source(z) in the (y, s) plane.
//   sg           omega = z_y evolved, omega_s = Pi source(z); z recovered from
//                omega with the upwind flux z_hat = z^+ (exact value at y_R).
//   sg_integration  z is the continuous antiderivative of omega.
// An H2-conservative recovery z_hat = ([z eta] + [cos z]) / [eta],
// eta = Pi sin z, is available as an experimental Newton solve.

#include <deque>
#include <memory>

#include "pulsedg/derivative.hpp"
#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/scheme.hpp"
#include "pulsedg/systems.hpp"

namespace pulsedg {

enum class SGSchemeKind { dg, integration };
enum class SGRecovery { upwind, conservative };

// H2-conservative interface value for z.
double conservative_flux_z(double z_minus, double z_plus, double eta_minus, double eta_plus);

class SGScheme final : public SemiDiscreteScheme {
 public:
  SGScheme(SystemDescriptor sys, SGSchemeKind kind, const Mesh1D& mesh, int degree,
           std::shared_ptr<const ExactSolution> exact, SGRecovery recovery = SGRecovery::upwind);

  std::string name() const override { return kind_ == SGSchemeKind::dg ? "sg" : "sg_integration"; }
  const SystemDescriptor& system() const { return sys_; }
  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }

  // state = [omega_c]; recovered = [z_c].
  FieldSet initial_state(const ExactSolution& exact, double s0 = 0.0) const;
  Recovered recover(double s, const FieldSet& state) const override;
  FieldSet rhs(double s, const FieldSet& state, const Recovered& aux) const override;
  // -1/2 sum_c z_s(y_L)^2 with z_s recovered from omega_s.
  double anchor_rate(double s, const FieldSet& state, const Recovered& aux) const override;
  // z_s recovered from the semi-discrete omega_s.
  FieldSet z_rate(double s, const FieldSet& state, const Recovered& aux) const;

  // Weak derivative of z with the conservative interface value; the exact
  // value is used at y_R.
  DGField conservative_derivative(const DGField& z, double z_right) const;

 private:
  DGField recover_component(const DGField& omega, double z_right, double mean) const;
  DGField recover_conservative(const DGField& omega, double z_right, const DGField& guess) const;

  SystemDescriptor sys_;
  SGSchemeKind kind_;
  Mesh1D mesh_;
  int degree_;
  std::shared_ptr<const ExactSolution> exact_;
  SGRecovery recovery_;
  std::vector<double> means_;
  CellBasis basis_;
  CellBasis basis_k_;
  std::unique_ptr<DerivativeOperator> op_;
};

// Rolling store of z over the last four time levels.
class ZHistory {
 public:
  void push(double s, FieldSet z);
  std::size_t size() const { return levels_.size(); }
  bool ready() const { return levels_.size() == 4; }
  // u = z_s at the second newest level s_n:
  // (2 z^{n+1} + 3 z^n - 6 z^{n-1} + z^{n-2}) / (6 ds); needs uniform steps.
  FieldSet reconstruct_u() const;
  double reconstruction_time() const;
  // Level i, oldest first.
  const std::pair<double, FieldSet>& level(std::size_t i) const { return levels_.at(i); }

 private:
  std::deque<std::pair<double, FieldSet>> levels_;
};

}  // namespace pulsedg
