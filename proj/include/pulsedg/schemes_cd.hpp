#pragma once

// DG schemes for the CD family in the (y, s) plane.
//
// Evolved fields are rho and omega_a = (w_a)_y; the wave components u are
// recovered algebraically at every stage.
//   h0           rho_s + gamma_y = 0 with gamma = Pi G(u), flux
//                gamma_hat = {gamma} - alpha [rho] - beta [gamma];
//                u from omega with u_hat = {u} + mu [u].
//   h1           rho_s = -Pi(u^T Q omega), u from omega with u_hat = u^+.
//   integration  as h1, u is the continuous antiderivative of omega.
//   integration_h0  as h0, u is the continuous antiderivative of omega.
// In all variants omega_s = Pi(M(rho) u).

#include <memory>
#include <string>
#include <vector>

#include "pulsedg/derivative.hpp"
#include "pulsedg/exact_solutions.hpp"
#include "pulsedg/scheme.hpp"
#include "pulsedg/systems.hpp"

namespace pulsedg {

enum class CDSchemeKind { h0, h1, integration, integration_h0 };

std::string_view cd_scheme_name(CDSchemeKind kind);

struct FluxParams {
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;

  static FluxParams conserved() { return {0.0, 0.0, 0.0}; }
  static FluxParams dissipative() { return {0.0, 0.5, 0.5}; }
  // Parameters used for the accuracy tables; alpha > 0 sits outside the
  // proven dissipation conditions.
  static FluxParams table_preset() { return {0.1, 0.0, 0.5}; }

  bool is_conserved() const { return alpha == 0.0 && beta == 0.0 && mu == 0.0; }
  // alpha = 0, beta >= 0, mu >= 0, beta + mu > 0
  bool satisfies_dissipation_conditions() const;
  // Finite, non-negative and mu <= 1/2; throws ConfigError otherwise.
  void validate() const;
};

// Boundary and mean data for a scheme: exact traces on dirichlet_exact
// meshes; periodic meshes hold the initial means of u fixed.
struct CDBoundary {
  std::shared_ptr<const ExactSolution> exact;
  std::vector<double> means;
};

class CDScheme final : public SemiDiscreteScheme {
 public:
  CDScheme(SystemDescriptor sys, CDSchemeKind kind, const Mesh1D& mesh, int degree, FluxParams flux, CDBoundary boundary);

  std::string name() const override;
  const SystemDescriptor& system() const { return sys_; }
  CDSchemeKind kind() const { return kind_; }
  const FluxParams& flux() const { return flux_; }
  int degree() const { return degree_; }
  const Mesh1D& mesh() const { return mesh_; }

  // Layout: state = [rho, omega_0..omega_{n-1}]; recovered = [u_0..u_{n-1}, gamma (h0 kinds)].
  FieldSet initial_state(const ExactSolution& exact, double s0 = 0.0) const;
  Recovered recover(double s, const FieldSet& state) const override;
  FieldSet rhs(double s, const FieldSet& state, const Recovered& aux) const override;
  double anchor_rate(double s, const FieldSet& state, const Recovered& aux) const override;

  // Wave components only.
  FieldSet wave(const Recovered& aux) const;
  // Recovery of u from an arbitrary omega with explicit boundary values.
  DGField recover_component(const DGField& omega, double u_right, double mean) const;
  const DerivativeOperator* derivative_operator() const { return op_.get(); }

 private:
  std::vector<double> boundary_values(double s) const;
  DGField project_gamma(const FieldSet& u) const;

  SystemDescriptor sys_;
  CDSchemeKind kind_;
  Mesh1D mesh_;
  int degree_;
  FluxParams flux_;
  CDBoundary boundary_;
  CellBasis basis_;    // degree k+1 tabulation, enough for integrated u
  CellBasis basis_k_;  // same nodes, degree k
  std::unique_ptr<DerivativeOperator> op_;
};

}  // namespace pulsedg
