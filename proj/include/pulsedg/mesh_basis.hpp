#pragma once

// Uniform 1D meshes, the per-cell Legendre basis, Gauss quadrature,
// projections onto the broken polynomial space, traces and discrete norms.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace pulsedg {

enum class Boundary { periodic, dirichlet_exact };

struct Mesh1D {
  double y_left = 0.0;
  double y_right = 1.0;
  std::size_t n_cells = 1;
  Boundary boundary = Boundary::periodic;

  double width() const { return (y_right - y_left) / static_cast<double>(n_cells); }
  double length() const { return y_right - y_left; }
  double left_edge(std::size_t j) const { return y_left + static_cast<double>(j) * width(); }
  double center(std::size_t j) const { return left_edge(j) + 0.5 * width(); }
  // Interface i sits at y_left + i*h, i = 0..n_cells.
  double interface(std::size_t i) const { return y_left + static_cast<double>(i) * width(); }
  double to_physical(std::size_t j, double xi) const { return center(j) + 0.5 * width() * xi; }
  // Cell containing y (right-continuous, the right end maps to the last cell).
  std::size_t locate(double y) const;
  double to_reference(std::size_t j, double y) const { return 2.0 * (y - center(j)) / width(); }

  bool operator==(const Mesh1D&) const = default;
};

Mesh1D build_mesh(double y_left, double y_right, std::size_t n_cells, Boundary boundary);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t order() const { return nodes.size(); }
};

// Gauss-Legendre rule with n points on [-1, 1].
Quadrature gauss_nodes(std::size_t n);

// Legendre polynomial L_m with L_m(1) = 1, and its derivative.
double legendre(int m, double xi);
double legendre_derivative(int m, double xi);

// Tabulated basis for polynomial degree k on a Gauss rule.
struct CellBasis {
  int degree = 0;
  Quadrature quad;
  std::vector<double> values;       // [q * modes + m] = L_m(xi_q)
  std::vector<double> derivatives;  // [q * modes + m] = L_m'(xi_q)
  std::vector<double> projector;    // [m * n_quad + q] = (2m+1)/2 w_q L_m(xi_q)
  std::vector<double> stiffness;    // [m * n_quad + q] = w_q L_m'(xi_q)

  int modes() const { return degree + 1; }
  std::size_t n_quad() const { return quad.order(); }
};

CellBasis make_basis(int degree, std::size_t n_quad);
// k+3 points: exact for the cubic-type products in the schemes.
inline CellBasis make_basis(int degree) { return make_basis(degree, static_cast<std::size_t>(degree) + 3); }

// Piecewise polynomial of degree k over a mesh; coefficients are stored
// mode-major: coeffs[m * n_cells + j] multiplies L_m on cell j.
class DGField {
 public:
  DGField() = default;
  DGField(const Mesh1D& mesh, int degree);

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int modes() const { return degree_ + 1; }
  std::size_t n_cells() const { return mesh_.n_cells; }

  double& coeff(std::size_t cell, int mode) { return coeffs_[static_cast<std::size_t>(mode) * n_cells() + cell]; }
  double coeff(std::size_t cell, int mode) const { return coeffs_[static_cast<std::size_t>(mode) * n_cells() + cell]; }
  std::span<double> data() { return coeffs_; }
  std::span<const double> data() const { return coeffs_; }
  std::span<double> mode(int m) { return std::span<double>(coeffs_).subspan(static_cast<std::size_t>(m) * n_cells(), n_cells()); }
  std::span<const double> mode(int m) const {
    return std::span<const double>(coeffs_).subspan(static_cast<std::size_t>(m) * n_cells(), n_cells());
  }

  double eval_local(std::size_t cell, double xi) const;
  double derivative_local(std::size_t cell, double xi) const;  // d/dy
  double eval(double y) const { const auto j = mesh_.locate(y); return eval_local(j, mesh_.to_reference(j, y)); }
  double left_trace(std::size_t cell) const;   // value at xi = -1
  double right_trace(std::size_t cell) const;  // value at xi = +1
  double cell_mean(std::size_t cell) const { return coeff(cell, 0); }

  // Copy with degree raised or truncated.
  DGField with_degree(int degree) const;

  bool same_space(const DGField& other) const { return mesh_ == other.mesh_ && degree_ == other.degree_; }

 private:
  Mesh1D mesh_{};
  int degree_ = 0;
  std::vector<double> coeffs_;
};

using PointFunction = std::function<double(double)>;

// Values at the physical quadrature points, lane-major [q * n_cells + j].
std::vector<double> to_nodal(const DGField& field, const CellBasis& basis);
std::vector<double> nodal_positions(const Mesh1D& mesh, const CellBasis& basis);
std::vector<double> sample_nodal(const PointFunction& f, const Mesh1D& mesh, const CellBasis& basis);
// L2 projection of nodal data onto degree basis.degree.
DGField project_nodal(std::span<const double> nodal, const Mesh1D& mesh, const CellBasis& basis);
// Per-cell integrals of nodal data.
std::vector<double> cell_integrals(std::span<const double> nodal, const Mesh1D& mesh, const CellBasis& basis);

DGField project_L2(const PointFunction& f, const Mesh1D& mesh, int degree, std::size_t n_quad = 0);
// Moments against degree <= k-1 plus an exact left (plus) / right (minus) endpoint match.
DGField project_plus(const PointFunction& f, const Mesh1D& mesh, int degree);
DGField project_minus(const PointFunction& f, const Mesh1D& mesh, int degree);

struct Traces {
  double minus;  // from the cell on the left
  double plus;   // from the cell on the right
  double jump() const { return plus - minus; }
  double average() const { return 0.5 * (plus + minus); }
};

// Traces at interface i (0..n_cells). Periodic meshes wrap; on other meshes the
// boundary interfaces need an exterior value.
Traces traces(const DGField& field, std::size_t iface, std::optional<double> exterior = std::nullopt);
double jump(const DGField& field, std::size_t iface, std::optional<double> exterior = std::nullopt);
double average(const DGField& field, std::size_t iface, std::optional<double> exterior = std::nullopt);

// Error norms of (field - exact). L2 uses degree+3 Gauss points per cell; Linf
// samples 10 equispaced points per cell including both endpoints.
double norm_L2(const DGField& field, const PointFunction& exact);
double norm_Linf(const DGField& field, const PointFunction& exact);

// Vector-valued variants for split complex / coupled unknowns: the pointwise
// error is the Euclidean norm over components.
using VectorFunction = std::function<void(double, std::span<double>)>;
double norm_L2(std::span<const DGField> fields, const VectorFunction& exact);
double norm_Linf(std::span<const DGField> fields, const VectorFunction& exact);

}  // namespace pulsedg
