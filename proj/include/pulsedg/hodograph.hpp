#pragma once

// Parametric (x, u) curves from (y, s)-plane solutions.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pulsedg/mesh_basis.hpp"

namespace pulsedg {

// Continuous x_h with (x_h)_y = rho_h on every cell and x_h(y_L) = x_left.
DGField x_from_rho(const DGField& rho, double x_left);

// x_h = x_left + int cos z dy (component average for several z). cos z is
// projected with (deg z + 3) Gauss points onto degree deg z and integrated
// exactly, so the interface values are cumulative Gauss sums.
DGField x_from_z(std::span<const DGField> z, double x_left);

// RK4 for dx/ds = rate(s).
double advance_anchor(double x, const std::function<double(double)>& rate, double s, double ds);

struct ParametricCurve {
  std::vector<double> y, x;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  double y_anchor = 0.0;
  double x_anchor = 0.0;
};

// Samples at xi = -1 + 2i/n (i < n) in every cell plus the right end, so y is
// strictly increasing.
ParametricCurve emit_curve(const DGField& x, std::span<const DGField> fields, std::span<const std::string> names,
                           std::size_t samples_per_cell);

// Indices where x decreases between consecutive samples.
std::vector<std::size_t> fold_indices(const ParametricCurve& curve);

}  // namespace pulsedg
