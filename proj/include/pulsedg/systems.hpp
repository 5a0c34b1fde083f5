#pragma once

// PDE family descriptors and the conserved functionals E0, H0, H1, H2.
//
// Every CD-type family is written on a vector w of real wave components
// (complex unknowns are split into real and imaginary parts):
//   rho_s + G(w)_y = 0,   (w_a)_ys = M(rho) w_a,
//   G(w) = 1/2 w^T Q w,   M(rho) = m1 rho + m0,
//   H0 = int M(rho) w^T P w,   H1 = int rho^2 + w_y^T P w_y.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pulsedg/mesh_basis.hpp"

namespace pulsedg {

enum class Family {
  sp_direct,
  cd,
  coupled_cd,
  complex_cd,
  coupled_complex_cd,
  mcd,
  coupled_mcd,
  defocusing_complex_mcd,
  sine_gordon,
  msp_sine_gordon,
  two_component_sg,
};

enum class ScalarKind { real, complex };
enum class SourceKind { none, sine, sine_cosine };

struct SystemDescriptor {
  Family family = Family::cd;
  int n_wave_components = 1;
  ScalarKind scalar_kind = ScalarKind::real;
  std::size_t n_real = 1;             // length of w
  std::vector<double> flux_matrix;    // Q, n_real x n_real row-major
  std::vector<double> energy_matrix;  // P
  double mass_slope = 1.0;            // m1
  double mass_offset = 0.0;           // m0
  SourceKind source = SourceKind::none;

  bool is_cd_family() const;
  bool is_sg_family() const;
  double G(std::span<const double> w) const;
  double M(double rho) const { return mass_slope * rho + mass_offset; }
  // w^T P w
  double energy_form(std::span<const double> a, std::span<const double> b) const;
  double source_term(double z) const;
};

SystemDescriptor describe(Family family);
Family parse_family(std::string_view name);
std::string_view family_name(Family family);

// Per-cell integrals. Fields may have different degrees; products use a
// Gauss rule with (max degree + 3) points.
std::vector<double> cell_H0(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> w);
std::vector<double> cell_H1(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> omega);
std::vector<double> cell_E0(const DGField& u);
std::vector<double> cell_H2(std::span<const DGField> omega);

double eval_H0(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> w);
double eval_H1(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> omega);
double eval_E0(const DGField& u);
double eval_H2(std::span<const DGField> omega);

struct DriftSample {
  double s = 0.0;
  std::vector<double> cells;
  double total() const;
};

struct DriftReport {
  double initial = 0.0;
  double final = 0.0;
  double delta = 0.0;          // sum over cells of |final cell integral - initial cell integral|
  double global_change = 0.0;  // |final - initial|
  std::vector<double> times;
  std::vector<double> series;  // totals along the history
};

// Needs at least two samples with matching cell counts.
DriftReport drift(std::span<const DriftSample> history);

}  // namespace pulsedg
