#include "pulsedg/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pulsedg/error.hpp"

namespace pulsedg {
namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr FamilyName kNames[] = {
    {Family::sp_direct, "sp_direct"},
    {Family::cd, "cd"},
    {Family::coupled_cd, "coupled_cd"},
    {Family::complex_cd, "complex_cd"},
    {Family::coupled_complex_cd, "coupled_complex_cd"},
    {Family::mcd, "mcd"},
    {Family::coupled_mcd, "coupled_mcd"},
    {Family::defocusing_complex_mcd, "defocusing_complex_mcd"},
    {Family::sine_gordon, "sine_gordon"},
    {Family::msp_sine_gordon, "msp_sine_gordon"},
    {Family::two_component_sg, "two_component_sg"},
};

std::vector<double> identity(std::size_t n, double scale) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = scale;
  return m;
}

std::vector<double> swap_pair(double off) { return {0.0, off, off, 0.0}; }

std::size_t max_degree(const DGField& a, std::span<const DGField> rest) {
  int d = a.degree();
  for (const auto& f : rest) d = std::max(d, f.degree());
  return static_cast<std::size_t>(d);
}

}  // namespace

bool SystemDescriptor::is_cd_family() const {
  switch (family) {
    case Family::cd:
    case Family::coupled_cd:
    case Family::complex_cd:
    case Family::coupled_complex_cd:
    case Family::mcd:
    case Family::coupled_mcd:
    case Family::defocusing_complex_mcd:
      return true;
    default:
      return false;
  }
}

bool SystemDescriptor::is_sg_family() const {
  return family == Family::sine_gordon || family == Family::msp_sine_gordon || family == Family::two_component_sg;
}

double SystemDescriptor::G(std::span<const double> w) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < n_real; ++a)
    for (std::size_t b = 0; b < n_real; ++b) acc += w[a] * flux_matrix[a * n_real + b] * w[b];
  return 0.5 * acc;
}

double SystemDescriptor::energy_form(std::span<const double> x, std::span<const double> y) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < n_real; ++a)
    for (std::size_t b = 0; b < n_real; ++b) acc += x[a] * energy_matrix[a * n_real + b] * y[b];
  return acc;
}

double SystemDescriptor::source_term(double z) const {
  switch (source) {
    case SourceKind::sine: return std::sin(z);
    case SourceKind::sine_cosine: return std::sin(z) * std::cos(z);
    case SourceKind::none: break;
  }
  return 0.0;
}

SystemDescriptor describe(Family family) {
  SystemDescriptor d;
  d.family = family;
  switch (family) {
    case Family::sp_direct:
      d.n_real = 1;
      d.flux_matrix = {1.0};
      d.energy_matrix = {1.0};
      break;
    case Family::cd:
      d.n_real = 1;
      d.flux_matrix = {1.0};
      d.energy_matrix = {1.0};
      break;
    case Family::coupled_cd:
      d.n_wave_components = 2;
      d.n_real = 2;
      d.flux_matrix = swap_pair(0.5);
      d.energy_matrix = swap_pair(0.5);
      break;
    case Family::complex_cd:
      d.scalar_kind = ScalarKind::complex;
      d.n_real = 2;
      d.flux_matrix = identity(2, 1.0);
      d.energy_matrix = identity(2, 1.0);
      break;
    case Family::coupled_complex_cd:
      d.n_wave_components = 2;
      d.scalar_kind = ScalarKind::complex;
      d.n_real = 4;
      d.flux_matrix = identity(4, 1.0);
      d.energy_matrix = identity(4, 1.0);
      break;
    case Family::mcd:
      d.n_real = 1;
      d.flux_matrix = {2.0};
      d.energy_matrix = {1.0};
      d.mass_slope = 2.0;
      d.mass_offset = -1.0;
      break;
    case Family::coupled_mcd:
      d.n_wave_components = 2;
      d.n_real = 2;
      d.flux_matrix = swap_pair(1.0);
      d.energy_matrix = swap_pair(0.5);
      d.mass_slope = 2.0;
      d.mass_offset = -1.0;
      break;
    case Family::defocusing_complex_mcd:
      d.scalar_kind = ScalarKind::complex;
      d.n_real = 2;
      d.flux_matrix = identity(2, -2.0);
      d.energy_matrix = identity(2, 1.0);
      d.mass_slope = 2.0;
      d.mass_offset = -1.0;
      break;
    case Family::sine_gordon:
      d.n_real = 1;
      d.source = SourceKind::sine;
      break;
    case Family::msp_sine_gordon:
      d.n_real = 1;
      d.source = SourceKind::sine_cosine;
      break;
    case Family::two_component_sg:
      d.n_wave_components = 2;
      d.n_real = 2;
      d.source = SourceKind::sine;
      break;
  }
  if (d.flux_matrix.empty()) {
    d.flux_matrix = identity(d.n_real, 0.0);
    d.energy_matrix = identity(d.n_real, 1.0);
  }
  return d;
}

Family parse_family(std::string_view name) {
  for (const auto& e : kNames)
    if (e.name == name) return e.family;
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

std::string_view family_name(Family family) {
  for (const auto& e : kNames)
    if (e.family == family) return e.name;
  return "unknown";
}

std::vector<double> cell_H0(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> w) {
  if (!sys.is_cd_family()) throw ConfigError("H0 is defined for CD-type systems only");
  if (w.size() != sys.n_real) throw std::invalid_argument("H0: wrong number of wave components");
  const auto basis = make_basis(static_cast<int>(max_degree(rho, w)));
  const auto rho_q = to_nodal(rho, basis);
  std::vector<std::vector<double>> w_q;
  for (const auto& f : w) w_q.push_back(to_nodal(f, basis));
  std::vector<double> integrand(rho_q.size());
  std::vector<double> wp(sys.n_real);
  for (std::size_t i = 0; i < rho_q.size(); ++i) {
    for (std::size_t a = 0; a < sys.n_real; ++a) wp[a] = w_q[a][i];
    integrand[i] = sys.M(rho_q[i]) * sys.energy_form(wp, wp);
  }
  return cell_integrals(integrand, rho.mesh(), basis);
}

std::vector<double> cell_H1(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> omega) {
  if (!sys.is_cd_family()) throw ConfigError("H1 is defined for CD-type systems only");
  if (omega.size() != sys.n_real) throw std::invalid_argument("H1: wrong number of derivative components");
  const auto basis = make_basis(static_cast<int>(max_degree(rho, omega)));
  const auto rho_q = to_nodal(rho, basis);
  std::vector<std::vector<double>> w_q;
  for (const auto& f : omega) w_q.push_back(to_nodal(f, basis));
  std::vector<double> integrand(rho_q.size());
  std::vector<double> wp(sys.n_real);
  for (std::size_t i = 0; i < rho_q.size(); ++i) {
    for (std::size_t a = 0; a < sys.n_real; ++a) wp[a] = w_q[a][i];
    integrand[i] = rho_q[i] * rho_q[i] + sys.energy_form(wp, wp);
  }
  return cell_integrals(integrand, rho.mesh(), basis);
}

std::vector<double> cell_E0(const DGField& u) {
  const auto basis = make_basis(u.degree());
  auto q = to_nodal(u, basis);
  for (double& v : q) v *= v;
  return cell_integrals(q, u.mesh(), basis);
}

std::vector<double> cell_H2(std::span<const DGField> omega) {
  if (omega.empty()) return {};
  std::vector<double> total(omega[0].n_cells(), 0.0);
  for (const auto& f : omega) {
    const auto c = cell_E0(f);
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += c[j];
  }
  return total;
}

namespace {
double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

double eval_H0(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> w) {
  return sum(cell_H0(sys, rho, w));
}
double eval_H1(const SystemDescriptor& sys, const DGField& rho, std::span<const DGField> omega) {
  return sum(cell_H1(sys, rho, omega));
}
double eval_E0(const DGField& u) { return sum(cell_E0(u)); }
double eval_H2(std::span<const DGField> omega) { return sum(cell_H2(omega)); }

double DriftSample::total() const { return sum(cells); }

DriftReport drift(std::span<const DriftSample> history) {
  if (history.size() < 2) throw std::invalid_argument("drift needs at least two snapshots");
  const auto& first = history.front();
  const auto& last = history.back();
  for (const auto& h : history)
    if (h.cells.size() != first.cells.size()) throw std::invalid_argument("drift snapshots live on different meshes");
  DriftReport r;
  r.initial = first.total();
  r.final = last.total();
  for (std::size_t j = 0; j < first.cells.size(); ++j) r.delta += std::abs(last.cells[j] - first.cells[j]);
  r.global_change = std::abs(r.final - r.initial);
  for (const auto& h : history) {
    r.times.push_back(h.s);
    r.series.push_back(h.total());
  }
  return r;
}

}  // namespace pulsedg
