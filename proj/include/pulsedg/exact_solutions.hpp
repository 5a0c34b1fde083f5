#pragma once

// Closed-form solutions in the transformed (y, s) plane, each with analytic
// first derivatives and the hodograph map x(y, s).

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "pulsedg/systems.hpp"

namespace pulsedg {

using cplx = std::complex<double>;

// Pointwise values of an exact solution. The wave vector w uses the same
// real-split layout as the schemes (u, then v; complex values as Re, Im).
// For sine-Gordon families w holds z (and the second component).
struct ExactPoint {
  std::vector<double> w, w_y, w_s;
  double rho = 1.0;  // x_y
  double x = 0.0;
};

class ExactSolution {
 public:
  virtual ~ExactSolution() = default;
  virtual ExactPoint evaluate(double y, double s) const = 0;
  virtual std::size_t n_components() const = 0;
  virtual std::string name() const = 0;
};

// ---- determinant solitons of the CD family ----

struct SolitonParams {
  std::vector<cplx> p;
  std::vector<cplx> alpha;
  std::vector<cplx> y0;
  bool conjugate_pairing = false;  // complex CD matrix law
};

struct TauValues {
  cplx f, g;
  cplx u, u_y, u_s;
  cplx log_f_y, log_f_s, log_f_ys;
};

// Determinants and log-derivatives via scaled LU; f and g carry the common
// scale factor prod exp(-2 max(Re xi_i, 0)).
TauValues tau_values(const SolitonParams& params, double y, double s);
cplx tau_f(const SolitonParams& params, double y, double s);
cplx tau_g(const SolitonParams& params, double y, double s);

struct SolitonRecord {
  cplx u, u_y, u_s;
  double rho, x;
};

SolitonRecord cd_soliton(const SolitonParams& params, double y, double s);

// ---- elliptic periodic wave of the short pulse equation ----

struct EllipticParams {
  double kappa = 0.65;
  double a = 1.3;
  double x0 = 0.0;
  double eta0 = 0.0;
  double d = 0.0;
};

struct PeriodicRecord {
  double u, u_y, u_s, rho, x;
};

double period_of_cn(const EllipticParams& params);
PeriodicRecord sp_periodic_wave(const EllipticParams& params, double y, double s);
// u(x, t) of the short pulse equation, obtained by inverting x(y, t).
double sp_periodic_u_xt(const EllipticParams& params, double x, double t);

// ---- sine-Gordon kinks ----

struct KinkParams {
  double lambda = 1.0;
  double shift = 0.0;
  double polarity = 1.0;  // +1 kink, -1 antikink
};

struct KinkRecord {
  double z, z_y, z_s, x;
};

// z = 4 arctan(exp(lambda y + s / lambda + shift)); the modified form uses 2 arctan.
KinkRecord sg_one_soliton(const KinkParams& params, double y, double s);
KinkRecord msp_one_soliton(const KinkParams& params, double y, double s);

// ---- coupled modified CD cuspon ----

struct CusponParams {
  double a1 = 0.5;
  double b1 = 1.0;
  double p1 = 1.0;
  double xi10 = 0.0;
};

struct CusponRecord {
  double u, v, u_y, v_y, u_s, v_s, rho, x;
};

CusponRecord mcsp_cuspon(const CusponParams& params, double y, double s);

// ---- defocusing complex modified CD ----

struct DefocusParams {
  double kappa = 1.0;
  double gamma = 0.5;
  double phi = 0.0;
};

struct DefocusRecord {
  cplx u, u_y, u_s;
  double rho, x;
};

// x is shifted by (1 + kappa gamma) y / 2 relative to the printed formula so
// that x_y = rho and x_s = |u|^2.
DefocusRecord defocusing_mcd(const DefocusParams& params, double y, double s);

// ---- adapters binding a formula to a system layout ----

std::unique_ptr<ExactSolution> make_cd_soliton(const SystemDescriptor& sys, SolitonParams params);
std::unique_ptr<ExactSolution> make_cn_wave(const SystemDescriptor& sys, EllipticParams params);
std::unique_ptr<ExactSolution> make_cuspon(const SystemDescriptor& sys, CusponParams params);
std::unique_ptr<ExactSolution> make_defocusing(const SystemDescriptor& sys, DefocusParams params);
// One kink per component for two-component systems.
std::unique_ptr<ExactSolution> make_sg_kink(const SystemDescriptor& sys, std::vector<KinkParams> params);

}  // namespace pulsedg
