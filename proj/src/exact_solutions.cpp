#include "pulsedg/exact_solutions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsedg/elliptic.hpp"
#include "pulsedg/error.hpp"

namespace pulsedg {
namespace {

using Mat = Eigen::MatrixXcd;

// Numerically stable logistic 1 / (1 + exp(-t)).
double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech(double t) {
  const double a = std::abs(t);
  const double e = std::exp(-a);
  return 2.0 * e / (1.0 + e * e);
}

struct SolitonSetup {
  std::size_t m;
  std::vector<cplx> xi, zeta, q, beta;
  std::vector<double> r;  // exponent shift max(Re xi, 0)
};

SolitonSetup setup(const SolitonParams& prm, double y, double s) {
  const std::size_t m = prm.p.size();
  if (m == 0) throw ConfigError("soliton needs at least one wave number");
  if (prm.alpha.size() != m) throw ConfigError("soliton: p and alpha must have the same length");
  if (!prm.y0.empty() && prm.y0.size() != m) throw ConfigError("soliton: y0 must match p in length");
  SolitonSetup st;
  st.m = m;
  for (std::size_t i = 0; i < m; ++i) {
    const cplx p = prm.p[i];
    if (std::abs(p) == 0.0) throw ConfigError("soliton wave number must be nonzero");
    const cplx y0 = prm.y0.empty() ? cplx(0.0) : prm.y0[i];
    const cplx xi = p * y + s / p + y0;
    st.xi.push_back(xi);
    st.zeta.push_back(prm.conjugate_pairing ? std::conj(xi) : xi);
    st.q.push_back(prm.conjugate_pairing ? std::conj(p) : p);
    st.beta.push_back(prm.conjugate_pairing ? std::conj(prm.alpha[i]) : prm.alpha[i]);
    st.r.push_back(std::max(xi.real(), 0.0));
  }
  return st;
}

cplx pair_denominator(cplx a, cplx b) {
  const cplx d = 2.0 * (1.0 / a + 1.0 / b);
  if (std::abs(d) < 1e-300) throw ConfigError("soliton parameters give a singular matrix entry (1/p_i + 1/p_j = 0)");
  return d;
}

cplx det_with_column(const Mat& base, Eigen::Index col, const Eigen::VectorXcd& replacement) {
  Mat work = base;
  work.col(col) = replacement;
  return work.partialPivLu().determinant();
}

}  // namespace

TauValues tau_values(const SolitonParams& prm, double y, double s) {
  const SolitonSetup st = setup(prm, y, s);
  const auto m = static_cast<Eigen::Index>(st.m);
  Mat F = Mat::Zero(2 * m, 2 * m);
  Mat Fy = Mat::Zero(2 * m, 2 * m);
  Mat Fs = Mat::Zero(2 * m, 2 * m);
  Mat Fys = Mat::Zero(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const cplx a = std::exp(st.xi[i] - st.r[i] + st.zeta[j] - st.r[j]) / pair_denominator(prm.p[i], st.q[j]);
      const cplx ry = prm.p[i] + st.q[j];
      const cplx rs = 1.0 / prm.p[i] + 1.0 / st.q[j];
      F(i, j) = a;
      Fy(i, j) = ry * a;
      Fs(i, j) = rs * a;
      Fys(i, j) = ry * rs * a;
      F(m + i, m + j) = st.beta[i] * prm.alpha[j] / pair_denominator(st.q[i], prm.p[j]);
    }
    F(i, m + i) = std::exp(-st.r[i]);
    F(m + i, i) = -std::exp(-st.r[i]);
  }
  const auto lu = F.partialPivLu();
  TauValues tv{};
  tv.f = lu.determinant();
  if (!(std::abs(tv.f) > 0.0) || !std::isfinite(std::abs(tv.f))) {
    throw NumericalError("tau function f vanished or overflowed");
  }
  const Mat Finv = lu.inverse();
  const Mat A = Finv * Fy;
  const Mat B = Finv * Fs;
  tv.log_f_y = A.trace();
  tv.log_f_s = B.trace();
  tv.log_f_ys = (Finv * Fys).trace() - (A * B).trace();

  Mat G = Mat::Zero(2 * m + 1, 2 * m + 1);
  G.topLeftCorner(2 * m, 2 * m) = F;
  for (Eigen::Index i = 0; i < m; ++i) {
    G(i, 2 * m) = std::exp(st.xi[i] - st.r[i]);
    G(2 * m, m + i) = -prm.alpha[i];
  }
  tv.g = G.partialPivLu().determinant();
  cplx g_y = 0.0, g_s = 0.0;
  Eigen::VectorXcd col_y(2 * m + 1), col_s(2 * m + 1);
  for (Eigen::Index c = 0; c < m; ++c) {
    col_y.setZero();
    col_s.setZero();
    col_y.head(2 * m) = Fy.col(c);
    col_s.head(2 * m) = Fs.col(c);
    g_y += det_with_column(G, c, col_y);
    g_s += det_with_column(G, c, col_s);
  }
  col_y.setZero();
  col_s.setZero();
  for (Eigen::Index i = 0; i < m; ++i) {
    col_y(i) = prm.p[i] * G(i, 2 * m);
    col_s(i) = G(i, 2 * m) / prm.p[i];
  }
  g_y += det_with_column(G, 2 * m, col_y);
  g_s += det_with_column(G, 2 * m, col_s);

  tv.u = tv.g / tv.f;
  tv.u_y = g_y / tv.f - tv.u * tv.log_f_y;
  tv.u_s = g_s / tv.f - tv.u * tv.log_f_s;
  return tv;
}

cplx tau_f(const SolitonParams& params, double y, double s) { return tau_values(params, y, s).f; }
cplx tau_g(const SolitonParams& params, double y, double s) { return tau_values(params, y, s).g; }

SolitonRecord cd_soliton(const SolitonParams& params, double y, double s) {
  const TauValues tv = tau_values(params, y, s);
  return {tv.u, tv.u_y, tv.u_s, 1.0 - 2.0 * tv.log_f_ys.real(), y - 2.0 * tv.log_f_s.real()};
}

double period_of_cn(const EllipticParams& prm) {
  if (!(prm.a != 0.0)) throw ConfigError("cn wave scale a must be nonzero");
  return 4.0 / std::abs(prm.a) * std::abs(-elliptic::K(prm.kappa) + 2.0 * elliptic::E(prm.kappa));
}

PeriodicRecord sp_periodic_wave(const EllipticParams& prm, double y, double s) {
  const double k = prm.kappa, a = prm.a;
  const double eta = a * y - s / a + prm.eta0;
  const auto j = elliptic::jacobi(eta, k);
  PeriodicRecord r{};
  r.u = 2.0 * k / a * j.cn;
  r.u_y = -2.0 * k * j.sn * j.dn;
  r.u_s = 2.0 * k * j.sn * j.dn / (a * a);
  r.rho = 2.0 * j.dn * j.dn - 1.0;
  r.x = prm.x0 + (1.0 - 2.0 * k * k) * s / (a * a) +
        (-eta + 2.0 * elliptic::E_incomplete_phi(j.am, k)) / a + prm.d;
  return r;
}

double sp_periodic_u_xt(const EllipticParams& prm, double x, double t) {
  const double k = prm.kappa;
  if (!(2.0 * k * k < 1.0)) throw ConfigError("cn wave is multivalued in x for kappa^2 >= 1/2");
  auto X = [&](double y) { return sp_periodic_wave(prm, y, t).x - x; };
  const double slope = 2.0 * elliptic::E(k) / elliptic::K(k) - 1.0;
  double y = -X(0.0) / slope;
  double lo = y - 1.0, hi = y + 1.0;
  for (int i = 0; i < 200 && X(lo) > 0.0; ++i) lo -= 2.0 * (hi - lo);
  for (int i = 0; i < 200 && X(hi) < 0.0; ++i) hi += 2.0 * (hi - lo);
  for (int it = 0; it < 100; ++it) {
    const auto rec = sp_periodic_wave(prm, y, t);
    const double fval = rec.x - x;
    if (fval > 0.0) hi = std::min(hi, y); else lo = std::max(lo, y);
    double next = y - fval / rec.rho;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) < 1e-15 * (1.0 + std::abs(y))) { y = next; break; }
    y = next;
  }
  return sp_periodic_wave(prm, y, t).u;
}

KinkRecord sg_one_soliton(const KinkParams& prm, double y, double s) {
  const double lam = prm.lambda;
  if (lam == 0.0) throw ConfigError("kink rate lambda must be nonzero");
  const double th = lam * y + s / lam + prm.shift;
  const double sh = sech(th);
  const double z = 4.0 * std::atan(std::exp(std::min(th, 700.0)));
  return {prm.polarity * z, prm.polarity * 2.0 * lam * sh, prm.polarity * 2.0 / lam * sh,
          y - 2.0 / lam * (1.0 + std::tanh(th))};
}

KinkRecord msp_one_soliton(const KinkParams& prm, double y, double s) {
  const double lam = prm.lambda;
  if (lam == 0.0) throw ConfigError("kink rate lambda must be nonzero");
  const double th = lam * y + s / lam + prm.shift;
  const double sh = sech(th);
  const double z = 2.0 * std::atan(std::exp(std::min(th, 700.0)));
  return {prm.polarity * z, prm.polarity * lam * sh, prm.polarity / lam * sh, -log_cosh(th) / lam};
}

CusponRecord mcsp_cuspon(const CusponParams& prm, double y, double s) {
  const double p = prm.p1;
  if (p == 0.0) throw ConfigError("cuspon wave number must be nonzero");
  const double c = prm.a1 * prm.b1 * p * p / 4.0;
  if (c < 0.0) throw ConfigError("cuspon needs a1 * b1 >= 0");
  const double xi = p * y + s / p + prm.xi10;
  double sigma = 0.0, q = 0.0;
  if (c == 0.0) {
    q = std::exp(xi);
  } else {
    sigma = logistic(std::log(c) + 2.0 * xi);
    q = xi > 0.0 ? std::exp(-xi) / (std::exp(-2.0 * xi) + c) : std::exp(xi) / (1.0 + c * std::exp(2.0 * xi));
  }
  CusponRecord r{};
  r.u = prm.a1 * q;
  r.v = prm.b1 * q;
  const double shape = 1.0 - 2.0 * sigma;
  r.u_y = p * r.u * shape;
  r.v_y = p * r.v * shape;
  r.u_s = r.u * shape / p;
  r.v_s = r.v * shape / p;
  r.rho = shape * shape;
  r.x = y - 2.0 / p * sigma;
  return r;
}

DefocusRecord defocusing_mcd(const DefocusParams& prm, double y, double s) {
  const double denom = std::cos(prm.phi) - prm.gamma;
  if (std::abs(denom) < 1e-14) throw ConfigError("defocusing solution needs cos(phi) != gamma");
  const double beta = -prm.kappa * std::sin(prm.phi) / denom;
  const double omega = -std::sin(prm.phi);
  const double xi = beta * y + omega * s;
  const double sigma = logistic(xi);
  const double bump = sigma * (1.0 - sigma);
  const cplx rot = std::polar(1.0, -2.0 * prm.phi);
  const cplx ratio = (1.0 - sigma) + sigma * rot;
  const cplx phase = 0.5 * std::polar(1.0, prm.kappa * y + prm.gamma * s);
  const cplx i(0.0, 1.0);
  DefocusRecord r{};
  r.u = phase * ratio;
  r.u_y = phase * (beta * bump * (rot - 1.0) + i * prm.kappa * ratio);
  r.u_s = phase * (omega * bump * (rot - 1.0) + i * prm.gamma * ratio);
  const double kg = prm.kappa * prm.gamma;
  r.rho = 0.5 * (1.0 - kg) - beta * omega * bump;
  r.x = -kg * y + 0.25 * s - omega * sigma + 0.5 * (1.0 + kg) * y;
  return r;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

class CdSolitonSolution final : public ExactSolution {
 public:
  CdSolitonSolution(const SystemDescriptor& sys, SolitonParams params) : sys_(sys), params_(std::move(params)) {
    switch (sys_.family) {
      case Family::cd:
      case Family::coupled_cd:
        require(!params_.conjugate_pairing, "conjugate pairing needs a complex system");
        break;
      case Family::complex_cd:
      case Family::coupled_complex_cd:
        break;
      default:
        throw ConfigError("determinant solitons are defined for cd, coupled_cd, complex_cd, coupled_complex_cd");
    }
  }

  ExactPoint evaluate(double y, double s) const override {
    const SolitonRecord r = cd_soliton(params_, y, s);
    ExactPoint pt;
    pt.rho = r.rho;
    pt.x = r.x;
    auto push = [&](double a, double b, double c) {
      pt.w.push_back(a);
      pt.w_y.push_back(b);
      pt.w_s.push_back(c);
    };
    if (sys_.scalar_kind == ScalarKind::real) {
      const double scale = 1.0 + std::abs(r.u);
      if (std::abs(r.u.imag()) > 1e-10 * scale || std::abs(r.u_y.imag()) > 1e-8 * (1.0 + std::abs(r.u_y))) {
        throw NumericalError("real-law soliton produced a complex value; check parameter pairing");
      }
      for (int c = 0; c < sys_.n_wave_components; ++c) push(r.u.real(), r.u_y.real(), r.u_s.real());
    } else {
      const double k = sys_.n_wave_components == 2 ? std::numbers::sqrt2 / 2.0 : 1.0;
      for (int c = 0; c < sys_.n_wave_components; ++c) {
        push(k * r.u.real(), k * r.u_y.real(), k * r.u_s.real());
        push(k * r.u.imag(), k * r.u_y.imag(), k * r.u_s.imag());
      }
    }
    return pt;
  }
  std::size_t n_components() const override { return sys_.n_real; }
  std::string name() const override { return "cd_soliton"; }

 private:
  SystemDescriptor sys_;
  SolitonParams params_;
};

class CnWaveSolution final : public ExactSolution {
 public:
  CnWaveSolution(const SystemDescriptor& sys, EllipticParams params) : params_(params) {
    require(sys.family == Family::cd || sys.family == Family::sp_direct, "cn wave is defined for cd and sp_direct");
    require(params.kappa >= 0.0 && params.kappa < 1.0, "cn wave modulus must lie in [0, 1)");
  }
  ExactPoint evaluate(double y, double s) const override {
    const auto r = sp_periodic_wave(params_, y, s);
    ExactPoint pt;
    pt.w = {r.u};
    pt.w_y = {r.u_y};
    pt.w_s = {r.u_s};
    pt.rho = r.rho;
    pt.x = r.x;
    return pt;
  }
  std::size_t n_components() const override { return 1; }
  std::string name() const override { return "cn_wave"; }

 private:
  EllipticParams params_;
};

class CusponSolution final : public ExactSolution {
 public:
  CusponSolution(const SystemDescriptor& sys, CusponParams params) : family_(sys.family), params_(params) {
    require(family_ == Family::coupled_mcd || family_ == Family::mcd, "cuspon is defined for mcd and coupled_mcd");
    if (family_ == Family::mcd) {
      const double ab = std::sqrt(params_.a1 * params_.b1);
      params_.a1 = params_.b1 = ab;
    }
  }
  ExactPoint evaluate(double y, double s) const override {
    const auto r = mcsp_cuspon(params_, y, s);
    ExactPoint pt;
    pt.rho = r.rho;
    pt.x = r.x;
    if (family_ == Family::mcd) {
      pt.w = {r.u};
      pt.w_y = {r.u_y};
      pt.w_s = {r.u_s};
    } else {
      pt.w = {r.u, r.v};
      pt.w_y = {r.u_y, r.v_y};
      pt.w_s = {r.u_s, r.v_s};
    }
    return pt;
  }
  std::size_t n_components() const override { return family_ == Family::mcd ? 1 : 2; }
  std::string name() const override { return "cuspon"; }

 private:
  Family family_;
  CusponParams params_;
};

class DefocusingSolution final : public ExactSolution {
 public:
  DefocusingSolution(const SystemDescriptor& sys, DefocusParams params) : params_(params) {
    require(sys.family == Family::defocusing_complex_mcd, "defocusing solution needs defocusing_complex_mcd");
    (void)defocusing_mcd(params_, 0.0, 0.0);
  }
  ExactPoint evaluate(double y, double s) const override {
    const auto r = defocusing_mcd(params_, y, s);
    ExactPoint pt;
    pt.w = {r.u.real(), r.u.imag()};
    pt.w_y = {r.u_y.real(), r.u_y.imag()};
    pt.w_s = {r.u_s.real(), r.u_s.imag()};
    pt.rho = r.rho;
    pt.x = r.x;
    return pt;
  }
  std::size_t n_components() const override { return 2; }
  std::string name() const override { return "defocusing"; }

 private:
  DefocusParams params_;
};

class KinkSolution final : public ExactSolution {
 public:
  KinkSolution(const SystemDescriptor& sys, std::vector<KinkParams> params)
      : modified_(sys.family == Family::msp_sine_gordon), params_(std::move(params)) {
    require(sys.is_sg_family(), "kinks are defined for sine-Gordon systems");
    require(!params_.empty(), "kink needs parameters");
    const auto want = static_cast<std::size_t>(sys.n_wave_components);
    if (params_.size() == 1 && want == 2) params_.push_back(params_[0]);
    require(params_.size() == want, "kink parameter count must match the component count");
  }
  ExactPoint evaluate(double y, double s) const override {
    ExactPoint pt;
    pt.rho = 0.0;
    pt.x = 0.0;
    const double n = static_cast<double>(params_.size());
    for (const auto& prm : params_) {
      const auto r = modified_ ? msp_one_soliton(prm, y, s) : sg_one_soliton(prm, y, s);
      pt.w.push_back(r.z);
      pt.w_y.push_back(r.z_y);
      pt.w_s.push_back(r.z_s);
      pt.rho += std::cos(r.z) / n;
      pt.x += r.x;
    }
    pt.x /= n;
    return pt;
  }
  std::size_t n_components() const override { return params_.size(); }
  std::string name() const override { return "sg_kink"; }

 private:
  bool modified_;
  std::vector<KinkParams> params_;
};

}  // namespace

std::unique_ptr<ExactSolution> make_cd_soliton(const SystemDescriptor& sys, SolitonParams params) {
  return std::make_unique<CdSolitonSolution>(sys, std::move(params));
}
std::unique_ptr<ExactSolution> make_cn_wave(const SystemDescriptor& sys, EllipticParams params) {
  return std::make_unique<CnWaveSolution>(sys, params);
}
std::unique_ptr<ExactSolution> make_cuspon(const SystemDescriptor& sys, CusponParams params) {
  return std::make_unique<CusponSolution>(sys, params);
}
std::unique_ptr<ExactSolution> make_defocusing(const SystemDescriptor& sys, DefocusParams params) {
  return std::make_unique<DefocusingSolution>(sys, params);
}
std::unique_ptr<ExactSolution> make_sg_kink(const SystemDescriptor& sys, std::vector<KinkParams> params) {
  return std::make_unique<KinkSolution>(sys, std::move(params));
}

}  // namespace pulsedg
