#include "pulsedg/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "pulsedg/error.hpp"

namespace pulsedg::elliptic {
namespace {

constexpr double kTol = 1e-16;

void check_modulus(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw ConfigError("elliptic modulus must lie in [0, 1)");
}

}  // namespace

double K(double k) {
  check_modulus(k);
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int i = 0; i < 64 && std::abs(a - b) > kTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

double E(double k) {
  check_modulus(k);
  double a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int i = 0; i < 64 && std::abs(c) > kTol; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

Jacobi jacobi(double u, double k) {
  check_modulus(k);
  if (k == 0.0) return {u, std::sin(u), std::cos(u), 1.0};
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - k * k);
  c[0] = k;
  int n = 0;
  while (std::abs(c[n]) > kTol && n < 31) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int i = n; i > 0; --i) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  }
  const double s = std::sin(phi);
  const double co = std::cos(phi);
  const double d = n > 0 ? co / std::cos(phi_prev - phi) : 1.0;
  return {phi, s, co, d};
}

double cn(double u, double k) { return jacobi(u, k).cn; }

double carlson_RF(double x, double y, double z) {
  for (int i = 0; i < 100; ++i) {
    const double mu = (x + y + z) / 3.0;
    const double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(mu);
    }
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
  }
  throw NumericalError("carlson_RF did not converge");
}

double carlson_RD(double x, double y, double z) {
  double sum = 0.0, fac = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mu = (x + y + 3.0 * z) / 5.0;
    const double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
      const double ea = dx * dy, eb = dz * dz;
      const double ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
      const double s2 = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee);
      const double s3 = dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + dz * 3.0 / 26.0 * ea));
      return 3.0 * sum + fac * (1.0 + s2 + s3) / (mu * std::sqrt(mu));
    }
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (z + lam));
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
  }
  throw NumericalError("carlson_RD did not converge");
}

double E_incomplete_phi(double phi, double k) {
  check_modulus(k);
  // Reduce to |phi| <= pi/2 using E(phi + n pi) = E(phi) + 2 n E(k).
  const double n = std::round(phi / std::numbers::pi);
  const double r = phi - n * std::numbers::pi;
  const double s = std::sin(r), c = std::cos(r);
  const double k2s2 = k * k * s * s;
  const double part = s * carlson_RF(c * c, 1.0 - k2s2, 1.0) - k2s2 * s / 3.0 * carlson_RD(c * c, 1.0 - k2s2, 1.0);
  return part + 2.0 * n * E(k);
}

double E_incomplete(double u, double k) { return E_incomplete_phi(jacobi(u, k).am, k); }

}  // namespace pulsedg::elliptic
