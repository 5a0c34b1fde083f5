#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "pulsedg/elliptic.hpp"

using namespace pulsedg;

TEST_CASE("complete integrals") {
  CHECK(elliptic::K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic::E(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  const double k = std::sqrt(0.5);
  CHECK(elliptic::K(k) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  CHECK(elliptic::E(k) == doctest::Approx(1.3506438810476755).epsilon(1e-14));
}

TEST_CASE("carlson forms at reference arguments") {
  CHECK(elliptic::carlson_RF(1.0, 2.0, 0.0) == doctest::Approx(1.3110287771461).epsilon(1e-12));
  CHECK(elliptic::carlson_RD(0.0, 2.0, 1.0) == doctest::Approx(1.7972103521034).epsilon(1e-12));
}

TEST_CASE("jacobi functions satisfy their identities and degenerate to trig at k = 0") {
  for (double u : {-3.1, -0.4, 0.0, 0.9, 2.2, 7.5}) {
    const auto j0 = elliptic::jacobi(u, 0.0);
    CHECK(j0.sn == doctest::Approx(std::sin(u)).epsilon(1e-14));
    CHECK(j0.cn == doctest::Approx(std::cos(u)).epsilon(1e-14));
    for (double k : {0.3, 0.65, 0.9}) {
      const auto j = elliptic::jacobi(u, k);
      CHECK(j.sn * j.sn + j.cn * j.cn == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(j.dn * j.dn + k * k * j.sn * j.sn == doctest::Approx(1.0).epsilon(1e-14));
      // d am / du = dn
      const double h = 1e-5;
      const double d = (elliptic::jacobi(u + h, k).am - elliptic::jacobi(u - h, k).am) / (2 * h);
      CHECK(d == doctest::Approx(j.dn).epsilon(1e-8));
    }
  }
  const double k = 0.65;
  CHECK(std::abs(elliptic::cn(elliptic::K(k), k)) < 1e-14);
}

TEST_CASE("incomplete integral of the second kind against quadrature") {
  const auto& q = oracle::rule();
  for (double k : {0.2, 0.65}) {
    for (double phi : {0.3, 1.2, 2.9, -1.7}) {
      double ref = 0.0;
      for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double t = 0.5 * phi * (q.x[i] + 1.0);
        ref += 0.5 * phi * q.w[i] * std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t));
      }
      CHECK(elliptic::E_incomplete_phi(phi, k) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(elliptic::E_incomplete(elliptic::K(k), k) == doctest::Approx(elliptic::E(k)).epsilon(1e-13));
  }
}
