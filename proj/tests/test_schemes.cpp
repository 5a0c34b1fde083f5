#include <doctest.h>

#include "identities.hpp"
#include "oracle_checks.hpp"
#include "pulsedg/error.hpp"

using namespace pulsedg;

TEST_CASE("scheme right-hand sides match dense assembly") {
  std::mt19937_64 rng(202);
  for (std::size_t n : {2u, 4u, 5u}) {
    for (int k = 0; k <= 3; ++k) {
      for (const auto& d : oracle_checks::scheme_checks(n, k, rng)) {
        CAPTURE(d.what);
        CHECK(d.value < 1e-12);
      }
    }
  }
}

namespace {

// families whose P is positive definite
const Family kDefinite[] = {Family::cd, Family::complex_cd, Family::coupled_complex_cd, Family::mcd};

CDScheme periodic_scheme(Family f, CDSchemeKind kind, FluxParams flux, const Mesh1D& mesh, int k, std::mt19937_64& rng) {
  const auto sys = describe(f);
  return CDScheme(sys, kind, mesh, k, flux, CDBoundary{nullptr, identities::random_means(sys.n_real, rng)});
}

}  // namespace

TEST_CASE("H0 is conserved by the conservative-flux H0 scheme for every CD family") {
  std::mt19937_64 rng(1);
  const Mesh1D mesh = build_mesh(0.0, 4.0, 10, Boundary::periodic);
  for (Family f : {Family::cd, Family::coupled_cd, Family::complex_cd, Family::coupled_complex_cd, Family::mcd,
                   Family::coupled_mcd, Family::defocusing_complex_mcd}) {
    for (int k = 0; k <= 3; ++k) {
      CAPTURE(family_name(f));
      CAPTURE(k);
      const CDScheme scheme = periodic_scheme(f, CDSchemeKind::h0, FluxParams::conserved(), mesh, k, rng);
      const auto r = identities::h0_rate(scheme, identities::random_cd_state(scheme.system(), mesh, k, rng));
      CHECK(std::abs(r.value) < 1e-10);
    }
  }
}

TEST_CASE("H0 does not grow under the dissipative fluxes") {
  std::mt19937_64 rng(2);
  const Mesh1D mesh = build_mesh(0.0, 4.0, 10, Boundary::periodic);
  for (Family f : kDefinite) {
    for (FluxParams flux : {FluxParams::dissipative(), FluxParams{0.0, 0.2, 0.0}, FluxParams{0.0, 0.0, 0.3}}) {
      for (int k = 0; k <= 3; ++k) {
        CAPTURE(family_name(f));
        CAPTURE(flux.beta);
        CAPTURE(flux.mu);
        CAPTURE(k);
        const CDScheme scheme = periodic_scheme(f, CDSchemeKind::h0, flux, mesh, k, rng);
        const auto r = identities::h0_rate(scheme, identities::random_cd_state(scheme.system(), mesh, k, rng));
        CHECK(r.value <= 1e-12);
      }
    }
  }
}

TEST_CASE("H1 is conserved by the H1 and integration schemes when m0 = 0") {
  std::mt19937_64 rng(3);
  const Mesh1D mesh = build_mesh(0.0, 4.0, 10, Boundary::periodic);
  for (Family f : {Family::cd, Family::coupled_cd, Family::complex_cd, Family::coupled_complex_cd}) {
    for (CDSchemeKind kind : {CDSchemeKind::h1, CDSchemeKind::integration}) {
      for (int k = 0; k <= 3; ++k) {
        const CDScheme scheme = periodic_scheme(f, kind, FluxParams::conserved(), mesh, k, rng);
        const auto r = identities::h1_rate(scheme, identities::random_cd_state(scheme.system(), mesh, k, rng));
        CHECK(std::abs(r.value) < 1e-10);
      }
    }
  }
}

TEST_CASE("modified CD: dH1/ds = 2 m0 int omega^T P u") {
  std::mt19937_64 rng(4);
  const Mesh1D mesh = build_mesh(0.0, 4.0, 10, Boundary::periodic);
  for (Family f : {Family::mcd, Family::coupled_mcd}) {
    const CDScheme scheme = periodic_scheme(f, CDSchemeKind::h1, FluxParams::conserved(), mesh, 2, rng);
    const auto& sys = scheme.system();
    const FieldSet state = identities::random_cd_state(sys, mesh, 2, rng);
    const auto aux = scheme.recover(0.0, state);
    const double expected = 2.0 * sys.mass_offset * identities::integrate(mesh, [&](std::size_t j, double xi) {
      return identities::form(sys, identities::values(state, 1, sys.n_real, j, xi),
                              identities::values(aux.fields, 0, sys.n_real, j, xi));
    });
    CHECK(identities::h1_rate(scheme, state).value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::abs(expected) > 1e-5);
  }
}

TEST_CASE("E0 is conserved by the short pulse scheme") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {9u, 10u}) {
    const Mesh1D mesh = build_mesh(0.0, 3.0, n, Boundary::periodic);
    for (int k = 0; k <= 3; ++k) {
      const SPScheme scheme(mesh, k);
      const auto r = identities::e0_rate(scheme, identities::random_sp_state(scheme, rng));
      CHECK(std::abs(r.value) < 1e-10);
    }
  }
}

TEST_CASE("flux parameters") {
  CHECK(FluxParams::conserved().is_conserved());
  CHECK(FluxParams::dissipative().satisfies_dissipation_conditions());
  CHECK_FALSE(FluxParams::table_preset().satisfies_dissipation_conditions());
  CHECK_FALSE(FluxParams::conserved().satisfies_dissipation_conditions());
  CHECK_THROWS_AS(FluxParams({0.0, -0.1, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(FluxParams({0.0, 0.0, 0.6}).validate(), ConfigError);
}

TEST_CASE("short pulse nonlinear flux") {
  CHECK(nonlinear_flux(0.3, 0.3) == doctest::Approx(0.3 * 0.3 * 0.3 / 6.0));
  const double a = -0.4, b = 1.1;
  CHECK(nonlinear_flux(a, b) == doctest::Approx((std::pow(b, 4) - std::pow(a, 4)) / (24.0 * (b - a))));
  CHECK_THROWS_AS(SPScheme(build_mesh(0.0, 1.0, 4, Boundary::dirichlet_exact), 1), ConfigError);
}

TEST_CASE("sine-Gordon conservative interface value") {
  CHECK(conservative_flux_z(0.4, 0.4, 0.2, 0.2) == doctest::Approx(0.4));
  // [z eta] + [cos z] = z_hat [eta]
  const double zm = 0.3, zp = 0.9, em = std::sin(0.25), ep = std::sin(0.85);
  const double zh = conservative_flux_z(zm, zp, em, ep);
  CHECK(zh * (ep - em) == doctest::Approx(zp * ep - zm * em + std::cos(zp) - std::cos(zm)));
}

TEST_CASE("scheme constructors validate their inputs") {
  const Mesh1D dir = build_mesh(0.0, 1.0, 4, Boundary::dirichlet_exact);
  CHECK_THROWS_AS(CDScheme(describe(Family::cd), CDSchemeKind::h1, dir, 1, FluxParams{}, CDBoundary{}), ConfigError);
  CHECK_THROWS_AS(CDScheme(describe(Family::sine_gordon), CDSchemeKind::h1, dir, 1, FluxParams{}, CDBoundary{}), ConfigError);
  CHECK_THROWS_AS(SGScheme(describe(Family::cd), SGSchemeKind::dg, dir, 1, nullptr), ConfigError);
}
