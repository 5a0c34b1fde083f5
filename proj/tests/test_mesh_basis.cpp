#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "pulsedg/error.hpp"
#include "pulsedg/mesh_basis.hpp"

using namespace pulsedg;

TEST_CASE("gauss rules match the Golub-Welsch eigenvalue construction") {
  for (std::size_t n = 1; n <= 12; ++n) {
    CAPTURE(n);
    const auto q = gauss_nodes(n);
    const auto r = oracle::golub_welsch(static_cast<int>(n));
    REQUIRE(q.order() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(q.nodes[i] == doctest::Approx(r.x[i]).epsilon(1e-13));
      CHECK(q.weights[i] == doctest::Approx(r.w[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("legendre values and derivatives follow the three-term recurrence") {
  for (int m = 0; m <= 8; ++m) {
    CHECK(legendre(m, 1.0) == doctest::Approx(1.0));
    for (double x : {-0.9, -0.3, 0.0, 0.41, 0.77}) {
      const auto [p, d] = oracle::legendre(m, x);
      CHECK(legendre(m, x) == doctest::Approx(p).epsilon(1e-13));
      CHECK(legendre_derivative(m, x) == doctest::Approx(d).epsilon(1e-12));
    }
  }
}

TEST_CASE("mesh geometry") {
  const Mesh1D m = build_mesh(-1.0, 3.0, 8, Boundary::dirichlet_exact);
  CHECK(m.width() == doctest::Approx(0.5));
  CHECK(m.interface(8) == doctest::Approx(3.0));
  CHECK(m.locate(3.0) == 7);
  CHECK(m.locate(-1.0) == 0);
  CHECK(m.to_physical(2, 0.0) == doctest::Approx(m.center(2)));
  CHECK_THROWS_AS(build_mesh(1.0, 0.0, 4, Boundary::periodic), ConfigError);
  CHECK_THROWS_AS(build_mesh(0.0, 1.0, 0, Boundary::periodic), ConfigError);
}

TEST_CASE("L2 projection reproduces polynomials and matches the oracle") {
  const Mesh1D mesh = build_mesh(0.0, 2.0, 5, Boundary::periodic);
  for (int k = 0; k <= 3; ++k) {
    auto poly = [k](double y) { return std::pow(y - 0.3, k) + 0.5 * y; };
    const DGField p = project_L2(poly, mesh, std::max(k, 1));
    CHECK(norm_L2(p, poly) < 1e-13);
    CHECK(norm_Linf(p, poly) < 1e-12);
  }
  auto f = [](double y) { return std::sin(3.0 * y) + std::exp(-y); };
  const DGField a = project_L2(f, mesh, 3, 20);
  const DGField b = oracle::project_function(mesh, 3, f);
  CHECK(oracle::max_diff(a, b) < 1e-13);
}

TEST_CASE("one-sided projections match the endpoint values") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 6, Boundary::periodic);
  auto f = [](double y) { return std::cos(4.0 * y); };
  const DGField pp = project_plus(f, mesh, 2);
  const DGField pm = project_minus(f, mesh, 2);
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    CHECK(pp.left_trace(j) == doctest::Approx(f(mesh.left_edge(j))).epsilon(1e-12));
    CHECK(pm.right_trace(j) == doctest::Approx(f(mesh.left_edge(j) + mesh.width())).epsilon(1e-12));
    // lower moments agree with the L2 projection
    const DGField p = project_L2(f, mesh, 2);
    CHECK(pp.coeff(j, 0) == doctest::Approx(p.coeff(j, 0)).epsilon(1e-12));
    CHECK(pp.coeff(j, 1) == doctest::Approx(p.coeff(j, 1)).epsilon(1e-12));
  }
}

TEST_CASE("traces wrap on periodic meshes and take exterior values otherwise") {
  const Mesh1D per = build_mesh(0.0, 1.0, 4, Boundary::periodic);
  DGField f(per, 1);
  for (std::size_t j = 0; j < 4; ++j) {
    f.coeff(j, 0) = static_cast<double>(j);
    f.coeff(j, 1) = 0.5;
  }
  const Traces t0 = traces(f, 0);
  CHECK(t0.minus == doctest::Approx(3.5));
  CHECK(t0.plus == doctest::Approx(-0.5));
  CHECK(traces(f, 4).plus == doctest::Approx(-0.5));
  CHECK(jump(f, 2) == doctest::Approx(2.0 - 0.5 - 1.5));

  const Mesh1D dir = build_mesh(0.0, 1.0, 4, Boundary::dirichlet_exact);
  DGField g(dir, 0);
  CHECK(traces(g, 0, 7.0).minus == doctest::Approx(7.0));
  CHECK(traces(g, 4, 9.0).plus == doctest::Approx(9.0));
}

TEST_CASE("modal and nodal round trip") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 7, Boundary::periodic);
  std::mt19937_64 rng(11);
  const DGField f = oracle::random_field(mesh, 3, rng);
  const CellBasis b = make_basis(3);
  const DGField g = project_nodal(to_nodal(f, b), mesh, b);
  CHECK(oracle::max_diff(f, g) < 1e-14);
  const auto ys = nodal_positions(mesh, b);
  const auto vals = to_nodal(f, b);
  for (std::size_t i = 0; i < ys.size(); i += 5) CHECK(f.eval(ys[i]) == doctest::Approx(vals[i]).epsilon(1e-13));
}

TEST_CASE("vector norms are Euclidean over components") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 4, Boundary::periodic);
  DGField a(mesh, 0), b(mesh, 0);
  for (std::size_t j = 0; j < 4; ++j) {
    a.coeff(j, 0) = 3.0;
    b.coeff(j, 0) = 4.0;
  }
  std::vector<DGField> fs{a, b};
  auto zero = [](double, std::span<double> out) { out[0] = out[1] = 0.0; };
  CHECK(norm_L2(fs, zero) == doctest::Approx(5.0));
  CHECK(norm_Linf(fs, zero) == doctest::Approx(5.0));
}
