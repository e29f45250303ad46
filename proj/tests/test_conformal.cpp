#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "signorini/conformal.hpp"
#include "signorini/error.hpp"

using namespace signorini;

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 polar(double r, double t) { return {r * std::cos(t), r * std::sin(t)}; }

// Harmonic field r^(pi/alpha) cos(pi theta/alpha) about the origin, first leg
// along theta = 0; the branch cut bisects the exterior of the sector.
AnalyticField straightened_linear(double alpha) {
  return AnalyticField::corner({{0, 0}, kPi / alpha, 1.0, 0.0, 0.5 * alpha + kPi});
}

}  // namespace

TEST_CASE("map_point") {
  SUBCASE("alpha = pi is the identity") {
    const auto m = make_corner_map({0, 0}, kPi, 0.0);
    const Vec2 z{0.3, 0.7};
    CHECK(distance(m.map_point(z), z) <= 1e-15);
  }
  SUBCASE("quarter plane doubles the angle") {
    const auto m = make_corner_map({0, 0}, 0.5 * kPi, 0.0);
    const Vec2 w = m.map_point({0, 1});
    CHECK(w.x == doctest::Approx(-1.0));
    CHECK(std::abs(w.y) <= 1e-15);
  }
  SUBCASE("reentrant opening") {
    const auto m = make_corner_map({0, 0}, 1.5 * kPi, 0.0);
    const Vec2 w = m.map_point(polar(8.0, 0.75 * kPi));
    CHECK(norm(w) == doctest::Approx(4.0));
    CHECK(std::atan2(w.y, w.x) == doctest::Approx(0.5 * kPi));
  }
  SUBCASE("points outside the sector and the center are rejected") {
    const auto m = make_corner_map({0, 0}, 0.5 * kPi, 0.0);
    for (Vec2 z : {Vec2{-1, 0.5}, Vec2{0.5, -0.1}, Vec2{0, 0}}) {
      try {
        m.map_point(z);
        FAIL("expected OutOfSector");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfSector);
      }
    }
    CHECK_THROWS_AS(make_corner_map({0, 0}, 2.0 * kPi, 0.0), Error);
  }
  SUBCASE("rotation and translation put the first leg at theta = 0") {
    const auto m = make_corner_map({1, 2}, 0.5 * kPi, 0.5 * kPi);
    const Vec2 w = m.map_point({1, 3});  // on the first leg
    CHECK(w.x == doctest::Approx(1.0));
    CHECK(std::abs(w.y) <= 1e-15);
    const Vec2 v = m.map_point({0, 2});  // on the second leg
    CHECK(v.x == doctest::Approx(-1.0));
  }
}

TEST_CASE("round trip on random sector points") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = 0.1 + u(rng) * (2.0 * kPi - 0.2);
    const Vec2 c{u(rng) - 0.5, u(rng) - 0.5};
    const auto m = make_corner_map(c, alpha, 2.0 * kPi * u(rng));
    const double r = 0.05 + 2.0 * u(rng);
    const Vec2 z = c + polar(r, m.rotation + alpha * u(rng));
    const Vec2 back = m.inverse(m.map_point(z));
    CHECK(distance(back, z) <= 1e-12 * std::max(1.0, r));
  }
}

TEST_CASE("the map is conformal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = 0.3 + u(rng) * 5.5;
    const auto m = make_corner_map({0, 0}, alpha, 0.0);
    const Vec2 z = polar(0.2 + u(rng), alpha * (0.05 + 0.9 * u(rng)));
    // fourth-order finite-difference Jacobian, independent of the analytic derivative
    const double h = 1e-3;
    auto diff = [&](Vec2 e) {
      return (1.0 / (12 * h)) * (8.0 * (m.map_point(z + h * e) - m.map_point(z - h * e)) -
                                 (m.map_point(z + 2 * h * e) - m.map_point(z - 2 * h * e)));
    };
    const Vec2 jx = diff({1, 0});
    const Vec2 jy = diff({0, 1});
    const auto d = m.derivative(z);
    CHECK(std::abs(jx.x - d.real()) <= 1e-7 * std::abs(d));
    CHECK(std::abs(jx.y - d.imag()) <= 1e-7 * std::abs(d));
    const double a = 2 * kPi * u(rng), b = 2 * kPi * u(rng);
    auto push = [&](double t) { return std::cos(t) * jx + std::sin(t) * jy; };
    const Vec2 pa = push(a), pb = push(b);
    const double before = std::remainder(b - a, 2 * kPi);
    const double after = std::atan2(cross(pa, pb), dot(pa, pb));
    CHECK(std::abs(after - before) <= 1e-8);
  }
}

TEST_CASE("energy identity") {
  SUBCASE("Re(z^2) on several openings") {
    const auto f = AnalyticField::polynomial({{1, 2, 0}, {-1, 0, 2}});
    for (double alpha : {0.5 * kPi, kPi, 1.5 * kPi}) {
      const auto e = energy_identity_check(f, make_corner_map({0, 0}, alpha, 0.0), 256);
      CHECK(e.relative_difference <= 1e-6);
      CHECK(e.sector == doctest::Approx(alpha).epsilon(1e-10));  // int 4 r^2 r dr dtheta
    }
  }
  SUBCASE("constant field has zero energy") {
    const auto e =
        energy_identity_check(AnalyticField::constant(3.0), make_corner_map({0, 0}, 1.0, 0.0), 16);
    CHECK(e.sector == 0.0);
    CHECK(e.mapped == 0.0);
    CHECK(e.relative_difference == 0.0);
  }
  SUBCASE("fields that straighten to a linear function") {
    for (double alpha : {0.5 * kPi, 1.5 * kPi, 1.9 * kPi}) {
      CAPTURE(alpha);
      const auto f = straightened_linear(alpha);
      const auto m = make_corner_map({0, 0}, alpha, 0.0);
      double previous = 1.0;
      for (int n : {8, 16, 32, 64}) {
        const auto e = energy_identity_check(f, m, n);
        // the mapped field is Re(zhat): unit gradient on the unit half disk
        CHECK(e.mapped == doctest::Approx(0.5 * kPi).epsilon(1e-12));
        const double err = std::abs(e.sector - 0.5 * kPi);
        CHECK(err <= previous + 1e-13);
        previous = err;
      }
      CHECK(previous <= 1e-3);
    }
  }
}

TEST_CASE("imag_w_squared") {
  CHECK(imag_w_squared(BoundaryGradientSample::from_derivatives(0, 0.0, 3.0)) == 0.0);
  CHECK(imag_w_squared(BoundaryGradientSample::from_derivatives(0, -2.0, 0.0)) == 0.0);
  CHECK(imag_w_squared(BoundaryGradientSample::from_derivatives(0, 1.0, 1.0)) == 2.0);
  // y = x y on the x axis: t = 0, n = x
  const auto f = AnalyticField::polynomial({{1, 1, 1}});
  const auto s = sample_boundary_gradient(f, {0.5, 0}, {1, 0}, 0.5);
  CHECK(s.t == 0.0);
  CHECK(s.n == doctest::Approx(0.5));
  const auto g = AnalyticField::polynomial({{1, 1, 0}, {2, 0, 1}});
  const auto q = sample_boundary_gradient(g, {0.2, 0}, {2, 0}, 0.2);
  CHECK(imag_w_squared(q) == doctest::Approx(2.0 * q.t * q.n));
  CHECK(q.t == doctest::Approx(1.0));
  CHECK(q.n == doctest::Approx(2.0));
}

TEST_CASE("harmonic fields stay harmonic after the map") {
  const double alpha = 1.5 * kPi;
  const auto m = make_corner_map({0, 0}, alpha, 0.0);
  const auto f = AnalyticField::corner({{0, 0}, 1.0 / 3, 1.0, 0.0, 1.75 * kPi});
  for (Vec2 probe : {Vec2{0.3, 0.4}, Vec2{-0.5, 0.2}, Vec2{0.1, 0.7}}) {
    double previous = std::abs(mapped_laplacian(f, m, probe, 0.04));
    for (double step : {0.02, 0.01, 0.005}) {
      const double lap = std::abs(mapped_laplacian(f, m, probe, step));
      CHECK(lap < previous);
      previous = lap;
    }
    CHECK(previous <= 1e-3);
  }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const auto g = gauss_legendre(5);
  double sum = 0.0, x8 = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += g.weights[i];
    x8 += g.weights[i] * std::pow(g.nodes[i], 8);
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x8 == doctest::Approx(2.0 / 9).epsilon(1e-13));
  CHECK(gauss_legendre(1).nodes[0] == doctest::Approx(0.0));
}
