#include <doctest.h>

#include <cmath>
#include <vector>

#include "gaussmap/catalog.hpp"
#include "gaussmap/errors.hpp"
#include "gaussmap/variations.hpp"
#include "test_util.hpp"

using namespace gaussmap;

namespace {

const double kPi = std::acos(-1.0);

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

// d(x^2 y + sin y)
FormFn exact_form() {
  return [](const Vec& x) { return v2(2 * x(0) * x(1), x(0) * x(0) + std::cos(x(1))); };
}

FormFn rotation_form() {
  return [](const Vec& x) { return v2(-x(1), x(0)); };
}

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int order = 1; order <= 10; ++order) {
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    REQUIRE(nodes.size() == static_cast<std::size_t>(order));
    double sum = 0.0;
    for (double w : weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // exact through degree 2 order - 1
    for (int deg = 0; deg < 2 * order; ++deg) {
      double q = 0.0;
      for (int i = 0; i < order; ++i) q += weights[static_cast<std::size_t>(i)] * std::pow(nodes[static_cast<std::size_t>(i)], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(q - exact) < 1e-13);
    }
  }
  std::vector<double> n, w;
  CHECK_THROWS_AS(gauss_legendre(0, n, w), DimensionError);
}

TEST_CASE("line integrals") {
  const Vec a = v2(0.2, -0.4), b = v2(1.1, 0.9);
  const auto pot = [](const Vec& x) { return x(0) * x(0) * x(1) + std::sin(x(1)); };
  CHECK(path_integral(exact_form(), segment_path(a, b)) == doctest::Approx(pot(b) - pot(a)).epsilon(1e-13));
  const auto poly = polyline_path({a, v2(3.0, -2.0), v2(-1.0, 0.5), b});
  CHECK(path_integral(exact_form(), poly) == doctest::Approx(pot(b) - pot(a)).epsilon(1e-12));
  // unit square, counterclockwise: twice the area
  const auto square = polyline_path({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1), v2(0, 0)});
  CHECK(path_integral(rotation_form(), square) == doctest::Approx(2.0).epsilon(1e-13));
  const auto hp = hamiltonian_potential(exact_form(), segment_path(a, b), poly);
  CHECK(hp.discrepancy < 1e-12);
  CHECK_THROWS_AS(hamiltonian_potential(exact_form(), segment_path(a, b), segment_path(a, a)), DomainError);
  CHECK_THROWS_AS(polyline_path({a}), DimensionError);
  CHECK_THROWS_AS(path_integral(exact_form(), segment_path(a, b), 8, 0), DimensionError);
}

TEST_CASE("exterior derivative residual") {
  const Vec x = v2(0.3, 0.8);
  CHECK(exterior_derivative_residual(exact_form(), x, 1e-4) < 1e-7);
  CHECK(exterior_derivative_residual(rotation_form(), x, 1e-4) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("coordinate loops") {
  const std::vector<Interval> dom = {{0.0, 1.0, false}, {0.0, 2 * kPi, true}};
  const Vec s = v2(0.5, 1.0);
  const ChartPath loop = coordinate_loop(dom, s, 1);
  CHECK((loop.point(0.0) - s).norm() < 1e-15);
  CHECK(loop.point(1.0)(1) == doctest::Approx(1.0 + 2 * kPi));
  CHECK(loop.velocity(0.3)(1) == doctest::Approx(2 * kPi));
  CHECK_NOTHROW(require_closed(loop, dom));
  CHECK_THROWS_AS(coordinate_loop(dom, s, 0), DomainError);
  CHECK_THROWS_AS(coordinate_loop(dom, s, 2), DimensionError);
  CHECK_THROWS_AS(require_closed(segment_path(s, v2(0.6, 1.0)), dom), DomainError);
  // d u2 has period 2 pi
  const FormFn dtheta = [](const Vec&) { return v2(0.0, 1.0); };
  CHECK(loop_integral(dtheta, loop, dom) == doctest::Approx(2 * kPi).epsilon(1e-13));
}

TEST_CASE("variation form of a rigid rotation is exact") {
  const auto fx = catalog::get("rigid_rotation");
  REQUIRE(fx.family);
  const DeformationFamily& fam = *fx.family;
  const FormFn sig = [&](const Vec& x) { return sigma_V(fam, fx.t0, x); };
  for (const Vec& x : sample_box(fx.chart.domain(), 6, 1, 0.1)) CHECK(exterior_derivative_residual(sig, x, 1e-3) < 1e-5);
  for (const auto& loop : fx.loops) {
    CAPTURE(loop.name);
    CHECK(std::abs(loop_integral(sig, coordinate_loop(fx.chart.domain(), loop.start, loop.coordinate),
                                 fx.chart.domain())) < 1e-6);
  }
  // nonzero somewhere
  double biggest = 0.0;
  for (const Vec& x : sample_box(fx.chart.domain(), 6, 2, 0.1)) biggest = std::max(biggest, sig(x).norm());
  CHECK(biggest > 1e-2);
}

TEST_CASE("variation form of the Hopf tilt is closed") {
  const auto fx = catalog::get("hopf_tilt");
  const DeformationFamily& fam = *fx.family;
  const FormFn sig = [&](const Vec& x) { return sigma_V(fam, fx.t0, x); };
  for (const Vec& x : sample_box(fx.chart.domain(), 6, 3, 0.1)) CHECK(exterior_derivative_residual(sig, x, 1e-3) < 1e-4);
  CHECK_THROWS_AS(sigma_V(fam, fam.interval.hi, sample_box(fx.chart.domain(), 1, 4).front()), DomainError);
}

TEST_CASE("transversality monitor") {
  SUBCASE("Hopf tilt: min singular value is sin(t / 2)") {
    const auto fx = catalog::get("hopf_tilt");
    const auto pts = sample_box(fx.chart.domain(), 8, 5);
    for (double t : {1e-3, 0.2, 0.7, 1.3}) {
      CHECK(transversality_monitor(*fx.family, t, pts) == doctest::Approx(std::sin(t / 2)).epsilon(1e-9));
    }
  }
  SUBCASE("rigid rotation: constant in t") {
    const auto fx = catalog::get("rigid_rotation", {{"t", 0.0}});
    const auto pts = sample_box(fx.chart.domain(), 8, 6);
    const double m0 = transversality_monitor(*fx.family, 0.0, pts);
    for (double t : {-0.5, 0.25, 0.5}) CHECK(std::abs(transversality_monitor(*fx.family, t, pts) - m0) < 1e-9);
  }
}
