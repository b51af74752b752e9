#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "gaussmap/catalog.hpp"
#include "gaussmap/errors.hpp"
#include "test_util.hpp"

using namespace gaussmap;
using namespace gaussmap::catalog;

namespace {

std::string error_of(const FixtureRequest& r) {
  try {
    get(r);
  } catch (const FixtureError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("registry lists every fixture once") {
  std::set<std::string> names;
  for (const auto& d : registry()) {
    CHECK(names.insert(d.name).second);
    CHECK_FALSE(d.description.empty());
    for (const auto& p : d.params) {
      CHECK(p.lo <= p.default_value);
      CHECK(p.default_value <= p.hi);
    }
  }
  for (const char* n : {"totally_geodesic", "clifford", "generalized_clifford", "geodesic_sphere", "small_circle",
                        "veronese", "rotational_torus", "perturbed_torus", "rigid_rotation", "hopf_tilt"})
    CHECK(names.count(n) == 1);
}

TEST_CASE("every fixture builds and passes its self-test with defaults") {
  for (const auto& d : registry()) {
    CAPTURE(d.name);
    const Fixture fx = get(d.name);
    CHECK(fx.descriptor.name == d.name);
    CHECK(fx.params.size() == d.params.size());
    CHECK(fx.family.has_value() == (d.kind == Kind::Deformation));
    for (const auto& e : fx.expectations) CHECK((e.basis == "closed-form" || e.basis == "regression"));
    const auto pts = sample_box(fx.chart.domain(), 8, 5);
    for (const auto& r : self_test(fx, pts)) {
      CAPTURE(r.quantity);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("parameter sweeps pass their self-tests") {
  const std::vector<std::pair<std::string, std::map<std::string, double>>> cases = {
      {"totally_geodesic", {{"m", 1}, {"n", 2}}},
      {"totally_geodesic", {{"m", 3}, {"n", 6}}},
      {"clifford", {{"n", 5}}},
      {"generalized_clifford", {{"p", 2}, {"q", 2}}},
      {"generalized_clifford", {{"p", 1}, {"q", 3}, {"minimal", 0}, {"r", 0.4}}},
      {"geodesic_sphere", {{"n", 2}, {"rho", 0.3}}},
      {"geodesic_sphere", {{"n", 5}, {"rho", 2.5}}},
      {"small_circle", {{"n", 2}, {"alpha", 1.2}}},
      {"small_circle", {{"n", 6}, {"alpha", 0.2}}},
      {"rotational_torus", {{"a", 0.0}, {"b", 0.7}}},
      {"perturbed_torus", {{"eps", 0.0}}},
  };
  for (const auto& [name, params] : cases) {
    CAPTURE(name);
    const Fixture fx = get(name, params);
    for (const auto& r : self_test(fx, sample_box(fx.chart.domain(), 6, 9))) {
      CAPTURE(r.quantity);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("conformality flags") {
  CHECK(get("clifford").flag("conformal"));
  CHECK(get("generalized_clifford", {{"p", 2}, {"q", 2}}).flag("conformal"));
  CHECK_FALSE(get("generalized_clifford", {{"p", 1}, {"q", 2}}).flag("conformal"));
  CHECK(get("generalized_clifford", {{"minimal", 0}, {"r", std::sqrt(0.5)}}).flag("conformal"));
  CHECK_FALSE(get("perturbed_torus").flag("conformal"));
  CHECK(get("perturbed_torus").expectation("conformal_residual_above")->basis == "regression");
  CHECK(get("veronese").flag("parallel_second_fundamental"));
}

TEST_CASE("dimensions") {
  CHECK(get("veronese").chart.m() == 2);
  CHECK(get("veronese").chart.n() == 4);
  CHECK(get("small_circle", {{"n", 5}}).chart.dim() == 4);
  CHECK(get("generalized_clifford", {{"p", 2}, {"q", 3}}).chart.n() == 6);
  CHECK(get("totally_geodesic", {{"m", 3}, {"n", 7}}).chart.fiber_dim() == 3);
}

TEST_CASE("bad requests are refused with a helpful message") {
  const std::string unknown = error_of({"klein_bottle", {}, nullptr});
  CHECK(unknown.find("klein_bottle") != std::string::npos);
  CHECK(unknown.find("clifford") != std::string::npos);
  CHECK(error_of({"clifford", {{"n", 2}}, nullptr}).find("[3, 8]") != std::string::npos);
  CHECK(error_of({"clifford", {{"n", 3.5}}, nullptr}).find("integer") != std::string::npos);
  CHECK(error_of({"clifford", {{"radius", 1}}, nullptr}).find("radius") != std::string::npos);
  CHECK_FALSE(error_of({"totally_geodesic", {{"m", 4}, {"n", 4}}, nullptr}).empty());
  CHECK_FALSE(error_of({"geodesic_sphere", {{"rho", std::nan("")}}, nullptr}).empty());
  auto base = std::make_shared<FixtureRequest>(FixtureRequest{"veronese", {}, nullptr});
  CHECK_FALSE(error_of({"clifford", {}, base}).empty());
  auto fam = std::make_shared<FixtureRequest>(FixtureRequest{"hopf_tilt", {}, nullptr});
  CHECK_FALSE(error_of({"rigid_rotation", {}, fam}).empty());
}

TEST_CASE("labels name the parameters") {
  CHECK(get("veronese").label == "veronese()");
  CHECK(get("clifford", {{"n", 4}}).label == "clifford(n=4)");
  CHECK(get("geodesic_sphere", {{"rho", 0.25}}).label == "geodesic_sphere(n=3, rho=0.25)");
  auto base = std::make_shared<FixtureRequest>(FixtureRequest{"clifford", {}, nullptr});
  const Fixture rr = get({"rigid_rotation", {}, base});
  CHECK(rr.label.find("base=clifford(n=3)") != std::string::npos);
  CHECK(rr.chart.m() == 2);
}

TEST_CASE("rigid rotation moves the base by an isometry") {
  auto base = std::make_shared<FixtureRequest>(FixtureRequest{"veronese", {}, nullptr});
  const Fixture rr = get({"rigid_rotation", {{"t", 0.0}}, base});
  const Fixture v = get("veronese");
  for (const Vec& x : sample_box(v.chart.domain(), 4, 1)) {
    CHECK((rr.chart.mu(x).p() - v.chart.mu(x).p()).norm() < 1e-14);
    const auto moved = rr.family->at(0.6);
    const Vec u = moved.u_part(x);
    CHECK(std::abs(moved.base().value(u).norm() - 1.0) < 1e-13);
    CHECK(testutil::max_abs(moved.base().jacobian(u).transpose() * moved.base().jacobian(u) -
                            v.chart.base().jacobian(u).transpose() * v.chart.base().jacobian(u)) < 1e-12);
  }
}

TEST_CASE("loops run along periodic coordinates") {
  const Fixture c = get("clifford");
  REQUIRE(c.loops.size() == 2);
  CHECK(c.loops[0].name == "u1");
  CHECK(c.loops[1].name == "u2");
  const Fixture v = get("veronese");
  REQUIRE(v.loops.size() == 2);
  CHECK(v.loops[0].name == "u2");
  CHECK(v.loops[1].name == "s1");
  for (const auto& l : v.loops) CHECK(v.chart.contains(l.start));
}

TEST_CASE("Hopf map") {
  testutil::Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.vec(4).normalized();
    const Vec h = hopf_map(x);
    CHECK(std::abs(h.norm() - 1.0) < 1e-14);
    // constant along fibres e^{i phi} (z1, z2)
    const double phi = rng.next() * 3.0;
    Vec y(4);
    y << std::cos(phi) * x(0) - std::sin(phi) * x(1), std::sin(phi) * x(0) + std::cos(phi) * x(1),
        std::cos(phi) * x(2) - std::sin(phi) * x(3), std::sin(phi) * x(2) + std::cos(phi) * x(3);
    CHECK((hopf_map(y) - h).norm() < 1e-14);
  }
  CHECK_THROWS_AS(hopf_map(Vec::Zero(3)), DimensionError);
}

TEST_CASE("Hopf tilt tori are Hopf preimages of circles") {
  const Fixture fx = get("hopf_tilt");
  for (double t : {0.3, 0.9}) {
    const auto chart = fx.family->at(t);
    std::vector<Eigen::Vector3d> images;
    for (const Vec& x : sample_box(chart.domain(), 10, 4)) {
      const Vec h = hopf_map(chart.base().value(chart.u_part(x)));
      images.emplace_back(h(0), h(1), h(2));
    }
    // every image point lies on one circle of S^2: coplanar with the first three
    const Eigen::Vector3d n = (images[1] - images[0]).cross(images[2] - images[0]).normalized();
    for (const auto& p : images) CHECK(std::abs(n.dot(p - images[0])) < 1e-12);
    CHECK(std::abs(std::abs(n.dot(images[0])) - std::cos(t)) < 1e-12);
  }
}
