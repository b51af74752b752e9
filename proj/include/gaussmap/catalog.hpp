#pragma once

// Named fixtures with closed-form expectations.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gaussmap/variations.hpp"

namespace gaussmap::catalog {

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool integer = false;
  std::string doc;
};

/// Expected value of a named quantity. `basis` is "closed-form" for values
/// derived analytically and "regression" for recorded observations.
struct Expectation {
  std::string quantity;
  std::vector<double> values;
  double tolerance = 0.0;
  std::string basis;
};

/// Loop once around the periodic chart coordinate `coordinate` from `start`.
struct LoopSpec {
  std::string name;
  int coordinate = 0;
  Vec start;
};

enum class Kind { Immersion, Deformation };

struct FixtureDescriptor {
  std::string name;
  Kind kind = Kind::Immersion;
  std::string description;
  std::vector<ParamSpec> params;
  bool takes_base = false;
};

struct FixtureRequest {
  std::string name;
  std::map<std::string, double> params;
  std::shared_ptr<FixtureRequest> base;  // rigid_rotation only
};

struct Fixture {
  FixtureDescriptor descriptor;
  std::map<std::string, double> params;  // resolved, defaults filled in
  std::string label;                     // name with parameters
  UnitNormalChart chart;                 // at t0 for deformations
  std::optional<DeformationFamily> family;
  double t0 = 0.0;
  std::vector<Expectation> expectations;
  std::vector<LoopSpec> loops;

  const Expectation* expectation(const std::string& quantity) const;
  bool flag(const std::string& quantity) const;  // expectation value 1
};

const std::vector<FixtureDescriptor>& registry();
/// Throws FixtureError listing valid names or parameter ranges.
Fixture get(const FixtureRequest& request);
Fixture get(const std::string& name, const std::map<std::string, double>& params = {});

/// Loops along every periodic chart coordinate, started at the box center.
std::vector<LoopSpec> periodic_loops(const UnitNormalChart& chart);

struct SelfTestResult {
  std::string quantity;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Checks the closed-form expectations against immersion-geometry at the
/// given chart points.
std::vector<SelfTestResult> self_test(const Fixture& fixture, const std::vector<Vec>& points);

/// Hopf map S^3 -> S^2, (z1, z2) -> (2 z1 conj(z2), |z1|^2 - |z2|^2).
Vec hopf_map(const Vec& x);

}  // namespace gaussmap::catalog
