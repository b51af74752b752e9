#include "gaussmap/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaussmap/errors.hpp"
#include "gaussmap/lie_algebra.hpp"
#include "gaussmap/spherical.hpp"

namespace gaussmap::catalog {

namespace {

constexpr double kPolarMargin = 0.2;

using Params = std::map<std::string, double>;

std::vector<FixtureDescriptor> build_registry() {
  using K = Kind;
  return {
      {"totally_geodesic", K::Immersion, "equatorial great m-sphere in S^n",
       {{"m", 2, 1, 7, true, "sphere dimension"}, {"n", 4, 2, 8, true, "ambient sphere dimension, n > m"}}},
      {"clifford", K::Immersion, "Clifford torus in a great S^3 of S^n",
       {{"n", 3, 3, 8, true, "ambient sphere dimension"}}},
      {"generalized_clifford", K::Immersion, "S^p(r) x S^q(s) in S^{p+q+1}, r^2 + s^2 = 1",
       {{"p", 1, 1, 4, true, "first factor dimension"},
        {"q", 2, 1, 4, true, "second factor dimension"},
        {"minimal", 1, 0, 1, true, "1 selects r = sqrt(p/(p+q))"},
        {"r", 0.6, 0.05, 0.95, false, "first radius when minimal = 0"}}},
      {"geodesic_sphere", K::Immersion, "umbilic geodesic sphere of radius rho in S^n",
       {{"n", 3, 2, 8, true, "ambient sphere dimension"}, {"rho", 0.8, 0.05, 3.09, false, "geodesic radius"}}},
      {"small_circle", K::Immersion, "circle of colatitude alpha in a great S^2 of S^n",
       {{"n", 3, 2, 8, true, "ambient sphere dimension"}, {"alpha", 0.7, 0.05, M_PI / 2, false, "colatitude"}}},
      {"veronese", K::Immersion, "Veronese surface S^2 -> S^4", {}},
      {"rotational_torus", K::Immersion, "rotation torus in S^3 of a small circle in S^2",
       {{"a", 0.3, 0.0, 1.2, false, "profile center angle"}, {"b", 0.5, 0.05, 1.2, false, "profile radius"}}},
      {"perturbed_torus", K::Immersion, "normally perturbed Clifford torus in S^3",
       {{"eps", 0.2, 0.0, 0.5, false, "perturbation amplitude"}}},
      {"rigid_rotation", K::Deformation, "f_t = exp(t a) f for a base fixture",
       {{"rate", 1.0, -2.0, 2.0, false, "scale of the generator a"},
        {"t", 0.3, -0.9, 0.9, false, "evaluation time"}},
       true},
      {"hopf_tilt", K::Deformation, "Hopf tori over tilted circles, degenerating to a fibre at t = 0",
       {{"tilt", 0.5, 0.05, 1.5, false, "evaluation time"}}},
  };
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Params resolve(const FixtureDescriptor& d, const Params& given) {
  Params out;
  for (const auto& [key, value] : given) {
    const auto it = std::find_if(d.params.begin(), d.params.end(), [&](const ParamSpec& p) { return p.name == key; });
    if (it == d.params.end()) {
      std::string valid;
      for (const auto& p : d.params) valid += (valid.empty() ? "" : ", ") + p.name;
      throw FixtureError("fixture '" + d.name + "' has no parameter '" + key + "' (valid: " +
                         (valid.empty() ? "none" : valid) + ")");
    }
  }
  for (const auto& p : d.params) {
    const auto it = given.find(p.name);
    const double v = it == given.end() ? p.default_value : it->second;
    if (!std::isfinite(v) || v < p.lo || v > p.hi || (p.integer && v != std::round(v))) {
      throw FixtureError("parameter '" + p.name + "' of fixture '" + d.name + "' must be " +
                         (p.integer ? "an integer " : "") + "in [" + format_number(p.lo) + ", " +
                         format_number(p.hi) + "], got " + format_number(v));
    }
    out[p.name] = v;
  }
  return out;
}

std::vector<Interval> sphere_domain(int k) {
  std::vector<Interval> d;
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k) {
      d.push_back({kPolarMargin, M_PI - kPolarMargin, false});
    } else {
      d.push_back({0.0, 2.0 * M_PI, true});
    }
  }
  return d;
}

std::vector<Interval> torus_domain() { return {{0.0, 2.0 * M_PI, true}, {0.0, 2.0 * M_PI, true}}; }

Expectation closed(const std::string& q, std::vector<double> v, double tol) { return {q, std::move(v), tol, "closed-form"}; }
Expectation flag(const std::string& q, bool v) { return {q, {v ? 1.0 : 0.0}, 0.0, "closed-form"}; }

Fixture make_totally_geodesic(const Params& p) {
  const int m = static_cast<int>(p.at("m"));
  const int n = static_cast<int>(p.at("n"));
  if (m >= n) throw FixtureError("totally_geodesic requires m < n");
  auto chart = make_chart(m, n, sphere_domain(m), [m, n](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    auto w = spherical(u);
    std::vector<T> f(static_cast<std::size_t>(n + 1), T(0.0));
    for (int i = 0; i <= m; ++i) f[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)];
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart, [m, n](const Vec&) {
    Mat f = Mat::Zero(n + 1, n - m);
    for (int j = 0; j < n - m; ++j) f(m + 1 + j, j) = 1.0;
    return f;
  });
  fx.expectations = {closed("mean_curvature_norm", {0.0}, 1e-8), flag("conformal", true),
                     closed("h_gamma_norm", {0.0}, 1e-6), flag("isoparametric", true),
                     flag("parallel_second_fundamental", true), flag("minimal", true)};
  if (m == n - 1) fx.expectations.push_back(closed("principal_curvatures", std::vector<double>(m, 0.0), 1e-8));
  return fx;
}

Fixture make_clifford(const Params& p) {
  const int n = static_cast<int>(p.at("n"));
  auto chart = make_chart(2, n, torus_domain(), [n](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const double c = 1.0 / std::sqrt(2.0);
    std::vector<T> f(static_cast<std::size_t>(n + 1), T(0.0));
    f[0] = c * cos(u[0]);
    f[1] = c * sin(u[0]);
    f[2] = c * cos(u[1]);
    f[3] = c * sin(u[1]);
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart, [n](const Vec& u) {
    const double c = 1.0 / std::sqrt(2.0);
    Mat f = Mat::Zero(n + 1, n - 2);
    f(0, 0) = c * std::cos(u(0));
    f(1, 0) = c * std::sin(u(0));
    f(2, 0) = -c * std::cos(u(1));
    f(3, 0) = -c * std::sin(u(1));
    for (int j = 1; j < n - 2; ++j) f(3 + j, j) = 1.0;
    return f;
  });
  fx.expectations = {closed("mean_curvature_norm", {0.0}, 1e-6), flag("conformal", true),
                     closed("h_gamma_norm", {0.0}, 1e-4), flag("parallel_second_fundamental", true),
                     flag("minimal", true)};
  if (n == 3) {
    fx.expectations.push_back(closed("principal_curvatures", {-1.0, 1.0}, 1e-6));
    fx.expectations.push_back(flag("isoparametric", true));
  }
  return fx;
}

Fixture make_generalized_clifford(const Params& p) {
  const int a = static_cast<int>(p.at("p"));
  const int b = static_cast<int>(p.at("q"));
  const int n = a + b + 1;
  if (n > 8) throw FixtureError("generalized_clifford requires p + q <= 7");
  const double r = p.at("minimal") != 0.0 ? std::sqrt(static_cast<double>(a) / (a + b)) : p.at("r");
  const double s = std::sqrt(1.0 - r * r);
  std::vector<Interval> dom = sphere_domain(a);
  for (const auto& iv : sphere_domain(b)) dom.push_back(iv);
  auto chart = make_chart(a + b, n, dom, [a, b, r, s](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const std::vector<T> u1(u.begin(), u.begin() + a), u2(u.begin() + a, u.end());
    const auto w1 = spherical(u1);
    const auto w2 = spherical(u2);
    std::vector<T> f;
    for (const auto& x : w1) f.push_back(r * x);
    for (const auto& y : w2) f.push_back(s * y);
    (void)b;
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart, [a, r, s](const Vec& u) {
    std::vector<double> u1(u.data(), u.data() + a), u2(u.data() + a, u.data() + u.size());
    const auto w1 = spherical(u1);
    const auto w2 = spherical(u2);
    Mat f(static_cast<Eigen::Index>(w1.size() + w2.size()), 1);
    Eigen::Index k = 0;
    for (double x : w1) f(k++, 0) = s * x;
    for (double y : w2) f(k++, 0) = -r * y;
    return f;
  });
  const double k1 = -s / r, k2 = r / s;
  std::vector<double> kappa(static_cast<std::size_t>(a), k1);
  kappa.insert(kappa.end(), static_cast<std::size_t>(b), k2);
  std::sort(kappa.begin(), kappa.end());
  const double hnorm = std::abs(a * k1 + b * k2);
  const bool conformal = std::abs(k1 + k2) < 1e-12;
  fx.expectations = {closed("mean_curvature_norm", {hnorm}, 1e-6), closed("principal_curvatures", kappa, 1e-6),
                     flag("conformal", conformal), closed("h_gamma_norm", {0.0}, 1e-4),
                     flag("isoparametric", true), flag("parallel_second_fundamental", true),
                     flag("minimal", hnorm < 1e-12)};
  return fx;
}

Fixture make_geodesic_sphere(const Params& p) {
  const int n = static_cast<int>(p.at("n"));
  const double rho = p.at("rho");
  const int m = n - 1;
  auto chart = make_chart(m, n, sphere_domain(m), [n, rho](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const auto w = spherical(u);
    std::vector<T> f(static_cast<std::size_t>(n + 1), T(0.0));
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = std::sin(rho) * w[static_cast<std::size_t>(i)];
    f[static_cast<std::size_t>(n)] = T(std::cos(rho));
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart, [n, rho](const Vec& u) {
    std::vector<double> uu(u.data(), u.data() + u.size());
    const auto w = spherical(uu);
    Mat f(n + 1, 1);
    for (int i = 0; i < n; ++i) f(i, 0) = -std::cos(rho) * w[static_cast<std::size_t>(i)];
    f(n, 0) = std::sin(rho);
    return f;
  });
  const double k = std::cos(rho) / std::sin(rho);
  fx.expectations = {closed("mean_curvature_norm", {m * std::abs(k)}, 1e-6),
                     closed("principal_curvatures", std::vector<double>(static_cast<std::size_t>(m), k), 1e-6),
                     flag("conformal", true), closed("h_gamma_norm", {0.0}, 1e-4), flag("isoparametric", true),
                     flag("parallel_second_fundamental", true), flag("umbilic", true)};
  return fx;
}

Fixture make_small_circle(const Params& p) {
  const int n = static_cast<int>(p.at("n"));
  const double al = p.at("alpha");
  auto chart = make_chart(1, n, {{0.0, 2.0 * M_PI, true}}, [n, al](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    std::vector<T> f(static_cast<std::size_t>(n + 1), T(0.0));
    f[0] = std::sin(al) * cos(u[0]);
    f[1] = std::sin(al) * sin(u[0]);
    f[2] = T(std::cos(al));
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart, [n, al](const Vec& u) {
    Mat f = Mat::Zero(n + 1, n - 1);
    f(0, 0) = std::cos(al) * std::cos(u(0));
    f(1, 0) = std::cos(al) * std::sin(u(0));
    f(2, 0) = -std::sin(al);
    for (int j = 1; j < n - 1; ++j) f(2 + j, j) = 1.0;
    return f;
  });
  const double k = std::cos(al) / std::sin(al);
  fx.expectations = {closed("mean_curvature_norm", {k}, 1e-6), flag("conformal", true),
                     flag("parallel_second_fundamental", true)};
  if (n == 2) {
    fx.expectations.push_back(closed("principal_curvatures", {-k}, 1e-6));
    fx.expectations.push_back(flag("isoparametric", true));
  }
  return fx;
}

Fixture make_veronese(const Params&) {
  std::vector<Interval> dom = {{0.3, M_PI - 0.3, false}, {0.0, 2.0 * M_PI, true}};
  auto chart = make_chart(2, 4, dom, [](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const double r3 = std::sqrt(3.0);
    const T x = sin(u[0]) * cos(u[1]);
    const T y = sin(u[0]) * sin(u[1]);
    const T z = cos(u[0]);
    return std::vector<T>{r3 * y * z, r3 * x * z, r3 * x * y, 0.5 * r3 * (x * x - y * y),
                          0.5 * (x * x + y * y - 2.0 * z * z)};
  });
  // Normal space at x is spanned by the images of a a^T - b b^T and
  // a b^T + b a^T for the coordinate frame (a, b) of x^perp.
  auto sym_to_r5 = [](const Eigen::Matrix3d& s) {
    const double r3 = std::sqrt(3.0);
    Vec f(5);
    f << r3 * s(1, 2), r3 * s(0, 2), r3 * s(0, 1), 0.5 * r3 * (s(0, 0) - s(1, 1)),
        0.5 * (s(0, 0) + s(1, 1) - 2.0 * s(2, 2));
    return f;
  };
  auto frame = [sym_to_r5](const Vec& u) {
    const double th = u(0), ph = u(1);
    const Eigen::Vector3d a(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
    const Eigen::Vector3d b(-std::sin(ph), std::cos(ph), 0.0);
    Mat n(5, 2);
    n.col(0) = sym_to_r5(a * a.transpose() - b * b.transpose()).normalized();
    n.col(1) = sym_to_r5(a * b.transpose() + b * a.transpose()).normalized();
    return n;
  };
  Fixture fx;
  fx.chart = UnitNormalChart(chart, frame);
  fx.expectations = {closed("mean_curvature_norm", {0.0}, 1e-6), flag("conformal", true),
                     closed("h_gamma_norm", {0.0}, 1e-4), flag("minimal", true),
                     flag("parallel_second_fundamental", true)};
  return fx;
}

Fixture make_rotational_torus(const Params& p) {
  const double a = p.at("a");
  const double b = p.at("b");
  if (a + b > M_PI / 2 - 0.05) throw FixtureError("rotational_torus requires a + b <= pi/2 - 0.05");
  auto chart = make_chart(2, 3, torus_domain(), [a, b](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const T x = std::cos(b) * std::cos(a) - std::sin(b) * std::sin(a) * cos(u[0]);
    const T y = std::cos(b) * std::sin(a) + std::sin(b) * std::cos(a) * cos(u[0]);
    const T w = std::sin(b) * sin(u[0]);
    return std::vector<T>{x * cos(u[1]), x * sin(u[1]), y, w};
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart);
  fx.expectations = {flag("conformal", false), flag("isoparametric", a == 0.0)};
  if (a == 0.0) fx.expectations.push_back(closed("h_gamma_norm", {0.0}, 1e-4));
  return fx;
}

Fixture make_perturbed_torus(const Params& p) {
  const double eps = p.at("eps");
  auto chart = make_chart(2, 3, torus_domain(), [eps](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const double c = 1.0 / std::sqrt(2.0);
    const T h = eps * cos(u[0]) * (1.0 + 0.5 * sin(2.0 * u[1]));
    const std::vector<T> base{c * cos(u[0]), c * sin(u[0]), c * cos(u[1]), c * sin(u[1])};
    const std::vector<T> nu{c * cos(u[0]), c * sin(u[0]), -c * cos(u[1]), -c * sin(u[1])};
    const T scale = 1.0 / sqrt(1.0 + h * h);
    std::vector<T> f(4);
    for (std::size_t i = 0; i < 4; ++i) f[i] = (base[i] + h * nu[i]) * scale;
    return f;
  });
  Fixture fx;
  fx.chart = UnitNormalChart(chart);
  if (eps > 0.0) {
    fx.expectations = {flag("conformal", false), {"conformal_residual_above", {0.1}, 0.0, "regression"}};
  }
  return fx;
}

lie::AlgebraElement rotation_generator(int dim, double rate) {
  return (lie::AlgebraElement::elementary(dim, 0, dim - 1) + 0.5 * lie::AlgebraElement::elementary(dim, 1, 2)) * rate;
}

UnitNormalChart rotate_chart(const UnitNormalChart& base, const Mat& rot) {
  const ImmersionChart& bc = base.base();
  auto value = [vf = bc.value_fn(), rot](const Vec& u) { return Vec(rot * vf(u)); };
  ImmersionChart::DirectionalFn dir;
  if (bc.directional_fn()) {
    dir = [df = bc.directional_fn(), rot](const Vec& u, const Vec& d, Vec& v, Vec& dv) {
      df(u, d, v, dv);
      v = rot * v;
      dv = rot * dv;
    };
  }
  ImmersionChart chart(bc.m(), bc.n(), bc.domain(), value, dir);
  chart.set_fd_step(bc.fd_step());
  chart.set_mode(bc.mode());
  return UnitNormalChart(chart, [base, rot](const Vec& u) { return Mat(rot * base.frame(u)); }, base.sheet());
}

Fixture make_rigid_rotation(const Params& p, const FixtureRequest& base_request) {
  Fixture base = get(base_request);
  if (base.family) throw FixtureError("rigid_rotation needs an immersion fixture as its base");
  const int dim = base.chart.n() + 1;
  const Mat a = rotation_generator(dim, p.at("rate")).matrix();
  const UnitNormalChart base_chart = base.chart;
  DeformationFamily fam;
  fam.interval = {-1.0, 1.0, false};
  fam.at = [base_chart, a](double t) {
    return rotate_chart(base_chart, lie::exp(lie::AlgebraElement(t * a)));
  };
  Fixture fx;
  fx.t0 = p.at("t");
  fx.family = fam;
  fx.chart = fam.at(fx.t0);
  fx.expectations = base.expectations;
  fx.expectations.push_back(flag("monitor_constant", true));
  fx.label = base.label;  // completed by get()
  return fx;
}

// Real form of the SU(2) element rotating S^2 about the y-axis by phi under
// the Hopf map: (z1, z2) -> (c z1 - s z2, s z1 + c z2).
Mat hopf_rotation(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  Mat u = Mat::Zero(4, 4);
  u(0, 0) = c; u(0, 2) = -s;
  u(1, 1) = c; u(1, 3) = -s;
  u(2, 0) = s; u(2, 2) = c;
  u(3, 1) = s; u(3, 3) = c;
  return u;
}

UnitNormalChart hopf_chart(double t) {
  const Mat rot = hopf_rotation(M_PI / 2 - t);
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  auto chart = make_chart(2, 3, torus_domain(), [rot, c, s](const auto& u) {
    using T = std::decay_t<decltype(u[0])>;
    const std::vector<T> w{c * cos(u[0]), c * sin(u[0]), s * cos(u[1]), s * sin(u[1])};
    std::vector<T> f(4, T(0.0));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) f[static_cast<std::size_t>(i)] += rot(i, j) * w[static_cast<std::size_t>(j)];
    return f;
  });
  return UnitNormalChart(chart, [rot, c, s](const Vec& u) {
    Vec w(4);
    w << s * std::cos(u(0)), s * std::sin(u(0)), -c * std::cos(u(1)), -c * std::sin(u(1));
    return Mat(rot * w);
  });
}

Fixture make_hopf_tilt(const Params& p) {
  DeformationFamily fam;
  fam.interval = {-1.6, 1.6, false};
  fam.at = hopf_chart;
  Fixture fx;
  fx.t0 = p.at("tilt");
  fx.family = fam;
  fx.chart = fam.at(fx.t0);
  fx.expectations = {{"monitor", {std::sin(fx.t0 / 2)}, 1e-9, "closed-form"}};
  return fx;
}

std::string describe(const std::string& name, const Params& params) {
  std::string out = name + "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    out += (first ? "" : ", ") + k + "=" + format_number(v);
    first = false;
  }
  return out + ")";
}

}  // namespace

const Expectation* Fixture::expectation(const std::string& quantity) const {
  for (const auto& e : expectations)
    if (e.quantity == quantity) return &e;
  return nullptr;
}

bool Fixture::flag(const std::string& quantity) const {
  const Expectation* e = expectation(quantity);
  return e != nullptr && !e->values.empty() && e->values.front() == 1.0;
}

const std::vector<FixtureDescriptor>& registry() {
  static const std::vector<FixtureDescriptor> reg = build_registry();
  return reg;
}

Fixture get(const FixtureRequest& request) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const FixtureDescriptor& d) { return d.name == request.name; });
  if (it == reg.end()) {
    std::string valid;
    for (const auto& d : reg) valid += (valid.empty() ? "" : ", ") + d.name;
    throw FixtureError("unknown fixture '" + request.name + "' (valid: " + valid + ")");
  }
  if (request.base && !it->takes_base) throw FixtureError("fixture '" + it->name + "' does not take a base fixture");
  const Params params = resolve(*it, request.params);
  Fixture fx;
  const std::string& name = it->name;
  if (name == "totally_geodesic") fx = make_totally_geodesic(params);
  else if (name == "clifford") fx = make_clifford(params);
  else if (name == "generalized_clifford") fx = make_generalized_clifford(params);
  else if (name == "geodesic_sphere") fx = make_geodesic_sphere(params);
  else if (name == "small_circle") fx = make_small_circle(params);
  else if (name == "veronese") fx = make_veronese(params);
  else if (name == "rotational_torus") fx = make_rotational_torus(params);
  else if (name == "perturbed_torus") fx = make_perturbed_torus(params);
  else if (name == "hopf_tilt") fx = make_hopf_tilt(params);
  else {
    const FixtureRequest base = request.base ? *request.base : FixtureRequest{"small_circle", {}, nullptr};
    fx = make_rigid_rotation(params, base);
  }
  std::string label = describe(name, params);
  if (name == "rigid_rotation") label.insert(label.size() - 1, std::string(params.empty() ? "" : ", ") + "base=" + fx.label);
  fx.label = label;
  fx.descriptor = *it;
  fx.params = params;
  fx.loops = periodic_loops(fx.chart);
  return fx;
}

Fixture get(const std::string& name, const std::map<std::string, double>& params) {
  return get(FixtureRequest{name, params, nullptr});
}

std::vector<LoopSpec> periodic_loops(const UnitNormalChart& chart) {
  const auto& dom = chart.domain();
  Vec start(static_cast<Eigen::Index>(dom.size()));
  for (std::size_t i = 0; i < dom.size(); ++i) {
    // Off-center start so loops avoid symmetry lines of the fixtures.
    start(static_cast<Eigen::Index>(i)) = dom[i].lo + (dom[i].periodic ? 0.3 : 0.45) * dom[i].width();
  }
  std::vector<LoopSpec> out;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (!dom[i].periodic) continue;
    const bool fiber = static_cast<int>(i) >= chart.m();
    out.push_back({(fiber ? "s" : "u") + std::to_string(fiber ? i - static_cast<std::size_t>(chart.m()) + 1 : i + 1),
                   static_cast<int>(i), start});
  }
  return out;
}

std::vector<SelfTestResult> self_test(const Fixture& fixture, const std::vector<Vec>& points) {
  std::vector<SelfTestResult> out;
  const UnitNormalChart& chart = fixture.chart;
  const ImmersionChart& base = chart.base();
  if (points.empty()) return out;
  if (const Expectation* e = fixture.expectation("mean_curvature_norm")) {
    double worst = 0.0, obs = 0.0;
    for (const Vec& x : points) {
      const double h = shape_data(base, chart.u_part(x)).mean_curvature.norm();
      const double d = std::abs(h - e->values.front());
      if (d >= worst) { worst = d; obs = h; }
    }
    out.push_back({e->quantity, obs, e->values.front(), e->tolerance, worst <= e->tolerance});
  }
  if (const Expectation* e = fixture.expectation("principal_curvatures")) {
    double worst = 0.0;
    for (const Vec& x : points) {
      const Vec k = principal_curvatures(shape_data(base, chart.u_part(x)), chart.xi(x));
      for (Eigen::Index j = 0; j < k.size(); ++j)
        worst = std::max(worst, std::abs(k(j) - e->values[static_cast<std::size_t>(j)]));
    }
    out.push_back({e->quantity, worst, 0.0, e->tolerance, worst <= e->tolerance});
  }
  std::vector<Vec> us;
  for (const Vec& x : points) us.push_back(chart.u_part(x));
  const bool wants_conformal = fixture.expectation("conformal") != nullptr;
  const Expectation* above = fixture.expectation("conformal_residual_above");
  if (wants_conformal || above) {
    const ConformalReport rep = conformal_report(base, us);
    if (wants_conformal) {
      const bool expected = fixture.flag("conformal");
      out.push_back({"conformal", rep.is_conformal ? 1.0 : 0.0, expected ? 1.0 : 0.0, 0.0, rep.is_conformal == expected});
    }
    if (above) {
      out.push_back({above->quantity, rep.max_residual, above->values.front(), 0.0,
                     rep.max_residual > above->values.front()});
    }
  }
  return out;
}

Vec hopf_map(const Vec& x) {
  if (x.size() != 4) throw DimensionError("hopf_map expects a point of R^4");
  // z1 = x0 + i x1, z2 = x2 + i x3
  Vec h(3);
  h(0) = 2.0 * (x(0) * x(2) + x(1) * x(3));
  h(1) = 2.0 * (x(1) * x(2) - x(0) * x(3));
  h(2) = x(0) * x(0) + x(1) * x(1) - x(2) * x(2) - x(3) * x(3);
  return h;
}

}  // namespace gaussmap::catalog
