#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "gaussmap/errors.hpp"
#include "gaussmap/report.hpp"

namespace gaussmap::report {

namespace sp = gaussmap::space;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite) {
  const auto& names = suite_names();
  const auto idx = static_cast<std::uint64_t>(std::find(names.begin(), names.end(), suite) - names.begin());
  return seed ^ (0x9E3779B97F4A7C15ULL * (idx + 1));
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  // [-1, 1), fixed conversion so results do not depend on the library's distributions
  double next() { return 2.0 * (static_cast<double>(rng_() >> 11) * 0x1.0p-53) - 1.0; }
  Vec vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = next();
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

void summarize(CheckResult& c) {
  std::vector<double> v;
  for (double x : c.values)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return;
  std::sort(v.begin(), v.end());
  c.min = v.front();
  c.max = v.back();
  const std::size_t k = v.size() / 2;
  c.median = v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

CheckResult skipped(const std::string& name, const std::string& reason) {
  CheckResult c;
  c.name = name;
  c.status = "skipped";
  c.reason = reason;
  return c;
}

CheckResult finish(CheckResult c) {
  summarize(c);
  if (c.values.empty()) {
    c.status = "skipped";
    if (c.reason.empty()) c.reason = "no applicable samples";
    return c;
  }
  bool ok = true;
  for (double x : c.values) {
    if (!std::isfinite(x)) {
      ok = false;
      continue;
    }
    switch (c.mode) {
      case CheckResult::Mode::Upper: ok = ok && x <= c.tolerance; break;
      case CheckResult::Mode::Lower: ok = ok && x >= c.tolerance; break;
      case CheckResult::Mode::Band: ok = ok && x >= c.band_lo && x <= c.band_hi; break;
    }
  }
  c.status = ok ? "pass" : "fail";
  return c;
}

CheckResult upper(const std::string& name, double tol, std::vector<double> values) {
  CheckResult c;
  c.name = name;
  c.tolerance = tol;
  c.values = std::move(values);
  return finish(std::move(c));
}

CheckResult lower(const std::string& name, double bound, std::vector<double> values) {
  CheckResult c;
  c.name = name;
  c.mode = CheckResult::Mode::Lower;
  c.tolerance = bound;
  c.values = std::move(values);
  return finish(std::move(c));
}

CheckResult band(const std::string& name, double lo, double hi, std::vector<double> values) {
  CheckResult c;
  c.name = name;
  c.mode = CheckResult::Mode::Band;
  c.band_lo = lo;
  c.band_hi = hi;
  c.values = std::move(values);
  return finish(std::move(c));
}

void settle(SuiteResult& s) {
  bool any_fail = false, all_skipped = !s.checks.empty();
  for (const auto& c : s.checks) {
    any_fail = any_fail || c.status == "fail";
    all_skipped = all_skipped && c.status == "skipped";
  }
  if (any_fail) {
    s.status = "fail";
    for (const auto& c : s.checks) {
      if (c.status != "fail") continue;
      s.reason = c.name + " exceeded tolerance" + (c.reason.empty() ? "" : ": " + c.reason);
      break;
    }
  } else if (all_skipped) {
    s.status = "skipped";
    for (const auto& c : s.checks) {
      if (c.reason.empty() || s.reason.find(c.reason) != std::string::npos) continue;
      s.reason += (s.reason.empty() ? "" : "; ") + c.reason;
    }
  } else {
    s.status = "pass";
  }
}

std::vector<std::string> coordinate_columns(const UnitNormalChart& chart) {
  std::vector<std::string> out;
  for (int i = 0; i < chart.m(); ++i) out.push_back("u" + std::to_string(i + 1));
  for (int i = 0; i < chart.fiber_dim(); ++i) out.push_back("s" + std::to_string(i + 1));
  return out;
}

std::vector<Cell> coordinate_cells(const Vec& x) {
  std::vector<Cell> row;
  for (Eigen::Index i = 0; i < x.size(); ++i) row.emplace_back(x(i));
  return row;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Context {
  const RunConfig& config;
  const catalog::Fixture& fixture;
  int samples;
  std::vector<Vec> points(const std::string& suite, double margin = 0.05) const {
    return sample_box(fixture.chart.domain(), static_cast<std::size_t>(samples), suite_seed(config.seed, suite),
                      margin);
  }
  double tol(const std::string& key) const { return config.tolerance(key); }
};

// ---------------------------------------------------------------- algebra

lie::AlgebraElement random_in(const lie::SplitBasis& b, const std::vector<int>& idx, Uniform& rng) {
  lie::AlgebraElement out = lie::AlgebraElement::zero(b.n + 1);
  for (int k : idx) out = out + rng.next() * b.basis[static_cast<std::size_t>(k)];
  return out;
}

lie::AlgebraElement random_element(int dim, Uniform& rng) {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.next();
  return lie::AlgebraElement(m);
}

void algebra_suite(const Context& ctx, SuiteResult& s) {
  const int n = ctx.fixture.chart.n();
  const lie::SplitBasis b = lie::make_split_basis(n);
  Uniform rng(suite_seed(ctx.config.seed, "algebra"));
  const lie::AlgebraElement nu = lie::nu0(n);
  std::vector<double> br, sq, iso, ex, l0, ad, cv;
  s.columns = {"sample", "bracket", "j0_square", "j0_isometry", "j0_exchange", "lambda0", "ad_invariance", "curvature"};
  for (int k = 0; k < ctx.samples; ++k) {
    const auto n1 = random_in(b, b.vertical, rng), n2 = random_in(b, b.vertical, rng);
    const auto m1 = random_in(b, b.horizontal, rng), m2 = random_in(b, b.horizontal, rng);
    // [n,n] in h, [n,m0] in s, [m0,m0] in h
    const auto nn = lie::split(lie::bracket(n1, n2), b);
    const auto nm = lie::split(lie::bracket(n1, m1), b);
    const auto mm = lie::split(lie::bracket(m1, m2), b);
    const double r_br = std::max({max_abs((nn.vertical + nn.horizontal + nn.reeb).matrix()),
                                  max_abs((nm.isotropy + nm.vertical + nm.horizontal).matrix()),
                                  max_abs((mm.vertical + mm.horizontal + mm.reeb).matrix())});

    const auto q1 = random_in(b, b.contact, rng), q2 = random_in(b, b.contact, rng);
    const double r_sq = max_abs((lie::J0(lie::J0(q1)) + q1).matrix());
    const double r_iso =
        std::abs(lie::inner_product(lie::J0(q1), lie::J0(q2)) - lie::inner_product(q1, q2));
    const double r_ex = std::max(max_abs((lie::J0(n1) - lie::project(lie::J0(n1), b, b.horizontal)).matrix()),
                                 max_abs((lie::J0(m1) - lie::project(lie::J0(m1), b, b.vertical)).matrix()));

    const auto a1 = random_element(n + 1, rng), a2 = random_element(n + 1, rng);
    const double r_l0 = std::abs(lie::lambda0(a1, a2) - lie::inner_product(lie::J0(a1), a2));
    const Mat g = lie::exp(random_element(n + 1, rng));
    const auto g1 = lie::adjoint(g, a1), g2 = lie::adjoint(g, a2);
    const double r_ad = std::max(std::abs(lie::inner_product(g1, g2) - lie::inner_product(a1, a2)),
                                 max_abs((lie::adjoint(g, lie::bracket(a1, a2)) - lie::bracket(g1, g2)).matrix()));
    // -[[eta, nu0], nu0] = eta on m0
    const double r_cv = max_abs((lie::bracket(lie::bracket(m1, nu), nu) + m1).matrix());
    br.push_back(r_br);
    cv.push_back(r_cv);
    sq.push_back(r_sq);
    iso.push_back(r_iso);
    ex.push_back(r_ex);
    l0.push_back(r_l0);
    ad.push_back(r_ad);
    s.rows.push_back({static_cast<double>(k + 1), r_br, r_sq, r_iso, r_ex, r_l0, r_ad, r_cv});
  }
  s.checks.push_back(upper("bracket", ctx.tol("algebra.bracket"), br));
  s.checks.push_back(upper("j0_square", ctx.tol("algebra.j0_square"), sq));
  s.checks.push_back(upper("j0_isometry", ctx.tol("algebra.j0_isometry"), iso));
  s.checks.push_back(upper("j0_exchange", ctx.tol("algebra.j0_exchange"), ex));
  s.checks.push_back(upper("lambda0", ctx.tol("algebra.lambda0"), l0));
  s.checks.push_back(upper("ad_invariance", ctx.tol("algebra.ad_invariance"), ad));
  s.checks.push_back(upper("curvature", ctx.tol("algebra.curvature"), cv));
}

// ---------------------------------------------------------------- legendrian

TangentUS random_contact(const UnitSpherePoint& x, Uniform& rng) {
  auto perp = [&](Vec w) {
    w -= w.dot(x.p()) * x.p();
    w -= w.dot(x.v()) * x.v();
    return w;
  };
  return TangentUS{x, perp(rng.vec(x.ambient_dim())), perp(rng.vec(x.ambient_dim()))};
}

void legendrian_suite(const Context& ctx, SuiteResult& s) {
  const UnitNormalChart& chart = ctx.fixture.chart;
  const int n = chart.n();
  Uniform rng(suite_seed(ctx.config.seed, "legendrian") + 1);
  const lie::AlgebraElement nu = lie::nu0(n);
  std::vector<double> th, lg, rn, pm, lp;
  s.columns = coordinate_columns(chart);
  for (const char* c : {"theta", "lagrangian", "reeb_norm", "plucker_metric", "lambda_pullback"}) s.columns.push_back(c);
  for (const Vec& x : ctx.points("legendrian")) {
    const double r_th = legendrian_residual(chart, x);
    const double r_lg = lagrangian_residual(chart, x);
    const UnitSpherePoint mu = chart.mu(x);
    const OrientedPlane q = chart.gamma(x);
    const TangentUS reeb = sp::reeb(mu);
    double r_rn = std::max({std::abs(sp::sasaki_metric(reeb, reeb) - 1.0),
                            std::abs(lie::inner_product(nu, nu) - 1.0),
                            max_abs((sp::tangent_to_algebra(reeb) - nu).matrix())});
    const TangentUS z = random_contact(mu, rng), w = random_contact(mu, rng);
    const Vec pz = sp::push_to_plane(z), pw = sp::push_to_plane(w);
    const auto ez = sp::tangent_to_algebra(z), ew = sp::tangent_to_algebra(w);
    // the Sasaki metric is the normal homogeneous metric
    r_rn = std::max(r_rn, std::abs(sp::sasaki_metric(z, w) - lie::inner_product(ez, ew)));
    const double r_pm = std::max(std::abs(sp::sasaki_metric(z, w) - pz.dot(pw)),
                                 std::abs(sp::plane_metric(q, pz, pw) - pz.dot(pw)));
    const double r_lp = std::max(std::abs(sp::symplectic(z, w) - sp::plane_symplectic(q, pz, pw)),
                                 std::abs(sp::symplectic(z, w) - lie::inner_product(nu, lie::bracket(ez, ew))));
    th.push_back(r_th);
    lg.push_back(r_lg);
    rn.push_back(r_rn);
    pm.push_back(r_pm);
    lp.push_back(r_lp);
    auto row = coordinate_cells(x);
    for (double v : {r_th, r_lg, r_rn, r_pm, r_lp}) row.emplace_back(v);
    s.rows.push_back(std::move(row));
  }
  s.checks.push_back(upper("theta", ctx.tol("legendrian.theta"), th));
  s.checks.push_back(upper("lagrangian", ctx.tol("legendrian.lagrangian"), lg));
  s.checks.push_back(upper("reeb_norm", ctx.tol("legendrian.reeb_norm"), rn));
  s.checks.push_back(upper("plucker_metric", ctx.tol("legendrian.plucker_metric"), pm));
  s.checks.push_back(upper("lambda_pullback", ctx.tol("legendrian.lambda_pullback"), lp));
}

// ---------------------------------------------------------------- metric

void metric_suite(const Context& ctx, SuiteResult& s) {
  const UnitNormalChart& chart = ctx.fixture.chart;
  const bool conformal = ctx.fixture.flag("conformal");
  const bool clifford = ctx.fixture.descriptor.name == "clifford";
  std::vector<double> hi, cf;
  s.columns = coordinate_columns(chart);
  s.columns.push_back("horizontal_identity");
  s.columns.push_back("conformal_factor");
  s.columns.push_back("conformal_factor_residual");
  for (const Vec& x : ctx.points("metric")) {
    const MetricIdentity mi = horizontal_metric_identity(chart, x);
    hi.push_back(mi.residual);
    auto row = coordinate_cells(x);
    row.emplace_back(mi.residual);
    if (conformal) {
      const ShapeData sd = shape_data(chart.base(), chart.u_part(x));
      const Mat a = shape_operator_orthonormal(sd, chart.xi(x));
      const double r2 = (a * a).trace() / chart.m();
      const double expected = clifford ? 0.5 : 1.0 / (1.0 + r2);
      // g = c h on horizontal vectors
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(sd.metric, mi.lhs, Eigen::EigenvaluesOnly);
      const Vec ev = es.eigenvalues();
      double r = 0.0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) r = std::max(r, std::abs(ev(i) - expected));
      cf.push_back(r);
      row.emplace_back(ev.mean());
      row.emplace_back(r);
    } else {
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
    }
    s.rows.push_back(std::move(row));
  }
  s.checks.push_back(upper("horizontal_identity", ctx.tol("metric.horizontal_identity"), hi));
  if (conformal) {
    s.checks.push_back(upper("conformal_factor", ctx.tol("metric.conformal_factor"), cf));
  } else {
    s.checks.push_back(skipped("conformal_factor", "fixture does not have conformal shape form"));
  }
}

// ---------------------------------------------------------------- meancurvature

double nabla_asymmetry(const ShapeData& sd) {
  const int m = sd.m();
  double worst = 0.0, scale = 0.0;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        scale = std::max(scale, sd.nabla_ii(k, i, j).norm());
        worst = std::max(worst, (sd.nabla_ii(k, i, j) - sd.nabla_ii(i, k, j)).norm());
        worst = std::max(worst, (sd.nabla_ii(k, i, j) - sd.nabla_ii(k, j, i)).norm());
      }
  return worst / (1.0 + scale);
}

double nabla_norm(const ShapeData& sd) {
  double worst = 0.0;
  for (const Vec& v : sd.nabla_ambient) worst = std::max(worst, v.norm());
  return worst;
}

void meancurvature_suite(const Context& ctx, SuiteResult& s) {
  const UnitNormalChart& chart = ctx.fixture.chart;
  const bool parallel = ctx.fixture.flag("parallel_second_fundamental");
  std::vector<double> fo, rc, ns, nz, ratio;
  s.columns = coordinate_columns(chart);
  for (const char* c : {"formula_vs_oracle", "reeb_component", "h_gamma_norm", "nabla_symmetry", "nabla_norm",
                        "coarse_error", "fine_error"})
    s.columns.push_back(c);
  const auto pts = ctx.points("meancurvature");
  int convergence_points = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vec& x = pts[k];
    const MeanCurvatureResult mc = mean_curvature(chart, x);
    const TangentUS tau = us_tension(chart, x);
    const double r_rc = std::abs(sp::sasaki_metric(tau, sp::reeb(chart.mu(x))));
    const ShapeData sd = shape_data(chart.base(), chart.u_part(x), true);
    const double r_ns = nabla_asymmetry(sd);
    const double r_nz = nabla_norm(sd);
    fo.push_back(mc.residual);
    rc.push_back(r_rc);
    ns.push_back(r_ns);
    if (parallel) nz.push_back(r_nz);
    auto row = coordinate_cells(x);
    for (double v : {mc.residual, r_rc, mc.h_gamma.norm(), r_ns, r_nz}) row.emplace_back(v);
    if (convergence_points < 4) {
      ++convergence_points;
      double e[2];
      for (int j = 0; j < 2; ++j) {
        UnitNormalChart c = chart;
        c.base().set_steps(Steps::uniform(j == 0 ? 0.02 : 0.01));
        const MeanCurvatureResult r = mean_curvature(c, x);
        e[j] = (r.h_gamma - r.oracle_h_gamma).norm();
      }
      // already exact to round-off: no order to observe
      if (e[0] >= 1e-9) ratio.push_back(e[0] / e[1]);
      row.emplace_back(e[0]);
      row.emplace_back(e[1]);
    } else {
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
    }
    s.rows.push_back(std::move(row));
  }
  s.checks.push_back(upper("formula_vs_oracle", ctx.tol("meancurvature.formula_vs_oracle"), fo));
  s.checks.push_back(upper("reeb_component", ctx.tol("meancurvature.reeb_component"), rc));
  if (ratio.empty()) {
    s.checks.push_back(skipped("convergence_ratio", "formula and oracle agree to round-off at both steps"));
  } else {
    s.checks.push_back(band("convergence_ratio", ctx.tol("meancurvature.convergence_lo"),
                            ctx.tol("meancurvature.convergence_hi"), ratio));
  }
  s.checks.push_back(upper("nabla_symmetry", ctx.tol("meancurvature.nabla_symmetry"), ns));
  if (parallel) {
    s.checks.push_back(upper("nabla_zero", ctx.tol("meancurvature.nabla_zero"), nz));
  } else {
    s.checks.push_back(skipped("nabla_zero", "second fundamental form not expected to be parallel"));
  }
}

// ---------------------------------------------------------------- theorem

void theorem_suite(const Context& ctx, SuiteResult& s) {
  const UnitNormalChart& chart = ctx.fixture.chart;
  const bool expect_zero = ctx.fixture.expectation("h_gamma_norm") != nullptr;
  const bool declared = ctx.fixture.expectation("conformal") != nullptr;
  const bool conformal = ctx.fixture.flag("conformal");
  std::vector<double> hg, e1, e2;
  std::string refusal;
  s.columns = coordinate_columns(chart);
  for (const char* c : {"residual1", "residual2", "h_gamma_norm", "side2_lhs", "side2_rhs"}) s.columns.push_back(c);
  for (const Vec& x : ctx.points("theorem")) {
    const double h = mean_curvature(chart, x).h_gamma.norm();
    if (expect_zero) hg.push_back(h);
    auto row = coordinate_cells(x);
    try {
      const TheoremResiduals t = theorem_main_residual(chart, x, ctx.tol("theorem.conformal"));
      e1.push_back(t.residual1);
      row.emplace_back(t.residual1);
      if (chart.fiber_dim() > 0) {
        e2.push_back(t.residual2);
        row.emplace_back(t.residual2);
      } else {
        row.emplace_back(std::monostate{});
      }
      row.emplace_back(h);
      if (!t.lhs2.empty()) {
        row.emplace_back(t.lhs2.front());
        row.emplace_back(t.rhs2.front());
      } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      }
    } catch (const NotConformal& e) {
      if (refusal.empty()) refusal = std::string("NotConformal: ") + e.what();
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
      row.emplace_back(h);
      row.emplace_back(std::monostate{});
      row.emplace_back(std::monostate{});
    }
    s.rows.push_back(std::move(row));
  }
  if (expect_zero) {
    s.checks.push_back(upper("h_gamma", ctx.tol("theorem.h_gamma"), hg));
  } else {
    s.checks.push_back(skipped("h_gamma", "H_gamma is not expected to vanish"));
  }
  if (!refusal.empty() && !(declared && conformal)) {
    s.checks.push_back(skipped("eq_horizontal", refusal));
    s.checks.push_back(skipped("eq_vertical", refusal));
    return;
  }
  if (!refusal.empty()) {
    CheckResult c = skipped("eq_horizontal", refusal);
    c.status = "fail";
    s.checks.push_back(c);
    return;
  }
  s.checks.push_back(upper("eq_horizontal", ctx.tol("theorem.eq_horizontal"), e1));
  if (chart.fiber_dim() > 0) {
    s.checks.push_back(upper("eq_vertical", ctx.tol("theorem.eq_vertical"), e2));
  } else {
    s.checks.push_back(skipped("eq_vertical", "hypersurface: no vertical directions"));
  }
}

// ---------------------------------------------------------------- palmer

void palmer_suite(const Context& ctx, SuiteResult& s) {
  const UnitNormalChart& chart = ctx.fixture.chart;
  if (chart.fiber_dim() != 0) {
    s.checks.push_back(skipped("oracle", "the principal-curvature form is defined for hypersurfaces only"));
    return;
  }
  const bool iso = ctx.fixture.flag("isoparametric");
  const bool umbilic = ctx.fixture.flag("umbilic");
  std::vector<double> orc, zero, umb;
  std::string crossing;
  s.columns = coordinate_columns(chart);
  for (const char* c : {"sigma_norm", "oracle_norm", "oracle_residual", "clustered"}) s.columns.push_back(c);
  for (const Vec& x : ctx.points("palmer")) {
    auto row = coordinate_cells(x);
    try {
      const PalmerResult p = palmer_one_form(chart, x);
      orc.push_back(p.residual);
      if (iso) zero.push_back(p.sigma.norm());
      if (umbilic) umb.push_back(std::max(p.sigma.norm(), p.clustered ? 0.0 : kNaN));
      for (double v : {p.sigma.norm(), p.oracle.norm(), p.residual}) row.emplace_back(v);
      row.emplace_back(p.clustered ? 1.0 : 0.0);
    } catch (const MultiplicityCrossing& e) {
      if (crossing.empty()) crossing = e.what();
      for (int i = 0; i < 4; ++i) row.emplace_back(std::monostate{});
    }
    s.rows.push_back(std::move(row));
  }
  s.checks.push_back(upper("oracle", ctx.tol("palmer.oracle"), orc));
  if (!crossing.empty()) s.checks.back().reason = "samples dropped at a multiplicity crossing: " + crossing;
  if (iso) {
    s.checks.push_back(upper("isoparametric", ctx.tol("palmer.isoparametric"), zero));
  } else {
    s.checks.push_back(skipped("isoparametric", "principal curvatures not expected to be constant"));
  }
  if (umbilic) {
    s.checks.push_back(upper("umbilic", ctx.tol("palmer.umbilic"), umb));
  } else {
    s.checks.push_back(skipped("umbilic", "fixture is not umbilic"));
  }
}

// ---------------------------------------------------------------- variations

void variations_suite(const Context& ctx, SuiteResult& s) {
  const catalog::Fixture& fx = ctx.fixture;
  const UnitNormalChart& chart = fx.chart;
  const auto& dom = chart.domain();
  s.columns = {"quantity", "item", "value"};
  auto record = [&](const std::string& q, const std::string& item, double v) {
    s.rows.push_back({q, item, v});
  };

  std::vector<double> ph;
  const FormFn sigma_h = [&](const Vec& x) { return mean_curvature_form(chart, x); };
  for (const auto& loop : fx.loops) {
    const double p = std::abs(loop_integral(sigma_h, coordinate_loop(dom, loop.start, loop.coordinate), dom));
    ph.push_back(p);
    record("sigma_h_period", loop.name, p);
  }
  if (fx.loops.empty()) {
    s.checks.push_back(skipped("sigma_h_period", "no loops declared"));
  } else {
    s.checks.push_back(upper("sigma_h_period", ctx.tol("variations.sigma_h_period"), ph));
  }

  if (!fx.family) {
    const std::string why = "fixture is not a deformation family";
    for (const char* c : {"closedness", "sigma_v_period", "potential", "monitor"}) s.checks.push_back(skipped(c, why));
    return;
  }
  const DeformationFamily& fam = *fx.family;
  const double t0 = fx.t0;
  const FormFn sigma_v = [&](const Vec& x) { return sigma_V(fam, t0, x); };

  std::vector<double> cl;
  const auto pts = ctx.points("variations", 0.1);
  const std::size_t nclosed = std::min<std::size_t>(pts.size(), 16);
  for (std::size_t k = 0; k < nclosed; ++k) {
    const double r = exterior_derivative_residual(sigma_v, pts[k], 1e-3);
    cl.push_back(r);
    record("closedness", "sample " + std::to_string(k + 1), r);
  }
  s.checks.push_back(upper("closedness", ctx.tol("variations.closedness"), cl));

  std::vector<double> pv;
  for (const auto& loop : fx.loops) {
    const double p = std::abs(loop_integral(sigma_v, coordinate_loop(dom, loop.start, loop.coordinate), dom));
    pv.push_back(p);
    record("sigma_v_period", loop.name, p);
  }
  if (fx.loops.empty()) {
    s.checks.push_back(skipped("sigma_v_period", "no loops declared"));
  } else {
    s.checks.push_back(upper("sigma_v_period", ctx.tol("variations.sigma_v_period"), pv));
  }

  // path independence between two routes with shared endpoints
  std::vector<double> pot;
  const auto ends = sample_box(dom, 4, suite_seed(ctx.config.seed, "variations") + 7, 0.25);
  for (std::size_t k = 0; k + 1 < ends.size(); k += 2) {
    Vec mid = 0.5 * (ends[k] + ends[k + 1]);
    mid(0) += 0.1 * dom[0].width();
    const PotentialResult r =
        hamiltonian_potential(sigma_v, segment_path(ends[k], ends[k + 1]), polyline_path({ends[k], mid, ends[k + 1]}));
    pot.push_back(r.discrepancy);
    record("potential", "pair " + std::to_string(k / 2 + 1), r.discrepancy);
  }
  s.checks.push_back(upper("potential", ctx.tol("variations.potential"), pot));

  const auto mon_pts = sample_box(dom, 64, suite_seed(ctx.config.seed, "variations") + 11);
  if (const catalog::Expectation* e = fx.expectation("monitor")) {
    const double at_t0 = transversality_monitor(fam, t0, mon_pts);
    const double small = transversality_monitor(fam, 1e-3, mon_pts);
    record("monitor", "t=" + json_number(t0), at_t0);
    record("monitor", "t=0.001", small);
    s.checks.push_back(upper("monitor_small", ctx.tol("variations.monitor_small"), {small}));
    s.checks.push_back(lower("monitor_floor", ctx.tol("variations.monitor_floor"), {at_t0}));
    s.checks.push_back(upper("monitor_closed_form", ctx.tol("variations.monitor_closed_form"),
                             {std::abs(at_t0 - e->values.front())}));
  } else if (fx.flag("monitor_constant")) {
    const double at_t0 = transversality_monitor(fam, t0, mon_pts);
    record("monitor", "t=" + json_number(t0), at_t0);
    std::vector<double> dev;
    for (double t : {-0.5, 0.5}) {
      const double v = transversality_monitor(fam, t, mon_pts);
      record("monitor", "t=" + json_number(t), v);
      dev.push_back(std::abs(v - at_t0));
    }
    s.checks.push_back(upper("monitor_constant", ctx.tol("variations.monitor_constant"), dev));
  } else {
    s.checks.push_back(skipped("monitor", "no transversality expectation"));
  }
}

using SuiteFn = void (*)(const Context&, SuiteResult&);

SuiteFn suite_function(const std::string& name) {
  if (name == "algebra") return algebra_suite;
  if (name == "legendrian") return legendrian_suite;
  if (name == "metric") return metric_suite;
  if (name == "meancurvature") return meancurvature_suite;
  if (name == "theorem") return theorem_suite;
  if (name == "palmer") return palmer_suite;
  return variations_suite;
}

void apply_numeric(catalog::Fixture& fx, const RunConfig& config) {
  fx.chart.base().set_fd_step(config.fd_step);
  if (fx.family) {
    auto at = fx.family->at;
    const double h = config.fd_step;
    fx.family->at = [at, h](double t) {
      UnitNormalChart c = at(t);
      c.base().set_fd_step(h);
      return c;
    };
    fx.family->t_step = config.t_step;
  }
}

}  // namespace

Report run(const RunConfig& config) {
  catalog::Fixture fx;
  try {
    fx = build_fixture(config);
    apply_numeric(fx, config);
  } catch (const ConfigError&) {
    throw;
  } catch (const FixtureError&) {
    throw;
  } catch (const std::exception& e) {
    throw FixtureError(std::string("fixture construction failed: ") + e.what());
  }

  Report rep;
  rep.fixture_label = fx.label;
  rep.fixture_name = fx.descriptor.name;
  rep.fixture_params = fx.params;
  rep.fixture_kind = fx.family ? "deformation" : "immersion";
  rep.m = fx.chart.m();
  rep.n = fx.chart.n();
  rep.t0 = fx.t0;
  rep.fd_step = config.fd_step;
  rep.t_step = config.t_step;
  rep.seed = config.seed;
  rep.samples = config.samples ? *config.samples : std::min(64 * fx.chart.dim(), 4096);

  // gate: closed-form expectations and a well-defined shape at sample points
  const auto gate_points = sample_box(fx.chart.domain(), 8, config.seed);
  try {
    for (const Vec& x : gate_points) {
      (void)shape_data(fx.chart.base(), fx.chart.u_part(x));
      (void)fx.chart.mu(x);
    }
    rep.self_test = catalog::self_test(fx, gate_points);
  } catch (const std::exception& e) {
    throw FixtureError("fixture '" + fx.label + "' failed its self-test: " + e.what());
  }
  for (const auto& st : rep.self_test) {
    if (!st.pass) {
      throw FixtureError("fixture '" + fx.label + "' failed its self-test on " + st.quantity + " (observed " +
                         json_number(st.observed) + ", expected " + json_number(st.expected) + ")");
    }
  }

  const Context ctx{config, fx, rep.samples};
  for (const auto& name : config.suites) {
    SuiteResult s;
    s.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      suite_function(name)(ctx, s);
      settle(s);
    } catch (const std::exception& e) {
      s.status = "fail";
      s.reason = std::string("numerical failure: ") + e.what();
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.passed = rep.passed && s.status != "fail";
    rep.suites.push_back(std::move(s));
  }
  return rep;
}

}  // namespace gaussmap::report
