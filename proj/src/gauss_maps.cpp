#include "gaussmap/gauss_maps.hpp"

#include <algorithm>
#include <cmath>

#include "gaussmap/dual.hpp"
#include "gaussmap/errors.hpp"
#include "gaussmap/spherical.hpp"

namespace gaussmap {

namespace sp = gaussmap::space;

namespace {

// Gamma[c](a, b) from central differences of a metric field.
std::vector<Mat> christoffel(const std::function<Mat(const Vec&)>& metric, const Vec& x, double h) {
  const auto d = x.size();
  const Mat g = metric(x);
  const Mat ginv = g.inverse();
  std::vector<Mat> dg(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    Vec up = x, dn = x;
    up(k) += h;
    dn(k) -= h;
    dg[static_cast<std::size_t>(k)] = (metric(up) - metric(dn)) / (2.0 * h);
  }
  std::vector<Mat> gamma(static_cast<std::size_t>(d), Mat::Zero(d, d));
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        double s = 0.0;
        for (Eigen::Index q = 0; q < d; ++q) {
          s += ginv(c, q) * (dg[static_cast<std::size_t>(a)](q, b) + dg[static_cast<std::size_t>(b)](q, a) -
                             dg[static_cast<std::size_t>(q)](a, b));
        }
        gamma[static_cast<std::size_t>(c)](a, b) = 0.5 * s;
      }
  return gamma;
}

// Second partial derivatives of a vector-valued map from values, index a*d + b.
std::vector<Vec> hessian_fd(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const auto d = x.size();
  const Vec f0 = f(x);
  std::vector<Vec> out(static_cast<std::size_t>(d * d));
  for (Eigen::Index a = 0; a < d; ++a) {
    Vec up = x, dn = x;
    up(a) += h;
    dn(a) -= h;
    out[static_cast<std::size_t>(a * d + a)] = (f(up) - 2.0 * f0 + f(dn)) / (h * h);
    for (Eigen::Index b = a + 1; b < d; ++b) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(a) += h; pp(b) += h;
      pm(a) += h; pm(b) -= h;
      mp(a) -= h; mp(b) += h;
      mm(a) -= h; mm(b) -= h;
      const Vec v = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      out[static_cast<std::size_t>(a * d + b)] = v;
      out[static_cast<std::size_t>(b * d + a)] = v;
    }
  }
  return out;
}

void require_conditioned(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Vec ev = es.eigenvalues();
  if (ev(0) <= 0.0 || ev(ev.size() - 1) / ev(0) > 1e8) {
    throw IllConditioned("induced metric is ill-conditioned");
  }
}

double lambda_q(const OrientedPlane& q, const Vec& x, const Vec& y) {
  return sp::plane_symplectic(q, sp::plane_tangent_projection(q, x), sp::plane_tangent_projection(q, y));
}

}  // namespace

Vec oriented_normal(const Vec& p, const Mat& tangent) {
  const auto dim = p.size();
  if (tangent.cols() != dim - 2) throw DimensionError("oriented_normal needs a hypersurface tangent frame");
  Mat a(dim, dim - 1);
  a.col(0) = p;
  a.rightCols(dim - 2) = tangent;
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat q = qr.householderQ();
  Vec nu = q.col(dim - 1);
  Mat full(dim, dim);
  full.leftCols(dim - 1) = a;
  full.col(dim - 1) = nu;
  if (full.determinant() < 0.0) nu = -nu;
  return nu;
}

UnitNormalChart::UnitNormalChart(ImmersionChart base, FrameFn frame, int sheet)
    : base_(std::move(base)), frame_(std::move(frame)), sheet_(sheet) {
  if (sheet != 1 && sheet != -1) throw DimensionError("normal sheet must be +1 or -1");
  domain_ = base_.domain();
  if (!frame_ && n() - m() > 1) seeds_ = normal_seed_order(base_);
  const int k = fiber_dim();
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k) {
      domain_.push_back({0.0, M_PI, false});
    } else {
      domain_.push_back({0.0, 2.0 * M_PI, true});
    }
  }
}

bool UnitNormalChart::contains(const Vec& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto& iv = domain_[static_cast<std::size_t>(i)];
    if (iv.periodic) continue;
    if (x(i) < iv.lo - 1e-12 || x(i) > iv.hi + 1e-12) return false;
  }
  return true;
}

void UnitNormalChart::require_in_domain(const Vec& x, const char* what) const {
  if (x.size() != dim()) throw DimensionError(std::string(what) + ": unit normal chart point has wrong dimension");
  if (!contains(x)) throw DomainError(std::string(what) + ": point outside the unit normal chart domain");
}

Mat UnitNormalChart::frame(const Vec& u) const {
  const int codim = n() - m();
  if (frame_) {
    Mat f = frame_(u);
    if (f.rows() != n() + 1 || f.cols() != codim) throw DimensionError("normal frame function has wrong shape");
    return f;
  }
  const Vec p = base_.value(u);
  const Mat jac = base_.jacobian(u);
  if (codim == 1) return oriented_normal(p, jac);
  return normal_frame(p, jac, seeds_);
}

Vec UnitNormalChart::fiber_direction(const Vec& s) const {
  if (fiber_dim() == 0) return Vec::Constant(1, static_cast<double>(sheet_));
  std::vector<double> ss(s.data(), s.data() + s.size());
  const auto w = spherical(ss);
  return Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
}

Mat UnitNormalChart::fiber_jacobian(const Vec& s) const {
  const int k = fiber_dim();
  Mat out(k + 1, k);
  for (int b = 0; b < k; ++b) {
    std::vector<Dual> ss(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) ss[static_cast<std::size_t>(i)] = Dual(s(i), i == b ? 1.0 : 0.0);
    const auto w = spherical(ss);
    for (int i = 0; i <= k; ++i) out(i, b) = w[static_cast<std::size_t>(i)].d;
  }
  return out;
}

Vec UnitNormalChart::xi(const Vec& x) const {
  if (x.size() != dim()) throw DimensionError("unit normal chart point has wrong dimension");
  return frame(u_part(x)) * fiber_direction(s_part(x));
}

UnitSpherePoint UnitNormalChart::mu(const Vec& x) const {
  return UnitSpherePoint(base_.value(u_part(x)), xi(x));
}

OrientedPlane UnitNormalChart::gamma(const Vec& x) const { return OrientedPlane(mu(x)); }

std::vector<TangentUS> UnitNormalChart::dmu(const Vec& x) const {
  const Vec u = u_part(x);
  const UnitSpherePoint base = mu(x);
  const Mat jac = base_.jacobian(u);
  const double h = base_.steps().first;
  std::vector<TangentUS> out;
  for (int a = 0; a < m(); ++a) {
    Vec up = x, dn = x;
    up(a) += h;
    dn(a) -= h;
    out.push_back({base, jac.col(a), (xi(up) - xi(dn)) / (2.0 * h)});
  }
  if (fiber_dim() > 0) {
    const Mat n = frame(u);
    const Mat fj = fiber_jacobian(s_part(x));
    for (int b = 0; b < fiber_dim(); ++b) {
      out.push_back({base, Vec::Zero(n.rows()), n * fj.col(b)});
    }
  }
  return out;
}

Mat UnitNormalChart::dgamma(const Vec& x) const {
  const auto z = dmu(x);
  const int dimq = sp::lambda2_dim(n() + 1);
  Mat out(dimq, dim());
  for (int a = 0; a < dim(); ++a) out.col(a) = sp::push_to_plane(z[static_cast<std::size_t>(a)]);
  return out;
}

Mat induced_metric(const UnitNormalChart& chart, const Vec& x) {
  const auto z = chart.dmu(x);
  const int d = chart.dim();
  Mat g(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      g(a, b) = sp::sasaki_metric(z[static_cast<std::size_t>(a)], z[static_cast<std::size_t>(b)]);
      g(b, a) = g(a, b);
    }
  return g;
}

MetricIdentity horizontal_metric_identity(const UnitNormalChart& chart, const Vec& x) {
  const int m = chart.m();
  const Vec u = chart.u_part(x);
  const ShapeData sd = shape_data(chart.base(), u);
  const Vec xi = chart.xi(x);
  const auto z = chart.dmu(x);
  // Vertical projection: normal directions orthogonal to xi.
  const Mat pv = sd.normal_frame * sd.normal_frame.transpose() - xi * xi.transpose();
  std::vector<TangentUS> zh;
  for (int i = 0; i < m; ++i) {
    const TangentUS& zi = z[static_cast<std::size_t>(i)];
    zh.push_back({zi.base, zi.pdot, zi.vdot - pv * zi.vdot});
  }
  MetricIdentity out;
  out.lhs.resize(m, m);
  Mat b(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out.lhs(i, j) = sp::sasaki_metric(zh[static_cast<std::size_t>(i)], zh[static_cast<std::size_t>(j)]);
      b(i, j) = sd.ii(i, j).dot(xi);
    }
  out.rhs = sd.metric + b * sd.metric_inv * b;
  out.residual = (out.lhs - out.rhs).cwiseAbs().maxCoeff();
  return out;
}

AdaptedFrame adapted_frame(const UnitNormalChart& chart, const Vec& x, const ShapeData& sd) {
  const int m = chart.m();
  const Vec xi = chart.xi(x);
  AdaptedFrame fr;
  fr.base = chart.mu(x);
  fr.m = m;
  Mat b(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) b(i, j) = sd.ii(i, j).dot(xi);
  b = 0.5 * (b + b.transpose());
  fr.shape = sd.metric_inv * b;
  fr.horizontal_metric = sd.metric + b * sd.metric_inv * b;
  fr.horizontal_metric = 0.5 * (fr.horizontal_metric + fr.horizontal_metric.transpose());
  const Eigen::LLT<Mat> llt(fr.horizontal_metric);
  if (llt.info() != Eigen::Success) throw IllConditioned("horizontal metric is not positive definite");
  const Mat l = llt.matrixL();
  fr.coefficients = l.transpose().inverse();

  const Mat& tangent = sd.tangent;
  const Mat lift_v = -tangent * fr.shape;  // columns: -f_*(A d_k)
  for (int i = 0; i < m; ++i) {
    const Vec pd = tangent * fr.coefficients.col(i);
    const Vec vd = lift_v * fr.coefficients.col(i);
    fr.e.push_back({fr.base, pd, vd});
    fr.e_bar.push_back(pd);
  }
  if (chart.fiber_dim() > 0) {
    const Mat n = chart.frame(chart.u_part(x));
    const Mat fj = chart.fiber_jacobian(chart.s_part(x));
    Mat w = n * fj;
    for (int b2 = 0; b2 < w.cols(); ++b2) {
      for (int pass = 0; pass < 2; ++pass)
        for (int c = 0; c < b2; ++c) w.col(b2) -= w.col(c).dot(w.col(b2)) * w.col(c);
      w.col(b2).normalize();
      fr.e.push_back({fr.base, Vec::Zero(n.rows()), w.col(b2)});
      fr.e_bar.push_back(-w.col(b2));
    }
  }
  for (const auto& e : fr.e) fr.je.push_back(sp::complex_structure(e));
  return fr;
}

AdaptedFrame adapted_frame(const UnitNormalChart& chart, const Vec& x) {
  return adapted_frame(chart, x, shape_data(chart.base(), chart.u_part(x)));
}

Vec mean_curvature_formula(const AdaptedFrame& frame, const ShapeData& sd, const Vec& xi) {
  if (!sd.nabla_second_fundamental) throw Error("mean_curvature_formula needs covariant derivative data");
  const int m = frame.m;
  const int total = static_cast<int>(frame.e.size());
  const Mat ginv = frame.horizontal_metric.inverse();
  Vec comps(total);
  std::vector<double> traced(static_cast<std::size_t>(m), 0.0);
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) s += ginv(b, c) * sd.nabla_ii(a, b, c).dot(xi);
    traced[static_cast<std::size_t>(a)] = s;
  }
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int a = 0; a < m; ++a) s += frame.coefficients(a, i) * traced[static_cast<std::size_t>(a)];
    comps(i) = -s;
  }
  Vec trace_ii = Vec::Zero(sd.point.size());
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) trace_ii += ginv(b, c) * sd.ii(b, c);
  for (int beta = m; beta < total; ++beta) comps(beta) = trace_ii.dot(frame.e_bar[static_cast<std::size_t>(beta)]);
  return comps;
}

Vec mean_curvature_formula(const UnitNormalChart& chart, const Vec& x) {
  chart.require_in_domain(x, "mean_curvature_formula");
  const ShapeData sd = shape_data(chart.base(), chart.u_part(x), true);
  return mean_curvature_formula(adapted_frame(chart, x, sd), sd, chart.xi(x));
}

Vec reconstruct_h_gamma(const AdaptedFrame& frame, const Vec& components) {
  if (components.size() != static_cast<Eigen::Index>(frame.je.size())) {
    throw DimensionError("component count does not match the adapted frame");
  }
  Vec h = Vec::Zero(sp::lambda2_dim(frame.base.ambient_dim()));
  for (std::size_t a = 0; a < frame.je.size(); ++a) {
    h += components(static_cast<Eigen::Index>(a)) * sp::push_to_plane(frame.je[a]);
  }
  return h;
}

Vec mean_curvature_oracle(const UnitNormalChart& chart, const Vec& x) {
  chart.require_in_domain(x, "mean_curvature_oracle");
  const int d = chart.dim();
  const Steps& st = chart.base().steps();
  const OrientedPlane q = chart.gamma(x);
  const Mat g = induced_metric(chart, x);
  require_conditioned(g);
  const Mat ginv = g.inverse();
  const auto gam = christoffel([&](const Vec& y) { return induced_metric(chart, y); }, x, st.metric);
  const Mat dg = chart.dgamma(x);
  const auto hess = hessian_fd([&](const Vec& y) { return chart.gamma(y).plucker(); }, x, st.value_second);
  Vec tau = Vec::Zero(dg.rows());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vec t = hess[static_cast<std::size_t>(a * d + b)];
      for (int c = 0; c < d; ++c) t -= gam[static_cast<std::size_t>(c)](a, b) * dg.col(c);
      tau += ginv(a, b) * t;
    }
  return sp::plane_tangent_projection(q, tau);
}

MeanCurvatureResult mean_curvature(const UnitNormalChart& chart, const Vec& x) {
  chart.require_in_domain(x, "mean_curvature");
  const ShapeData sd = shape_data(chart.base(), chart.u_part(x), true);
  const AdaptedFrame fr = adapted_frame(chart, x, sd);
  MeanCurvatureResult out;
  out.components = mean_curvature_formula(fr, sd, chart.xi(x));
  out.h_gamma = reconstruct_h_gamma(fr, out.components);
  out.oracle_h_gamma = mean_curvature_oracle(chart, x);
  out.residual = (out.h_gamma - out.oracle_h_gamma).norm() / (1.0 + out.oracle_h_gamma.norm());
  return out;
}

TangentUS us_tension(const UnitNormalChart& chart, const Vec& x) {
  chart.require_in_domain(x, "us_tension");
  const int d = chart.dim();
  const Steps& st = chart.base().steps();
  const UnitSpherePoint mu0 = chart.mu(x);
  const sp::BundleChart bc(mu0);
  const int big = bc.dim();
  auto coords = [&](const Vec& y) { return bc.coordinates(chart.mu(y)); };
  const Vec c0 = coords(x);
  Mat cd(big, d);
  for (int a = 0; a < d; ++a) {
    Vec up = x, dn = x;
    up(a) += st.first;
    dn(a) -= st.first;
    cd.col(a) = (coords(up) - coords(dn)) / (2.0 * st.first);
  }
  const auto hess = hessian_fd(coords, x, st.value_second);
  const Mat g = induced_metric(chart, x);
  require_conditioned(g);
  const Mat ginv = g.inverse();
  const auto gam = christoffel([&](const Vec& y) { return induced_metric(chart, y); }, x, st.metric);
  const auto big_gam = christoffel([&](const Vec& c) { return bc.metric(c); }, c0, st.metric);
  Vec tau = Vec::Zero(big);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Vec t = hess[static_cast<std::size_t>(a * d + b)];
      for (int c = 0; c < d; ++c) t -= gam[static_cast<std::size_t>(c)](a, b) * cd.col(c);
      for (int k = 0; k < big; ++k) t(k) += cd.col(a).dot(big_gam[static_cast<std::size_t>(k)] * cd.col(b));
      tau += ginv(a, b) * t;
    }
  const auto basis = bc.coordinate_vectors(c0);
  TangentUS out{mu0, Vec::Zero(mu0.ambient_dim()), Vec::Zero(mu0.ambient_dim())};
  for (int k = 0; k < big; ++k) {
    out.pdot += tau(k) * basis[static_cast<std::size_t>(k)].pdot;
    out.vdot += tau(k) * basis[static_cast<std::size_t>(k)].vdot;
  }
  out.base = basis.front().base;
  return out;
}

double legendrian_residual(const UnitNormalChart& chart, const Vec& x) {
  double r = 0.0;
  for (const auto& z : chart.dmu(x)) r = std::max(r, std::abs(sp::theta(z)));
  return r;
}

double lagrangian_residual(const UnitNormalChart& chart, const Vec& x) {
  const OrientedPlane q = chart.gamma(x);
  const Mat dg = chart.dgamma(x);
  double r = 0.0;
  for (int a = 0; a < dg.cols(); ++a)
    for (int b = a + 1; b < dg.cols(); ++b) r = std::max(r, std::abs(lambda_q(q, dg.col(a), dg.col(b))));
  return r;
}

TheoremResiduals theorem_main_residual(const UnitNormalChart& chart, const Vec& x, double conformal_tol) {
  chart.require_in_domain(x, "theorem_main_residual");
  const int m = chart.m();
  const Vec u = chart.u_part(x);
  const ImmersionChart& base = chart.base();
  const ShapeData sd = shape_data(base, u);
  double worst = 0.0;
  for (const Vec& probe : conformal_probe_normals(sd)) {
    const Mat a = shape_operator_orthonormal(sd, probe);
    const Mat a2 = a * a;
    worst = std::max(worst, (a2 - (a2.trace() / m) * Mat::Identity(m, m)).norm());
  }
  if (worst > conformal_tol) {
    throw NotConformal("shape form is not conformal (residual " + std::to_string(worst) + ")");
  }
  const Vec xi = chart.xi(x);
  const Mat a = shape_operator_orthonormal(sd, xi);
  const double r2 = (a * a).trace() / m;
  const AdaptedFrame fr = adapted_frame(chart, x, sd);
  const OrientedPlane q = chart.gamma(x);
  const Vec hg = mean_curvature_oracle(chart, x);

  // Normal derivative of H_f along each base coordinate.
  const double h = base.steps().third;
  std::vector<Vec> dh(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Vec up = u, dn = u;
    up(k) += h;
    dn(k) -= h;
    dh[static_cast<std::size_t>(k)] =
        sd.normal_projection((shape_data(base, up).mean_curvature - shape_data(base, dn).mean_curvature) / (2.0 * h));
  }
  TheoremResiduals out;
  out.r = std::sqrt(std::max(r2, 0.0));
  out.h_gamma_norm = hg.norm();
  for (int i = 0; i < m; ++i) {
    double nabla = 0.0;
    for (int k = 0; k < m; ++k) nabla += fr.coefficients(k, i) * dh[static_cast<std::size_t>(k)].dot(xi);
    const double lhs = lambda_q(q, hg, sp::push_to_plane(fr.e[static_cast<std::size_t>(i)]));
    const double rhs = nabla / (1.0 + r2);
    out.lhs1.push_back(lhs);
    out.rhs1.push_back(rhs);
    out.residual1 = std::max(out.residual1, std::abs(lhs - rhs));
  }
  for (std::size_t beta = static_cast<std::size_t>(m); beta < fr.e.size(); ++beta) {
    const double lhs = lambda_q(q, hg, sp::push_to_plane(fr.e[beta]));
    const double rhs = -sd.mean_curvature.dot(fr.e_bar[beta]) / (1.0 + r2);
    out.lhs2.push_back(lhs);
    out.rhs2.push_back(rhs);
    out.residual2 = std::max(out.residual2, std::abs(lhs - rhs));
  }
  return out;
}

Vec mean_curvature_form(const UnitNormalChart& chart, const Vec& x) {
  const OrientedPlane q = chart.gamma(x);
  const Vec hg = mean_curvature_oracle(chart, x);
  const Mat dg = chart.dgamma(x);
  Vec out(dg.cols());
  for (int a = 0; a < dg.cols(); ++a) out(a) = lambda_q(q, hg, dg.col(a));
  return out;
}

PalmerResult palmer_one_form(const UnitNormalChart& chart, const Vec& x, double gap_tol) {
  if (chart.fiber_dim() != 0) throw DimensionError("palmer_one_form requires a hypersurface");
  chart.require_in_domain(x, "palmer_one_form");
  const ImmersionChart& base = chart.base();
  const int m = chart.m();
  auto kappa = [&](const Vec& u) { return principal_curvatures(shape_data(base, u), chart.xi(u)); };
  PalmerResult out;
  out.kappa = kappa(x);

  // Clusters of nearly equal curvatures at the center.
  std::vector<std::pair<int, int>> clusters;  // [begin, end)
  for (int j = 0; j < m;) {
    int e = j + 1;
    while (e < m && out.kappa(e) - out.kappa(e - 1) < gap_tol) ++e;
    clusters.emplace_back(j, e);
    if (e - j > 1) out.clustered = true;
    j = e;
  }
  auto cluster_sums = [&](const Vec& k) {
    for (std::size_t c = 0; c + 1 < clusters.size(); ++c) {
      const int edge = clusters[c].second;
      if (k(edge) - k(edge - 1) < 0.5 * gap_tol) {
        throw MultiplicityCrossing("principal curvatures cross inside the difference stencil");
      }
    }
    Vec s(static_cast<Eigen::Index>(clusters.size()));
    for (std::size_t c = 0; c < clusters.size(); ++c)
      s(static_cast<Eigen::Index>(c)) = k.segment(clusters[c].first, clusters[c].second - clusters[c].first).sum();
    return s;
  };
  const Vec s0 = cluster_sums(out.kappa);
  const double h = base.steps().third;
  out.sigma = Vec::Zero(m);
  for (int a = 0; a < m; ++a) {
    Vec up = x, dn = x;
    up(a) += h;
    dn(a) -= h;
    const Vec ds = (cluster_sums(kappa(up)) - cluster_sums(kappa(dn))) / (2.0 * h);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double size = clusters[c].second - clusters[c].first;
      const double mean = s0(static_cast<Eigen::Index>(c)) / size;
      out.sigma(a) += ds(static_cast<Eigen::Index>(c)) / (1.0 + mean * mean);
    }
  }
  out.oracle = mean_curvature_form(chart, x);
  out.residual = (out.sigma - out.oracle).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace gaussmap
