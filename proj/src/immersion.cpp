#include "gaussmap/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gaussmap/errors.hpp"

namespace gaussmap {

ImmersionChart::ImmersionChart(int m, int n, std::vector<Interval> domain, ValueFn value,
                               DirectionalFn directional)
    : m_(m),
      n_(n),
      domain_(std::move(domain)),
      value_(std::move(value)),
      directional_(std::move(directional)) {
  if (m < 1 || n < 2 || m >= n) throw DimensionError("immersion chart requires 1 <= m < n, n >= 2");
  if (static_cast<int>(domain_.size()) != m) throw DimensionError("domain box must have m intervals");
  mode_ = directional_ ? DerivativeMode::ForwardDual : DerivativeMode::FiniteDifference;
  steps_ = Steps::derive(fd_step_, mode_);
}

ImmersionChart& ImmersionChart::set_mode(DerivativeMode mode) {
  mode_ = (mode == DerivativeMode::ForwardDual && !directional_) ? DerivativeMode::FiniteDifference : mode;
  steps_ = Steps::derive(fd_step_, mode_);
  return *this;
}

ImmersionChart& ImmersionChart::set_fd_step(double h) {
  if (!(h > 0.0) || h > 0.1) throw DimensionError("fd_step must lie in (0, 0.1]");
  fd_step_ = h;
  steps_ = Steps::derive(fd_step_, mode_);
  return *this;
}

ImmersionChart& ImmersionChart::set_steps(const Steps& s) {
  steps_ = s;
  return *this;
}

bool ImmersionChart::contains(const Vec& u) const {
  if (u.size() != m_) return false;
  for (int i = 0; i < m_; ++i) {
    const auto& iv = domain_[static_cast<std::size_t>(i)];
    if (iv.periodic) continue;
    if (u(i) < iv.lo - 1e-12 || u(i) > iv.hi + 1e-12) return false;
  }
  return true;
}

void ImmersionChart::require_in_domain(const Vec& u, const char* what) const {
  if (u.size() != m_) throw DimensionError(std::string(what) + ": chart point has wrong dimension");
  if (!contains(u)) throw DomainError(std::string(what) + ": point outside the chart domain");
}

Vec ImmersionChart::value(const Vec& u) const {
  if (u.size() != m_) throw DimensionError("chart point has wrong dimension");
  Vec f = value_(u);
  if (f.size() != n_ + 1) throw DimensionError("chart returned a vector of wrong length");
  return f;
}

Mat ImmersionChart::jacobian(const Vec& u) const {
  if (u.size() != m_) throw DimensionError("chart point has wrong dimension");
  Mat jac(n_ + 1, m_);
  if (mode_ == DerivativeMode::ForwardDual) {
    Vec val, der;
    for (int i = 0; i < m_; ++i) {
      directional_(u, Vec::Unit(m_, i), val, der);
      jac.col(i) = der;
    }
    return jac;
  }
  const double h = steps_.first;
  for (int i = 0; i < m_; ++i) {
    Vec up = u, dn = u;
    up(i) += h;
    dn(i) -= h;
    jac.col(i) = (value_(up) - value_(dn)) / (2.0 * h);
  }
  return jac;
}

Mat normal_frame(const Vec& p, const Mat& tangent) {
  std::vector<int> seeds(static_cast<std::size_t>(p.size()));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = static_cast<int>(i);
  return normal_frame(p, tangent, seeds);
}

Mat normal_frame(const Vec& p, const Mat& tangent, const std::vector<int>& seeds) {
  const auto dim = p.size();
  const auto m = tangent.cols();
  const auto want = dim - 1 - m;
  Mat known(dim, 0);
  auto absorb = [&](Vec e) {
    for (int pass = 0; pass < 2; ++pass) e -= known * (known.transpose() * e);
    const double nrm = e.norm();
    if (nrm < 1e-6) return false;
    known.conservativeResize(Eigen::NoChange, known.cols() + 1);
    known.col(known.cols() - 1) = e / nrm;
    return true;
  };
  absorb(p);
  for (Eigen::Index i = 0; i < m; ++i) absorb(tangent.col(i));
  if (known.cols() != m + 1) throw DegenerateImmersion("tangent frame is rank deficient");
  Mat frame(dim, want);
  Eigen::Index found = 0;
  for (std::size_t k = 0; k < seeds.size() && found < want; ++k) {
    if (seeds[k] < 0 || seeds[k] >= dim) throw DimensionError("normal frame seed out of range");
    if (absorb(Vec::Unit(dim, seeds[k]))) frame.col(found++) = known.col(known.cols() - 1);
  }
  if (found < want) throw DegenerateImmersion("could not complete the normal frame");
  return frame;
}

std::vector<int> normal_seed_order(const ImmersionChart& chart) {
  const auto dim = static_cast<Eigen::Index>(chart.n() + 1);
  Vec center(chart.m());
  for (int i = 0; i < chart.m(); ++i) {
    const auto& iv = chart.domain()[static_cast<std::size_t>(i)];
    center(i) = 0.5 * (iv.lo + iv.hi);
  }
  const Vec p = chart.value(center);
  const Mat t = chart.jacobian(center);
  Mat known(dim, t.cols() + 1);
  known << p, t;
  const Eigen::HouseholderQR<Mat> qr(known);
  const Mat q = qr.householderQ() * Mat::Identity(dim, known.cols());
  const Mat proj = Mat::Identity(dim, dim) - q * q.transpose();
  const Eigen::ColPivHouseholderQR<Mat> piv(proj);
  std::vector<int> order;
  for (Eigen::Index k = 0; k < dim; ++k) order.push_back(piv.colsPermutation().indices()(k));
  return order;
}

namespace {

void check_rank(const Mat& jac) {
  Eigen::JacobiSVD<Mat> svd(jac);
  const Vec s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) < 1e-8 * s(0)) {
    throw DegenerateImmersion("Jacobian is rank deficient (singular values " +
                              std::to_string(s(0)) + ", " + std::to_string(s(s.size() - 1)) + ")");
  }
}

void require_stencil(const ImmersionChart& chart, const Vec& u, int i, double h) {
  const auto& iv = chart.domain()[static_cast<std::size_t>(i)];
  if (iv.periodic) return;
  if (u(i) - h < iv.lo - 1e-12 || u(i) + h > iv.hi + 1e-12) {
    throw DomainError("finite-difference stencil leaves the chart domain");
  }
}

// Shape data without covariant derivative.
ShapeData basic_shape(const ImmersionChart& chart, const Vec& u) {
  const int m = chart.m();
  ShapeData sd;
  sd.u = u;
  sd.point = chart.value(u);
  if (std::abs(sd.point.norm() - 1.0) > 1e-10) {
    throw Error("chart does not map into the unit sphere (|f| = " + std::to_string(sd.point.norm()) + ")");
  }
  sd.tangent = chart.jacobian(u);
  check_rank(sd.tangent);
  sd.metric = sd.tangent.transpose() * sd.tangent;
  sd.metric_inv = sd.metric.inverse();
  sd.normal_frame = normal_frame(sd.point, sd.tangent);

  const double h = chart.steps().second;
  std::vector<Mat> jp(static_cast<std::size_t>(m)), jm(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    require_stencil(chart, u, j, h);
    Vec up = u, dn = u;
    up(j) += h;
    dn(j) -= h;
    jp[static_cast<std::size_t>(j)] = chart.jacobian(up);
    jm[static_cast<std::size_t>(j)] = chart.jacobian(dn);
  }
  const int codim = static_cast<int>(sd.normal_frame.cols());
  sd.second_fundamental_ambient.assign(static_cast<std::size_t>(m * m), Vec());
  sd.second_fundamental = Tensor3({m, m, codim});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Vec fij = (jp[static_cast<std::size_t>(j)].col(i) - jm[static_cast<std::size_t>(j)].col(i)) / (2.0 * h);
      const Vec fji = (jp[static_cast<std::size_t>(i)].col(j) - jm[static_cast<std::size_t>(i)].col(j)) / (2.0 * h);
      const Vec ii = sd.normal_projection(0.5 * (fij + fji));
      sd.second_fundamental_ambient[static_cast<std::size_t>(i * m + j)] = ii;
      for (int a = 0; a < codim; ++a) sd.second_fundamental(i, j, a) = ii.dot(sd.normal_frame.col(a));
    }
  }
  sd.mean_curvature = Vec::Zero(sd.point.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sd.mean_curvature += sd.metric_inv(i, j) * sd.ii(i, j);
  return sd;
}

struct NablaParts {
  std::vector<Vec> d_ii;  // (k*m + i)*m + j
  std::vector<Mat> d_g;   // per k
};

NablaParts nabla_parts(const ImmersionChart& chart, const Vec& u, double h) {
  const int m = chart.m();
  NablaParts out;
  out.d_ii.assign(static_cast<std::size_t>(m * m * m), Vec());
  out.d_g.assign(static_cast<std::size_t>(m), Mat());
  for (int k = 0; k < m; ++k) {
    require_stencil(chart, u, k, h + chart.steps().second);
    Vec up = u, dn = u;
    up(k) += h;
    dn(k) -= h;
    const ShapeData sp = basic_shape(chart, up);
    const ShapeData sm = basic_shape(chart, dn);
    out.d_g[static_cast<std::size_t>(k)] = (sp.metric - sm.metric) / (2.0 * h);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.d_ii[static_cast<std::size_t>((k * m + i) * m + j)] = (sp.ii(i, j) - sm.ii(i, j)) / (2.0 * h);
  }
  return out;
}

void attach_nabla(const ImmersionChart& chart, ShapeData& sd) {
  const int m = chart.m();
  const double h = chart.steps().third;
  NablaParts parts = nabla_parts(chart, sd.u, h);
  if (chart.steps().richardson) {
    const NablaParts half = nabla_parts(chart, sd.u, 0.5 * h);
    for (std::size_t q = 0; q < parts.d_ii.size(); ++q)
      parts.d_ii[q] = (4.0 * half.d_ii[q] - parts.d_ii[q]) / 3.0;
    for (std::size_t q = 0; q < parts.d_g.size(); ++q)
      parts.d_g[q] = (4.0 * half.d_g[q] - parts.d_g[q]) / 3.0;
  }
  // Gamma^l_{ki} = g^{lq} (d_k g_qi + d_i g_qk - d_q g_ki) / 2
  std::vector<double> christoffel(static_cast<std::size_t>(m * m * m), 0.0);
  auto gam = [&](int l, int k, int i) -> double& {
    return christoffel[static_cast<std::size_t>((l * m + k) * m + i)];
  };
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int q = 0; q < m; ++q) {
          s += sd.metric_inv(l, q) *
               (parts.d_g[static_cast<std::size_t>(k)](q, i) + parts.d_g[static_cast<std::size_t>(i)](q, k) -
                parts.d_g[static_cast<std::size_t>(q)](k, i));
        }
        gam(l, k, i) = 0.5 * s;
      }
  const int codim = static_cast<int>(sd.normal_frame.cols());
  Tensor4 t({m, m, m, codim});
  sd.nabla_ambient.assign(static_cast<std::size_t>(m * m * m), Vec());
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vec v = sd.normal_projection(parts.d_ii[static_cast<std::size_t>((k * m + i) * m + j)]);
        for (int l = 0; l < m; ++l) v -= gam(l, k, i) * sd.ii(l, j) + gam(l, k, j) * sd.ii(i, l);
        sd.nabla_ambient[static_cast<std::size_t>((k * m + i) * m + j)] = v;
        for (int a = 0; a < codim; ++a) t(k, i, j, a) = v.dot(sd.normal_frame.col(a));
      }
  sd.nabla_second_fundamental = std::move(t);
}

}  // namespace

ShapeData shape_data(const ImmersionChart& chart, const Vec& u, bool with_nabla) {
  chart.require_in_domain(u, "shape_data");
  ShapeData sd = basic_shape(chart, u);
  if (with_nabla) attach_nabla(chart, sd);
  return sd;
}

Mat shape_operator(const ShapeData& sd, const Vec& xi) {
  if (xi.size() != sd.point.size()) throw DimensionError("normal vector has wrong dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-8 || (xi - sd.normal_projection(xi)).norm() > 1e-8) {
    throw DimensionError("shape_operator requires a unit normal vector");
  }
  const int m = sd.m();
  Mat b(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) b(i, j) = sd.ii(i, j).dot(xi);
  return sd.metric_inv * b;
}

Mat shape_operator_orthonormal(const ShapeData& sd, const Vec& xi) {
  const Mat a = shape_operator(sd, xi);
  const Eigen::LLT<Mat> llt(sd.metric);
  const Mat l = llt.matrixL();
  // L^T A L^{-T} is symmetric since g A is.
  const Mat s = l.transpose() * a * l.transpose().inverse();
  return 0.5 * (s + s.transpose());
}

Vec principal_curvatures(const ShapeData& sd, const Vec& xi) {
  Eigen::SelfAdjointEigenSolver<Mat> es(shape_operator_orthonormal(sd, xi));
  return es.eigenvalues();
}

Tensor4 nabla_II(const ImmersionChart& chart, const Vec& u) {
  return *shape_data(chart, u, true).nabla_second_fundamental;
}

std::vector<Vec> conformal_probe_normals(const ShapeData& sd) {
  std::vector<Vec> out;
  const auto codim = sd.normal_frame.cols();
  for (Eigen::Index a = 0; a < codim; ++a) out.push_back(sd.normal_frame.col(a));
  for (Eigen::Index a = 0; a < codim; ++a)
    for (Eigen::Index b = a + 1; b < codim; ++b)
      out.push_back((sd.normal_frame.col(a) + sd.normal_frame.col(b)) / std::sqrt(2.0));
  return out;
}

ConformalReport conformal_report(const ImmersionChart& chart, const std::vector<Vec>& points, double tol) {
  if (points.empty()) throw DimensionError("conformal_report needs a non-empty sample plan");
  ConformalReport rep;
  const int m = chart.m();
  for (const Vec& u : points) {
    const ShapeData sd = shape_data(chart, u);
    for (const Vec& xi : conformal_probe_normals(sd)) {
      const Mat a = shape_operator_orthonormal(sd, xi);
      const Mat a2 = a * a;
      const double r2 = a2.trace() / m;
      const double res = (a2 - r2 * Mat::Identity(m, m)).norm();
      rep.samples.push_back({u, xi, std::sqrt(std::max(r2, 0.0)), res});
      rep.max_residual = std::max(rep.max_residual, res);
    }
  }
  rep.is_conformal = rep.max_residual < tol;
  return rep;
}

std::vector<Vec> sample_box(const std::vector<Interval>& domain, std::size_t count, std::uint64_t seed,
                            double margin) {
  std::mt19937_64 rng(seed);
  // Explicit conversion keeps the stream identical across standard libraries.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec x(static_cast<Eigen::Index>(domain.size()));
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const Interval& iv = domain[i];
      const double pad = iv.periodic ? 0.0 : margin * iv.width();
      x(static_cast<Eigen::Index>(i)) = iv.lo + pad + unit() * (iv.width() - 2.0 * pad);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace gaussmap
