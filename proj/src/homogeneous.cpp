#include "gaussmap/homogeneous.hpp"

#include <cmath>
#include <vector>

#include "gaussmap/dual.hpp"
#include "gaussmap/errors.hpp"

namespace gaussmap::space {

namespace {

constexpr double kBundleSnapTol = 1e-6;
constexpr double kTangentTol = 1e-10;

void require_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) throw DimensionError(std::string(what) + ": dimension mismatch");
}

void require_same_base(const UnitSpherePoint& x, const UnitSpherePoint& y) {
  if (x.p().size() != y.p().size() || (x.p() - y.p()).norm() > 1e-12 ||
      (x.v() - y.v()).norm() > 1e-12) {
    throw DimensionError("tangent vectors are based at different points");
  }
}

// Orthonormal basis (columns) of the orthogonal complement of span(cols of q),
// q assumed orthonormal. Seeds e_1..e_N in order.
Mat complement_basis(const Mat& q, int want) {
  const auto dim = q.rows();
  Mat out(dim, want);
  Mat known = q;
  int found = 0;
  for (int s = 0; s < dim && found < want; ++s) {
    Vec e = Vec::Unit(dim, s);
    for (int pass = 0; pass < 2; ++pass) e -= known * (known.transpose() * e);
    const double nrm = e.norm();
    if (nrm < 1e-6) continue;
    e /= nrm;
    out.col(found++) = e;
    known.conservativeResize(Eigen::NoChange, known.cols() + 1);
    known.col(known.cols() - 1) = e;
  }
  if (found < want) throw DimensionError("could not complete orthonormal basis");
  return out;
}

}  // namespace

SpherePoint::SpherePoint(const Vec& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw DimensionError("cannot normalize zero vector to a sphere point");
  p = x / n;
}

UnitSpherePoint::UnitSpherePoint(const Vec& p, const Vec& v) {
  require_dim(p, v, "UnitSpherePoint");
  if (p.size() < 3) throw DimensionError("US^n requires n >= 2");
  if (std::abs(p.norm() - 1.0) > kBundleSnapTol || std::abs(v.norm() - 1.0) > kBundleSnapTol ||
      std::abs(p.dot(v)) > kBundleSnapTol) {
    throw DimensionError("(p, v) is not an orthonormal pair");
  }
  p_ = p.normalized();
  Vec w = v - v.dot(p_) * p_;
  v_ = w.normalized();
}

double TangentUS::tangency_residual() const {
  const Vec& p = base.p();
  const Vec& v = base.v();
  return std::max({std::abs(pdot.dot(p)), std::abs(vdot.dot(v)),
                   std::abs(pdot.dot(v) + p.dot(vdot))});
}

TangentUS TangentUS::operator+(const TangentUS& o) const {
  return {base, pdot + o.pdot, vdot + o.vdot};
}
TangentUS TangentUS::operator-(const TangentUS& o) const {
  return {base, pdot - o.pdot, vdot - o.vdot};
}
TangentUS TangentUS::operator*(double s) const { return {base, s * pdot, s * vdot}; }

OrientedPlane::OrientedPlane(const UnitSpherePoint& rep)
    : rep_(rep), plucker_(wedge(rep.p(), rep.v()).normalized()) {}

bool OrientedPlane::equals(const OrientedPlane& o, double tol) const {
  return plucker_.size() == o.plucker_.size() && (plucker_ - o.plucker_).norm() <= tol;
}

int lambda2_dim(int ambient_dim) { return ambient_dim * (ambient_dim - 1) / 2; }

int lambda2_index(int i, int j, int ambient_dim) {
  return i * ambient_dim - i * (i + 1) / 2 + (j - i - 1);
}

Vec wedge(const Vec& a, const Vec& b) {
  require_dim(a, b, "wedge");
  const int dim = static_cast<int>(a.size());
  Vec w(lambda2_dim(dim));
  int k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) w(k++) = a(i) * b(j) - a(j) * b(i);
  return w;
}

Mat lambda2_to_matrix(const Vec& w, int ambient_dim) {
  Mat m = Mat::Zero(ambient_dim, ambient_dim);
  int k = 0;
  for (int i = 0; i < ambient_dim; ++i)
    for (int j = i + 1; j < ambient_dim; ++j) {
      m(i, j) = w(k);
      m(j, i) = -w(k);
      ++k;
    }
  return m;
}

UnitSpherePoint group_act(const Mat& g, const UnitSpherePoint& x) {
  const auto dim = x.p().size();
  if (g.rows() != dim || g.cols() != dim) throw DimensionError("group_act dimension mismatch");
  if ((g.transpose() * g - Mat::Identity(dim, dim)).lpNorm<Eigen::Infinity>() > 1e-10 ||
      g.determinant() < 0.0) {
    throw DimensionError("group element is not in SO(n+1)");
  }
  return {g * x.p(), g * x.v()};
}

TangentUS group_act(const Mat& g, const TangentUS& z) {
  return {group_act(g, z.base), g * z.pdot, g * z.vdot};
}

double theta(const TangentUS& z) { return z.pdot.dot(z.base.v()); }

double theta(const UnitSpherePoint& x, const TangentUS& z) {
  require_same_base(x, z.base);
  return theta(z);
}

Vec covariant_direction(const TangentUS& z) {
  return z.vdot - z.base.p().dot(z.vdot) * z.base.p();
}

double sasaki_metric(const TangentUS& z, const TangentUS& w) {
  require_same_base(z.base, w.base);
  return z.pdot.dot(w.pdot) + covariant_direction(z).dot(covariant_direction(w));
}

double symplectic(const TangentUS& z, const TangentUS& w) {
  require_same_base(z.base, w.base);
  return z.pdot.dot(w.vdot) - w.pdot.dot(z.vdot);
}

TangentUS reeb(const UnitSpherePoint& x) { return {x, x.v(), -x.p()}; }

TangentUS horizontal_lift(const UnitSpherePoint& x, const Vec& base_vector) {
  const Vec t = base_vector - base_vector.dot(x.p()) * x.p();
  return {x, t, -t.dot(x.v()) * x.p()};
}

TangentUS vertical_vector(const UnitSpherePoint& x, const Vec& w) {
  Vec c = w - w.dot(x.p()) * x.p();
  c -= c.dot(x.v()) * x.v();
  return {x, Vec::Zero(w.size()), c};
}

TangentUS complex_structure(const TangentUS& z) {
  const double th = theta(z);
  const Vec pc = z.pdot - th * z.base.v();
  const Vec vc = z.vdot + th * z.base.p();
  return {z.base, -vc, pc};
}

UnitSpherePoint geodesic_flow(const UnitSpherePoint& x, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {c * x.p() + s * x.v(), -s * x.p() + c * x.v()};
}

SpherePoint project_base(const UnitSpherePoint& x) { return SpherePoint(x.p()); }
SpherePoint project_direction(const UnitSpherePoint& x) { return SpherePoint(x.v()); }
OrientedPlane project_plane(const UnitSpherePoint& x) { return OrientedPlane(x); }

Vec push_to_plane(const TangentUS& z) {
  return wedge(z.pdot, z.base.v()) + wedge(z.base.p(), z.vdot);
}

Mat plane_tangent_basis(const OrientedPlane& q) {
  const Vec& p = q.rep().p();
  const Vec& v = q.rep().v();
  const int dim = static_cast<int>(p.size());
  const int k = dim - 2;
  Mat pv(dim, 2);
  pv.col(0) = p;
  pv.col(1) = v;
  const Mat a = complement_basis(pv, k);
  Mat basis(lambda2_dim(dim), 2 * k);
  for (int i = 0; i < k; ++i) {
    basis.col(i) = wedge(a.col(i), v);
    basis.col(k + i) = wedge(p, a.col(i));
  }
  return basis;
}

Vec plane_tangent_projection(const OrientedPlane& q, const Vec& x) {
  const Mat b = plane_tangent_basis(q);
  return b * (b.transpose() * x);
}

namespace {

Vec tangent_coords(const OrientedPlane& q, const Mat& b, const Vec& x) {
  if (x.size() != b.rows()) throw DimensionError("Lambda^2 vector has wrong dimension");
  Vec c = b.transpose() * x;
  const double off = (x - b * c).norm();
  if (off > kTangentTol * std::max(1.0, x.norm()) + 1e-12) {
    throw DimensionError("vector is not tangent to Q (normal residual " + std::to_string(off) +
                         ")");
  }
  (void)q;
  return c;
}

Vec rotate_coords(const Vec& c) {
  const auto k = c.size() / 2;
  Vec r(c.size());
  r.head(k) = -c.tail(k);
  r.tail(k) = c.head(k);
  return r;
}

}  // namespace

double plane_metric(const OrientedPlane& q, const Vec& x, const Vec& y) {
  const Mat b = plane_tangent_basis(q);
  return tangent_coords(q, b, x).dot(tangent_coords(q, b, y));
}

Vec plane_complex_structure(const OrientedPlane& q, const Vec& x) {
  const Mat b = plane_tangent_basis(q);
  return b * rotate_coords(tangent_coords(q, b, x));
}

double plane_symplectic(const OrientedPlane& q, const Vec& x, const Vec& y) {
  const Mat b = plane_tangent_basis(q);
  return rotate_coords(tangent_coords(q, b, x)).dot(tangent_coords(q, b, y));
}

Mat adapted_rotation(const UnitSpherePoint& x) {
  const int dim = x.ambient_dim();
  Mat pv(dim, 2);
  pv.col(0) = x.p();
  pv.col(1) = x.v();
  Mat g(dim, dim);
  g.leftCols(dim - 2) = complement_basis(pv, dim - 2);
  g.col(dim - 2) = x.v();
  g.col(dim - 1) = x.p();
  if (g.determinant() < 0.0) g.col(0) = -g.col(0);
  return g;
}

lie::AlgebraElement tangent_to_algebra(const TangentUS& z) {
  const int dim = z.base.ambient_dim();
  const int n = dim - 1;
  const Mat g = adapted_rotation(z.base);
  const Vec pp = g.transpose() * z.pdot;
  const Vec vv = g.transpose() * z.vdot;
  // eta e_n = pp and eta e_{n-1} = vv (0-based), with eta in span(E_{i,n}, E_{i,n-1}).
  Mat eta = Mat::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    eta(i, n) = pp(i);
    eta(n, i) = -pp(i);
  }
  for (int i = 0; i + 1 < n; ++i) {
    eta(i, n - 1) = vv(i);
    eta(n - 1, i) = -vv(i);
  }
  return lie::AlgebraElement(eta);
}

// ---------------------------------------------------------------------------

BundleChart::BundleChart(const UnitSpherePoint& center)
    : n_(center.n()), p0_(center.p()), v0_(center.v()) {
  Mat pv(p0_.size(), 2);
  pv.col(0) = p0_;
  pv.col(1) = v0_;
  b_ = complement_basis(pv, n_ - 1);
}

namespace {

template <class T>
void bundle_chart_eval(const Vec& p0, const Vec& v0, const Mat& b, const std::vector<T>& c,
                       std::vector<T>& p, std::vector<T>& v) {
  using std::sqrt;
  const auto dim = p0.size();
  const auto k = b.cols();
  p.assign(static_cast<std::size_t>(dim), T(0.0));
  v.assign(static_cast<std::size_t>(dim), T(0.0));
  for (Eigen::Index r = 0; r < dim; ++r) {
    T pr = T(p0(r)) + c[0] * v0(r);
    T vr = T(v0(r));
    for (Eigen::Index j = 0; j < k; ++j) {
      pr += c[static_cast<std::size_t>(1 + j)] * b(r, j);
      vr += c[static_cast<std::size_t>(k + 1 + j)] * b(r, j);
    }
    p[static_cast<std::size_t>(r)] = pr;
    v[static_cast<std::size_t>(r)] = vr;
  }
  T pn(0.0);
  for (const auto& x : p) pn += x * x;
  pn = sqrt(pn);
  for (auto& x : p) x /= pn;
  T pv(0.0);
  for (Eigen::Index r = 0; r < dim; ++r) pv += p[static_cast<std::size_t>(r)] * v[static_cast<std::size_t>(r)];
  for (Eigen::Index r = 0; r < dim; ++r) v[static_cast<std::size_t>(r)] -= pv * p[static_cast<std::size_t>(r)];
  T vn(0.0);
  for (const auto& x : v) vn += x * x;
  vn = sqrt(vn);
  for (auto& x : v) x /= vn;
}

}  // namespace

UnitSpherePoint BundleChart::point(const Vec& c) const {
  if (c.size() != dim()) throw DimensionError("bundle chart coordinate dimension");
  std::vector<double> cc(c.data(), c.data() + c.size()), p, v;
  bundle_chart_eval(p0_, v0_, b_, cc, p, v);
  return {Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size())),
          Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()))};
}

std::vector<TangentUS> BundleChart::coordinate_vectors(const Vec& c) const {
  const UnitSpherePoint x = point(c);
  std::vector<TangentUS> out;
  const auto dim = p0_.size();
  for (int k = 0; k < this->dim(); ++k) {
    std::vector<Dual> cd(static_cast<std::size_t>(c.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) cd[static_cast<std::size_t>(i)] = Dual(c(i), i == k ? 1.0 : 0.0);
    std::vector<Dual> p, v;
    bundle_chart_eval(p0_, v0_, b_, cd, p, v);
    TangentUS z{x, Vec(dim), Vec(dim)};
    for (Eigen::Index r = 0; r < dim; ++r) {
      z.pdot(r) = p[static_cast<std::size_t>(r)].d;
      z.vdot(r) = v[static_cast<std::size_t>(r)].d;
    }
    out.push_back(z);
  }
  return out;
}

Mat BundleChart::metric(const Vec& c) const {
  const auto z = coordinate_vectors(c);
  Mat h(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) h(i, j) = sasaki_metric(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)]);
  return h;
}

Vec BundleChart::coordinates(const UnitSpherePoint& x) const {
  const Vec& p = x.p();
  const double denom = p0_.dot(p);
  if (denom < 1e-3) throw DomainError("point is outside the bundle chart");
  Vec c(dim());
  c(0) = v0_.dot(p) / denom;
  for (int j = 0; j < n_ - 1; ++j) c(1 + j) = b_.col(j).dot(p) / denom;
  // v0 + sum y_j b_j = alpha v + beta p
  const auto dim = p0_.size();
  Mat m(dim, dim);
  m.col(0) = x.v();
  m.col(1) = p;
  m.rightCols(n_ - 1) = -b_;
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw DomainError("point is outside the bundle chart");
  const Vec sol = lu.solve(v0_);
  if (sol(0) <= 0.0) throw DomainError("point is outside the bundle chart");
  c.tail(n_ - 1) = sol.tail(n_ - 1);
  return c;
}

}  // namespace gaussmap::space
