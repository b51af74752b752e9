#pragma once

// Embedded models of S^n, the unit sphere bundle US^n = {(p,v) : |p| = |v| = 1,
// p.v = 0} and the Grassmannian Q of oriented 2-planes, realized in the
// Pluecker space Lambda^2 R^{n+1} with basis e_i ^ e_j (i < j, lexicographic).

#include <Eigen/Dense>

#include "gaussmap/lie_algebra.hpp"

namespace gaussmap::space {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct SpherePoint {
  Vec p;
  SpherePoint() = default;
  explicit SpherePoint(const Vec& x);  // renormalizes
};

/// Orthonormal pair (p, v): a unit tangent vector v at p.
class UnitSpherePoint {
 public:
  UnitSpherePoint() = default;
  /// Re-orthonormalizes inputs that are within 1e-6 of the bundle; farther
  /// inputs are rejected.
  UnitSpherePoint(const Vec& p, const Vec& v);

  const Vec& p() const { return p_; }
  const Vec& v() const { return v_; }
  int ambient_dim() const { return static_cast<int>(p_.size()); }
  int n() const { return ambient_dim() - 1; }

 private:
  Vec p_, v_;
};

/// Tangent vector to US^n at `base` in ambient coordinates R^{n+1} x R^{n+1}.
struct TangentUS {
  UnitSpherePoint base;
  Vec pdot, vdot;

  /// max(|pdot.p|, |vdot.v|, |pdot.v + p.vdot|)
  double tangency_residual() const;
  TangentUS operator+(const TangentUS& o) const;
  TangentUS operator-(const TangentUS& o) const;
  TangentUS operator*(double s) const;
};

class OrientedPlane {
 public:
  OrientedPlane() = default;
  explicit OrientedPlane(const UnitSpherePoint& rep);

  const UnitSpherePoint& rep() const { return rep_; }
  const Vec& plucker() const { return plucker_; }
  bool equals(const OrientedPlane& o, double tol = 1e-10) const;

 private:
  UnitSpherePoint rep_;
  Vec plucker_;
};

// Lambda^2 R^N helpers.
int lambda2_dim(int ambient_dim);
int lambda2_index(int i, int j, int ambient_dim);
Vec wedge(const Vec& a, const Vec& b);
/// Inverse of the coordinate isomorphism: the skew matrix a b^T - b a^T.
Mat lambda2_to_matrix(const Vec& w, int ambient_dim);

UnitSpherePoint group_act(const Mat& g, const UnitSpherePoint& x);
TangentUS group_act(const Mat& g, const TangentUS& z);

double theta(const TangentUS& z);
double theta(const UnitSpherePoint& x, const TangentUS& z);

/// Covariant derivative of the direction along the base curve, vdot - (p.vdot) p.
Vec covariant_direction(const TangentUS& z);
double sasaki_metric(const TangentUS& z, const TangentUS& w);
/// lambda = -d theta, evaluated as pdot_z . vdot_w - pdot_w . vdot_z.
double symplectic(const TangentUS& z, const TangentUS& w);

TangentUS reeb(const UnitSpherePoint& x);
/// Horizontal lift (parallel direction) of a base tangent vector.
TangentUS horizontal_lift(const UnitSpherePoint& x, const Vec& base_vector);
/// Vertical tangent (0, w) for w orthogonal to p and v.
TangentUS vertical_vector(const UnitSpherePoint& x, const Vec& w);
/// Complex structure: kills the Reeb part, (pdot, vdot) -> (-vdot, pdot) on the
/// contact distribution.
TangentUS complex_structure(const TangentUS& z);

UnitSpherePoint geodesic_flow(const UnitSpherePoint& x, double t);
SpherePoint project_base(const UnitSpherePoint& x);       // (p, v) -> p
SpherePoint project_direction(const UnitSpherePoint& x);  // (p, v) -> v
OrientedPlane project_plane(const UnitSpherePoint& x);
/// Differential of project_plane: pdot ^ v + p ^ vdot.
Vec push_to_plane(const TangentUS& z);

/// Orthonormal basis of T_q Q in Lambda^2 as columns: a_k ^ v for k < n-1,
/// then p ^ a_k, where a_k spans {p, v}^perp.
Mat plane_tangent_basis(const OrientedPlane& q);
/// Orthogonal projection of a Lambda^2 vector onto T_q Q.
Vec plane_tangent_projection(const OrientedPlane& q, const Vec& x);

double plane_metric(const OrientedPlane& q, const Vec& x, const Vec& y);
Vec plane_complex_structure(const OrientedPlane& q, const Vec& x);
double plane_symplectic(const OrientedPlane& q, const Vec& x, const Vec& y);

/// Rotation g in SO(n+1) with g e_{n+1} = p and g e_n = v, moving the base
/// point (o, nu0 o) to x.
Mat adapted_rotation(const UnitSpherePoint& x);
/// The element eta of the bundle tangent space p = n + m0 + s with
/// z = g (eta o, eta nu0 o), g = adapted_rotation(z.base).
lie::AlgebraElement tangent_to_algebra(const TangentUS& z);

/// Local chart of US^n around a reference point:
///   p(c) = normalize(p0 + sum_i x_i a_i),
///   v(c) = normalize(proj_{p(c)^perp}(v0 + sum_j y_j b_j)),
/// with a = (v0, b_1..b_{n-1}) and b spanning {p0, v0}^perp; c = (x, y) in R^{2n-1}.
class BundleChart {
 public:
  explicit BundleChart(const UnitSpherePoint& center);

  int dim() const { return 2 * n_ - 1; }
  UnitSpherePoint point(const Vec& c) const;
  /// Coordinate vectors at c, exact through forward-mode duals.
  std::vector<TangentUS> coordinate_vectors(const Vec& c) const;
  /// Sasaki metric in chart coordinates.
  Mat metric(const Vec& c) const;
  Vec coordinates(const UnitSpherePoint& x) const;

 private:
  int n_;
  Vec p0_, v0_;
  Mat b_;  // (n+1) x (n-1)
};

}  // namespace gaussmap::space
