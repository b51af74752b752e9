#pragma once

// Spherical Gauss map mu : UM^perp -> US^n and geodesic Gauss map
// gamma = pi_Q o mu : UM^perp -> Q, with the adapted frame, the mean curvature
// component formulas and finite-difference tension oracles.

#include <functional>
#include <vector>

#include "gaussmap/homogeneous.hpp"
#include "gaussmap/immersion.hpp"

namespace gaussmap {

using space::OrientedPlane;
using space::TangentUS;
using space::UnitSpherePoint;

/// Chart of the unit normal bundle. Coordinates are x = (u, s): u from the
/// base chart and s spherical angles on the unit sphere of the normal space,
/// taken over an orthonormal normal frame N(u).
class UnitNormalChart {
 public:
  using FrameFn = std::function<Mat(const Vec& u)>;

  UnitNormalChart() = default;
  /// Without `frame`, hypersurfaces use the oriented normal (det[f, df, xi] > 0)
  /// and higher codimension uses the seeded Gram-Schmidt frame, seeds ordered
  /// by normal_seed_order.
  /// `sheet` (+1 or -1) selects the normal of a hypersurface.
  explicit UnitNormalChart(ImmersionChart base, FrameFn frame = {}, int sheet = 1);

  const ImmersionChart& base() const { return base_; }
  ImmersionChart& base() { return base_; }
  int m() const { return base_.m(); }
  int n() const { return base_.n(); }
  int fiber_dim() const { return n() - m() - 1; }
  int dim() const { return n() - 1; }
  int sheet() const { return sheet_; }
  const std::vector<Interval>& domain() const { return domain_; }
  bool contains(const Vec& x) const;
  void require_in_domain(const Vec& x, const char* what) const;

  Vec u_part(const Vec& x) const { return x.head(m()); }
  Vec s_part(const Vec& x) const { return x.tail(fiber_dim()); }

  /// (n+1) x (n-m) orthonormal normal frame at u.
  Mat frame(const Vec& u) const;
  /// Unit vector in R^{n-m} with spherical angles s.
  Vec fiber_direction(const Vec& s) const;
  /// (n-m) x fiber_dim derivative of fiber_direction.
  Mat fiber_jacobian(const Vec& s) const;

  Vec xi(const Vec& x) const;
  UnitSpherePoint mu(const Vec& x) const;
  OrientedPlane gamma(const Vec& x) const;
  /// dmu(d_a) for every chart direction a.
  std::vector<TangentUS> dmu(const Vec& x) const;
  /// Pluecker columns dgamma(d_a).
  Mat dgamma(const Vec& x) const;

 private:
  ImmersionChart base_;
  FrameFn frame_;
  std::vector<int> seeds_;
  int sheet_ = 1;
  std::vector<Interval> domain_;
};

/// Oriented unit normal of a hypersurface chart: the unit vector nu with
/// nu orthogonal to f and df and det[f, d_1 f, ..., d_m f, nu] > 0.
Vec oriented_normal(const Vec& p, const Mat& tangent);

/// G_ab = h(dmu(d_a), dmu(d_b)).
Mat induced_metric(const UnitNormalChart& chart, const Vec& x);

/// Both sides of the horizontal metric identity
/// h(Z, W) = g(Zbar, Wbar) + g(A Zbar, A Wbar) on the base coordinate
/// directions: `lhs` from the horizontal part of dmu, `rhs` from II.
struct MetricIdentity {
  Mat lhs;
  Mat rhs;
  double residual = 0.0;
};
MetricIdentity horizontal_metric_identity(const UnitNormalChart& chart, const Vec& x);

struct AdaptedFrame {
  UnitSpherePoint base;
  int m = 0;
  std::vector<TangentUS> e;   // E_1..E_m, then E_beta
  std::vector<TangentUS> je;  // J E_A
  std::vector<Vec> e_bar;     // dpi(E_i) for horizontal, dpi(J E_beta) for vertical
  Mat coefficients;           // Ebar_i = sum_k C_ki d_k f
  Mat horizontal_metric;      // g + B g^-1 B in base coordinates
  Mat shape;                  // A(xi) = g^-1 B
};

AdaptedFrame adapted_frame(const UnitNormalChart& chart, const Vec& x, const ShapeData& sd);
AdaptedFrame adapted_frame(const UnitNormalChart& chart, const Vec& x);

/// h(H_mu, J E_A) for A = 1..n-1 from II and its covariant derivative.
Vec mean_curvature_formula(const UnitNormalChart& chart, const Vec& x);
Vec mean_curvature_formula(const AdaptedFrame& frame, const ShapeData& sd, const Vec& xi);

/// sum_A c_A dpi_Q(J E_A)
Vec reconstruct_h_gamma(const AdaptedFrame& frame, const Vec& components);

/// Tension field of gamma computed from finite differences of gamma and of
/// its induced metric, projected to T_q Q.
Vec mean_curvature_oracle(const UnitNormalChart& chart, const Vec& x);

struct MeanCurvatureResult {
  Vec components;
  Vec h_gamma;
  Vec oracle_h_gamma;
  double residual = 0.0;  // |h_gamma - oracle| / (1 + |oracle|)
};
MeanCurvatureResult mean_curvature(const UnitNormalChart& chart, const Vec& x);

/// Tension of mu as a map into (US^n, h), computed in a bundle chart.
TangentUS us_tension(const UnitNormalChart& chart, const Vec& x);

/// max_a |theta(dmu(d_a))|
double legendrian_residual(const UnitNormalChart& chart, const Vec& x);
/// max_ab |lambda_Q(dgamma(d_a), dgamma(d_b))|
double lagrangian_residual(const UnitNormalChart& chart, const Vec& x);

struct TheoremResiduals {
  double residual1 = 0.0;  // horizontal equation
  double residual2 = 0.0;  // vertical equation (0 for hypersurfaces)
  std::vector<double> lhs1, rhs1, lhs2, rhs2;
  double r = 0.0;
  double h_gamma_norm = 0.0;
};

/// Throws NotConformal unless A(xi)^2 = r^2 I holds at u for every probe normal.
TheoremResiduals theorem_main_residual(const UnitNormalChart& chart, const Vec& x,
                                       double conformal_tol = 1e-6);

/// lambda_Q(H_gamma, dgamma(d_a)) with the oracle H_gamma.
Vec mean_curvature_form(const UnitNormalChart& chart, const Vec& x);

struct PalmerResult {
  Vec sigma;       // sum_j d kappa_j / (1 + kappa_j^2)
  Vec oracle;      // mean_curvature_form
  Vec kappa;
  double residual = 0.0;
  bool clustered = false;  // symmetric-function fallback used
};

/// Hypersurfaces only. Eigenvalues closer than `gap_tol` are differentiated
/// through their cluster sum; a cluster change across the stencil throws
/// MultiplicityCrossing.
PalmerResult palmer_one_form(const UnitNormalChart& chart, const Vec& x, double gap_tol = 1e-4);

}  // namespace gaussmap
