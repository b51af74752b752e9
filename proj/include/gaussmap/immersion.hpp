#pragma once

// Extrinsic geometry of a parametric immersion f : U in R^m -> S^n in R^{n+1}.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaussmap/dual.hpp"
#include "gaussmap/numeric.hpp"

namespace gaussmap {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;
  double width() const { return hi - lo; }
};

class ImmersionChart {
 public:
  using ValueFn = std::function<Vec(const Vec&)>;
  /// Value and directional derivative along `dir` at `u`.
  using DirectionalFn = std::function<void(const Vec& u, const Vec& dir, Vec& value, Vec& deriv)>;

  ImmersionChart() = default;
  ImmersionChart(int m, int n, std::vector<Interval> domain, ValueFn value,
                 DirectionalFn directional = {});

  int m() const { return m_; }
  int n() const { return n_; }
  const std::vector<Interval>& domain() const { return domain_; }
  DerivativeMode mode() const { return mode_; }
  double fd_step() const { return fd_step_; }
  const Steps& steps() const { return steps_; }
  const ValueFn& value_fn() const { return value_; }
  const DirectionalFn& directional_fn() const { return directional_; }

  /// Falls back to finite differences when no directional evaluator exists.
  ImmersionChart& set_mode(DerivativeMode mode);
  ImmersionChart& set_fd_step(double h);
  ImmersionChart& set_steps(const Steps& s);

  Vec value(const Vec& u) const;
  /// (n+1) x m matrix of partial derivatives.
  Mat jacobian(const Vec& u) const;
  bool contains(const Vec& u) const;
  /// Throws DomainError when u is outside the domain (periodic coordinates are free).
  void require_in_domain(const Vec& u, const char* what) const;

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<Interval> domain_;
  ValueFn value_;
  DirectionalFn directional_;
  DerivativeMode mode_ = DerivativeMode::FiniteDifference;
  double fd_step_ = 1e-5;
  Steps steps_;
};

/// Chart from a generic callable `f(const std::vector<T>&) -> std::vector<T>`
/// instantiated for double and Dual; forward-dual derivative mode.
template <class F>
ImmersionChart make_chart(int m, int n, std::vector<Interval> domain, F f) {
  auto value = [f](const Vec& u) {
    std::vector<double> uu(u.data(), u.data() + u.size());
    const std::vector<double> r = f(uu);
    return Vec(Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  auto directional = [f](const Vec& u, const Vec& dir, Vec& val, Vec& der) {
    std::vector<Dual> uu(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) uu[static_cast<std::size_t>(i)] = Dual(u(i), dir(i));
    const std::vector<Dual> r = f(uu);
    val.resize(static_cast<Eigen::Index>(r.size()));
    der.resize(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      val(static_cast<Eigen::Index>(i)) = r[i].v;
      der(static_cast<Eigen::Index>(i)) = r[i].d;
    }
  };
  return ImmersionChart(m, n, std::move(domain), value, directional);
}

/// Orthonormal basis of the normal space of T_pM in T_pS^n: Gram-Schmidt on the
/// seeds e_1..e_{n+1} after removing p and tangent components, skipping seeds
/// with residual below 1e-6.
Mat normal_frame(const Vec& p, const Mat& tangent);
/// As above with the seeds e_k taken in the order `seeds` (0-based).
Mat normal_frame(const Vec& p, const Mat& tangent, const std::vector<int>& seeds);
/// Seed order for a chart: pivoted QR of the normal projector at the center of
/// the domain box, so the leading seeds are far from tangent there.
std::vector<int> normal_seed_order(const ImmersionChart& chart);

struct ShapeData {
  Vec u;
  Vec point;
  Mat tangent;       // (n+1) x m, columns d_i f
  Mat metric;        // g_ij
  Mat metric_inv;
  Mat normal_frame;  // (n+1) x (n-m)
  std::vector<Vec> second_fundamental_ambient;  // II(d_i, d_j) at index i*m + j
  Tensor3 second_fundamental;                   // (i, j, alpha) in the normal frame
  Vec mean_curvature;                           // H_f = g^ij II_ij
  std::optional<Tensor4> nabla_second_fundamental;  // (k, i, j, alpha)
  std::vector<Vec> nabla_ambient;                   // (k*m + i)*m + j

  int m() const { return static_cast<int>(tangent.cols()); }
  const Vec& ii(int i, int j) const { return second_fundamental_ambient[static_cast<std::size_t>(i * m() + j)]; }
  const Vec& nabla_ii(int k, int i, int j) const {
    return nabla_ambient[static_cast<std::size_t>((k * m() + i) * m() + j)];
  }
  /// Orthogonal projection onto the normal space.
  Vec normal_projection(const Vec& x) const { return normal_frame * (normal_frame.transpose() * x); }
};

ShapeData shape_data(const ImmersionChart& chart, const Vec& u, bool with_nabla = false);

/// Coordinate matrix A^i_j of the shape operator for unit normal xi:
/// g(A X, Y) = <II(X, Y), xi>.
Mat shape_operator(const ShapeData& sd, const Vec& xi);

/// Principal curvatures (ascending) for unit normal xi.
Vec principal_curvatures(const ShapeData& sd, const Vec& xi);

/// Shape operator in a g-orthonormal basis (symmetric matrix).
Mat shape_operator_orthonormal(const ShapeData& sd, const Vec& xi);

/// Covariant derivative of II: derivative of the ambient II along d_k,
/// projected to the normal space, minus Christoffel corrections from the FD
/// derivative of g. Steps from the chart's third-derivative step.
Tensor4 nabla_II(const ImmersionChart& chart, const Vec& u);

struct ConformalSample {
  Vec u;
  Vec xi;
  double r = 0.0;
  double residual = 0.0;
};

struct ConformalReport {
  std::vector<ConformalSample> samples;
  bool is_conformal = true;
  double max_residual = 0.0;
};

/// Unit normals at which A(xi)^2 = r^2 I is checked: every frame vector and
/// every normalized pairwise sum, which suffices by polarization.
std::vector<Vec> conformal_probe_normals(const ShapeData& sd);

ConformalReport conformal_report(const ImmersionChart& chart, const std::vector<Vec>& points,
                                 double tol = 1e-6);

/// Deterministic uniform samples in a domain box. Non-periodic coordinates
/// are shrunk by `margin` times the interval width on each side.
std::vector<Vec> sample_box(const std::vector<Interval>& domain, std::size_t count, std::uint64_t seed,
                            double margin = 0.05);

}  // namespace gaussmap
