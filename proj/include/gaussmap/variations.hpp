#pragma once

// Deformation families f_t with compatible lifts mu_t, the variation form
// sigma_V = lambda_Q(V_t, dgamma_t) and period / exactness checks.

#include <functional>
#include <vector>

#include "gaussmap/gauss_maps.hpp"

namespace gaussmap {

struct DeformationFamily {
  Interval interval;  // admissible t
  std::function<UnitNormalChart(double t)> at;
  double t_step = 1e-4;
};

/// A covector field on a chart of UM^perp.
using FormFn = std::function<Vec(const Vec& x)>;

/// sigma_V(d_a) = lambda_Q(V_t, dgamma_t(d_a)) with V_t a central difference in t.
Vec sigma_V(const DeformationFamily& family, double t, const Vec& x);

/// max over coordinate planes of |d_a s_b - d_b s_a|, central differences.
double exterior_derivative_residual(const FormFn& form, const Vec& x, double h);

/// Parametrized path x(tau), tau in [0, 1].
struct ChartPath {
  std::function<Vec(double)> point;
  std::function<Vec(double)> velocity;
  std::vector<double> breaks;  // interior tau where the velocity jumps
};

ChartPath segment_path(const Vec& a, const Vec& b);
/// Concatenation of straight segments through `points`, uniform in tau per segment.
ChartPath polyline_path(const std::vector<Vec>& points);
/// Loop that runs once around the periodic coordinate `coordinate` from `start`.
ChartPath coordinate_loop(const std::vector<Interval>& domain, const Vec& start, int coordinate);

/// Throws DomainError unless the path closes up to 1e-10, modulo periods.
void require_closed(const ChartPath& path, const std::vector<Interval>& domain);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre integral of form(x(tau)) . x'(tau) over [0, 1],
/// with `panels` panels on each smooth piece between breaks.
double path_integral(const FormFn& form, const ChartPath& path, int order = 8, int panels = 16);
/// As path_integral after checking closure.
double loop_integral(const FormFn& form, const ChartPath& loop, const std::vector<Interval>& domain,
                     int order = 8, int panels = 16);

struct PotentialResult {
  double value = 0.0;        // along the first path
  double value_other = 0.0;  // along the second path
  double discrepancy = 0.0;
};
/// Paths must share endpoints (within 1e-10).
PotentialResult hamiltonian_potential(const FormFn& form, const ChartPath& first, const ChartPath& second,
                                      int order = 8, int panels = 16);

/// min over samples of the smallest singular value of df_t. The fibre directions of
/// d(pi o mu_t) vanish identically and are left out.
double transversality_monitor(const DeformationFamily& family, double t, const std::vector<Vec>& samples);

}  // namespace gaussmap
