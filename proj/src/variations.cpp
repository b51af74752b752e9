#include "gaussmap/variations.hpp"

#include <algorithm>
#include <cmath>

#include "gaussmap/errors.hpp"

namespace gaussmap {

namespace sp = gaussmap::space;

Vec sigma_V(const DeformationFamily& family, double t, const Vec& x) {
  const double dt = family.t_step;
  if (t - dt < family.interval.lo || t + dt > family.interval.hi) {
    throw DomainError("sigma_V: t is too close to the end of the deformation interval");
  }
  const UnitNormalChart chart = family.at(t);
  chart.require_in_domain(x, "sigma_V");
  const OrientedPlane q = chart.gamma(x);
  const Vec v = sp::plane_tangent_projection(
      q, (family.at(t + dt).gamma(x).plucker() - family.at(t - dt).gamma(x).plucker()) / (2.0 * dt));
  const Mat dg = chart.dgamma(x);
  Vec out(dg.cols());
  for (int a = 0; a < dg.cols(); ++a) out(a) = sp::plane_symplectic(q, v, sp::plane_tangent_projection(q, dg.col(a)));
  return out;
}

double exterior_derivative_residual(const FormFn& form, const Vec& x, double h) {
  const auto d = x.size();
  std::vector<Vec> deriv(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) {
    Vec up = x, dn = x;
    up(a) += h;
    dn(a) -= h;
    deriv[static_cast<std::size_t>(a)] = (form(up) - form(dn)) / (2.0 * h);
  }
  double r = 0.0;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a + 1; b < d; ++b)
      r = std::max(r, std::abs(deriv[static_cast<std::size_t>(a)](b) - deriv[static_cast<std::size_t>(b)](a)));
  return r;
}

ChartPath segment_path(const Vec& a, const Vec& b) {
  return {[a, b](double tau) { return Vec(a + tau * (b - a)); }, [a, b](double) { return Vec(b - a); }, {}};
}

ChartPath polyline_path(const std::vector<Vec>& points) {
  if (points.size() < 2) throw DimensionError("a polyline needs at least two points");
  const auto segs = static_cast<double>(points.size() - 1);
  auto locate = [points, segs](double tau, double& local) {
    const double s = std::clamp(tau, 0.0, 1.0) * segs;
    auto k = static_cast<std::size_t>(std::min(std::floor(s), segs - 1.0));
    local = s - static_cast<double>(k);
    return k;
  };
  std::vector<double> breaks;
  for (std::size_t k = 1; k + 1 < points.size(); ++k) breaks.push_back(static_cast<double>(k) / segs);
  return {[points, locate](double tau) {
            double l = 0.0;
            const auto k = locate(tau, l);
            return Vec(points[k] + l * (points[k + 1] - points[k]));
          },
          [points, locate, segs](double tau) {
            double l = 0.0;
            const auto k = locate(tau, l);
            return Vec(segs * (points[k + 1] - points[k]));
          },
          breaks};
}

ChartPath coordinate_loop(const std::vector<Interval>& domain, const Vec& start, int coordinate) {
  if (coordinate < 0 || coordinate >= static_cast<int>(domain.size()) || start.size() != static_cast<Eigen::Index>(domain.size())) {
    throw DimensionError("coordinate loop index out of range");
  }
  const Interval& iv = domain[static_cast<std::size_t>(coordinate)];
  if (!iv.periodic) throw DomainError("coordinate loops need a periodic coordinate");
  Vec step = Vec::Zero(start.size());
  step(coordinate) = iv.width();
  return segment_path(start, start + step);
}

void require_closed(const ChartPath& path, const std::vector<Interval>& domain) {
  const Vec a = path.point(0.0);
  const Vec b = path.point(1.0);
  if (a.size() != static_cast<Eigen::Index>(domain.size())) throw DimensionError("path dimension does not match the domain");
  for (std::size_t i = 0; i < domain.size(); ++i) {
    double diff = b(static_cast<Eigen::Index>(i)) - a(static_cast<Eigen::Index>(i));
    if (domain[i].periodic) {
      const double w = domain[i].width();
      diff -= w * std::round(diff / w);
    }
    if (std::abs(diff) > 1e-10) throw DomainError("path is not closed");
  }
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw DimensionError("quadrature order must be positive");
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      // Three-term recurrence: p1 = P_order(x), p2 = P_{order-1}(x).
      double p1 = 1.0, p2 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * x * p2 - (k - 1.0) * p3) / k;
      }
      dp = order * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
}

double path_integral(const FormFn& form, const ChartPath& path, int order, int panels) {
  if (panels < 1) throw DimensionError("panel count must be positive");
  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);
  std::vector<double> ends{0.0};
  for (double b : path.breaks)
    if (b > ends.back() && b < 1.0) ends.push_back(b);
  ends.push_back(1.0);
  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < ends.size(); ++piece) {
    const double w = (ends[piece + 1] - ends[piece]) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = ends[piece] + (k + 0.5) * w;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double tau = mid + 0.5 * w * nodes[i];
        total += 0.5 * w * weights[i] * form(path.point(tau)).dot(path.velocity(tau));
      }
    }
  }
  return total;
}

double loop_integral(const FormFn& form, const ChartPath& loop, const std::vector<Interval>& domain, int order,
                     int panels) {
  require_closed(loop, domain);
  return path_integral(form, loop, order, panels);
}

PotentialResult hamiltonian_potential(const FormFn& form, const ChartPath& first, const ChartPath& second,
                                      int order, int panels) {
  if ((first.point(0.0) - second.point(0.0)).norm() > 1e-10 || (first.point(1.0) - second.point(1.0)).norm() > 1e-10) {
    throw DomainError("potential paths must share their endpoints");
  }
  PotentialResult out;
  out.value = path_integral(form, first, order, panels);
  out.value_other = path_integral(form, second, order, panels);
  out.discrepancy = std::abs(out.value - out.value_other);
  return out;
}

double transversality_monitor(const DeformationFamily& family, double t, const std::vector<Vec>& samples) {
  const UnitNormalChart chart = family.at(t);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& x : samples) {
    Eigen::JacobiSVD<Mat> svd(chart.base().jacobian(chart.u_part(x)));
    const Vec s = svd.singularValues();
    best = std::min(best, s(s.size() - 1));
  }
  return best;
}

}  // namespace gaussmap
