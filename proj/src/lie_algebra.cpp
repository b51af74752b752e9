#include "gaussmap/lie_algebra.hpp"

#include <cmath>

#include "gaussmap/errors.hpp"

namespace gaussmap::lie {

namespace {

void require_same_dim(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("so(n+1) dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

AlgebraElement::AlgebraElement(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("algebra element must be a non-empty square matrix");
  }
  m_ = 0.5 * (m - m.transpose());
}

AlgebraElement AlgebraElement::zero(int dim) {
  return AlgebraElement(Eigen::MatrixXd::Zero(dim, dim));
}

AlgebraElement AlgebraElement::elementary(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw DimensionError("elementary skew index out of range");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m(i, j) = 1.0;
  m(j, i) = -1.0;
  AlgebraElement e;
  e.m_ = m;
  return e;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same_dim(*this, o);
  AlgebraElement r;
  r.m_ = m_ + o.m_;
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same_dim(*this, o);
  AlgebraElement r;
  r.m_ = m_ - o.m_;
  return r;
}

AlgebraElement AlgebraElement::operator*(double s) const {
  AlgebraElement r;
  r.m_ = s * m_;
  return r;
}

double inner_product(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_dim(a, b);
  // -tr(ab)/2 = sum_ij a_ij b_ij / 2 for skew a, b.
  return 0.5 * a.matrix().cwiseProduct(b.matrix()).sum();
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_dim(a, b);
  const auto& x = a.matrix();
  const auto& y = b.matrix();
  return AlgebraElement(Eigen::MatrixXd(x * y - y * x));
}

AlgebraElement nu0(int n) {
  if (n < 2) throw DimensionError("nu0 requires n >= 2");
  return AlgebraElement::elementary(n + 1, n - 1, n);
}

SplitBasis make_split_basis(int n) {
  if (n < 2) throw DimensionError("split basis requires n >= 2");
  SplitBasis sb;
  sb.n = n;
  const int dim = n + 1;
  // 1-based: isotropy E_ij (j <= n-1), vertical E_{i,n}, horizontal E_{i,n+1}
  // (i <= n-1), reeb E_{n,n+1}.
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const int idx = static_cast<int>(sb.basis.size());
      sb.basis.push_back(AlgebraElement::elementary(dim, i, j));
      Subspace s;
      if (j <= n - 2) {
        s = Subspace::Isotropy;
        sb.isotropy.push_back(idx);
      } else if (j == n - 1) {
        s = Subspace::Vertical;
        sb.vertical.push_back(idx);
      } else if (i <= n - 2) {
        s = Subspace::Horizontal;
        sb.horizontal.push_back(idx);
      } else {
        s = Subspace::Reeb;
        sb.reeb.push_back(idx);
      }
      sb.tag.push_back(s);
    }
  }
  auto join = [](std::initializer_list<const std::vector<int>*> parts) {
    std::vector<int> out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  sb.sphere_isotropy = join({&sb.isotropy, &sb.vertical});
  sb.sphere_tangent = join({&sb.horizontal, &sb.reeb});
  sb.bundle_tangent = join({&sb.vertical, &sb.horizontal, &sb.reeb});
  sb.contact = join({&sb.vertical, &sb.horizontal});
  return sb;
}

AlgebraElement project(const AlgebraElement& a, const SplitBasis& basis,
                       const std::vector<int>& indices) {
  if (a.dim() != basis.n + 1) throw DimensionError("projection dimension mismatch");
  AlgebraElement out = AlgebraElement::zero(a.dim());
  for (int idx : indices) {
    const auto& e = basis.basis[static_cast<std::size_t>(idx)];
    out = out + inner_product(a, e) * e;
  }
  return out;
}

SplitComponents split(const AlgebraElement& a, const SplitBasis& basis) {
  return {project(a, basis, basis.isotropy), project(a, basis, basis.vertical),
          project(a, basis, basis.horizontal), project(a, basis, basis.reeb)};
}

AlgebraElement J0(const AlgebraElement& a) {
  if (a.dim() < 3) throw DimensionError("J0 requires n >= 2");
  return bracket(nu0(a.dim() - 1), a);
}

double lambda0(const AlgebraElement& a, const AlgebraElement& b) {
  return inner_product(nu0(a.dim() - 1), bracket(a, b));
}

Eigen::MatrixXd exp(const AlgebraElement& a) {
  const Eigen::MatrixXd& x = a.matrix();
  const double norm = x.lpNorm<Eigen::Infinity>() * x.rows();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd y = x / std::ldexp(1.0, squarings);

  const auto dim = x.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 1; k <= 30; ++k) {
    term = term * y / static_cast<double>(k);
    result += term;
    if (term.lpNorm<Eigen::Infinity>() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

AlgebraElement adjoint(const Eigen::MatrixXd& g, const AlgebraElement& a) {
  if (g.rows() != a.dim() || g.cols() != a.dim()) throw DimensionError("adjoint dimension mismatch");
  return AlgebraElement(Eigen::MatrixXd(g * a.matrix() * g.transpose()));
}

}  // namespace gaussmap::lie
