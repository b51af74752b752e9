#pragma once

// Linear algebra in so(n+1) with the invariant inner product <a,b> = -tr(ab)/2,
// the base element nu0 and the splitting so(n+1) = isotropy + vertical +
// horizontal + reeb adapted to the base point (o, nu0 o) of US^n.

#include <vector>

#include <Eigen/Dense>

namespace gaussmap::lie {

/// Skew-symmetric (n+1)x(n+1) matrix. Inputs are symmetrized on construction.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(const Eigen::MatrixXd& m);

  static AlgebraElement zero(int dim);
  /// E_ij = e_i e_j^T - e_j e_i^T with 0-based indices.
  static AlgebraElement elementary(int dim, int i, int j);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(double s) const;

 private:
  Eigen::MatrixXd m_;
};

inline AlgebraElement operator*(double s, const AlgebraElement& a) { return a * s; }

double inner_product(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Generator of geodesic flow at the base point; rotates e_n into -e_{n+1}.
AlgebraElement nu0(int n);

enum class Subspace { Isotropy, Vertical, Horizontal, Reeb };

/// Orthonormal elementary basis of so(n+1), lexicographic in (i,j), with the
/// subspace of each element and the derived index sets.
struct SplitBasis {
  int n = 0;
  std::vector<AlgebraElement> basis;
  std::vector<Subspace> tag;
  std::vector<int> isotropy, vertical, horizontal, reeb;  // h, n, m0, s
  std::vector<int> sphere_isotropy;                        // k = h + n
  std::vector<int> sphere_tangent;                         // m = m0 + s
  std::vector<int> bundle_tangent;                         // p = n + m0 + s
  std::vector<int> contact;                                // q = n + m0
};

SplitBasis make_split_basis(int n);

struct SplitComponents {
  AlgebraElement isotropy, vertical, horizontal, reeb;
  AlgebraElement sum() const { return isotropy + vertical + horizontal + reeb; }
};

SplitComponents split(const AlgebraElement& a, const SplitBasis& basis);

/// Orthogonal projection onto the span of the listed basis elements.
AlgebraElement project(const AlgebraElement& a, const SplitBasis& basis,
                       const std::vector<int>& indices);

/// [nu0, a]; a complex structure on the contact part.
AlgebraElement J0(const AlgebraElement& a);

/// <nu0, [a, b]>.
double lambda0(const AlgebraElement& a, const AlgebraElement& b);

/// Matrix exponential by Taylor series with scaling and squaring.
Eigen::MatrixXd exp(const AlgebraElement& a);

/// g a g^T.
AlgebraElement adjoint(const Eigen::MatrixXd& g, const AlgebraElement& a);

}  // namespace gaussmap::lie
