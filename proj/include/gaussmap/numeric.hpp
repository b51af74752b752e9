#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace gaussmap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense row-major tensor of small rank.
template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::array<int, Rank> dims) : dims_(dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    data_.assign(n, 0.0);
  }
  template <class... I>
  double& operator()(I... idx) { return data_[offset({static_cast<int>(idx)...})]; }
  template <class... I>
  double operator()(I... idx) const { return data_[offset({static_cast<int>(idx)...})]; }
  int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int k = 0; k < Rank; ++k) o = o * static_cast<std::size_t>(dims_[static_cast<std::size_t>(k)]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
    return o;
  }
  std::array<int, Rank> dims_{};
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

enum class DerivativeMode { FiniteDifference, ForwardDual };

/// Finite-difference steps derived from a base step. In forward-dual mode
/// first derivatives of the chart are exact, so second derivatives difference
/// first-derivative data at the base step and third derivatives use
/// step^(2/3). Value-only second differences use step^(4/5).
struct Steps {
  double first = 1e-5;         // central differences of smooth values
  double second = 1e-5;        // differences of exact (or FD) first derivatives
  double third = 4.6e-4;       // differences of second-derivative data
  double value_second = 1e-4;  // second differences of values
  double metric = 4.6e-4;      // differences of FD first-derivative data
  bool richardson = false;

  static Steps derive(double fd_step, DerivativeMode mode);
  /// Every stencil uses the same step; for convergence studies.
  static Steps uniform(double h);
};

/// max |a_ij - a_ji|
inline double asymmetry(const Mat& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace gaussmap
