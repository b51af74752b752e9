#pragma once

#include <vector>

#include "gaussmap/dual.hpp"

namespace gaussmap {

/// Unit vector in R^{k+1} with spherical angles s_1..s_k:
/// (cos s1, sin s1 cos s2, ..., sin s1 ... sin s_{k-1} cos s_k, sin s1 ... sin s_k).
template <class T>
std::vector<T> spherical(const std::vector<T>& s) {
  const std::size_t k = s.size();
  std::vector<T> w(k + 1);
  T prod(1.0);
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = prod * cos(s[i]);
    prod = prod * sin(s[i]);
  }
  w[k] = prod;
  return w;
}

}  // namespace gaussmap
