#include "gaussmap/numeric.hpp"

namespace gaussmap {

Steps Steps::derive(double fd_step, DerivativeMode mode) {
  Steps s;
  s.first = fd_step;
  s.value_second = std::pow(fd_step, 0.8);
  s.metric = std::pow(fd_step, 2.0 / 3.0);
  if (mode == DerivativeMode::ForwardDual) {
    s.second = fd_step;
    s.third = std::pow(fd_step, 2.0 / 3.0);
  } else {
    s.second = std::pow(fd_step, 2.0 / 3.0);
    s.third = std::pow(fd_step, 4.0 / 9.0);
  }
  return s;
}

Steps Steps::uniform(double h) {
  Steps s;
  s.first = s.second = s.third = s.value_second = s.metric = h;
  return s;
}

}  // namespace gaussmap
