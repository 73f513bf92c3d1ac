#pragma once

#include <initializer_list>

#include "metasymp/symplectic.hpp"

namespace testing {

using metasymp::Mat;

inline Mat rows(std::initializer_list<std::initializer_list<double>> r) {
  Mat X(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (auto row : r) {
    Eigen::Index j = 0;
    for (double v : row) X(i, j++) = v;
    ++i;
  }
  return X;
}

inline Mat scalar(double v) { return rows({{v}}); }

inline metasymp::FreeGenerator gen1(double P, double L, double Q, int m) {
  return metasymp::FreeGenerator(scalar(P), scalar(L), scalar(Q), metasymp::IndexMod4(m));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

}  // namespace testing
