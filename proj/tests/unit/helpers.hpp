#pragma once

#include "qcs/types.hpp"

#include <doctest.h>

#include <random>

namespace testing {

inline qcs::Vector random_vector(std::mt19937_64& gen, qcs::Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  qcs::Vector v(n);
  for (auto& e : v) e = normal(gen);
  return v;
}

inline qcs::Matrix random_matrix(std::mt19937_64& gen, qcs::Index m, qcs::Index n) {
  std::normal_distribution<double> normal;
  qcs::Matrix a(m, n);
  for (qcs::Index j = 0; j < n; ++j)
    for (qcs::Index i = 0; i < m; ++i) a(i, j) = normal(gen);
  return a;
}

inline qcs::Vector vec(std::initializer_list<double> values) {
  qcs::Vector v(static_cast<qcs::Index>(values.size()));
  qcs::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline double max_abs_diff(const qcs::Vector& a, const qcs::Vector& b) {
  REQUIRE(a.size() == b.size());
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline void check_close(const qcs::Vector& a, const qcs::Vector& b, double tol) {
  CHECK(max_abs_diff(a, b) <= tol);
}

}  // namespace testing
