#include "helpers.hpp"

#include "../support/reference.hpp"

#include "qcs/linalg.hpp"

#include <Eigen/SVD>

using namespace qcs;
using testing::vec;

TEST_SUITE("linalg") {

TEST_CASE("index set") {
  const IndexSet s(std::vector<Index>{4, 1, 4, 2});
  CHECK(s.indices() == std::vector<Index>{1, 2, 4});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(3));
  CHECK(s.max() == 4);
  CHECK(IndexSet().max() == -1);
  CHECK(s.unite(IndexSet{0, 2, 7}) == IndexSet{0, 1, 2, 4, 7});
  CHECK(IndexSet::range(3) == IndexSet{0, 1, 2});
  CHECK(support_of(vec({0.0, 1.0, 0.0, -2.0})) == IndexSet{1, 3});
}

TEST_CASE("top support examples") {
  CHECK(top_support(vec({3, -5, 1, 0}), 2) == IndexSet{0, 1});
  CHECK(top_support(vec({2, -2, 1}), 1) == IndexSet{0});
  CHECK(top_support(vec({0, 0, 0}), 2) == IndexSet{0, 1});
  CHECK_THROWS_AS(top_support(vec({1, 2}), 3), InvalidArgument);
  CHECK_THROWS_AS(top_support(vec({1, 2}), 0), InvalidArgument);
}

TEST_CASE("hard threshold examples") {
  CHECK(hard_threshold(vec({3, -5, 1, 0}), 2) == vec({3, -5, 0, 0}));
  CHECK(hard_threshold(vec({7}), 1) == vec({7}));
  CHECK_THROWS_AS(hard_threshold(vec({7}), 2), InvalidArgument);
}

TEST_CASE("property: hard threshold is the best K-term approximation (exhaustive)") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int len = 1; len <= 8; ++len) {
    for (int trial = 0; trial < 25; ++trial) {
      // integer entries make magnitude ties common
      Vector x(len);
      for (auto& e : x) e = trial % 2 ? small(gen) : testing::random_vector(gen, 1)[0];
      for (int k = 1; k <= len; ++k) {
        const double achieved = (hard_threshold(x, static_cast<std::size_t>(k)) - x).norm();
        for (unsigned mask = 0; mask < (1u << len); ++mask) {
          if (__builtin_popcount(mask) > k) continue;
          Vector xt = Vector::Zero(len);
          for (int i = 0; i < len; ++i)
            if (mask & (1u << i)) xt[i] = x[i];
          CHECK(achieved <= (xt - x).norm() + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("property: hard threshold sparsity and support") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = testing::random_vector(gen, 20);
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 20);
    const Vector h = hard_threshold(x, k);
    CHECK(support_of(h).size() <= k);
    Vector mags = x.cwiseAbs();
    std::sort(mags.begin(), mags.end(), std::greater<>());
    if (k < 20 && mags[static_cast<Index>(k) - 1] != mags[static_cast<Index>(k)])
      CHECK(support_of(h) == top_support(x, k));
    const std::vector<int> expected = ref::top_k(x, static_cast<int>(k));
    CHECK(top_support(x, k).indices() == std::vector<Index>(expected.begin(), expected.end()));
  }
  Vector sparse = Vector::Zero(10);
  sparse[2] = 1.5;
  sparse[7] = -0.5;
  CHECK(hard_threshold(sparse, 2) == sparse);
  CHECK(hard_threshold(sparse, 5) == sparse);
}

TEST_CASE("restrict columns") {
  Matrix phi(2, 2);
  phi << 1, 2, 3, 4;
  Matrix expected(2, 1);
  expected << 2, 4;
  CHECK(restrict_columns(phi, IndexSet{1}) == expected);
  CHECK(restrict_columns(phi, IndexSet{0, 1}) == phi);
  const Matrix empty = restrict_columns(phi, IndexSet{});
  CHECK(empty.rows() == 2);
  CHECK(empty.cols() == 0);
  CHECK_THROWS_AS(restrict_columns(phi, IndexSet{2}), InvalidArgument);
}

TEST_CASE("embed and sparse products") {
  CHECK(embed(vec({5, 6}), IndexSet{1, 3}, 4) == vec({0, 5, 0, 6}));
  std::mt19937_64 gen(23);
  const Matrix phi = testing::random_matrix(gen, 7, 9);
  Vector x = Vector::Zero(9);
  x[3] = 2.0;
  x[8] = -1.0;
  testing::check_close(apply_sparse(phi, x), phi * x, 1e-14);
}

TEST_CASE("least squares examples") {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  testing::check_close(least_squares(a, vec({1, 4})), vec({1, 2}), 1e-14);
  Matrix col(2, 1);
  col << 1, 1;
  testing::check_close(least_squares(col, vec({1, 3})), vec({2}), 1e-14);
  CHECK(least_squares(Matrix(3, 0), vec({1, 2, 3})).size() == 0);
  CHECK_THROWS_AS(least_squares(a, vec({1, 2, 3})), InvalidArgument);
}

TEST_CASE("least squares matches the normal equations") {
  std::mt19937_64 gen(24);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = testing::random_matrix(gen, 6, 3);
    const Vector b = testing::random_vector(gen, 6);
    testing::check_close(least_squares(a, b), ref::normal_equations(a, b), 1e-8);
  }
}

TEST_CASE("property: least squares residual orthogonality and exact solves") {
  std::mt19937_64 gen(25);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = testing::random_matrix(gen, 12, 5);
    const Vector b = testing::random_vector(gen, 12);
    const Vector r = b - a * least_squares(a, b);
    CHECK((a.transpose() * r).norm() <= 1e-8 * b.norm() * a.norm());

    const Matrix sq = testing::random_matrix(gen, 5, 5);
    const Vector c = testing::random_vector(gen, 5);
    CHECK((sq * least_squares(sq, c) - c).norm() <= 1e-8 * c.norm());
  }
}

TEST_CASE("least squares is minimum norm on rank-deficient systems") {
  std::mt19937_64 gen(26);
  for (int t = 0; t < 20; ++t) {
    Matrix a = testing::random_matrix(gen, 8, 4);
    a.col(3) = a.col(0) - 2.0 * a.col(1);
    const Vector b = testing::random_vector(gen, 8);
    testing::check_close(least_squares(a, b), ref::pinv_solve(a, b), 1e-9);
    // wide system
    const Matrix w = testing::random_matrix(gen, 3, 6);
    const Vector c = testing::random_vector(gen, 3);
    testing::check_close(least_squares(w, c), ref::pinv_solve(w, c), 1e-9);
  }
}

TEST_CASE("reusable least squares factorization") {
  std::mt19937_64 gen(27);
  const Matrix a = testing::random_matrix(gen, 10, 4);
  const LeastSquares ls(a);
  for (int t = 0; t < 5; ++t) {
    const Vector b = testing::random_vector(gen, 10);
    CHECK(ls.solve(b) == least_squares(a, b));
  }
}

TEST_CASE("normalize") {
  testing::check_close(normalize(vec({3, 4})), vec({0.6, 0.8}), 1e-15);
  CHECK(normalize(vec({0, 0})) == vec({0, 0}));
  const Vector u = normalize(vec({1, 2, 3}));
  testing::check_close(normalize(u), u, 1e-15);
  std::mt19937_64 gen(28);
  for (int t = 0; t < 50; ++t) {
    const Vector x = testing::random_vector(gen, 10);
    const double c = std::exp(testing::random_vector(gen, 1)[0] * 3);
    testing::check_close(normalize(c * x), normalize(x), 1e-14);
    CHECK(normalize(x).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  CHECK(operator_norm(d) == doctest::Approx(2.0));
  CHECK(operator_norm(Matrix::Zero(3, 2)) == 0.0);
  std::mt19937_64 gen(29);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = testing::random_matrix(gen, 8, 5);
    const double truth = ref::spectral_norm(a);
    CHECK(std::abs(operator_norm(a, 1e-10) - truth) <= 1e-6 * truth);
    CHECK(std::abs(operator_norm_lanczos(a) - truth) <= 1e-10 * truth);
  }
  const Matrix big = testing::random_matrix(gen, 200, 300);
  CHECK(std::abs(operator_norm_lanczos(big) - ref::spectral_norm(big)) <= 1e-9 * ref::spectral_norm(big));
}

}  // TEST_SUITE
