#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wlra/matrix.hpp"
#include "wlra/random.hpp"
#include "wlra/svd.hpp"

using wlra::Matrix;
using wlra::Vector;

namespace {

Matrix random_matrix(wlra::Index n, wlra::Index d, std::uint64_t seed) {
  wlra::Rng rng(seed);
  Matrix m(n, d);
  for (wlra::Index i = 0; i < n; ++i)
    for (wlra::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

double recon_error2(const Matrix& m, const wlra::SvdResult& r) {
  return (m - r.dense()).squaredNorm();
}

}  // namespace

TEST_CASE("truncated_svd on the identity") {
  const Matrix m = Matrix::Identity(3, 3);
  const auto r = wlra::truncated_svd(m, 2);
  REQUIRE(r.singular_values.size() == 2);
  CHECK(r.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.singular_values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(recon_error2(m, r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncated_svd on diag(3,2,1)") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  const auto r = wlra::truncated_svd(m, 1);
  CHECK(r.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(recon_error2(m, r) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("truncated_svd matches the Gram eigenvalue oracle") {
  const Matrix m = random_matrix(8, 6, 20240817);
  const auto r = wlra::truncated_svd(m, 3);
  const auto s2 = oracle::squared_singular_values(m);
  double expect = 0.0;
  for (std::size_t i = 3; i < s2.size(); ++i) expect += s2[i];
  CHECK(recon_error2(m, r) == doctest::Approx(expect).epsilon(1e-9));
  for (int i = 0; i < 3; ++i)
    CHECK(r.singular_values[i] * r.singular_values[i] ==
          doctest::Approx(s2[static_cast<std::size_t>(i)]).epsilon(1e-9));
}

TEST_CASE("truncated_svd factors are orthonormal") {
  const Matrix m = random_matrix(12, 9, 51);
  const auto r = wlra::truncated_svd(m, 4);
  const Matrix utu = r.left.transpose() * r.left;
  const Matrix vvt = r.right * r.right.transpose();
  CHECK((utu - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((vvt - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(r.singular_values[0] >= r.singular_values[3]);
}

TEST_CASE("truncated_svd rejects out-of-range ranks") {
  const Matrix m = Matrix::Ones(4, 3);
  CHECK_THROWS_AS((void)wlra::truncated_svd(m, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)wlra::truncated_svd(m, 4), std::invalid_argument);
}

TEST_CASE("tail_energy of diag(3,2,1)") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  CHECK(wlra::tail_energy(m, 0) == doctest::Approx(14.0).epsilon(1e-12));
  CHECK(wlra::tail_energy(m, 1) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(wlra::tail_energy(m, 3) == doctest::Approx(0.0));
}

TEST_CASE("tail_energy matches the oracle on a random matrix") {
  const Matrix m = random_matrix(10, 7, 77);
  CHECK(wlra::tail_energy(m, 2) == doctest::Approx(oracle::tail_energy(m, 2)).epsilon(1e-9));
}

TEST_CASE("tail_energy is non-increasing in the rank") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix m = random_matrix(9, 11, seed);
    double prev = wlra::tail_energy(m, 0);
    for (int k = 1; k <= 9; ++k) {
      const double cur = wlra::tail_energy(m, k);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
    CHECK(wlra::tail_energy(m, 9) == doctest::Approx(0.0).epsilon(1e-18));
  }
}

TEST_CASE("truncated_svd reconstruction error equals tail_energy") {
  for (std::uint64_t seed = 100; seed < 108; ++seed) {
    const Matrix m = random_matrix(13, 8, seed);
    for (int k : {1, 3, 7}) {
      const auto r = wlra::truncated_svd(m, k);
      const double tail = wlra::tail_energy(m, k);
      CHECK(recon_error2(m, r) == doctest::Approx(tail).epsilon(1e-9));
    }
  }
}

TEST_CASE("randomized_lra recovers an exact low rank matrix") {
  const Matrix u = random_matrix(20, 2, 3);
  const Matrix v = random_matrix(2, 15, 4);
  const Matrix m = u * v;
  const auto p = wlra::randomized_lra(m, 2, 0.5, 9);
  CHECK((m - p.dense()).squaredNorm() <= 1e-18);
}

TEST_CASE("randomized_lra on padded diag(3,2,1)") {
  Matrix m = Matrix::Zero(6, 5);
  m(0, 0) = 3.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  const auto p = wlra::randomized_lra(m, 1, 0.1, 123);
  CHECK((m - p.dense()).squaredNorm() <= 1.1 * 5.0);
}

TEST_CASE("randomized_lra hits (1+eps) tail energy on most seeds") {
  const Matrix m = random_matrix(50, 40, 2024);
  const double tail = wlra::tail_energy(m, 5);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = wlra::randomized_lra(m, 5, 0.25, seed);
    const double err = (m - p.dense()).squaredNorm();
    CHECK(err >= tail - 1e-12);  // can never beat the optimum
    if (err <= 1.25 * tail) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("randomized_lra is reproducible for a fixed seed") {
  const Matrix m = random_matrix(15, 12, 6);
  const auto a = wlra::randomized_lra(m, 3, 0.5, 42);
  const auto b = wlra::randomized_lra(m, 3, 0.5, 42);
  CHECK(a.left == b.left);
  CHECK(a.right == b.right);
  const auto c = wlra::randomized_lra(m, 3, 0.5, 43);
  CHECK(a.dense() != c.dense());
}

TEST_CASE("randomized_lra validates eps") {
  const Matrix m = Matrix::Ones(4, 4);
  CHECK_THROWS_AS((void)wlra::randomized_lra(m, 1, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)wlra::randomized_lra(m, 1, 1.5, 1), std::invalid_argument);
}

TEST_CASE("hadamard product") {
  Matrix p(2, 2), q(2, 2);
  p << 1, 2, 3, 4;
  q << 2, 0, 1, 3;
  Matrix expect(2, 2);
  expect << 2, 0, 3, 12;
  CHECK(wlra::hadamard(p, q) == expect);
  CHECK(wlra::hadamard(p, q) == wlra::hadamard(q, p));
  const Matrix bad = Matrix::Ones(2, 3);
  CHECK_THROWS_AS((void)wlra::hadamard(p, bad), std::invalid_argument);
}

TEST_CASE("hadamard commutes on random input, exactly") {
  const Matrix p = random_matrix(7, 5, 11);
  const Matrix q = random_matrix(7, 5, 12);
  CHECK(wlra::hadamard(p, q) == wlra::hadamard(q, p));
}

TEST_CASE("numerical_rank of an exact product") {
  const Matrix u = random_matrix(10, 3, 21);
  const Matrix v = random_matrix(3, 10, 22);
  CHECK(wlra::numerical_rank(u * v) == 3);
  CHECK(wlra::numerical_rank(Matrix::Zero(4, 4)) == 0);
}
