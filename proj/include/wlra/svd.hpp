#ifndef WLRA_SVD_HPP
#define WLRA_SVD_HPP

#include <cstdint>

#include "wlra/matrix.hpp"

namespace wlra {

// Truncated singular value decomposition. left has orthonormal columns,
// right has orthonormal rows, singular_values is nonincreasing.
// Reconstruction is left * singular_values.asDiagonal() * right.
struct SvdResult {
  Matrix left;             // n x k
  Vector singular_values;  // k, nonincreasing, >= 0
  Matrix right;            // k x d

  Matrix dense() const { return left * singular_values.asDiagonal() * right; }
  LowRankPair pair() const {
    return LowRankPair(left, Matrix(singular_values.asDiagonal() * right));
  }
};

// Best rank-k approximation, 1 <= k <= min(n, d). Deterministic.
SvdResult truncated_svd(const Matrix& m, int k);

// Sum of squared singular values beyond the k-th, i.e. the squared Frobenius
// error of the best rank-k approximation. k = 0 gives the full squared norm.
double tail_energy(const Matrix& m, int k);

// Numerical rank: number of singular values above tol * sigma_1.
int numerical_rank(const Matrix& m, double tol = 1e-9);

// Randomized rank-k approximation: Gaussian range finder with oversampling
// k + 10 and 2 power iterations, then an exact SVD of the projected matrix.
// For fixed seed the output is deterministic. With probability >= 9/10 the
// squared error is within (1 + eps) of tail_energy(m, k).
LowRankPair randomized_lra(const Matrix& m, int k, double eps, std::uint64_t seed);

}  // namespace wlra

#endif
