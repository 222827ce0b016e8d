#ifndef WLRA_MATRIX_HPP
#define WLRA_MATRIX_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wlra {

// Row-major dense matrix of 64-bit reals. Row-major storage is part of the
// contract: the raw buffer of a Matrix is exactly what the binary file
// format and the bit-exact reproducibility tests exchange.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using Index = Eigen::Index;

// Explicit low rank factorization left * right with left n-by-k, right k-by-d.
struct LowRankPair {
  Matrix left;
  Matrix right;

  LowRankPair() = default;
  LowRankPair(Matrix l, Matrix r) : left(std::move(l)), right(std::move(r)) {
    if (left.cols() != right.rows())
      throw std::invalid_argument("LowRankPair: left is " + std::to_string(left.rows()) +
                                  "x" + std::to_string(left.cols()) + " but right is " +
                                  std::to_string(right.rows()) + "x" +
                                  std::to_string(right.cols()));
  }

  Index rows() const { return left.rows(); }
  Index cols() const { return right.cols(); }
  Index rank() const { return left.cols(); }
  Matrix dense() const { return left * right; }
};

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite())
    throw std::invalid_argument(name + ": non-finite entries");
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(what + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
}

// Entrywise product. Shapes must match.
inline Matrix hadamard(const Matrix& p, const Matrix& q) {
  require_same_shape(p, q, "hadamard");
  return p.cwiseProduct(q);
}

}  // namespace wlra

#endif
