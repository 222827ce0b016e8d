#include "wlra/svd.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <string>

#include "wlra/errors.hpp"
#include "wlra/random.hpp"

namespace wlra {

namespace {

void check_rank_arg(const Matrix& m, int k, int lo, const char* who) {
  const int maxk = static_cast<int>(std::min(m.rows(), m.cols()));
  if (m.rows() < 1 || m.cols() < 1)
    throw std::invalid_argument(std::string(who) + ": empty matrix");
  if (k < lo || k > maxk)
    throw std::invalid_argument(std::string(who) + ": rank " + std::to_string(k) +
                                " out of range [" + std::to_string(lo) + ", " +
                                std::to_string(maxk) + "]");
}

Eigen::JacobiSVD<Matrix> full_jacobi(const Matrix& m, unsigned options) {
  Eigen::JacobiSVD<Matrix> svd(m, options);
  if (svd.info() != Eigen::Success)
    throw NumericalError("jacobi svd did not converge on " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " input");
  return svd;
}

// Thin Q factor of a Householder QR.
Matrix thin_q(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  const Index cols = std::min(m.rows(), m.cols());
  return qr.householderQ() * Matrix::Identity(m.rows(), cols);
}

}  // namespace

SvdResult truncated_svd(const Matrix& m, int k) {
  check_rank_arg(m, k, 1, "truncated_svd");
  require_finite(m, "truncated_svd input");
  const auto svd = full_jacobi(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out;
  out.left = svd.matrixU().leftCols(k);
  out.singular_values = svd.singularValues().head(k);
  out.right = svd.matrixV().leftCols(k).transpose();
  return out;
}

double tail_energy(const Matrix& m, int k) {
  check_rank_arg(m, k, 0, "tail_energy");
  require_finite(m, "tail_energy input");
  const auto svd = full_jacobi(m, 0);
  const Vector& sv = svd.singularValues();
  double acc = 0.0;
  for (Index i = k; i < sv.size(); ++i) acc += sv[i] * sv[i];
  return acc;
}

int numerical_rank(const Matrix& m, double tol) {
  require_finite(m, "numerical_rank input");
  const auto svd = full_jacobi(m, 0);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

LowRankPair randomized_lra(const Matrix& m, int k, double eps, std::uint64_t seed) {
  check_rank_arg(m, k, 1, "randomized_lra");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("randomized_lra: eps must be in (0, 1]");
  require_finite(m, "randomized_lra input");

  const Index n = m.rows(), d = m.cols();
  const Index mind = std::min(n, d);
  const Index sketch = std::min<Index>(k + 10, mind);

  Rng rng(seed);
  Matrix omega(d, sketch);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < sketch; ++j) omega(i, j) = rng.normal();

  Matrix q = thin_q(m * omega);
  for (int iter = 0; iter < 2; ++iter) {
    const Matrix z = thin_q(m.transpose() * q);
    q = thin_q(m * z);
  }

  // Exact SVD of the small projected matrix.
  const Matrix b = q.transpose() * m;  // sketch x d
  const auto svd = full_jacobi(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix left = q * svd.matrixU().leftCols(k);
  Matrix right = svd.singularValues().head(k).asDiagonal() *
                 Matrix(svd.matrixV().leftCols(k).transpose());
  return LowRankPair(std::move(left), std::move(right));
}

}  // namespace wlra
