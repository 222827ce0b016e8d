#include "wlra/solvers.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wlra/errors.hpp"
#include "wlra/svd.hpp"

namespace wlra {

namespace {

void check_pair(const Matrix& a, const Weight& w, const char* who) {
  if (a.rows() != w.rows() || a.cols() != w.cols())
    throw std::invalid_argument(std::string(who) + ": A is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " but W is " +
                                std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  require_finite(a, std::string(who) + " input");
}

void check_target_rank(const Matrix& a, int k, const char* who) {
  const int maxk = static_cast<int>(std::min(a.rows(), a.cols()));
  if (k < 1 || k > maxk)
    throw std::invalid_argument(std::string(who) + ": rank " + std::to_string(k) +
                                " out of range [1, " + std::to_string(maxk) + "]");
}

// Minimum-norm least squares solution of ||m x - b||.
Vector lsq_min_norm(const Matrix& m, const Vector& b) {
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(m).solve(b);
}

double loss_against_dense(const Matrix& a, const Matrix& w, const Matrix& b) {
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      const double t = w(i, j) * (a(i, j) - b(i, j));
      acc += t * t;
    }
  return acc;
}

}  // namespace

Weight::Weight(Matrix w, int rank_bound) : w_(std::move(w)), rank_bound_(rank_bound) {
  if (w_.rows() < 1 || w_.cols() < 1) throw std::invalid_argument("Weight: empty matrix");
  require_finite(w_, "Weight");
  if (w_.minCoeff() < 0.0)
    throw std::invalid_argument("Weight: negative entry " + std::to_string(w_.minCoeff()));
  if (rank_bound_ < 1) throw std::invalid_argument("Weight: rank bound must be positive");
  rank_bound_ = std::min<int>(rank_bound_, static_cast<int>(std::min(w_.rows(), w_.cols())));
  storage_ = static_cast<long long>(w_.rows()) * w_.cols();
}

Weight::Weight(const StructuredWeight& w) : w_(w.dense()), rank_bound_(w.rank_bound()) {
  rank_bound_ = std::min<int>(rank_bound_, static_cast<int>(std::min(w_.rows(), w_.cols())));
  storage_ = w.storage_size();
}

Weight::Weight(const LowRankWeight& w) : w_(w.dense()), rank_bound_(w.rank()) {
  w_ = w_.cwiseMax(0.0);  // clamp the validated -1e-12 slack
  storage_ = static_cast<long long>(w.rank()) * (w.rows() + w.cols());
}

Weight Weight::ones(Index n, Index d) { return Weight(Matrix::Ones(n, d), 1); }

ReweightedSolution::ReweightedSolution(Weight weight, LowRankPair tilde_aw)
    : weight_(std::move(weight)), tilde_aw_(std::move(tilde_aw)) {
  if (tilde_aw_.rows() != weight_.rows() || tilde_aw_.cols() != weight_.cols())
    throw std::invalid_argument("ReweightedSolution: factor shape mismatch");
}

double ReweightedSolution::entry(Index i, Index j) const {
  const double wij = weight_.matrix()(i, j);
  if (wij <= 0.0) return 0.0;
  return tilde_aw_.left.row(i).dot(tilde_aw_.right.col(j)) / wij;
}

Matrix ReweightedSolution::dense() const {
  const Matrix t = tilde_aw_.dense();
  const Matrix& w = weight_.matrix();
  Matrix out = Matrix::Zero(t.rows(), t.cols());
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j)
      if (w(i, j) > 0.0) out(i, j) = t(i, j) / w(i, j);
  return out;
}

long long ReweightedSolution::parameter_count() const {
  return tilde_aw_.rank() * (weight_.rows() + weight_.cols()) + weight_.storage_params();
}

double weighted_loss(const Matrix& a, const Weight& w, const Matrix& b) {
  check_pair(a, w, "weighted_loss");
  require_same_shape(a, b, "weighted_loss");
  return loss_against_dense(a, w.matrix(), b);
}

double weighted_loss(const Matrix& a, const Weight& w, const LowRankPair& b) {
  check_pair(a, w, "weighted_loss");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw std::invalid_argument("weighted_loss: factor shape mismatch");
  return loss_against_dense(a, w.matrix(), b.dense());
}

double weighted_loss(const Matrix& a, const Weight& w, const ReweightedSolution& b) {
  check_pair(a, w, "weighted_loss");
  const Matrix& bw = b.weight().matrix();
  if (bw.rows() != w.rows() || bw.cols() != w.cols() || bw != w.matrix())
    throw std::invalid_argument("weighted_loss: solution was built from a different weight");
  // On the support W^2 (A - tilde/W)^2 telescopes to (W o A - tilde)^2.
  const Matrix t = b.tilde_aw().dense();
  const Matrix& wm = w.matrix();
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (wm(i, j) > 0.0) {
        const double r = wm(i, j) * a(i, j) - t(i, j);
        acc += r * r;
      }
  return acc;
}

ReweightedSolution svd_w(const Matrix& a, const Weight& w, int k, SvdWMethod method, double eps,
                         std::uint64_t seed) {
  check_pair(a, w, "svd_w");
  check_target_rank(a, k, "svd_w");
  const Matrix m = hadamard(w.matrix(), a);
  const int mind = static_cast<int>(std::min(a.rows(), a.cols()));
  const int rk = std::min(w.rank_bound() * k, mind);
  LowRankPair pair = method == SvdWMethod::exact ? truncated_svd(m, rk).pair()
                                                 : randomized_lra(m, rk, eps, seed);
  return ReweightedSolution(w, std::move(pair));
}

int hadamard_rank_check(const Matrix& w, const Matrix& ap) {
  return numerical_rank(hadamard(w, ap));
}

Matrix CssSolution::reconstruction() const {
  const Matrix prod = selected * coeffs;
  const Matrix& wm = weight.matrix();
  Matrix out = Matrix::Zero(prod.rows(), prod.cols());
  for (Index i = 0; i < prod.rows(); ++i)
    for (Index j = 0; j < prod.cols(); ++j)
      if (wm(i, j) > 0.0) out(i, j) = prod(i, j) / wm(i, j);
  return out;
}

long long CssSolution::parameter_count() const {
  const long long c = static_cast<long long>(columns.size());
  return c * (selected.rows() + coeffs.cols()) + weight.storage_params();
}

CssSolution css_wlra(const Matrix& a, const Weight& w, int k, double eps, std::uint64_t seed,
                     CssMethod method) {
  check_pair(a, w, "css_wlra");
  check_target_rank(a, k, "css_wlra");
  if (!(eps > 0.0)) throw std::invalid_argument("css_wlra: eps must be positive");
  const Index n = a.rows(), d = a.cols();
  const Matrix m = hadamard(w.matrix(), a);
  const long long want = static_cast<long long>(
      std::ceil(2.0 * static_cast<double>(w.rank_bound()) * k / eps));
  const int c = static_cast<int>(std::min<long long>(d, std::max<long long>(1, want)));

  std::vector<int> cols;
  if (method == CssMethod::pivoted_qr) {
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    const auto& perm = qr.colsPermutation().indices();
    cols.assign(perm.data(), perm.data() + c);
  } else {
    // Two-round adaptive norm sampling: half the budget by column norms of
    // W o A, the other half by norms of the residual against the span of the
    // first round.
    Rng rng(seed);
    std::set<int> picked;
    const auto sample_by = [&](const Matrix& mat, int count) {
      Vector cum(d);
      double acc = 0.0;
      for (Index j = 0; j < d; ++j) {
        acc += mat.col(j).squaredNorm();
        cum[j] = acc;
      }
      const double total = cum[d - 1];
      if (total <= 0.0) return;
      for (int s = 0; s < count; ++s) {
        const double u = rng.uniform() * total;
        const auto it = std::lower_bound(cum.data(), cum.data() + d, u);
        picked.insert(static_cast<int>(it - cum.data()));
      }
    };
    const int first = (c + 1) / 2;
    sample_by(m, first);
    Matrix residual = m;
    if (!picked.empty()) {
      Matrix chosen(n, static_cast<Index>(picked.size()));
      Index col = 0;
      for (int j : picked) chosen.col(col++) = m.col(j);
      Eigen::HouseholderQR<Matrix> qr(chosen);
      const Matrix q = qr.householderQ() * Matrix::Identity(n, chosen.cols());
      residual -= q * (q.transpose() * m);
    }
    sample_by(residual, c - static_cast<int>(picked.size()));
    // deterministic fill if sampling came up short
    std::vector<std::pair<double, int>> order;
    for (Index j = 0; j < d; ++j) order.push_back({residual.col(j).squaredNorm(), static_cast<int>(j)});
    std::sort(order.begin(), order.end(),
              [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
    for (const auto& [norm, j] : order) {
      if (static_cast<int>(picked.size()) >= c) break;
      picked.insert(j);
    }
    cols.assign(picked.begin(), picked.end());
  }
  std::sort(cols.begin(), cols.end());

  Matrix selected(n, c);
  for (int j = 0; j < c; ++j) selected.col(j) = m.col(cols[static_cast<std::size_t>(j)]);
  const Matrix coeffs = Eigen::CompleteOrthogonalDecomposition<Matrix>(selected).solve(m);
  return CssSolution{std::move(cols), std::move(selected), coeffs, w};
}

IterativeResult em_wlra(const Matrix& a, const Weight& w, int k, int iters,
                        const std::optional<LowRankPair>& init) {
  check_pair(a, w, "em_wlra");
  check_target_rank(a, k, "em_wlra");
  if (iters < 0) throw std::invalid_argument("em_wlra: iters must be nonnegative");
  const Matrix w2 = w.matrix().cwiseProduct(w.matrix());
  const double wmax = w2.maxCoeff();
  if (wmax <= 0.0) throw DegenerateInputError("em_wlra: weight matrix is identically zero");
  const Matrix hat = w2 / wmax;
  const Matrix hat_a = hat.cwiseProduct(a);
  const Matrix ones = Matrix::Ones(a.rows(), a.cols());

  LowRankPair factors = truncated_svd(hat_a, k).pair();
  if (init) {
    if (init->rows() != a.rows() || init->cols() != a.cols())
      throw std::invalid_argument("em_wlra: init shape mismatch");
    factors = *init;
  }
  Matrix b = factors.dense();
  std::vector<double> trace;
  trace.push_back(loss_against_dense(a, w.matrix(), b));
  for (int t = 0; t < iters; ++t) {
    const Matrix x = hat_a + (ones - hat).cwiseProduct(b);
    const auto svd = truncated_svd(x, k);
    factors = svd.pair();
    b = factors.dense();
    trace.push_back(loss_against_dense(a, w.matrix(), b));
  }
  return IterativeResult{std::move(factors), std::move(trace)};
}

namespace {

// One alternating pass: per-column weighted least squares for the right
// factor given the left, then per-row for the left given the right.
void refit_sweep(const Matrix& a, const Matrix& wm, Matrix& u, Matrix& v) {
  const Index n = a.rows(), d = a.cols();
  for (Index j = 0; j < d; ++j) {
    const Matrix uw = wm.col(j).asDiagonal() * u;
    const Vector bw = wm.col(j).cwiseProduct(a.col(j));
    v.col(j) = lsq_min_norm(uw, bw);
  }
  for (Index i = 0; i < n; ++i) {
    const Matrix vw = v * wm.row(i).asDiagonal();
    const Vector bw = wm.row(i).cwiseProduct(a.row(i)).transpose();
    u.row(i) = lsq_min_norm(vw.transpose(), bw).transpose();
  }
}

}  // namespace

IterativeResult greedy_wlra(const Matrix& a, const Weight& w, int k) {
  check_pair(a, w, "greedy_wlra");
  check_target_rank(a, k, "greedy_wlra");
  const Matrix& wm = w.matrix();
  const Matrix w2 = wm.cwiseProduct(wm);
  const Index n = a.rows(), d = a.cols();

  Matrix u(n, 0), v(0, d);
  Matrix b = Matrix::Zero(n, d);
  std::vector<double> trace;
  trace.push_back(loss_against_dense(a, wm, b));
  const double denom_floor = 1e-14 * w2.maxCoeff();

  for (int step = 0; step < k; ++step) {
    const Matrix g = w2.cwiseProduct(a - b);
    const int pairs = static_cast<int>(std::min(n, d));
    const auto svd = truncated_svd(g, pairs);
    int chosen = -1;
    double alpha = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const Vector uv = svd.left.col(p);
      const Vector vv = svd.right.row(p).transpose();
      double denom = 0.0, numer = 0.0;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < d; ++j) {
          const double s = uv[i] * vv[j];
          denom += w2(i, j) * s * s;
          numer += w2(i, j) * (a(i, j) - b(i, j)) * s;
        }
      if (denom > denom_floor) {
        chosen = p;
        alpha = numer / denom;
        break;
      }
    }
    if (chosen < 0) break;  // nothing left on the support

    u.conservativeResize(n, u.cols() + 1);
    u.col(u.cols() - 1) = svd.left.col(chosen);
    v.conservativeResize(v.rows() + 1, d);
    v.row(v.rows() - 1) = alpha * svd.right.row(chosen);

    // Alternating least-squares refit until the loss stops moving.
    double prev = loss_against_dense(a, wm, u * v);
    for (int sweep = 0; sweep < 100; ++sweep) {
      refit_sweep(a, wm, u, v);
      const double cur = loss_against_dense(a, wm, u * v);
      if (prev - cur <= 1e-14 * std::max(1.0, prev)) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    b = u * v;
    trace.push_back(prev);
  }
  if (u.cols() == 0) {
    u = Matrix::Zero(n, 1);
    v = Matrix::Zero(1, d);
  }
  return IterativeResult{LowRankPair(std::move(u), std::move(v)), std::move(trace)};
}

Vector row_norm_probs(const Matrix& a) {
  require_finite(a, "row_norm_probs input");
  const double total = a.squaredNorm();
  if (total <= 0.0) throw DegenerateInputError("row_norm_probs: zero matrix");
  Vector p(a.rows());
  for (Index i = 0; i < a.rows(); ++i) p[i] = a.row(i).squaredNorm() / total;
  return p;
}

SampleResult sample_wlra(const Matrix& a, const Weight& w, int t, std::uint64_t seed) {
  check_pair(a, w, "sample_wlra");
  if (t < 1) throw std::invalid_argument("sample_wlra: need at least one sample");
  const Vector p = row_norm_probs(a);
  const Index n = a.rows(), d = a.cols();

  Vector cum(n);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    acc += p[i];
    cum[i] = acc;
  }
  cum[n - 1] = 1.0;

  Rng rng(seed);
  std::vector<int> rows(static_cast<std::size_t>(t));
  for (int s = 0; s < t; ++s) {
    const double x = rng.uniform();
    const auto it = std::lower_bound(cum.data(), cum.data() + n, x);
    rows[static_cast<std::size_t>(s)] = static_cast<int>(it - cum.data());
  }
  std::sort(rows.begin(), rows.end());

  Matrix r(t, d);
  for (int s = 0; s < t; ++s) r.row(s) = a.row(rows[static_cast<std::size_t>(s)]);

  const Matrix& wm = w.matrix();
  Matrix approx(n, d);
  for (Index i = 0; i < n; ++i) {
    const Matrix rw = r * wm.row(i).asDiagonal();  // t x d
    const Vector bw = wm.row(i).cwiseProduct(a.row(i)).transpose();
    const Vector c = lsq_min_norm(rw.transpose(), bw);
    approx.row(i) = (c.transpose() * r);
  }
  return SampleResult{std::move(approx), std::move(rows)};
}

std::pair<Matrix, Matrix> factored_gd_gradients(const Matrix& a, const Weight& w, const Matrix& u,
                                                const Matrix& v) {
  check_pair(a, w, "factored_gd_gradients");
  const Matrix w2 = w.matrix().cwiseProduct(w.matrix());
  const Matrix r = w2.cwiseProduct(a - u * v);
  return {Matrix(-2.0 * r * v.transpose()), Matrix(-2.0 * u.transpose() * r)};
}

IterativeResult factored_gd_wlra(const Matrix& a, const Weight& w, int k, const GdOptions& opts,
                                 std::uint64_t seed) {
  check_pair(a, w, "factored_gd_wlra");
  check_target_rank(a, k, "factored_gd_wlra");
  if (opts.epochs < 0 || opts.lr0 <= 0.0 || opts.decay <= 0.0 || opts.decay_every < 1)
    throw std::invalid_argument("factored_gd_wlra: bad options");
  const Index n = a.rows(), d = a.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));

  // Draw order: U row-major, then V row-major.
  Rng rng(seed);
  Matrix u(n, k), v(k, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) u(i, j) = rng.normal() * scale;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < d; ++j) v(i, j) = rng.normal() * scale;

  Matrix mu = Matrix::Zero(n, k), vu = Matrix::Zero(n, k);
  Matrix mv = Matrix::Zero(k, d), vv = Matrix::Zero(k, d);

  std::vector<double> trace;
  trace.push_back(loss_against_dense(a, w.matrix(), u * v));
  for (int t = 1; t <= opts.epochs; ++t) {
    const auto [gu, gv] = factored_gd_gradients(a, w, u, v);
    const double lr = opts.lr0 * std::pow(opts.decay, (t - 1) / opts.decay_every);
    const double bc1 = 1.0 - std::pow(opts.beta1, t);
    const double bc2 = 1.0 - std::pow(opts.beta2, t);
    const auto update = [&](Matrix& param, Matrix& m, Matrix& vsq, const Matrix& g) {
      m = opts.beta1 * m + (1.0 - opts.beta1) * g;
      vsq = opts.beta2 * vsq + (1.0 - opts.beta2) * g.cwiseProduct(g);
      const Matrix mhat = m / bc1;
      const Matrix vhat = vsq / bc2;
      param -= lr * (mhat.array() / (vhat.array().sqrt() + opts.eps)).matrix();
    };
    update(u, mu, vu, gu);
    update(v, mv, vv, gv);
    trace.push_back(loss_against_dense(a, w.matrix(), u * v));
  }
  return IterativeResult{LowRankPair(std::move(u), std::move(v)), std::move(trace)};
}

LowRankPair plain_svd_baseline(const Matrix& a, int k) {
  check_target_rank(a, k, "plain_svd_baseline");
  return truncated_svd(a, k).pair();
}

SvdWEmResult svd_w_then_em(const Matrix& a, const Weight& w, int k, int iters) {
  ReweightedSolution base = svd_w(a, w, k);
  const double base_loss = weighted_loss(a, w, base);
  const LowRankPair init = truncated_svd(base.dense(), k).pair();
  IterativeResult em = em_wlra(a, w, k, iters, init);
  const double em_loss = em.trace.back();
  SvdWEmResult out{std::move(base), std::move(em.factors), std::move(em.trace), false, base_loss};
  if (em_loss < base_loss) {
    out.refined_won = true;
    out.loss = em_loss;
  }
  return out;
}

}  // namespace wlra
