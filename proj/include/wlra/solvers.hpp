#ifndef WLRA_SOLVERS_HPP
#define WLRA_SOLVERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlra/matrix.hpp"
#include "wlra/random.hpp"
#include "wlra/weights.hpp"

namespace wlra {

// Nonnegative weight matrix together with an upper bound on its rank. The
// bound is what the reweighted solver multiplies the target rank by; for
// structured and factored weights it comes from the structure, for plain
// dense weights the caller declares it.
class Weight {
public:
  Weight(Matrix w, int rank_bound);
  explicit Weight(const StructuredWeight& w);
  explicit Weight(const LowRankWeight& w);
  static Weight ones(Index n, Index d);

  const Matrix& matrix() const { return w_; }
  Index rows() const { return w_.rows(); }
  Index cols() const { return w_.cols(); }
  int rank_bound() const { return rank_bound_; }
  // Number of stored scalars in the native representation; feeds parameter
  // counts in reports.
  long long storage_params() const { return storage_; }

private:
  Matrix w_;
  int rank_bound_;
  long long storage_;
};

// Solution of the reweighted algorithm: a rank-rk factorization tilde_aw of
// an approximation to W o A. The approximation of A itself is entrywise
// tilde_aw / W on the support of W and 0 elsewhere.
class ReweightedSolution {
public:
  ReweightedSolution(Weight weight, LowRankPair tilde_aw);

  const Weight& weight() const { return weight_; }
  const LowRankPair& tilde_aw() const { return tilde_aw_; }
  double entry(Index i, Index j) const;
  Matrix dense() const;
  long long parameter_count() const;

private:
  Weight weight_;
  LowRankPair tilde_aw_;
};

// sum_ij W_ij^2 (A_ij - B_ij)^2. Coordinates where W is zero contribute
// exactly 0. For a ReweightedSolution built from the same weight this equals
// || tilde_aw - W o A ||_F^2 restricted to the support of W; passing a
// solution built from a different weight is a parameter error.
double weighted_loss(const Matrix& a, const Weight& w, const Matrix& b);
double weighted_loss(const Matrix& a, const Weight& w, const LowRankPair& b);
double weighted_loss(const Matrix& a, const Weight& w, const ReweightedSolution& b);

enum class SvdWMethod { exact, randomized };

// Reweighted SVD: compute a rank r*k approximation of W o A (exactly, or via
// the randomized range finder) and divide out the weights. With the exact
// method the loss equals tail_energy(W o A, r*k), which lower-bounds the
// loss of every rank-k approximation of A. The working rank r*k is capped at
// min(n, d), where the truncation is the matrix itself.
ReweightedSolution svd_w(const Matrix& a, const Weight& w, int k,
                         SvdWMethod method = SvdWMethod::exact, double eps = 0.5,
                         std::uint64_t seed = 0);

// Numerical rank of W o Ap; at most rank(W) * rank(Ap).
int hadamard_rank_check(const Matrix& w, const Matrix& ap);

enum class CssMethod { pivoted_qr, norm_sampling };

// Column-subset solution: c = min(d, ceil(2 r k / eps)) columns S of W o A
// and coefficients X minimizing ||(W o A)|_S X - W o A||_F.
struct CssSolution {
  std::vector<int> columns;  // sorted, unique
  Matrix selected;           // n x |S|, the chosen columns of W o A
  Matrix coeffs;             // |S| x d
  Weight weight;

  // Entrywise selected * coeffs / W on the support of W, 0 elsewhere.
  Matrix reconstruction() const;
  long long parameter_count() const;
};

CssSolution css_wlra(const Matrix& a, const Weight& w, int k, double eps,
                     std::uint64_t seed = 0, CssMethod method = CssMethod::pivoted_qr);

struct IterativeResult {
  LowRankPair factors;
  std::vector<double> trace;  // loss before any step, then after each step
};

// Expectation-maximization baseline: scale weights to hat_w = W^2 / max(W^2),
// then iterate fill-in X = hat_w o A + (1 - hat_w) o B and B = SVD_k(X).
// Starts from B = SVD_k(hat_w o A) unless init is given. The loss trace is
// non-increasing.
IterativeResult em_wlra(const Matrix& a, const Weight& w, int k, int iters = 25,
                        const std::optional<LowRankPair>& init = std::nullopt);

// Greedy baseline: k times, add the best multiple of the top singular pair
// of the residual gradient W o W o (A - B), then refit the factors by
// alternating per-column / per-row weighted least squares until the loss
// stops improving. Singular pairs whose weighted denominator vanishes are
// skipped in favor of the next pair.
IterativeResult greedy_wlra(const Matrix& a, const Weight& w, int k);

// Row sampling probabilities ||e_i^T A||^2 / ||A||_F^2.
Vector row_norm_probs(const Matrix& a);

struct SampleResult {
  Matrix approx;          // n x d, rows lie in the span of the sampled rows
  std::vector<int> rows;  // sampled row multiset, sorted
};

// Row-norm sampling baseline: draw t rows i.i.d. from row_norm_probs, then
// fit every row of A onto their span by weighted least squares.
SampleResult sample_wlra(const Matrix& a, const Weight& w, int t, std::uint64_t seed);

struct GdOptions {
  int epochs = 100;
  double lr0 = 1.0;
  double decay = 0.7;
  int decay_every = 10;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Factored gradient descent with adam-style moment estimates on U and V,
// initialized entrywise N(0,1)/sqrt(k).
IterativeResult factored_gd_wlra(const Matrix& a, const Weight& w, int k,
                                 const GdOptions& opts = {}, std::uint64_t seed = 0);

// Gradients of the weighted loss at (U, V); exposed for finite-difference
// verification.
std::pair<Matrix, Matrix> factored_gd_gradients(const Matrix& a, const Weight& w,
                                                const Matrix& u, const Matrix& v);

// Unweighted rank-k SVD of A.
LowRankPair plain_svd_baseline(const Matrix& a, int k);

// Reweighted solve followed by EM refinement at rank k, initialized from the
// rank-k truncation of the reweighted solution. Returns whichever of the two
// achieves the smaller loss, so the chain never ends worse than svd_w alone.
struct SvdWEmResult {
  ReweightedSolution base;
  LowRankPair refined;
  std::vector<double> trace;  // EM trace
  bool refined_won = false;
  double loss = 0.0;
};

SvdWEmResult svd_w_then_em(const Matrix& a, const Weight& w, int k, int iters = 25);

struct SolverReport {
  std::string solver;
  int rank = 0;
  std::uint64_t seed = 0;
  double loss = 0.0;
  double seconds = 0.0;
  long long iterations = 0;
  long long params = 0;
  std::string rng = kRngName;
};

}  // namespace wlra

#endif
