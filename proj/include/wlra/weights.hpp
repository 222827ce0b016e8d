#ifndef WLRA_WEIGHTS_HPP
#define WLRA_WEIGHTS_HPP

#include <cstdint>
#include <vector>

#include "wlra/matrix.hpp"

namespace wlra {

// One rank-1 term u v^T restricted to a rectangle: rows row_support,
// columns col_support, entry (row_support[a], col_support[b]) equal to
// row_values[a] * col_values[b]. Supports are sorted index sets, values
// are strictly positive.
struct RankOneBlock {
  std::vector<int> row_support;
  std::vector<int> col_support;
  std::vector<double> row_values;
  std::vector<double> col_values;

  static RankOneBlock ones(std::vector<int> rows, std::vector<int> cols);
};

// Additive sparse correction on top of the blocks. Outside every block the
// value must be positive and is the weight itself. Inside a block the value
// adjusts the block entry; a value of exactly minus the block entry carves a
// zero (an excluded coordinate) out of the block.
struct SparseEntry {
  int row;
  int col;
  double value;
};

struct OpCounter {
  long long madds = 0;
};

// Weight matrix stored as a sum of disjoint rank-1 blocks and a sparse
// correction term: W = sum_i S_i + E. Every reconstructed entry must be
// nonnegative; entries covered by neither a block nor a sparse entry are
// zero. The storage and the entrywise-inverse apply below cost
// O(nnz(E) + sum_i |S_i| + |T_i|) rather than O(n d), and the reconstructed
// matrix has rank at most nnz(E) + (number of blocks).
class StructuredWeight {
public:
  StructuredWeight(int n, int d, std::vector<SparseEntry> entries,
                   std::vector<RankOneBlock> blocks);

  int rows() const { return n_; }
  int cols() const { return d_; }
  const std::vector<SparseEntry>& sparse_entries() const { return entries_; }
  const std::vector<RankOneBlock>& blocks() const { return blocks_; }

  // nnz(E) + number of blocks; an upper bound on the rank of dense().
  int rank_bound() const;
  // nnz(E) + sum over blocks of |rows| + |cols|.
  long long storage_size() const;

  double entry(int i, int j) const;
  Matrix dense() const;

  // (W^{o-1} o (F.left * F.right)) * x without materializing anything dense:
  // cost O(nnz(E) + sum_i (|S_i| + |T_i|) * rank(F)). Coordinates where the
  // weight is zero contribute exactly 0. Pass ops to count multiply-adds.
  Vector inverse_apply(const LowRankPair& f, const Vector& x, OpCounter* ops = nullptr) const;

private:
  int n_, d_;
  std::vector<SparseEntry> entries_;
  std::vector<RankOneBlock> blocks_;
  // Per sparse entry: the block term at that position (0 if uncovered) and
  // whether the net weight there is zero.
  std::vector<double> entry_block_value_;
  std::vector<bool> entry_excluded_;
};

Vector inverse_weight_apply_vector(const StructuredWeight& w, const LowRankPair& f,
                                   const Vector& x, OpCounter* ops = nullptr);

inline int structured_rank_bound(const StructuredWeight& w) { return w.rank_bound(); }

// Explicitly factored nonnegative weight matrix with a declared rank.
// Nonnegativity of the product is validated on construction: exhaustively
// up to 10^6 entries, otherwise on 10^4 entries sampled with a fixed seed.
class LowRankWeight {
public:
  explicit LowRankWeight(LowRankPair factors);

  const LowRankPair& factors() const { return factors_; }
  int rank() const { return static_cast<int>(factors_.rank()); }
  int rows() const { return static_cast<int>(factors_.rows()); }
  int cols() const { return static_cast<int>(factors_.cols()); }
  Matrix dense() const { return factors_.dense(); }

private:
  LowRankPair factors_;
};

Matrix weight_apply(const StructuredWeight& w, const Matrix& a);
Matrix weight_apply(const LowRankWeight& w, const Matrix& a);
Matrix weight_apply(const Matrix& w, const Matrix& a);

// The five structured families.

// W is the sparse matrix itself: per row, t entries at random columns with
// values uniform in [0.5, 1.5).
StructuredWeight make_low_rank_plus_sparse(int n, int d, int t, std::uint64_t seed);
// All ones except zeros along the diagonal (n x n).
StructuredWeight make_low_rank_plus_diagonal(int n);
// All ones except r zero diagonal blocks of size n/r (requires r | n).
StructuredWeight make_low_rank_plus_block_diagonal(int n, int r);
// Row i is ones on a prefix of length prefix[i] (non-increasing) and zero
// beyond; one block per distinct positive prefix length.
StructuredWeight make_monotone_missing(const std::vector<int>& prefix, int d);
// All ones except zeros on the band |i - j| <= p (n x n, 0 <= p < n).
StructuredWeight make_banded(int n, int p);

}  // namespace wlra

#endif
