#include "wlra/weights.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wlra/errors.hpp"
#include "wlra/random.hpp"

namespace wlra {

namespace {

constexpr double kZeroTol = 1e-12;

void check_support(const std::vector<int>& idx, const std::vector<double>& val, int limit,
                   const char* what) {
  if (idx.empty()) throw std::invalid_argument(std::string("RankOneBlock: empty ") + what);
  if (idx.size() != val.size())
    throw std::invalid_argument(std::string("RankOneBlock: ") + what +
                                " support/value size mismatch");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= limit)
      throw std::invalid_argument(std::string("RankOneBlock: ") + what + " index " +
                                  std::to_string(idx[i]) + " out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw std::invalid_argument(std::string("RankOneBlock: ") + what +
                                  " support not sorted strictly increasing");
    if (!(val[i] > 0.0) || !std::isfinite(val[i]))
      throw std::invalid_argument(std::string("RankOneBlock: ") + what +
                                  " values must be positive and finite");
  }
}

bool sorted_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

// Position of index within a sorted support, or -1.
int support_pos(const std::vector<int>& support, int idx) {
  auto it = std::lower_bound(support.begin(), support.end(), idx);
  if (it == support.end() || *it != idx) return -1;
  return static_cast<int>(it - support.begin());
}

}  // namespace

RankOneBlock RankOneBlock::ones(std::vector<int> rows, std::vector<int> cols) {
  RankOneBlock b;
  b.row_values.assign(rows.size(), 1.0);
  b.col_values.assign(cols.size(), 1.0);
  b.row_support = std::move(rows);
  b.col_support = std::move(cols);
  return b;
}

StructuredWeight::StructuredWeight(int n, int d, std::vector<SparseEntry> entries,
                                   std::vector<RankOneBlock> blocks)
    : n_(n), d_(d), entries_(std::move(entries)), blocks_(std::move(blocks)) {
  if (n_ < 1 || d_ < 1) throw std::invalid_argument("StructuredWeight: dimensions must be positive");
  for (const auto& b : blocks_) {
    check_support(b.row_support, b.row_values, n_, "row");
    check_support(b.col_support, b.col_values, d_, "col");
  }
  // Two rectangles overlap only if both their row sets and their col sets do.
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (std::size_t j = i + 1; j < blocks_.size(); ++j)
      if (sorted_intersect(blocks_[i].row_support, blocks_[j].row_support) &&
          sorted_intersect(blocks_[i].col_support, blocks_[j].col_support))
        throw std::invalid_argument("StructuredWeight: blocks " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");

  std::set<std::pair<int, int>> seen;
  entry_block_value_.resize(entries_.size(), 0.0);
  entry_excluded_.resize(entries_.size(), false);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& s = entries_[e];
    if (s.row < 0 || s.row >= n_ || s.col < 0 || s.col >= d_)
      throw std::invalid_argument("StructuredWeight: sparse entry out of range");
    if (!std::isfinite(s.value) || s.value == 0.0)
      throw std::invalid_argument("StructuredWeight: sparse values must be finite and nonzero");
    if (!seen.insert({s.row, s.col}).second)
      throw std::invalid_argument("StructuredWeight: duplicate sparse entry at (" +
                                  std::to_string(s.row) + ", " + std::to_string(s.col) + ")");
    double block_val = 0.0;
    for (const auto& b : blocks_) {
      const int rp = support_pos(b.row_support, s.row);
      if (rp < 0) continue;
      const int cp = support_pos(b.col_support, s.col);
      if (cp < 0) continue;
      block_val = b.row_values[static_cast<std::size_t>(rp)] *
                  b.col_values[static_cast<std::size_t>(cp)];
      break;
    }
    const double net = block_val + s.value;
    if (net < -kZeroTol * std::max(1.0, block_val))
      throw std::invalid_argument("StructuredWeight: entry at (" + std::to_string(s.row) + ", " +
                                  std::to_string(s.col) + ") reconstructs to a negative weight");
    if (block_val == 0.0 && s.value < 0.0)
      throw std::invalid_argument("StructuredWeight: sparse value outside blocks must be positive");
    entry_block_value_[e] = block_val;
    entry_excluded_[e] = std::abs(net) <= kZeroTol * std::max(1.0, block_val);
  }
}

int StructuredWeight::rank_bound() const {
  return static_cast<int>(entries_.size() + blocks_.size());
}

long long StructuredWeight::storage_size() const {
  long long s = static_cast<long long>(entries_.size());
  for (const auto& b : blocks_)
    s += static_cast<long long>(b.row_support.size() + b.col_support.size());
  return s;
}

double StructuredWeight::entry(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= d_)
    throw std::invalid_argument("StructuredWeight::entry: index out of range");
  double v = 0.0;
  for (const auto& b : blocks_) {
    const int rp = support_pos(b.row_support, i);
    if (rp < 0) continue;
    const int cp = support_pos(b.col_support, j);
    if (cp < 0) continue;
    v = b.row_values[static_cast<std::size_t>(rp)] * b.col_values[static_cast<std::size_t>(cp)];
    break;
  }
  for (const auto& s : entries_)
    if (s.row == i && s.col == j) v += s.value;
  return std::abs(v) <= kZeroTol ? 0.0 : v;
}

Matrix StructuredWeight::dense() const {
  Matrix w = Matrix::Zero(n_, d_);
  for (const auto& b : blocks_)
    for (std::size_t a = 0; a < b.row_support.size(); ++a)
      for (std::size_t c = 0; c < b.col_support.size(); ++c)
        w(b.row_support[a], b.col_support[c]) = b.row_values[a] * b.col_values[c];
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& s = entries_[e];
    w(s.row, s.col) = entry_excluded_[e] ? 0.0 : entry_block_value_[e] + s.value;
  }
  return w;
}

Vector StructuredWeight::inverse_apply(const LowRankPair& f, const Vector& x,
                                       OpCounter* ops) const {
  if (f.rows() != n_ || f.cols() != d_)
    throw std::invalid_argument("inverse_apply: factor shape mismatch");
  if (x.size() != d_) throw std::invalid_argument("inverse_apply: vector length mismatch");
  const Index k = f.rank();
  Vector out = Vector::Zero(n_);
  long long madds = 0;

  // Block terms: for rows a in S, cols b in T the inverse entry is
  // 1/(u_a v_b), so the block contributes (1/u_a) * L_a . (R * (x|_T / v)).
  for (const auto& b : blocks_) {
    Vector z = Vector::Zero(k);
    for (std::size_t t = 0; t < b.col_support.size(); ++t) {
      const double y = x[b.col_support[t]] / b.col_values[t];
      z += f.right.col(b.col_support[t]) * y;
      madds += k + 1;
    }
    for (std::size_t a = 0; a < b.row_support.size(); ++a) {
      const int row = b.row_support[a];
      out[row] += f.left.row(row).dot(z) / b.row_values[a];
      madds += k + 1;
    }
  }

  // Sparse corrections: at a covered position the net inverse is 1/net and
  // the block term above already contributed 1/block, so correct by the
  // difference; at an excluded position cancel the block term entirely.
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& s = entries_[e];
    const double block_val = entry_block_value_[e];
    double inv_correction;
    if (entry_excluded_[e]) {
      if (block_val == 0.0) continue;
      inv_correction = -1.0 / block_val;
    } else {
      const double net = block_val + s.value;
      inv_correction = 1.0 / net - (block_val > 0.0 ? 1.0 / block_val : 0.0);
    }
    const double aij = f.left.row(s.row).dot(f.right.col(s.col));
    out[s.row] += inv_correction * aij * x[s.col];
    madds += k + 2;
  }

  if (ops) ops->madds += madds;
  return out;
}

Vector inverse_weight_apply_vector(const StructuredWeight& w, const LowRankPair& f,
                                   const Vector& x, OpCounter* ops) {
  return w.inverse_apply(f, x, ops);
}

LowRankWeight::LowRankWeight(LowRankPair factors) : factors_(std::move(factors)) {
  const Index n = factors_.rows(), d = factors_.cols();
  if (n < 1 || d < 1) throw std::invalid_argument("LowRankWeight: empty factors");
  require_finite(factors_.left, "LowRankWeight left factor");
  require_finite(factors_.right, "LowRankWeight right factor");
  const auto check = [&](Index i, Index j) {
    const double v = factors_.left.row(i).dot(factors_.right.col(j));
    if (v < -kZeroTol)
      throw std::invalid_argument("LowRankWeight: negative entry " + std::to_string(v) +
                                  " at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  };
  if (n * d <= 1000000) {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < d; ++j) check(i, j);
  } else {
    Rng rng(0x5eedc0de);
    for (int s = 0; s < 10000; ++s)
      check(static_cast<Index>(rng.index(static_cast<std::uint64_t>(n))),
            static_cast<Index>(rng.index(static_cast<std::uint64_t>(d))));
  }
}

Matrix weight_apply(const StructuredWeight& w, const Matrix& a) {
  if (a.rows() != w.rows() || a.cols() != w.cols())
    throw std::invalid_argument("weight_apply: shape mismatch");
  return w.dense().cwiseProduct(a);
}

Matrix weight_apply(const LowRankWeight& w, const Matrix& a) {
  return hadamard(w.dense(), a);
}

Matrix weight_apply(const Matrix& w, const Matrix& a) { return hadamard(w, a); }

StructuredWeight make_low_rank_plus_sparse(int n, int d, int t, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("make_low_rank_plus_sparse: bad dimensions");
  if (t < 1 || t > d) throw std::invalid_argument("make_low_rank_plus_sparse: t out of range");
  Rng rng(seed);
  std::vector<SparseEntry> entries;
  entries.reserve(static_cast<std::size_t>(n) * t);
  for (int i = 0; i < n; ++i) {
    std::set<int> cols;
    while (static_cast<int>(cols.size()) < t)
      cols.insert(static_cast<int>(rng.index(static_cast<std::uint64_t>(d))));
    for (int j : cols) entries.push_back({i, j, rng.uniform(0.5, 1.5)});
  }
  return StructuredWeight(n, d, std::move(entries), {});
}

namespace {

std::vector<int> iota_range(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo));
  for (int i = lo; i < hi; ++i) v[static_cast<std::size_t>(i - lo)] = i;
  return v;
}

}  // namespace

StructuredWeight make_low_rank_plus_diagonal(int n) {
  if (n < 1) throw std::invalid_argument("make_low_rank_plus_diagonal: bad dimension");
  std::vector<SparseEntry> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) entries.push_back({i, i, -1.0});
  std::vector<RankOneBlock> blocks;
  blocks.push_back(RankOneBlock::ones(iota_range(0, n), iota_range(0, n)));
  return StructuredWeight(n, n, std::move(entries), std::move(blocks));
}

StructuredWeight make_low_rank_plus_block_diagonal(int n, int r) {
  if (n < 1 || r < 1 || r > n || n % r != 0)
    throw std::invalid_argument("make_low_rank_plus_block_diagonal: need r >= 1 dividing n");
  const int size = n / r;
  std::vector<RankOneBlock> blocks;
  for (int g = 0; g < r; ++g) {
    const int lo = g * size, hi = (g + 1) * size;
    std::vector<int> cols;
    cols.reserve(static_cast<std::size_t>(n - size));
    for (int j = 0; j < n; ++j)
      if (j < lo || j >= hi) cols.push_back(j);
    if (cols.empty()) continue;  // r == 1: the whole matrix is one zero block
    blocks.push_back(RankOneBlock::ones(iota_range(lo, hi), std::move(cols)));
  }
  if (blocks.empty())
    throw DegenerateInputError("make_low_rank_plus_block_diagonal: weight is identically zero");
  return StructuredWeight(n, n, {}, std::move(blocks));
}

StructuredWeight make_monotone_missing(const std::vector<int>& prefix, int d) {
  const int n = static_cast<int>(prefix.size());
  if (n < 1 || d < 1) throw std::invalid_argument("make_monotone_missing: bad dimensions");
  for (int i = 0; i < n; ++i) {
    if (prefix[static_cast<std::size_t>(i)] < 0 || prefix[static_cast<std::size_t>(i)] > d)
      throw std::invalid_argument("make_monotone_missing: prefix length out of range");
    if (i > 0 && prefix[static_cast<std::size_t>(i)] > prefix[static_cast<std::size_t>(i - 1)])
      throw std::invalid_argument("make_monotone_missing: prefix lengths must be non-increasing");
  }
  std::vector<RankOneBlock> blocks;
  int i = 0;
  while (i < n) {
    const int len = prefix[static_cast<std::size_t>(i)];
    int j = i;
    while (j < n && prefix[static_cast<std::size_t>(j)] == len) ++j;
    if (len > 0) blocks.push_back(RankOneBlock::ones(iota_range(i, j), iota_range(0, len)));
    i = j;
  }
  if (blocks.empty())
    throw DegenerateInputError("make_monotone_missing: weight is identically zero");
  return StructuredWeight(n, d, {}, std::move(blocks));
}

StructuredWeight make_banded(int n, int p) {
  if (n < 1) throw std::invalid_argument("make_banded: bad dimension");
  if (p < 0 || p >= n) throw std::invalid_argument("make_banded: need 0 <= p < n");
  std::vector<SparseEntry> entries;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - p); j <= std::min(n - 1, i + p); ++j)
      entries.push_back({i, j, -1.0});
  std::vector<RankOneBlock> blocks;
  blocks.push_back(RankOneBlock::ones(iota_range(0, n), iota_range(0, n)));
  return StructuredWeight(n, n, std::move(entries), std::move(blocks));
}

}  // namespace wlra
