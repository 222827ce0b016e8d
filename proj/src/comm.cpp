#include "wlra/comm.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "wlra/errors.hpp"
#include "wlra/random.hpp"

namespace wlra {

void BitWriter::put(std::uint64_t value, int bits) {
  if (bits < 0 || bits > 64) throw std::invalid_argument("BitWriter: bad field width");
  if (bits < 64 && (value >> bits) != 0)
    throw std::invalid_argument("BitWriter: value does not fit in " + std::to_string(bits) +
                                " bits");
  for (int b = bits - 1; b >= 0; --b) {
    cur_ = static_cast<std::uint8_t>((cur_ << 1) | ((value >> b) & 1u));
    if (++fill_ == 8) {
      out_.push_back(cur_);
      cur_ = 0;
      fill_ = 0;
    }
  }
  nbits_ += bits;
}

void BitWriter::put_bytes(const std::uint8_t* data, std::size_t len) {
  if (fill_ != 0) throw std::logic_error("BitWriter: raw bytes off a byte boundary");
  out_.insert(out_.end(), data, data + len);
  nbits_ += 8 * static_cast<long long>(len);
}

std::vector<std::uint8_t> BitWriter::take() {
  if (fill_ != 0) {
    out_.push_back(static_cast<std::uint8_t>(cur_ << (8 - fill_)));
    cur_ = 0;
    fill_ = 0;
  }
  return std::move(out_);
}

std::uint64_t BitReader::get(int bits) {
  if (bits < 0 || bits > 64) throw std::invalid_argument("BitReader: bad field width");
  std::uint64_t v = 0;
  for (int b = 0; b < bits; ++b) {
    const long long byte = pos_ >> 3;
    if (byte >= static_cast<long long>(bytes_.size()))
      throw ParseError("WLRC stream", pos_, "read past the end");
    const int shift = 7 - static_cast<int>(pos_ & 7);
    v = (v << 1) | ((bytes_[static_cast<std::size_t>(byte)] >> shift) & 1u);
    ++pos_;
  }
  return v;
}

void BitReader::get_bytes(std::uint8_t* out, std::size_t len) {
  if ((pos_ & 7) != 0) throw std::logic_error("BitReader: raw bytes off a byte boundary");
  const long long byte = pos_ >> 3;
  if (byte + static_cast<long long>(len) > static_cast<long long>(bytes_.size()))
    throw ParseError("WLRC stream", pos_, "read past the end");
  std::memcpy(out, bytes_.data() + byte, len);
  pos_ += 8 * static_cast<long long>(len);
}

int bits_for_count(std::uint64_t n) {
  if (n <= 1) return 1;
  return std::bit_width(n - 1);
}

namespace {

constexpr std::uint8_t kMagic[4] = {'W', 'L', 'R', 'C'};
constexpr std::uint8_t kVersion = 1;

double quant_scale(std::uint64_t n, std::uint64_t d) {
  const double nd = static_cast<double>(n) * static_cast<double>(d);
  return nd * nd;
}

void put_u32le(BitWriter& w, std::uint32_t v) {
  const std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v >> 16),
                             static_cast<std::uint8_t>(v >> 24)};
  w.put_bytes(b, 4);
}

std::uint32_t get_u32le(BitReader& r) {
  std::uint8_t b[4];
  r.get_bytes(b, 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

int magnitude_bits(std::int64_t maxmag) {
  if (maxmag <= 0) return 1;
  return std::bit_width(static_cast<std::uint64_t>(maxmag));
}

// Writes everything after the fixed header. Shared by serialize and the
// total_bits accounting so the two cannot drift apart.
void write_payloads(BitWriter& w, const EncodedSolution& e) {
  const std::size_t cols = e.column_indices.size();
  if (cols == 0) return;
  const int colidx_bits = bits_for_count(e.d);
  const int pos_bits = bits_for_count(e.n);
  const int cnt_bits = bits_for_count(static_cast<std::uint64_t>(e.n) + 1);
  for (std::uint32_t j : e.column_indices) w.put(j, colidx_bits);
  for (const auto& payload : e.column_payload) {
    w.put(payload.size(), cnt_bits);
    for (const auto& entry : payload) {
      w.put(entry.row, pos_bits);
      w.put(entry.value < 0 ? 1 : 0, 1);
      w.put(static_cast<std::uint64_t>(entry.value < 0 ? -entry.value : entry.value),
            e.bits_per_entry);
    }
  }
  w.put(static_cast<std::uint64_t>(e.coeff_bits), 8);
  w.put(e.coeff_payload.size(), 32);
  const int xrow_bits = bits_for_count(cols);
  const int xcol_bits = bits_for_count(e.d);
  for (const auto& entry : e.coeff_payload) {
    w.put(entry.row, xrow_bits);
    w.put(entry.col, xcol_bits);
    w.put(entry.value < 0 ? 1 : 0, 1);
    w.put(static_cast<std::uint64_t>(entry.value < 0 ? -entry.value : entry.value),
          e.coeff_bits);
  }
}

}  // namespace

std::vector<std::uint8_t> EncodedSolution::serialize() const {
  BitWriter w;
  w.put_bytes(kMagic, 4);
  w.put_bytes(&kVersion, 1);
  put_u32le(w, n);
  put_u32le(w, d);
  put_u32le(w, static_cast<std::uint32_t>(column_indices.size()));
  put_u32le(w, static_cast<std::uint32_t>(bits_per_entry));
  write_payloads(w, *this);
  return w.take();
}

Matrix EncodedSolution::decoded_columns() const {
  Matrix out = Matrix::Zero(n, static_cast<Index>(column_payload.size()));
  for (std::size_t c = 0; c < column_payload.size(); ++c)
    for (const auto& entry : column_payload[c])
      out(entry.row, static_cast<Index>(c)) = static_cast<double>(entry.value);
  return out;
}

Matrix EncodedSolution::decoded_coeffs() const {
  Matrix out = Matrix::Zero(static_cast<Index>(column_indices.size()), d);
  const double scale = quant_scale(n, d);
  for (const auto& entry : coeff_payload)
    out(entry.row, entry.col) = static_cast<double>(entry.value) / scale;
  return out;
}

EncodedSolution encode_css(const Matrix& a, const CssSolution& sol) {
  const Index n = a.rows(), d = a.cols();
  if (sol.selected.rows() != n)
    throw std::invalid_argument("encode_css: solution does not match the matrix");
  EncodedSolution e;
  e.n = static_cast<std::uint32_t>(n);
  e.d = static_cast<std::uint32_t>(d);

  const double bound = quant_scale(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
  std::int64_t maxmag = 0;
  for (int j : sol.columns) {
    if (j < 0 || j >= d) throw std::invalid_argument("encode_css: column index out of range");
    e.column_indices.push_back(static_cast<std::uint32_t>(j));
    std::vector<SparseColumnEntry> payload;
    for (Index i = 0; i < n; ++i) {
      const double v = a(i, j);
      const double rv = std::round(v);
      if (std::abs(v - rv) > 1e-9)
        throw std::invalid_argument("encode_css: entry " + std::to_string(v) +
                                    " is not an integer");
      if (std::abs(rv) > bound)
        throw std::invalid_argument("encode_css: entry magnitude exceeds the bound");
      const auto iv = static_cast<std::int64_t>(rv);
      if (iv != 0) {
        payload.push_back({static_cast<std::uint32_t>(i), iv});
        maxmag = std::max<std::int64_t>(maxmag, iv < 0 ? -iv : iv);
      }
    }
    e.column_payload.push_back(std::move(payload));
  }
  e.bits_per_entry = magnitude_bits(maxmag);

  const double scale = bound;
  std::int64_t maxq = 0;
  for (Index i = 0; i < sol.coeffs.rows(); ++i)
    for (Index j = 0; j < sol.coeffs.cols(); ++j) {
      const double x = sol.coeffs(i, j);
      if (std::abs(x) > bound)
        throw std::invalid_argument("encode_css: coefficient magnitude exceeds the bound");
      const auto q = static_cast<std::int64_t>(std::llround(x * scale));
      if (q != 0) {
        e.coeff_payload.push_back(
            {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), q});
        maxq = std::max<std::int64_t>(maxq, q < 0 ? -q : q);
      }
    }
  e.coeff_bits = magnitude_bits(maxq);
  if (e.coeff_bits > 62) throw std::invalid_argument("encode_css: coefficient grid overflow");

  BitWriter counter;
  write_payloads(counter, e);
  e.total_bits = 8 * (4 + 1 + 16) + counter.bit_count();
  return e;
}

EncodedSolution decode_css(const std::vector<std::uint8_t>& bytes) {
  BitReader r(bytes);
  std::uint8_t magic[4];
  r.get_bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError("WLRC stream", 0, "bad magic");
  std::uint8_t version;
  r.get_bytes(&version, 1);
  if (version != kVersion) throw ParseError("WLRC stream", 4, "unsupported version");

  EncodedSolution e;
  e.n = get_u32le(r);
  e.d = get_u32le(r);
  const std::uint32_t cols = get_u32le(r);
  e.bits_per_entry = static_cast<int>(get_u32le(r));
  if (e.n == 0 || e.d == 0 || e.bits_per_entry < 1 || e.bits_per_entry > 62)
    throw ParseError("WLRC stream", 5, "malformed header");
  if (cols == 0) {
    e.total_bits = r.bit_offset();
    return e;
  }

  const int colidx_bits = bits_for_count(e.d);
  const int pos_bits = bits_for_count(e.n);
  const int cnt_bits = bits_for_count(static_cast<std::uint64_t>(e.n) + 1);
  for (std::uint32_t c = 0; c < cols; ++c) {
    const auto j = static_cast<std::uint32_t>(r.get(colidx_bits));
    if (j >= e.d) throw ParseError("WLRC stream", r.bit_offset(), "column index out of range");
    e.column_indices.push_back(j);
  }
  for (std::uint32_t c = 0; c < cols; ++c) {
    const auto count = r.get(cnt_bits);
    if (count > e.n) throw ParseError("WLRC stream", r.bit_offset(), "bad entry count");
    std::vector<SparseColumnEntry> payload;
    std::int64_t prev_row = -1;
    for (std::uint64_t t = 0; t < count; ++t) {
      const auto row = static_cast<std::uint32_t>(r.get(pos_bits));
      const bool neg = r.get(1) != 0;
      const auto mag = static_cast<std::int64_t>(r.get(e.bits_per_entry));
      if (row >= e.n || static_cast<std::int64_t>(row) <= prev_row || mag == 0)
        throw ParseError("WLRC stream", r.bit_offset(), "non-canonical column entry");
      prev_row = row;
      payload.push_back({row, neg ? -mag : mag});
    }
    e.column_payload.push_back(std::move(payload));
  }
  e.coeff_bits = static_cast<int>(r.get(8));
  if (e.coeff_bits < 1 || e.coeff_bits > 62)
    throw ParseError("WLRC stream", r.bit_offset(), "bad coefficient width");
  const auto xcount = r.get(32);
  const int xrow_bits = bits_for_count(cols);
  const int xcol_bits = bits_for_count(e.d);
  std::int64_t prev = -1;
  for (std::uint64_t t = 0; t < xcount; ++t) {
    const auto row = static_cast<std::uint32_t>(r.get(xrow_bits));
    const auto col = static_cast<std::uint32_t>(r.get(xcol_bits));
    const bool neg = r.get(1) != 0;
    const auto mag = static_cast<std::int64_t>(r.get(e.coeff_bits));
    const std::int64_t key = static_cast<std::int64_t>(row) * e.d + col;
    if (row >= cols || col >= e.d || key <= prev || mag == 0)
      throw ParseError("WLRC stream", r.bit_offset(), "non-canonical coefficient entry");
    prev = key;
    e.coeff_payload.push_back({row, col, neg ? -mag : mag});
  }
  e.total_bits = r.bit_offset();
  return e;
}

BlockDiagInstance build_lb_instance(int n, int r, int s, int k, std::uint64_t seed) {
  if (n < 1 || r < 1 || r > n || n % r != 0)
    throw std::invalid_argument("build_lb_instance: r must divide n");
  const int m = n / r;
  if (s < 1 || s > m || k < 1 || k > m)
    throw std::invalid_argument("build_lb_instance: s and k must lie in [1, n/r]");

  Rng rng(seed);
  Matrix a_dense(s * r, k);
  for (Index i = 0; i < a_dense.rows(); ++i)
    for (Index j = 0; j < k; ++j) a_dense(i, j) = rng.bit() ? 1.0 : 0.0;

  std::vector<RankOneBlock> blocks;
  for (int b = 0; b < r; ++b) {
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = b * m + i;
    blocks.push_back(RankOneBlock::ones(idx, idx));
  }
  StructuredWeight w(n, n, {}, std::move(blocks));

  Matrix a = Matrix::Zero(n, n);
  for (int b = 0; b < r; ++b)
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < k; ++j) {
        const double v = a_dense(b * s + i, j);
        for (int c = 0; c < r; ++c) a(b * m + i, c * m + j) = v;
      }
  return BlockDiagInstance{n, r, s, k, std::move(w), std::move(a), std::move(a_dense)};
}

Matrix add_offsupport_noise(const BlockDiagInstance& inst, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("add_offsupport_noise: bad amplitude");
  Rng rng(seed);
  Matrix out = inst.a;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (inst.w.entry(i, j) == 0.0) out(i, j) += amplitude * rng.normal();
  return out;
}

namespace {

template <typename EntryFn>
Matrix read_secret(double loss, const BlockDiagInstance& inst, EntryFn&& entry) {
  if (!(loss < 0.25))
    throw RecoveryError("recover_secret: weighted loss " + std::to_string(loss) +
                        " is not below 1/4");
  const int m = inst.n / inst.r;
  Matrix out(inst.s * inst.r, inst.k);
  for (int p = 0; p < inst.s * inst.r; ++p) {
    const int b = p / inst.s;
    const int i = p % inst.s;
    for (int j = 0; j < inst.k; ++j)
      out(p, j) = entry(b * m + i, b * m + j) >= 0.5 ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace

Matrix recover_secret(const Matrix& approx, const BlockDiagInstance& inst) {
  const Weight w(inst.w);
  const double loss = weighted_loss(inst.a, w, approx);
  return read_secret(loss, inst, [&](int i, int j) { return approx(i, j); });
}

Matrix recover_secret(const ReweightedSolution& approx, const BlockDiagInstance& inst) {
  const Weight w(inst.w);
  const double loss = weighted_loss(inst.a, w, approx);
  return read_secret(loss, inst, [&](int i, int j) { return approx.entry(i, j); });
}

}  // namespace wlra
