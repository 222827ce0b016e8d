#ifndef WLRA_COMM_HPP
#define WLRA_COMM_HPP

#include <cstdint>
#include <vector>

#include "wlra/matrix.hpp"
#include "wlra/solvers.hpp"
#include "wlra/weights.hpp"

namespace wlra {

// Bit-level serialization, most significant bit first within each byte.
class BitWriter {
public:
  // Append the low `bits` bits of value; value must fit.
  void put(std::uint64_t value, int bits);
  // Append raw bytes; only legal on a byte boundary.
  void put_bytes(const std::uint8_t* data, std::size_t len);
  long long bit_count() const { return nbits_; }
  // Pads the final partial byte with zero bits.
  std::vector<std::uint8_t> take();

private:
  std::vector<std::uint8_t> out_;
  std::uint8_t cur_ = 0;
  int fill_ = 0;
  long long nbits_ = 0;
};

class BitReader {
public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t get(int bits);
  void get_bytes(std::uint8_t* out, std::size_t len);
  long long bit_offset() const { return pos_; }

private:
  const std::vector<std::uint8_t>& bytes_;
  long long pos_ = 0;
};

// Number of bits needed to index the half-open range [0, n).
int bits_for_count(std::uint64_t n);

struct SparseColumnEntry {
  std::uint32_t row;
  std::int64_t value;
};

struct CoeffEntry {
  std::uint32_t row;
  std::uint32_t col;
  std::int64_t value;  // quantized, scale 1 / (n d)^2
};

// A column-subset solution packed for transmission: the selected column
// indices, the nonzero integer entries of those columns of A, and the
// nonzero entries of the coefficient matrix X quantized to the grid
// 1 / (n d)^2. Serializes as the magic "WLRC", a version byte, four 32-bit
// little-endian header words (n, d, number of columns, bits_per_entry),
// then the bit-packed payloads.
struct EncodedSolution {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::vector<std::uint32_t> column_indices;
  std::vector<std::vector<SparseColumnEntry>> column_payload;
  std::vector<CoeffEntry> coeff_payload;
  int bits_per_entry = 1;  // magnitude bits for column values
  int coeff_bits = 1;      // magnitude bits for quantized coefficients
  long long total_bits = 0;

  std::vector<std::uint8_t> serialize() const;
  // The transmitted columns of A as a dense n x |S| matrix.
  Matrix decoded_columns() const;
  // The dequantized coefficient matrix, |S| x d.
  Matrix decoded_coeffs() const;
};

// Pack a solution whose selected columns of A are integral with magnitudes
// at most (n d)^2; coefficients are quantized to the 1 / (n d)^2 grid.
// Non-integral or oversized entries are parameter errors.
EncodedSolution encode_css(const Matrix& a, const CssSolution& sol);
EncodedSolution decode_css(const std::vector<std::uint8_t>& bytes);

// Planted hard instance: W masks r disjoint all-ones diagonal blocks of
// size n/r, and A repeats a zero-padded random binary matrix a_dense
// (sr x k) horizontally so that the optimal rank-k weighted loss is 0,
// while the supported entries of any near-optimal solution reveal a_dense.
struct BlockDiagInstance {
  int n = 0;
  int r = 0;
  int s = 0;
  int k = 0;
  StructuredWeight w;
  Matrix a;
  Matrix a_dense;
};

// Requires r | n and s, k <= n/r.
BlockDiagInstance build_lb_instance(int n, int r, int s, int k, std::uint64_t seed);

// A copy of inst.a with Gaussian noise of the given amplitude added at
// every coordinate outside the support of W. The weighted loss of any
// candidate is unchanged, but unweighted methods see a different matrix.
Matrix add_offsupport_noise(const BlockDiagInstance& inst, double amplitude, std::uint64_t seed);

// Read the planted bits back out of an approximation. The weighted loss of
// the approximation must be below 1/4 (any wrong supported bit costs at
// least that); otherwise recovery fails. Entries are rounded at 1/2.
Matrix recover_secret(const Matrix& approx, const BlockDiagInstance& inst);
Matrix recover_secret(const ReweightedSolution& approx, const BlockDiagInstance& inst);

}  // namespace wlra

#endif
