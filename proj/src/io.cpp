#include "wlra/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "wlra/errors.hpp"

namespace wlra {

namespace {

constexpr char kBinaryMagic[4] = {'W', 'L', 'R', 'M'};
constexpr std::uint8_t kBinaryVersion = 1;

void append_u64le(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t parse_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open for writing");
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ParseError(path, 0, "write failed");
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string field = line.substr(pos, comma - pos);
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str())
        throw ParseError(path, lineno, "expected a number, got '" + field + "'");
      while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
      if (*end != '\0')
        throw ParseError(path, lineno, "trailing characters after number in '" + field + "'");
      row.push_back(v);
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path, lineno,
                       "row has " + std::to_string(row.size()) + " fields, expected " +
                           std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, lineno, "no data rows");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_matrix_binary(const std::string& path, const Matrix& m) {
  std::string bytes;
  bytes.append(kBinaryMagic, 4);
  bytes.push_back(static_cast<char>(kBinaryVersion));
  append_u64le(bytes, static_cast<std::uint64_t>(m.rows()));
  append_u64le(bytes, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      append_u64le(bytes, std::bit_cast<std::uint64_t>(m(i, j)));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, 0, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError(path, 0, "write failed");
}

Matrix read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 21) throw ParseError(path, 0, "truncated header");
  if (std::memcmp(bytes.data(), kBinaryMagic, 4) != 0) throw ParseError(path, 0, "bad magic");
  if (static_cast<std::uint8_t>(bytes[4]) != kBinaryVersion)
    throw ParseError(path, 0, "unsupported version");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t rows = parse_u64le(p + 5);
  const std::uint64_t cols = parse_u64le(p + 13);
  if (rows == 0 || cols == 0 || rows > (1u << 30) || cols > (1u << 30))
    throw ParseError(path, 0, "implausible dimensions");
  const std::uint64_t want = 21 + 8 * rows * cols;
  if (bytes.size() != want)
    throw ParseError(path, 0,
                     "payload is " + std::to_string(bytes.size()) + " bytes, expected " +
                         std::to_string(want));
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const unsigned char* q = p + 21;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::bit_cast<double>(parse_u64le(q));
      q += 8;
    }
  return m;
}

}  // namespace wlra
