#ifndef WLRA_IO_HPP
#define WLRA_IO_HPP

#include <string>

#include "wlra/matrix.hpp"

namespace wlra {

// Text format: one row per line, entries comma-separated, written with 17
// significant digits; lines starting with '#' and blank lines are skipped
// on read. Round trip preserves values to 1e-15 relative.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

// Binary format: magic "WLRM", version byte 1, row and column counts as
// 64-bit little-endian unsigned integers, then the entries row-major as
// little-endian IEEE-754 doubles. Round trip is bit-exact.
void write_matrix_binary(const std::string& path, const Matrix& m);
Matrix read_matrix_binary(const std::string& path);

}  // namespace wlra

#endif
