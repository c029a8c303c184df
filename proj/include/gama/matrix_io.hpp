#ifndef GAMA_MATRIX_IO_HPP
#define GAMA_MATRIX_IO_HPP

#include "gama/sym_matrix.hpp"

#include <filesystem>
#include <string>

namespace gama {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV layout: UTF-8, LF endings, one row per line, comma-separated decimal
// literals, no header. Values are written with 17 significant digits so a
// write/read round trip is value-exact.

// Reads a square matrix and symmetrizes it; asymmetry beyond 1e-9 max-abs
// emits a warning on stderr. Ragged rows, non-numeric fields, and
// non-finite values raise ParseError.
SymMatrix read_matrix(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const SymMatrix& m);

// Rectangular variants for data files and transform maps.
// skip_header detects an optional first line whose first token is not a
// number and drops it.
Eigen::MatrixXd read_dense(const std::filesystem::path& path, bool skip_header = false);

void write_dense(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Shortest 17-significant-digit decimal form used by all writers.
std::string format_double(double v);

}  // namespace gama

#endif  // GAMA_MATRIX_IO_HPP
