#include "gama/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace gama {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_field(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return false;
  *out = v;
  return true;
}

Eigen::MatrixXd read_rows(const std::filesystem::path& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (first && skip_header) {
      first = false;
      double probe;
      if (!parse_field(fields.front(), &probe)) continue;  // header line
    }
    first = false;
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      double v;
      if (!parse_field(f, &v)) {
        throw ParseError("bad numeric field '" + f + "' in " + path.string());
      }
      if (!std::isfinite(v)) {
        throw ParseError("non-finite value in " + path.string());
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged rows in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file " + path.string());

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SymMatrix read_matrix(const std::filesystem::path& path) {
  Eigen::MatrixXd m = read_rows(path, /*skip_header=*/false);
  if (m.rows() != m.cols()) {
    throw ParseError("matrix in " + path.string() + " is not square");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    std::cerr << "warning: " << path.string() << " is asymmetric by " << asym
              << " max-abs; symmetrizing\n";
  }
  return SymMatrix::from_matrix(m);
}

void write_matrix(const std::filesystem::path& path, const SymMatrix& m) {
  write_dense(path, m.mat());
}

Eigen::MatrixXd read_dense(const std::filesystem::path& path, bool skip_header) {
  return read_rows(path, skip_header);
}

void write_dense(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw ParseError("cannot write " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace gama
