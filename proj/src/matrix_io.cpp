#include "bakerlab/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "bakerlab/format.hpp"

namespace bakerlab {

static_assert(std::endian::native == std::endian::little, "matrix_io assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw DomainError("matrix binary: truncated input");
  return v;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const ComplexMatrix& m) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put<double>(out, m(i, j).real());
      put<double>(out, m(i, j).imag());
    }
  }
}

ComplexMatrix read_matrix_binary(std::istream& in) {
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  if (rows > (1u << 20) || cols > (1u << 20)) throw DomainError("matrix binary: implausible dimensions");
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  out << "row,col,re,im\n#" << m.rows() << ',' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx z = m(i, j);
      if (z == cplx(0.0, 0.0)) continue;
      out << i << ',' << j << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
  }
}

ComplexMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "row,col,re,im") throw DomainError("matrix CSV: missing header");
  if (!std::getline(in, line) || line.empty() || line[0] != '#') throw DomainError("matrix CSV: missing shape line");
  Eigen::Index rows = 0, cols = 0;
  {
    std::istringstream shape(line.substr(1));
    char comma = 0;
    if (!(shape >> rows >> comma >> cols) || comma != ',' || rows < 0 || cols < 0)
      throw DomainError("matrix CSV: bad shape line");
  }
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, re, im;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, re, ',') ||
        !std::getline(row, im, ','))
      throw DomainError("matrix CSV: bad row '" + line + "'");
    const auto i = std::stoll(a), j = std::stoll(b);
    if (i < 0 || j < 0 || i >= rows || j >= cols) throw DomainError("matrix CSV: index out of range");
    m(i, j) = cplx(std::stod(re), std::stod(im));
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  const bool csv = path.extension() == ".csv";
  std::ofstream out(path, csv ? std::ios::out : std::ios::binary);
  if (!out) throw DomainError("save_matrix: cannot open " + path.string());
  csv ? write_matrix_csv(out, m) : write_matrix_binary(out, m);
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  std::ifstream in(path, csv ? std::ios::in : std::ios::binary);
  if (!in) throw DomainError("load_matrix: cannot open " + path.string());
  return csv ? read_matrix_csv(in) : read_matrix_binary(in);
}

}  // namespace bakerlab
