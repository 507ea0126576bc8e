#pragma once

#include <filesystem>
#include <iosfwd>

#include "bakerlab/common.hpp"

namespace bakerlab {

/// Binary layout: uint64 rows, uint64 cols, then rows*cols complex doubles (re, im),
/// row-major, all little-endian.
void write_matrix_binary(std::ostream& out, const ComplexMatrix& m);
ComplexMatrix read_matrix_binary(std::istream& in);

/// `row,col,re,im`, nonzero entries only, row-major order. The first line after the
/// header is a `#rows,cols` comment so zero rows/columns survive a round trip.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);
ComplexMatrix read_matrix_csv(std::istream& in);

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::filesystem::path& path);

}  // namespace bakerlab
