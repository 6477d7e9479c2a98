#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "falc/dense.hpp"

namespace falc {

class MatrixFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV: one matrix row per line, comma-separated decimal reals.
DenseMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const DenseMatrix& a);

// FMAT1: magic "FMAT1\0", little-endian u64 rows, u64 cols, then rows*cols
// little-endian IEEE-754 doubles in column-major order.
DenseMatrix read_fmat(std::istream& in);
void write_fmat(std::ostream& out, const DenseMatrix& a);

/// Dispatches on the file content: FMAT1 magic, otherwise CSV.
DenseMatrix load_matrix(const std::filesystem::path& path);
/// ".csv" writes CSV, anything else FMAT1.
void save_matrix(const std::filesystem::path& path, const DenseMatrix& a);

}  // namespace falc
