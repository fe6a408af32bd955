#pragma once

#include <string>

#include "proxrec/shrinkage.hpp"

namespace proxrec {

/// CSV with a leading "# rows,cols" comment line, then row-major values.
void write_matrix_csv(const std::string& path, const Mat& A);
Mat read_matrix_csv(const std::string& path);

void write_vector_csv(const std::string& path, const Vec& v);
Vec read_vector_csv(const std::string& path);

/// 8-bit grayscale preview, values clamped to [0, 1].
void write_pgm(const std::string& path, const Mat& img);

}  // namespace proxrec
