#include "proxrec/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace proxrec {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Mat& A) {
  auto out = open_out(path);
  out << "# " << A.rows() << "," << A.cols() << "\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ",";
      out << A(i, j);
    }
    out << "\n";
  }
}

Mat read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw std::runtime_error("matrix CSV missing '# rows,cols' header: " + path);
  }
  std::istringstream hdr(line.substr(1));
  Eigen::Index rows, cols;
  char comma;
  if (!(hdr >> rows >> comma >> cols) || comma != ',' || rows < 1 || cols < 1) {
    throw std::runtime_error("malformed matrix CSV header: " + path);
  }
  Mat A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated matrix CSV: " + path);
    std::istringstream row(line);
    std::string cell;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("short row in matrix CSV: " + path);
      }
      A(i, j) = std::stod(cell);
    }
  }
  return A;
}

void write_vector_csv(const std::string& path, const Vec& v) {
  write_matrix_csv(path, v.transpose());
}

Vec read_vector_csv(const std::string& path) {
  Mat A = read_matrix_csv(path);
  if (A.rows() != 1 && A.cols() != 1) {
    throw std::runtime_error("vector CSV must be 1xN or Nx1: " + path);
  }
  if (A.rows() == 1) return A.transpose().col(0);
  return A.col(0);
}

void write_pgm(const std::string& path, const Mat& img) {
  auto out = open_out(path);
  out << "P2\n" << img.cols() << " " << img.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      double v = std::clamp(img(i, j), 0.0, 1.0);
      out << static_cast<int>(std::lround(v * 255.0));
      out << (j + 1 == img.cols() ? '\n' : ' ');
    }
  }
}

}  // namespace proxrec
