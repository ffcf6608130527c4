#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "visolve/space.hpp"

namespace visolve {

// Dense row-major matrix; just enough linear algebra for the affine test
// problems and the control dynamics.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  Vector apply(const Vector& x) const {
    if (x.size() != cols)
      throw std::invalid_argument("Matrix::apply: got vector of size " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(cols));
    Vector y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      const double* row = &a[i * cols];
      for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  Vector apply_transpose(const Vector& x) const {
    if (x.size() != rows)
      throw std::invalid_argument("Matrix::apply_transpose: got vector of size " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(rows));
    Vector y(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = &a[i * cols];
      for (std::size_t j = 0; j < cols; ++j) y[j] += row[j] * x[i];
    }
    return y;
  }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }
};

}  // namespace visolve
