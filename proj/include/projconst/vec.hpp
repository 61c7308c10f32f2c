#pragma once

#include <cstddef>
#include <vector>

namespace projconst {

using Vector = std::vector<double>;

struct MatrixDense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row major

  MatrixDense() = default;
  MatrixDense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  const double* row(std::size_t i) const { return a.data() + i * cols; }

  static MatrixDense identity(std::size_t n) {
    MatrixDense m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

}  // namespace projconst
