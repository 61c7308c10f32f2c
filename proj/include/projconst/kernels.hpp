#pragma once

#include <cstddef>

namespace projconst::kern {

// Inner-loop primitives shared by the norm and search code. Two
// implementations: a scalar reference and a vectorized variant picked at
// runtime from CPU features. Both must agree to tight tolerance; the unit
// tests enforce that on random data.
struct Ops {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*nrm2sq)(const double* x, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // sum over i of (s*|x_i|)^e, integer e >= 1
  double (*pow_sum)(const double* x, std::size_t n, int e, double s);
  // out_i = sign(x_i) * (s*|x_i|)^e
  void (*spow_scale)(const double* x, std::size_t n, int e, double s,
                     double* out);
  // row-major m x n times x -> out(m)
  void (*matvec)(const double* a, std::size_t m, std::size_t n,
                 const double* x, double* out);
  // transpose apply: out(n) = A^T y
  void (*matvec_t)(const double* a, std::size_t m, std::size_t n,
                   const double* y, double* out);
};

const Ops& scalar_ops();

// Best available implementation. Resolved once; PROJCONST_FORCE_SCALAR=1
// pins the scalar path.
const Ops& active();

}  // namespace projconst::kern
