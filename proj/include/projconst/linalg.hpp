#pragma once

#include <vector>

#include "projconst/vec.hpp"

namespace projconst {

// (sum_i |v_i|^e)^(1/e) with the largest magnitude factored out first, so
// entries near the double overflow/underflow limits stay representable.
double stable_power_sum(const std::vector<double>& values, int exponent);

// Euclidean-orthonormal basis of ker f, n-1 vectors, built from the
// Householder reflector sending f to a coordinate axis.
std::vector<Vector> null_space_basis(const Vector& f);

// Joint kernel of all rows: n - rank orthonormal vectors annihilated by
// every row.
std::vector<Vector> joint_null_space_basis(const MatrixDense& rows);

// max over i of prod_{j != i} (1+|x_j|)/|x_j - x_i|, an upper bound for the
// max-row-sum norm of the inverse Vandermonde with columns (1, x_i, ...).
double vandermonde_inverse_norm_bound(const std::vector<double>& nodes);

// Max-absolute-row-sum norm of M^{-1} by Gauss-Jordan with full pivoting.
double exact_inf_norm_inverse(const MatrixDense& m);

MatrixDense vandermonde_matrix(const std::vector<double>& nodes);

// Partial-pivot solve, relative singularity cutoff 1e-13.
std::vector<double> lin_solve(MatrixDense a, std::vector<double> b);

std::size_t matrix_rank(MatrixDense a, double tol = 1e-10);

}  // namespace projconst
