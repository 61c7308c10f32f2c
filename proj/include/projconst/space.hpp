#pragma once

#include <vector>

#include "projconst/optimize.hpp"
#include "projconst/vec.hpp"

namespace projconst {

// X = (R^n, ||.||) with ||x|| = (sum_i |f_i(x)|^{2p})^{1/2p}. The rows of F
// are the functionals f_1..f_m; rank(F) = n makes this a norm.
struct FunctionalFamily {
  std::size_t n = 0;
  std::size_t m = 0;
  int p = 1;
  MatrixDense F;

  FunctionalFamily(int p_, MatrixDense f_);

  int two_p() const { return 2 * p; }
  // Holder conjugate of 2p; the dual of l_{2p} is l_q
  double q() const { return 2.0 * p / (2.0 * p - 1.0); }
};

struct Hyperplane {
  Vector f;  // dual norm 1 after construction
};

struct SupportFunctional {
  Vector base_point;
  Vector coefficients;  // length m; f_y(x) = sum_i coefficients[i] * f_i(x)
};

Vector family_apply(const FunctionalFamily& sp, const Vector& x);

double norm_eval(const FunctionalFamily& sp, const Vector& x);

Vector norm_gradient(const FunctionalFamily& sp, const Vector& x);

SupportFunctional supporting_functional(const FunctionalFamily& sp,
                                        const Vector& y);

double support_eval(const FunctionalFamily& sp, const SupportFunctional& fy,
                    const Vector& x);

// R^n representative g with g(x) = <g, x> equal to the coefficient expansion.
Vector functional_vector(const FunctionalFamily& sp,
                         const SupportFunctional& fy);

double dual_norm(const FunctionalFamily& sp, const Vector& g);
double dual_norm(const FunctionalFamily& sp, const Vector& g,
                 const SearchConfig& config);

double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const Vector& h);
double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const Vector& h, const SearchConfig& config);

// max of g over the unit ball cut down to the joint kernel of several
// functionals; equals the dual distance from g to their span
double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const std::vector<Vector>& constraints,
                            const SearchConfig& config);

double quotient_distance(const FunctionalFamily& sp, const Vector& x,
                         const std::vector<Vector>& basis);
double quotient_distance(const FunctionalFamily& sp, const Vector& x,
                         const std::vector<Vector>& basis,
                         const SearchConfig& config);

Hyperplane make_hyperplane(const FunctionalFamily& sp, Vector f);
Hyperplane make_hyperplane(const FunctionalFamily& sp, Vector f,
                           const SearchConfig& config);

}  // namespace projconst
