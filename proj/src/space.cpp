#include "projconst/space.hpp"

#include <cmath>

#include "projconst/errors.hpp"
#include "projconst/kernels.hpp"
#include "projconst/linalg.hpp"

namespace projconst {

FunctionalFamily::FunctionalFamily(int p_, MatrixDense f_)
    : n(f_.cols), m(f_.rows), p(p_), F(std::move(f_)) {
  if (m < 1 || n < 1) throw Error("FunctionalFamily: empty matrix");
  if (p < 1) throw Error("FunctionalFamily: p must be a positive integer");
  for (double v : F.a)
    if (!std::isfinite(v)) throw Error("FunctionalFamily: non-finite entry");
  for (std::size_t i = 0; i < m; ++i)
    if (kern::active().max_abs(F.row(i), n) == 0.0)
      throw ZeroFunctional("FunctionalFamily: zero functional row");
  if (matrix_rank(F) != n)
    throw RankDeficient("FunctionalFamily: rank(F) below n");
}

Vector family_apply(const FunctionalFamily& sp, const Vector& x) {
  if (x.size() != sp.n)
    throw DimensionMismatch("family_apply: vector length != n");
  Vector u(sp.m);
  kern::active().matvec(sp.F.a.data(), sp.m, sp.n, x.data(), u.data());
  return u;
}

double norm_eval(const FunctionalFamily& sp, const Vector& x) {
  Vector u = family_apply(sp, x);
  return stable_power_sum(u, sp.two_p());
}

namespace {

// coefficients c_i = sign(u_i) (|u_i|/M)^{2p-1} / S^{(2p-1)/(2p)} with
// u = Fx, M = max|u_i|, S = sum (|u_i|/M)^{2p}; then grad ||x|| = F^T c and
// f_x = sum c_i f_i.
Vector support_coefficients(const FunctionalFamily& sp, const Vector& x) {
  Vector u = family_apply(sp, x);
  const auto& k = kern::active();
  double mx = k.max_abs(u.data(), u.size());
  if (mx == 0.0) throw ZeroVector();
  double s = k.pow_sum(u.data(), u.size(), sp.two_p(), 1.0 / mx);
  Vector c(sp.m);
  k.spow_scale(u.data(), u.size(), sp.two_p() - 1, 1.0 / mx, c.data());
  double denom =
      std::pow(s, static_cast<double>(sp.two_p() - 1) / sp.two_p());
  for (auto& v : c) v /= denom;
  return c;
}

}  // namespace

Vector norm_gradient(const FunctionalFamily& sp, const Vector& x) {
  Vector c = support_coefficients(sp, x);
  Vector g(sp.n);
  kern::active().matvec_t(sp.F.a.data(), sp.m, sp.n, c.data(), g.data());
  return g;
}

SupportFunctional supporting_functional(const FunctionalFamily& sp,
                                        const Vector& y) {
  return {y, support_coefficients(sp, y)};
}

double support_eval(const FunctionalFamily& sp, const SupportFunctional& fy,
                    const Vector& x) {
  Vector u = family_apply(sp, x);
  return kern::active().dot(fy.coefficients.data(), u.data(), sp.m);
}

Vector functional_vector(const FunctionalFamily& sp,
                         const SupportFunctional& fy) {
  Vector g(sp.n);
  kern::active().matvec_t(sp.F.a.data(), sp.m, sp.n, fy.coefficients.data(),
                          g.data());
  return g;
}

namespace {

SearchConfig lean_default() {
  SearchConfig cfg;
  return cfg;
}

// maximize <g,x>/||x|| over the Euclidean sphere; 0-homogeneous, smooth off 0
double dual_norm_impl(const FunctionalFamily& sp, const Vector& g,
                      const SearchConfig& cfg) {
  if (g.size() != sp.n)
    throw DimensionMismatch("dual_norm: vector length != n");
  if (kern::active().max_abs(g.data(), g.size()) == 0.0) return 0.0;
  Objective obj = [&](const Vector& x) {
    double nx = norm_eval(sp, x);
    return kern::active().dot(g.data(), x.data(), sp.n) / nx;
  };
  GradientFn grad = [&](const Vector& x) {
    double nx = norm_eval(sp, x);
    double gx = kern::active().dot(g.data(), x.data(), sp.n);
    Vector dn = norm_gradient(sp, x);
    Vector out(sp.n);
    for (std::size_t i = 0; i < sp.n; ++i)
      out[i] = g[i] / nx - gx / (nx * nx) * dn[i];
    return out;
  };
  return maximize_on_sphere(obj, grad, sp.n, cfg).value;
}

}  // namespace

double dual_norm(const FunctionalFamily& sp, const Vector& g) {
  return dual_norm_impl(sp, g, lean_default());
}

double dual_norm(const FunctionalFamily& sp, const Vector& g,
                 const SearchConfig& config) {
  return dual_norm_impl(sp, g, config);
}

namespace {

double restricted_over_basis(const FunctionalFamily& sp, const Vector& g,
                             const std::vector<Vector>& basis,
                             const SearchConfig& cfg) {
  std::size_t k = basis.size();
  if (k == 0) return 0.0;
  // objective in kernel coordinates c: x = sum c_j b_j
  auto expand = [&](const Vector& c) {
    Vector x(sp.n, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      kern::active().axpy(c[j], basis[j].data(), x.data(), sp.n);
    return x;
  };
  Objective obj = [&](const Vector& c) {
    Vector x = expand(c);
    return kern::active().dot(g.data(), x.data(), sp.n) / norm_eval(sp, x);
  };
  GradientFn grad = [&](const Vector& c) {
    Vector x = expand(c);
    double nx = norm_eval(sp, x);
    double gx = kern::active().dot(g.data(), x.data(), sp.n);
    Vector dn = norm_gradient(sp, x);
    Vector full(sp.n);
    for (std::size_t i = 0; i < sp.n; ++i)
      full[i] = g[i] / nx - gx / (nx * nx) * dn[i];
    Vector out(k);
    for (std::size_t j = 0; j < k; ++j)
      out[j] = kern::active().dot(basis[j].data(), full.data(), sp.n);
    return out;
  };
  return maximize_on_sphere(obj, grad, k, cfg).value;
}

double restricted_impl(const FunctionalFamily& sp, const Vector& g,
                       const Vector& h, const SearchConfig& cfg) {
  if (g.size() != sp.n || h.size() != sp.n)
    throw DimensionMismatch("restricted_dual_norm: vector length != n");
  std::vector<Vector> basis = null_space_basis(h);  // throws ZeroFunctional
  return restricted_over_basis(sp, g, basis, cfg);
}

}  // namespace

double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const Vector& h) {
  return restricted_impl(sp, g, h, lean_default());
}

double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const Vector& h, const SearchConfig& config) {
  return restricted_impl(sp, g, h, config);
}

double restricted_dual_norm(const FunctionalFamily& sp, const Vector& g,
                            const std::vector<Vector>& constraints,
                            const SearchConfig& config) {
  if (g.size() != sp.n)
    throw DimensionMismatch("restricted_dual_norm: vector length != n");
  if (constraints.empty()) return dual_norm(sp, g, config);
  MatrixDense rows(constraints.size(), sp.n);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].size() != sp.n)
      throw DimensionMismatch("restricted_dual_norm: constraint length != n");
    for (std::size_t j = 0; j < sp.n; ++j) rows.at(i, j) = constraints[i][j];
  }
  std::vector<Vector> basis = joint_null_space_basis(rows);
  return restricted_over_basis(sp, g, basis, config);
}

namespace {

double quotient_impl(const FunctionalFamily& sp, const Vector& x,
                     const std::vector<Vector>& basis,
                     const SearchConfig& cfg) {
  if (x.size() != sp.n)
    throw DimensionMismatch("quotient_distance: vector length != n");
  std::size_t k = basis.size();
  if (k == 0) return norm_eval(sp, x);
  MatrixDense b(k, sp.n);
  for (std::size_t i = 0; i < k; ++i) {
    if (basis[i].size() != sp.n)
      throw DimensionMismatch("quotient_distance: basis vector length != n");
    for (std::size_t j = 0; j < sp.n; ++j) b.at(i, j) = basis[i][j];
  }
  if (matrix_rank(b) != k)
    throw DependentBasis("quotient_distance: basis is linearly dependent");
  Objective obj = [&](const Vector& c) {
    Vector y = x;
    for (std::size_t j = 0; j < k; ++j)
      kern::active().axpy(-c[j], basis[j].data(), y.data(), sp.n);
    return norm_eval(sp, y);
  };
  return minimize_convex_nd(obj, k, cfg).value;
}

}  // namespace

double quotient_distance(const FunctionalFamily& sp, const Vector& x,
                         const std::vector<Vector>& basis) {
  return quotient_impl(sp, x, basis, lean_default());
}

double quotient_distance(const FunctionalFamily& sp, const Vector& x,
                         const std::vector<Vector>& basis,
                         const SearchConfig& config) {
  return quotient_impl(sp, x, basis, config);
}

Hyperplane make_hyperplane(const FunctionalFamily& sp, Vector f) {
  return make_hyperplane(sp, std::move(f), lean_default());
}

Hyperplane make_hyperplane(const FunctionalFamily& sp, Vector f,
                           const SearchConfig& config) {
  if (f.size() != sp.n)
    throw DimensionMismatch("make_hyperplane: vector length != n");
  if (kern::active().max_abs(f.data(), f.size()) == 0.0)
    throw ZeroFunctional();
  double d = dual_norm(sp, f, config);
  if (!(d > 0.0)) throw ZeroFunctional();
  for (auto& v : f) v /= d;
  return {std::move(f)};
}

}  // namespace projconst
