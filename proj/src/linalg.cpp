#include "projconst/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "projconst/errors.hpp"
#include "projconst/kernels.hpp"
#include "projconst/rational.hpp"

namespace projconst {

double stable_power_sum(const std::vector<double>& values, int exponent) {
  if (values.empty()) throw Error("stable_power_sum: empty input");
  if (exponent < 2 || exponent % 2 != 0)
    throw Error("stable_power_sum: exponent must be even and >= 2");
  const auto& k = kern::active();
  double m = k.max_abs(values.data(), values.size());
  if (m == 0.0) return 0.0;
  double s = k.pow_sum(values.data(), values.size(), exponent, 1.0 / m);
  return m * std::pow(s, 1.0 / exponent);
}

std::vector<Vector> null_space_basis(const Vector& f) {
  std::size_t n = f.size();
  double nrm = std::sqrt(kern::active().nrm2sq(f.data(), n));
  if (nrm == 0.0) throw ZeroFunctional();
  // u = f/|f| + sign(f_1) e_1; columns 2..n of I - 2uu^T/(u^T u) span ker f
  Vector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = f[i] / nrm;
  double s = u[0] >= 0.0 ? 1.0 : -1.0;
  u[0] += s;
  double uu = kern::active().nrm2sq(u.data(), n);
  std::vector<Vector> basis;
  basis.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    Vector col(n, 0.0);
    col[j] = 1.0;
    double c = -2.0 * u[j] / uu;
    kern::active().axpy(c, u.data(), col.data(), n);
    basis.push_back(std::move(col));
  }
  return basis;
}

std::vector<Vector> joint_null_space_basis(const MatrixDense& rows) {
  std::size_t n = rows.cols;
  // orthonormalize the row span
  std::vector<Vector> q;
  for (std::size_t i = 0; i < rows.rows; ++i) {
    Vector v(rows.row(i), rows.row(i) + n);
    double scale = std::sqrt(kern::active().nrm2sq(v.data(), n));
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) {
        double c = kern::active().dot(u.data(), v.data(), n);
        kern::active().axpy(-c, u.data(), v.data(), n);
      }
    double rem = std::sqrt(kern::active().nrm2sq(v.data(), n));
    if (rem <= 1e-12 * scale) continue;
    for (auto& c : v) c /= rem;
    q.push_back(std::move(v));
  }
  // pivoted extension by coordinate vectors; the residual-largest axis joins
  std::vector<Vector> kernel;
  while (q.size() + kernel.size() < n) {
    Vector best;
    double best_rem = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      Vector v(n, 0.0);
      v[j] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : q) {
          double c = kern::active().dot(u.data(), v.data(), n);
          kern::active().axpy(-c, u.data(), v.data(), n);
        }
        for (const auto& u : kernel) {
          double c = kern::active().dot(u.data(), v.data(), n);
          kern::active().axpy(-c, u.data(), v.data(), n);
        }
      }
      double rem = std::sqrt(kern::active().nrm2sq(v.data(), n));
      if (rem > best_rem) {
        best_rem = rem;
        best = std::move(v);
      }
    }
    for (auto& c : best) c /= best_rem;
    kernel.push_back(std::move(best));
  }
  return kernel;
}

double vandermonde_inverse_norm_bound(const std::vector<double>& nodes) {
  std::size_t m = nodes.size();
  if (m == 0) throw Error("vandermonde_inverse_norm_bound: no nodes");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::fabs(nodes[i] - nodes[j]) <= 1e-14)
        throw DuplicateNodes("nodes coincide within 1e-14");
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      prod *= (1.0 + std::fabs(nodes[j])) / std::fabs(nodes[j] - nodes[i]);
    }
    best = std::max(best, prod);
  }
  return best;
}

MatrixDense vandermonde_matrix(const std::vector<double>& nodes) {
  std::size_t m = nodes.size();
  MatrixDense v(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    double p = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      v.at(i, j) = p;
      p *= nodes[j];
    }
  }
  return v;
}

double exact_inf_norm_inverse(const MatrixDense& m) {
  if (m.rows != m.cols) throw Error("exact_inf_norm_inverse: not square");
  std::size_t n = m.rows;
  if (n > 12) throw Error("exact_inf_norm_inverse: size above 12");
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) throw Singular("zero matrix");

  MatrixDense a = m;
  MatrixDense inv = MatrixDense::identity(n);
  std::vector<std::size_t> colperm(n);
  for (std::size_t i = 0; i < n; ++i) colperm[i] = i;

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = step, pc = step;
    double best = 0.0;
    for (std::size_t i = step; i < n; ++i)
      for (std::size_t j = step; j < n; ++j)
        if (std::fabs(a.at(i, j)) > best) {
          best = std::fabs(a.at(i, j));
          pr = i;
          pc = j;
        }
    if (best < 1e-13 * scale) throw Singular("pivot below threshold");
    if (pr != step)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.at(step, j), a.at(pr, j));
        std::swap(inv.at(step, j), inv.at(pr, j));
      }
    if (pc != step) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a.at(i, step), a.at(i, pc));
      std::swap(colperm[step], colperm[pc]);
    }
    double piv = a.at(step, step);
    for (std::size_t j = 0; j < n; ++j) {
      a.at(step, j) /= piv;
      inv.at(step, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == step) continue;
      double c = a.at(i, step);
      if (c == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a.at(i, j) -= c * a.at(step, j);
        inv.at(i, j) -= c * inv.at(step, j);
      }
    }
  }
  // column swaps of A are row swaps of the inverse
  MatrixDense res(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) res.at(colperm[i], j) = inv.at(i, j);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::fabs(res.at(i, j));
    norm = std::max(norm, s);
  }
  return norm;
}

std::vector<double> lin_solve(MatrixDense a, std::vector<double> b) {
  if (a.rows != a.cols || b.size() != a.rows) throw Error("lin_solve: shape");
  std::size_t n = a.rows;
  double scale = 0.0;
  for (double v : a.a) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) throw Singular("zero matrix");
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = step;
    for (std::size_t i = step + 1; i < n; ++i)
      if (std::fabs(a.at(i, step)) > std::fabs(a.at(pr, step))) pr = i;
    if (std::fabs(a.at(pr, step)) < 1e-13 * scale)
      throw Singular("pivot below threshold");
    if (pr != step) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(step, j), a.at(pr, j));
      std::swap(b[step], b[pr]);
    }
    for (std::size_t i = step + 1; i < n; ++i) {
      double c = a.at(i, step) / a.at(step, step);
      if (c == 0.0) continue;
      for (std::size_t j = step; j < n; ++j) a.at(i, j) -= c * a.at(step, j);
      b[i] -= c * b[step];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a.at(ii, j) * x[j];
    x[ii] = s / a.at(ii, ii);
  }
  return x;
}

std::size_t matrix_rank(MatrixDense a, double tol) {
  std::size_t r = 0;
  double scale = 0.0;
  for (double v : a.a) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0;
  for (std::size_t col = 0; col < a.cols && r < a.rows; ++col) {
    std::size_t pr = r;
    for (std::size_t i = r + 1; i < a.rows; ++i)
      if (std::fabs(a.at(i, col)) > std::fabs(a.at(pr, col))) pr = i;
    if (std::fabs(a.at(pr, col)) <= tol * scale) continue;
    if (pr != r)
      for (std::size_t j = 0; j < a.cols; ++j)
        std::swap(a.at(r, j), a.at(pr, j));
    for (std::size_t i = r + 1; i < a.rows; ++i) {
      double c = a.at(i, col) / a.at(r, col);
      for (std::size_t j = col; j < a.cols; ++j) a.at(i, j) -= c * a.at(r, j);
    }
    ++r;
  }
  return r;
}

namespace {

// decimal only; a leading zero must not flip cpp_int into octal parsing
BigInt parse_decimal_int(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) throw Error("parse_rational: bad number");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw Error("parse_rational: bad digit");
  while (i + 1 < s.size() && s[i] == '0') ++i;
  BigInt v(s.substr(i));
  return neg ? -v : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error("parse_rational: empty");
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_decimal_int(t.substr(0, slash));
    BigInt den = parse_decimal_int(t.substr(slash + 1));
    if (den == 0) throw Error("parse_rational: zero denominator");
    return Rational(num, den);
  }
  auto dot = t.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_int(t));
  std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  std::size_t frac = t.size() - dot - 1;
  BigInt num = parse_decimal_int(digits);
  BigInt den = 1;
  for (std::size_t i = 0; i < frac; ++i) den *= 10;
  return Rational(num, den);
}

std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

std::size_t rational_rank(std::vector<Rational> a, std::size_t rows,
                          std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pr = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i * cols + col] != 0) {
        pr = i;
        break;
      }
    if (pr == rows) continue;
    if (pr != r)
      for (std::size_t j = 0; j < cols; ++j)
        std::swap(a[r * cols + j], a[pr * cols + j]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i * cols + col] == 0) continue;
      Rational c = a[i * cols + col] / a[r * cols + col];
      for (std::size_t j = col; j < cols; ++j)
        a[i * cols + j] -= c * a[r * cols + j];
    }
    ++r;
  }
  return r;
}

bool rational_solve(std::vector<Rational> a, std::size_t n,
                    std::vector<Rational> b, std::vector<Rational>& x) {
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = n;
    for (std::size_t i = step; i < n; ++i)
      if (a[i * n + step] != 0) {
        pr = i;
        break;
      }
    if (pr == n) return false;
    if (pr != step) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a[step * n + j], a[pr * n + j]);
      std::swap(b[step], b[pr]);
    }
    for (std::size_t i = step + 1; i < n; ++i) {
      if (a[i * n + step] == 0) continue;
      Rational c = a[i * n + step] / a[step * n + step];
      for (std::size_t j = step; j < n; ++j) a[i * n + j] -= c * a[step * n + j];
      b[i] -= c * b[step];
    }
  }
  x.assign(n, Rational(0));
  for (std::size_t ii = n; ii-- > 0;) {
    Rational s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a[ii * n + j] * x[j];
    x[ii] = s / a[ii * n + ii];
  }
  return true;
}

}  // namespace projconst
