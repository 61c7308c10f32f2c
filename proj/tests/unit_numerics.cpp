#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <vector>

#include "projconst/errors.hpp"
#include "projconst/linalg.hpp"
#include "projconst/logscalar.hpp"
#include "projconst/rational.hpp"
#include "projconst/rng.hpp"

using namespace projconst;
using Big = boost::multiprecision::cpp_bin_float_100;

namespace {

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("stable_power_sum zero input") {
  CHECK(stable_power_sum({0.0, 0.0, 0.0}, 6) == 0.0);
}

TEST_CASE("stable_power_sum euclidean pair") {
  CHECK(close_rel(stable_power_sum({1.0, 1.0}, 2), std::sqrt(2.0), 1e-15));
}

TEST_CASE("stable_power_sum huge entries do not overflow") {
  double r = stable_power_sum({1e200, 1e200}, 6);
  CHECK(close_rel(r, std::pow(2.0, 1.0 / 6.0) * 1e200, 1e-12));
}

TEST_CASE("stable_power_sum matches high precision for 2p up to 64") {
  rng::Stream st(99);
  for (int e : {2, 8, 30, 64}) {
    std::vector<double> v(9);
    for (auto& x : v) x = st.uniform(-5.0, 5.0);
    Big acc = 0;
    for (double x : v) acc += pow(Big(fabs(x)), e);
    Big ref = pow(acc, Big(1) / e);
    CHECK(close_rel(stable_power_sum(v, e), ref.convert_to<double>(), 1e-12));
  }
}

TEST_CASE("stable_power_sum homogeneity across extreme scales") {
  rng::Stream st(7);
  std::vector<double> v(6);
  for (auto& x : v) x = st.uniform(-1.0, 1.0);
  double base = stable_power_sum(v, 8);
  for (double c : {1e-100, 1.0, 1e100}) {
    std::vector<double> w = v;
    for (auto& x : w) x *= c;
    CHECK(close_rel(stable_power_sum(w, 8), c * base, 1e-12));
  }
}

TEST_CASE("stable_power_sum rejects odd exponent") {
  CHECK_THROWS_AS(stable_power_sum({1.0}, 3), Error);
}

TEST_CASE("null_space_basis coordinate kernel") {
  auto b = null_space_basis({1.0, 0.0, 0.0});
  REQUIRE(b.size() == 2);
  CHECK(b[0] == Vector{0.0, 1.0, 0.0});
  CHECK(b[1] == Vector{0.0, 0.0, 1.0});
}

TEST_CASE("null_space_basis two dim symmetric") {
  auto b = null_space_basis({1.0, 1.0});
  REQUIRE(b.size() == 1);
  CHECK(std::fabs(dot(b[0], {1.0, 1.0})) < 1e-12);
  CHECK(close_rel(dot(b[0], b[0]), 1.0, 1e-12));
  CHECK(std::fabs(std::fabs(dot(b[0], {1.0 / std::sqrt(2.0),
                                       -1.0 / std::sqrt(2.0)})) -
                  1.0) < 1e-12);
}

TEST_CASE("null_space_basis random functional") {
  rng::Stream st(4);
  Vector f(5);
  for (auto& x : f) x = st.uniform(-1.0, 1.0);
  auto b = null_space_basis(f);
  REQUIRE(b.size() == 4);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(std::fabs(dot(f, b[i])) < 1e-12);
    for (std::size_t j = 0; j < b.size(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      CHECK(std::fabs(dot(b[i], b[j]) - want) < 1e-12);
    }
  }
}

TEST_CASE("null_space_basis zero functional throws") {
  CHECK_THROWS_AS(null_space_basis({0.0, 0.0}), ZeroFunctional);
}

TEST_CASE("vandermonde bound single node") {
  CHECK(vandermonde_inverse_norm_bound({0.4}) == 1.0);
}

TEST_CASE("vandermonde bound two nodes 0 1") {
  CHECK(vandermonde_inverse_norm_bound({0.0, 1.0}) == 2.0);
}

TEST_CASE("vandermonde bound duplicate nodes throws") {
  CHECK_THROWS_AS(vandermonde_inverse_norm_bound({0.3, 0.3 + 1e-15}),
                  DuplicateNodes);
}

TEST_CASE("vandermonde bound dominates exact inverse norm") {
  rng::Stream st(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t m = 2 + st.next_u64() % 7;
    std::vector<double> nodes(m);
    bool ok = true;
    for (auto& x : nodes) x = st.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < m && ok; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (std::fabs(nodes[i] - nodes[j]) < 1e-3) ok = false;
    if (!ok) continue;
    double exact = exact_inf_norm_inverse(vandermonde_matrix(nodes));
    double bound = vandermonde_inverse_norm_bound(nodes);
    CHECK(exact <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("exact_inf_norm_inverse identity") {
  CHECK(exact_inf_norm_inverse(MatrixDense::identity(4)) == 1.0);
}

TEST_CASE("exact_inf_norm_inverse upper triangular pair") {
  MatrixDense m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 1.0;
  m.at(1, 1) = 1.0;
  CHECK(close_rel(exact_inf_norm_inverse(m), 2.0, 1e-12));
}

TEST_CASE("exact_inf_norm_inverse vandermonde 0 1 2 below bound") {
  double exact = exact_inf_norm_inverse(vandermonde_matrix({0.0, 1.0, 2.0}));
  double bound = vandermonde_inverse_norm_bound({0.0, 1.0, 2.0});
  CHECK(exact <= bound + 1e-9);
}

TEST_CASE("exact_inf_norm_inverse singular throws") {
  MatrixDense m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 2.0;
  m.at(1, 0) = 0.5;
  m.at(1, 1) = 1.0;
  CHECK_THROWS_AS(exact_inf_norm_inverse(m), Singular);
}

TEST_CASE("exact_inf_norm_inverse random matrices match residual check") {
  rng::Stream st(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 2 + st.next_u64() % 5;
    MatrixDense m(n, n);
    for (auto& v : m.a) v = st.uniform(-1.0, 1.0);
    double nrm;
    try {
      nrm = exact_inf_norm_inverse(m);
    } catch (const Singular&) {
      continue;
    }
    // solve M x = e_i per column and rebuild the row sums of M^{-1}
    double check = 0.0;
    std::vector<std::vector<double>> cols(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      cols[i] = lin_solve(m, e);
    }
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::fabs(cols[i][r]);
      check = std::max(check, s);
    }
    CHECK(close_rel(nrm, check, 1e-10));
  }
}

TEST_CASE("matrix_rank detects deficiency") {
  MatrixDense m(3, 3);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(2, 0) = 1.0;
  m.at(2, 1) = 1.0;
  CHECK(matrix_rank(m) == 2);
  CHECK(matrix_rank(MatrixDense::identity(5)) == 5);
}

TEST_CASE("rational inverse product is exactly one") {
  rng::Stream st(17);
  for (int i = 0; i < 50; ++i) {
    long num = static_cast<long>(st.next_u64() % 2000) - 1000;
    long den = 1 + static_cast<long>(st.next_u64() % 999);
    if (num == 0) num = 7;
    Rational r(num, den);
    CHECK(r * (Rational(1) / r) == 1);
  }
}

TEST_CASE("parse_rational forms") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("12") == Rational(12));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK(rational_to_string(Rational(3, 4)) == "3/4");
  CHECK(rational_to_string(Rational(5)) == "5");
}

TEST_CASE("rational_solve hilbert system") {
  std::size_t n = 3;
  std::vector<Rational> a(n * n), b(n), x;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = Rational(1, i + j + 1);
    b[i] = 1;
  }
  REQUIRE(rational_solve(a, n, b, x));
  // exact known solution of the 3x3 Hilbert system with ones right side
  CHECK(x[0] == Rational(3));
  CHECK(x[1] == Rational(-24));
  CHECK(x[2] == Rational(30));
}

TEST_CASE("rational_rank") {
  std::vector<Rational> a = {1, 2, 3, 2, 4, 6, 0, 1, 1};
  CHECK(rational_rank(a, 3, 3) == 2);
}

TEST_CASE("logscalar basic arithmetic") {
  auto a = LogScalar::from_double(3.0);
  auto b = LogScalar::from_double(-2.0);
  CHECK(close_rel((a * b).to_double(), -6.0, 1e-14));
  CHECK(close_rel((a / b).to_double(), -1.5, 1e-14));
  CHECK(close_rel((a + a).to_double(), 6.0, 1e-14));
  CHECK(close_rel((a + b).to_double(), 1.0, 1e-13));
  CHECK((a - a).sign == 0);
  CHECK(close_rel(pow(a, 2.0).to_double(), 9.0, 1e-13));
  CHECK(close_rel(pow(b, 3.0).to_double(), -8.0, 1e-13));
  CHECK(pow(b, 2.0).sign == 1);
  CHECK_THROWS_AS(pow(b, 0.5), Error);
  CHECK_THROWS_AS(a / LogScalar::zero(), Error);
}

TEST_CASE("logscalar survives magnitudes past double range") {
  auto tiny = pow(LogScalar::from_double(0.1), 5000.0);
  CHECK(tiny.sign == 1);
  CHECK(close_rel(tiny.log10(), -5000.0, 1e-12));
  auto prod = tiny * tiny;
  CHECK(close_rel(prod.log10(), -10000.0, 1e-12));
  CHECK(tiny.to_double() == 0.0);
}

TEST_CASE("logscalar cancellation reported") {
  auto a = LogScalar::from_double(1.0);
  auto b = LogScalar::from_double(-(1.0 - 1e-13));
  CHECK_THROWS_AS(a + b, PrecisionLoss);
  auto c = LogScalar::from_double(-(1.0 - 1e-6));
  CHECK(close_rel((a + c).to_double(), 1e-6, 1e-9));
}

TEST_CASE("logscalar ordering agrees with high precision on random chains") {
  rng::Stream st(23);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = st.uniform(-3.0, 3.0);
    double b = st.uniform(-3.0, 3.0);
    double ea = st.uniform(1.0, 40.0);
    double eb = st.uniform(1.0, 40.0);
    if (std::fabs(a) < 1e-3 || std::fabs(b) < 1e-3) continue;
    LogScalar la = pow(LogScalar::from_double(std::fabs(a)), ea);
    LogScalar lb = pow(LogScalar::from_double(std::fabs(b)), eb);
    Big ba = pow(Big(fabs(a)), Big(ea));
    Big bb = pow(Big(fabs(b)), Big(eb));
    if (ba == bb) continue;
    CHECK((la < lb) == (ba < bb));
  }
}

TEST_CASE("logscalar total order with signs") {
  auto neg_big = LogScalar::from_double(-1e10);
  auto neg_small = LogScalar::from_double(-1e-10);
  auto zero = LogScalar::zero();
  auto pos_small = LogScalar::from_double(1e-10);
  auto pos_big = LogScalar::from_double(1e10);
  CHECK(neg_big < neg_small);
  CHECK(neg_small < zero);
  CHECK(zero < pos_small);
  CHECK(pos_small < pos_big);
}

TEST_CASE("logscalar rendering") {
  CHECK(to_sci_string(LogScalar::zero()) == "0");
  CHECK(to_sci_string(LogScalar::from_double(0.001)) == "1.000000000e-3");
  CHECK(to_sci_string(LogScalar::from_double(-250.0)) == "-2.500000000e+2");
}
