#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace projconst {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "a/b", plain integers, and decimal strings; decimals become exact
// dyadic-free fractions (e.g. "0.25" -> 1/4).
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return r.convert_to<double>();
}

// Exact elimination over the rationals for the certificate checks.
// Row-major storage throughout.
std::size_t rational_rank(std::vector<Rational> a, std::size_t rows,
                          std::size_t cols);

// Solves the square system A x = b; returns false when A is singular.
bool rational_solve(std::vector<Rational> a, std::size_t n,
                    std::vector<Rational> b, std::vector<Rational>& x);

}  // namespace projconst
