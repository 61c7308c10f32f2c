#pragma once

#include <cmath>
#include <compare>
#include <string>

namespace projconst {

// Signed log-magnitude scalar. The proof ledger spans thousands of orders of
// magnitude, far past double range, so every ledger quantity lives here.
// sign 0 is exact zero and log_magnitude is ignored in that state.
struct LogScalar {
  int sign = 0;
  double log_magnitude = 0.0;  // natural log of |value|

  static LogScalar zero() { return {}; }
  static LogScalar one() { return {1, 0.0}; }

  static LogScalar from_double(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  static LogScalar from_log(double natural_log, int sign = 1) {
    return {sign, natural_log};
  }

  double to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_magnitude);
  }

  double log10() const { return log_magnitude / 2.302585092994045684; }

  bool positive() const { return sign > 0; }

  friend bool operator==(const LogScalar& a, const LogScalar& b) {
    if (a.sign != b.sign) return false;
    if (a.sign == 0) return true;
    return a.log_magnitude == b.log_magnitude;
  }

  friend std::partial_ordering operator<=>(const LogScalar& a,
                                           const LogScalar& b) {
    if (a.sign != b.sign) return a.sign <=> b.sign;
    if (a.sign == 0) return std::partial_ordering::equivalent;
    auto c = a.log_magnitude <=> b.log_magnitude;
    return a.sign > 0 ? c : 0 <=> c;
  }
};

LogScalar operator*(const LogScalar& a, const LogScalar& b);
LogScalar operator/(const LogScalar& a, const LogScalar& b);
LogScalar operator+(const LogScalar& a, const LogScalar& b);
LogScalar operator-(const LogScalar& a);
inline LogScalar operator-(const LogScalar& a, const LogScalar& b) {
  return a + (-b);
}

// b^t for real t; requires a nonnegative base unless t is an integer.
LogScalar pow(const LogScalar& b, double t);

// Decimal rendering "<sign>10^<exponent>" used by reports and logs.
std::string to_sci_string(const LogScalar& v);

}  // namespace projconst
