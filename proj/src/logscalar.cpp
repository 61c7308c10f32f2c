#include "projconst/logscalar.hpp"

#include <algorithm>
#include <cstdio>

#include "projconst/errors.hpp"

namespace projconst {

LogScalar operator*(const LogScalar& a, const LogScalar& b) {
  if (a.sign == 0 || b.sign == 0) return LogScalar::zero();
  return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
}

LogScalar operator/(const LogScalar& a, const LogScalar& b) {
  if (b.sign == 0) throw Error("LogScalar division by zero");
  if (a.sign == 0) return LogScalar::zero();
  return {a.sign * b.sign, a.log_magnitude - b.log_magnitude};
}

LogScalar operator-(const LogScalar& a) {
  return {-a.sign, a.log_magnitude};
}

LogScalar operator+(const LogScalar& a, const LogScalar& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  double hi = std::max(a.log_magnitude, b.log_magnitude);
  double lo = std::min(a.log_magnitude, b.log_magnitude);
  if (a.sign == b.sign)
    return {a.sign, hi + std::log1p(std::exp(lo - hi))};
  if (a.log_magnitude == b.log_magnitude) return LogScalar::zero();
  // opposite signs: the larger magnitude survives
  double frac = -std::expm1(lo - hi);  // 1 - exp(lo-hi), in (0,1)
  if (frac < 1e-10)
    throw PrecisionLoss("LogScalar cancellation below 1e-10 of magnitude");
  int sign = a.log_magnitude > b.log_magnitude ? a.sign : b.sign;
  return {sign, hi + std::log(frac)};
}

LogScalar pow(const LogScalar& b, double t) {
  if (b.sign == 0) {
    if (t > 0.0) return LogScalar::zero();
    if (t == 0.0) return LogScalar::one();
    throw Error("LogScalar pow: zero base, negative exponent");
  }
  if (b.sign < 0) {
    double ip;
    if (std::modf(t, &ip) != 0.0)
      throw Error("LogScalar pow: negative base, fractional exponent");
    long long k = static_cast<long long>(ip);
    return {(k % 2 == 0) ? 1 : -1, b.log_magnitude * t};
  }
  return {1, b.log_magnitude * t};
}

std::string to_sci_string(const LogScalar& v) {
  if (v.sign == 0) return "0";
  double l10 = v.log10();
  double e = std::floor(l10);
  double mant = std::pow(10.0, l10 - e);
  if (mant >= 9.99999999995) {
    mant /= 10.0;
    e += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%.9fe%+.0f", v.sign < 0 ? "-" : "", mant,
                e);
  return buf;
}

}  // namespace projconst
