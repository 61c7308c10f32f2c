#include "projconst/bounds.hpp"

#include <cmath>
#include <string>

#include "projconst/errors.hpp"

namespace projconst {

namespace {

LogScalar ls(double v) { return LogScalar::from_double(v); }

LogScalar beta_pow(double beta, double two_p) {
  return pow(ls(beta), two_p);
}

}  // namespace

EpsilonLedger compute_ledger(std::size_t n, std::size_t m, int p, double alpha,
                             double beta) {
  std::string bad;
  auto flag = [&](const char* what) {
    if (!bad.empty()) bad += "; ";
    bad += what;
  };
  if (n < 4) flag("n must be >= 4");
  if (m < n + 2) flag("m must be >= n + 2");
  if (2.0 * p < static_cast<double>(m)) flag("p must be >= m / 2");
  if (!(alpha > 0.0) || alpha > 0.5) flag("alpha must be in (0, 1/2]");
  if (!(beta > 0.0)) flag("beta must be positive");
  if (!bad.empty()) throw HypothesisViolation("compute_ledger: " + bad);

  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double dp = static_cast<double>(p);
  const double two_p = 2.0 * dp;

  EpsilonLedger out;
  out.n = n;
  out.m = m;
  out.p = p;
  out.alpha = alpha;
  out.beta = beta;
  out.q = two_p / (two_p - 1.0);

  const LogScalar b2p = beta_pow(beta, two_p);
  const LogScalar tail = pow(ls(alpha), 4.0 * dp + 4.0 * dm) *
                         pow(ls(2.0), -(8.0 * dp + 4.0 * dm + 6.0)) *
                         pow(ls(dn), -(6.0 * dp + 6.0 * dm)) *
                         pow(ls(dm), -(4.0 * dp + 6.0 * dm)) *
                         pow(ls(dp), -(2.0 * dm + 1.0));

  out.eps1 = pow(ls(dm - 1.0) + b2p, -1.0 / dp) * tail;
  out.R1 = ls(8.0) * pow(out.eps1 * ls(dp), 0.5);
  out.K = pow(out.R1 / ls(4.0), 1.0 / (two_p - 1.0));

  out.eps2 =
      pow(out.K, 2.0 * dm) * pow(ls(dm - 2.0) + ls(2.0) * b2p, -1.0 / dp) *
      tail;
  out.R2 = ls(8.0) * pow(out.eps2 * ls(dp), 0.5);
  out.L = out.R2 / (pow(ls(2.0), two_p) * ls(two_p - 1.0));

  out.eps3 = pow(ls(dm), -1.0 / dp) * pow(out.L, 2.0 * dm) *
             pow(out.K, 4.0 * dp + 2.0 * dm) *
             pow(ls(2.0), -(4.0 * dp + 6.0)) *
             pow(ls(dn), -(6.0 * dp + 6.0 * dm)) *
             pow(ls(dm), -(4.0 * dp + 6.0 * dm)) *
             pow(ls(dp), -(2.0 * dm + 1.0));
  out.R3 = ls(8.0) * pow(out.eps3 * ls(dp), 0.5);

  const LogScalar inner = pow(ls(alpha), -6.0) * pow(ls(2.0), 14.0) *
                          pow(ls(dn), 12.0) * pow(ls(dm), 11.0) *
                          pow(ls(dp), 4.0);
  out.eps0 = pow(ls(dm) + ls(2.0) * b2p, -7.0) *
             pow(inner, -12.0 * dp * dm);
  return out;
}

LogScalar corollary_bound(std::size_t n) {
  if (n < 4) throw HypothesisViolation("corollary_bound: n must be >= 4");
  const double s = 2.0 * static_cast<double>(n + 3) *
                   static_cast<double>(n + 3);
  const double e = 100.0 * static_cast<double>(n + 3) *
                   static_cast<double>(n + 3);
  return pow(LogScalar::from_double(s), -e);
}

LedgerChecks ledger_checks(const EpsilonLedger& ledger) {
  LedgerChecks out;

  out.eps3_ge_eps0.margin_log10 =
      ledger.eps3.log10() - ledger.eps0.log10();
  out.eps3_ge_eps0.ok =
      ledger.eps3.positive() && ledger.eps0.positive() &&
      out.eps3_ge_eps0.margin_log10 >= 0.0;

  const double l_to_k = ledger.K.log10() - ledger.L.log10();
  const double k_to_half =
      LogScalar::from_double(0.5).log10() - ledger.K.log10();
  out.ordering.margin_log10 = std::min(l_to_k, k_to_half);
  out.ordering.ok = ledger.L.positive() && ledger.K.positive() &&
                    l_to_k > 0.0 && k_to_half > 0.0;

  const LogScalar lhs = ledger.K * LogScalar::from_double(ledger.alpha);
  const LogScalar rhs = LogScalar::from_double(4.0) * ledger.L;
  out.k_alpha_gt_4l.margin_log10 = lhs.log10() - rhs.log10();
  out.k_alpha_gt_4l.ok = lhs.positive() && out.k_alpha_gt_4l.margin_log10 > 0.0;

  const LogScalar dp = LogScalar::from_double(static_cast<double>(ledger.p));
  const LogScalar denom =
      LogScalar::from_double(2.0) + LogScalar::from_double(2.0) * ledger.eps1;
  const LogScalar t0 =
      LogScalar::from_double(4.0) * pow(ledger.eps1 * dp / denom, 0.5);
  out.t0_in_range.margin_log10 =
      LogScalar::from_double(2.0).log10() - t0.log10();
  out.t0_in_range.ok = t0.positive() && out.t0_in_range.margin_log10 >= 0.0;

  return out;
}

}  // namespace projconst
