#pragma once

#include <cstddef>

#include "projconst/logscalar.hpp"

namespace projconst {

// the chain of constants driving the lower-bound argument, kept in log
// space because most of them underflow double long before n gets large
struct EpsilonLedger {
  std::size_t n = 0;
  std::size_t m = 0;
  int p = 1;
  double alpha = 0.0;
  double beta = 0.0;

  LogScalar eps1, R1, K;
  LogScalar eps2, R2, L;
  LogScalar eps3, R3;
  LogScalar eps0;
  double q = 0.0;
};

struct Verdict {
  bool ok = false;
  // log10 of the favorable ratio; positive iff the check holds with room
  double margin_log10 = 0.0;
};

struct LedgerChecks {
  Verdict eps3_ge_eps0;
  Verdict ordering;  // 0 < L < K < 1/2
  Verdict k_alpha_gt_4l;
  Verdict t0_in_range;  // t0 = 4 sqrt(eps1 p / (2 + 2 eps1)) <= 2
};

EpsilonLedger compute_ledger(std::size_t n, std::size_t m, int p, double alpha,
                             double beta);

LogScalar corollary_bound(std::size_t n);

LedgerChecks ledger_checks(const EpsilonLedger& ledger);

}  // namespace projconst
