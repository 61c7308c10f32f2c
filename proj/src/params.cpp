#include "projconst/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "projconst/errors.hpp"
#include "projconst/kernels.hpp"
#include "projconst/linalg.hpp"

namespace projconst {

namespace {

Vector row_vec(const MatrixDense& f, std::size_t i) {
  return Vector(f.row(i), f.row(i) + f.cols);
}


std::vector<std::array<std::size_t, 4>> alpha_tuples(std::size_t m) {
  std::vector<std::array<std::size_t, 4>> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        for (std::size_t l = k + 1; l < m; ++l) {
          if (l == i) continue;
          out.push_back({i, j, k, l});
        }
      }
    }
  return out;
}

SearchConfig inner_dual(const SearchConfig& cfg) {
  return {cfg.seed, 6, 200, cfg.tol};
}

AlphaEstimate alpha_numeric(const FunctionalFamily& sp,
                            const SearchConfig& cfg) {
  const auto tuples = alpha_tuples(sp.m);
  std::vector<double> dist(tuples.size());
  const SearchConfig dual_cfg = inner_dual(cfg);
  parallel_for_index(tuples.size(), [&](std::size_t t) {
    const auto& tup = tuples[t];
    const Vector fi = row_vec(sp.F, tup[0]);
    const Vector fj = row_vec(sp.F, tup[1]);
    const Vector fk = row_vec(sp.F, tup[2]);
    const Vector fl = row_vec(sp.F, tup[3]);
    Objective obj = [&](const Vector& c) {
      Vector w = fi;
      kern::active().axpy(-c[0], fj.data(), w.data(), sp.n);
      kern::active().axpy(-c[1], fk.data(), w.data(), sp.n);
      kern::active().axpy(-c[2], fl.data(), w.data(), sp.n);
      return dual_norm(sp, w, dual_cfg);
    };
    dist[t] = minimize_convex_lowdim(obj, 3, cfg).value;
  });
  AlphaEstimate out;
  out.mode = AlphaMode::NumericSearch;
  out.raw_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (dist[t] < out.raw_min) {
      out.raw_min = dist[t];
      out.worst_tuple = tuples[t];
    }
  out.value = std::min(out.raw_min, 0.5);
  return out;
}

std::string tuple_name(const std::array<std::size_t, 4>& t) {
  return "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " +
         std::to_string(t[2]) + ", " + std::to_string(t[3]) + ")";
}

AlphaEstimate alpha_witnessed(const FunctionalFamily& sp,
                              const WitnessMap& witnesses) {
  const auto tuples = alpha_tuples(sp.m);
  AlphaEstimate out;
  out.mode = AlphaMode::WitnessCertificate;
  out.raw_min = std::numeric_limits<double>::infinity();
  for (const auto& tup : tuples) {
    auto it = witnesses.find(tup);
    if (it == witnesses.end())
      throw BadWitness("alpha_estimate: no witness for tuple " +
                       tuple_name(tup));
    const Vector& v = it->second;
    if (v.size() != sp.n)
      throw DimensionMismatch("alpha_estimate: witness length != n");
    const Vector fv = family_apply(sp, v);
    const double scale = 1e-12 * std::max(1.0, kern::active().max_abs(
                                                   v.data(), v.size()));
    for (std::size_t s = 1; s < 4; ++s)
      if (std::fabs(fv[tup[s]]) > scale)
        throw BadWitness("alpha_estimate: witness for tuple " +
                         tuple_name(tup) + " is not annihilated");
    const double nv = norm_eval(sp, v);
    if (nv == 0.0) throw BadWitness("alpha_estimate: witness is zero");
    const double ratio = std::fabs(fv[tup[0]]) / nv;
    if (ratio < out.raw_min) {
      out.raw_min = ratio;
      out.worst_tuple = tup;
    }
  }
  out.value = std::min(out.raw_min, 0.5);
  return out;
}

std::vector<std::array<std::size_t, 2>> beta_pairs(std::size_t m) {
  std::vector<std::array<std::size_t, 2>> out;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) out.push_back({j, k});
  return out;
}

// rows of F with j and k removed, as a matrix
MatrixDense remaining_rows(const FunctionalFamily& sp, std::size_t j,
                           std::size_t k) {
  MatrixDense rows(sp.m - 2, sp.n);
  std::size_t r = 0;
  for (std::size_t i = 0; i < sp.m; ++i) {
    if (i == j || i == k) continue;
    for (std::size_t c = 0; c < sp.n; ++c) rows.at(r, c) = sp.F.at(i, c);
    ++r;
  }
  return rows;
}

// coefficient l1 norm of the minimum-norm expansion of target over the
// columns of M (n x w, spanning)
double expansion_l1(const MatrixDense& m_cols, const Vector& target) {
  const std::size_t n = m_cols.rows, w = m_cols.cols;
  if (w == n) {
    Vector c = lin_solve(m_cols, target);
    double s = 0.0;
    for (double x : c) s += std::fabs(x);
    return s;
  }
  MatrixDense gram(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t t = 0; t < w; ++t) s += m_cols.at(a, t) * m_cols.at(b, t);
      gram.at(a, b) = s;
    }
  Vector y = lin_solve(gram, target);
  double s = 0.0;
  for (std::size_t t = 0; t < w; ++t) {
    double c = 0.0;
    for (std::size_t a = 0; a < n; ++a) c += m_cols.at(a, t) * y[a];
    s += std::fabs(c);
  }
  return s;
}

BetaEstimate beta_certificate(const FunctionalFamily& sp,
                              const SearchConfig&) {
  const auto pairs = beta_pairs(sp.m);
  std::vector<double> score(pairs.size(), 0.0);
  std::vector<char> bad(pairs.size(), 0);
  parallel_for_index(pairs.size(), [&](std::size_t t) {
    const auto& pr = pairs[t];
    MatrixDense rows = remaining_rows(sp, pr[0], pr[1]);
    if (matrix_rank(rows) < sp.n) {
      bad[t] = 1;
      return;
    }
    MatrixDense cols(sp.n, sp.m - 2);
    for (std::size_t i = 0; i < sp.m - 2; ++i)
      for (std::size_t c = 0; c < sp.n; ++c) cols.at(c, i) = rows.at(i, c);
    score[t] = std::max(expansion_l1(cols, row_vec(sp.F, pr[0])),
                        expansion_l1(cols, row_vec(sp.F, pr[1])));
  });
  BetaEstimate out;
  out.mode = BetaMode::CoefficientCertificate;
  out.value = 0.0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    if (bad[t]) {
      out.value = std::numeric_limits<double>::infinity();
      out.worst_pair = pairs[t];
      out.not_spanning = true;
      return out;
    }
    if (score[t] > out.value) {
      out.value = score[t];
      out.worst_pair = pairs[t];
    }
  }
  return out;
}

BetaEstimate beta_numeric(const FunctionalFamily& sp,
                          const SearchConfig& cfg) {
  const auto pairs = beta_pairs(sp.m);
  std::vector<double> score(pairs.size(), 0.0);
  std::vector<char> bad(pairs.size(), 0);
  parallel_for_index(pairs.size(), [&](std::size_t t) {
    const auto& pr = pairs[t];
    if (matrix_rank(remaining_rows(sp, pr[0], pr[1])) < sp.n) {
      bad[t] = 1;
      return;
    }
    auto parts = [&](const Vector& x) {
      Vector fx = family_apply(sp, x);
      std::size_t top = pr[0], bot = sp.m;
      if (std::fabs(fx[pr[1]]) > std::fabs(fx[pr[0]])) top = pr[1];
      double dmax = -1.0;
      for (std::size_t i = 0; i < sp.m; ++i) {
        if (i == pr[0] || i == pr[1]) continue;
        if (std::fabs(fx[i]) > dmax) {
          dmax = std::fabs(fx[i]);
          bot = i;
        }
      }
      return std::array<std::size_t, 2>{top, bot};
    };
    Objective obj = [&](const Vector& x) {
      Vector fx = family_apply(sp, x);
      auto [top, bot] = parts(x);
      return std::fabs(fx[top]) /
             std::max(std::fabs(fx[bot]), 1e-300);
    };
    GradientFn grad = [&](const Vector& x) {
      Vector fx = family_apply(sp, x);
      auto [top, bot] = parts(x);
      const double num = std::fabs(fx[top]);
      const double den = std::max(std::fabs(fx[bot]), 1e-300);
      const double stop = fx[top] >= 0.0 ? 1.0 : -1.0;
      const double sbot = fx[bot] >= 0.0 ? 1.0 : -1.0;
      Vector g(sp.n);
      for (std::size_t c = 0; c < sp.n; ++c)
        g[c] = stop * sp.F.at(top, c) / den -
               num / (den * den) * sbot * sp.F.at(bot, c);
      return g;
    };
    score[t] = maximize_on_sphere(obj, grad, sp.n, cfg).value;
  });
  BetaEstimate out;
  out.mode = BetaMode::NumericSearch;
  out.value = 0.0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    if (bad[t]) {
      out.value = std::numeric_limits<double>::infinity();
      out.worst_pair = pairs[t];
      out.not_spanning = true;
      return out;
    }
    if (score[t] > out.value) {
      out.value = score[t];
      out.worst_pair = pairs[t];
    }
  }
  return out;
}

struct PairScan {
  std::size_t k = 0, l = 0;
  double dist = std::numeric_limits<double>::infinity();
};

std::vector<std::array<std::size_t, 2>> ordered_pairs(std::size_t m) {
  std::vector<std::array<std::size_t, 2>> out;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      if (l != k) out.push_back({k, l});
  return out;
}

std::vector<double> single_distances(const FunctionalFamily& sp,
                                     const Vector& fv,
                                     const SearchConfig& cfg) {
  std::vector<double> d(sp.m);
  parallel_for_index(sp.m, [&](std::size_t k) {
    d[k] = restricted_dual_norm(sp, row_vec(sp.F, k), fv, cfg);
  });
  return d;
}

PairScan pair_scan(const FunctionalFamily& sp, const Vector& fv,
                   const SearchConfig& cfg) {
  const auto pairs = ordered_pairs(sp.m);
  std::vector<double> d(pairs.size());
  parallel_for_index(pairs.size(), [&](std::size_t t) {
    const std::vector<Vector> constraints = {row_vec(sp.F, pairs[t][1]), fv};
    d[t] = restricted_dual_norm(sp, row_vec(sp.F, pairs[t][0]), constraints, cfg);
  });
  PairScan best;
  for (std::size_t t = 0; t < pairs.size(); ++t)
    if (d[t] < best.dist) {
      best.dist = d[t];
      best.k = pairs[t][0];
      best.l = pairs[t][1];
    }
  return best;
}

// euclidean least-squares coefficients for target + sum c_i cols_i ~ 0;
// exact whenever the dual minimum is a full cancellation
std::optional<Vector> ls_coeffs(const std::vector<Vector>& cols,
                                const Vector& target) {
  const std::size_t k = cols.size();
  MatrixDense gram(k, k);
  Vector rhs(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      gram.at(i, j) =
          kern::active().dot(cols[i].data(), cols[j].data(), target.size());
    rhs[i] = -kern::active().dot(cols[i].data(), target.data(), target.size());
  }
  try {
    return lin_solve(gram, rhs);
  } catch (const Singular&) {
    return std::nullopt;
  }
}

double recover_r0(const FunctionalFamily& sp, const Vector& fk,
                  const Vector& fv, const SearchConfig& cfg, double* achieved) {
  const SearchConfig dual_cfg = inner_dual(cfg);
  Objective obj = [&](const Vector& c) {
    Vector w = fk;
    kern::active().axpy(c[0], fv.data(), w.data(), sp.n);
    return dual_norm(sp, w, dual_cfg);
  };
  SearchResult res = minimize_convex_lowdim(obj, 1, cfg);
  double best_val = res.value;
  double best = res.point[0];
  if (auto ls = ls_coeffs({fv}, fk)) {
    const double v = obj(*ls);
    if (v < best_val) {
      best_val = v;
      best = (*ls)[0];
    }
  }
  if (achieved) *achieved = best_val;
  return best;
}

std::array<double, 2> recover_a0_r0(const FunctionalFamily& sp,
                                    const Vector& fk, const Vector& fl,
                                    const Vector& fv, const SearchConfig& cfg,
                                    double* achieved) {
  const SearchConfig dual_cfg = inner_dual(cfg);
  Objective obj = [&](const Vector& c) {
    Vector w = fk;
    kern::active().axpy(c[0], fl.data(), w.data(), sp.n);
    kern::active().axpy(c[1], fv.data(), w.data(), sp.n);
    return dual_norm(sp, w, dual_cfg);
  };
  SearchResult res = minimize_convex_lowdim(obj, 2, cfg);
  double best_val = res.value;
  std::array<double, 2> best{res.point[0], res.point[1]};
  if (auto ls = ls_coeffs({fl, fv}, fk)) {
    const double v = obj(*ls);
    if (v < best_val) {
      best_val = v;
      best = {(*ls)[0], (*ls)[1]};
    }
  }
  if (achieved) *achieved = best_val;
  return best;
}

CaseLabel classify_impl(const FunctionalFamily& sp, const Hyperplane& f,
                        const EpsilonLedger& ledger, const SearchConfig& cfg) {
  if (f.f.size() != sp.n)
    throw DimensionMismatch("classify_hyperplane: hyperplane length != n");
  const Vector& fv = f.f;

  const std::vector<double> singles = single_distances(sp, fv, cfg);
  std::size_t kbest = 0;
  for (std::size_t k = 1; k < sp.m; ++k)
    if (singles[k] < singles[kbest]) kbest = k;

  CaseLabel out;
  if (LogScalar::from_double(singles[kbest]) <= ledger.K) {
    out.tag = CaseLabel::Tag::NearSingle;
    out.k = kbest;
    out.achieved_distance = singles[kbest];
    out.r0 = recover_r0(sp, row_vec(sp.F, kbest), fv, cfg, nullptr);
    return out;
  }

  const PairScan pair = pair_scan(sp, fv, cfg);
  if (LogScalar::from_double(pair.dist) <= ledger.L) {
    out.tag = CaseLabel::Tag::NearPair;
    out.k = pair.k;
    out.l = pair.l;
    out.achieved_distance = pair.dist;
    auto ar = recover_a0_r0(sp, row_vec(sp.F, pair.k), row_vec(sp.F, pair.l), fv, cfg,
                            nullptr);
    out.a0 = ar[0];
    out.r0 = ar[1];
    return out;
  }

  out.tag = CaseLabel::Tag::Generic;
  out.achieved_distance = std::min(singles[kbest], pair.dist);
  return out;
}

ExclusivityReport exclusivity_impl(const FunctionalFamily& sp,
                                   const Hyperplane& f, double alpha, double K,
                                   double L, const SearchConfig& cfg) {
  if (!(alpha > 0.0) || alpha > 0.5)
    throw HypothesisViolation("exclusivity_check: alpha must be in (0, 1/2]");
  if (f.f.size() != sp.n)
    throw DimensionMismatch("exclusivity_check: hyperplane length != n");
  const Vector& fv = f.f;

  ExclusivityReport out;
  out.precondition_met =
      LogScalar::from_double(K) * LogScalar::from_double(alpha) >
      LogScalar::from_double(4.0) * LogScalar::from_double(L);

  const PairScan pair = pair_scan(sp, fv, cfg);
  if (!(pair.dist <= L)) return out;
  out.k = pair.k;
  out.l = pair.l;
  out.pair_distance = pair.dist;
  out.single_distance = restricted_dual_norm(sp, row_vec(sp.F, pair.l), fv, cfg);
  if (!(out.single_distance >= K)) return out;
  out.witness_found = true;
  auto ar = recover_a0_r0(sp, row_vec(sp.F, pair.k), row_vec(sp.F, pair.l), fv, cfg,
                          nullptr);
  out.a0 = ar[0];
  out.r0 = ar[1];

  const SearchConfig dual_cfg = inner_dual(cfg);
  const double floor = K * alpha / 2.0;
  std::vector<std::array<std::size_t, 2>> admissible;
  for (const auto& pr : ordered_pairs(sp.m))
    if (pr[0] != pair.k && pr[0] != pair.l && pr[1] != pair.k &&
        pr[1] != pair.l)
      admissible.push_back(pr);
  out.pairs.resize(admissible.size());
  parallel_for_index(admissible.size(), [&](std::size_t t) {
    const Vector fi = row_vec(sp.F, admissible[t][0]);
    const Vector fj = row_vec(sp.F, admissible[t][1]);
    Objective residual = [&](const Vector& c) {
      Vector w = fi;
      kern::active().axpy(c[0], fj.data(), w.data(), sp.n);
      kern::active().axpy(c[1], fv.data(), w.data(), sp.n);
      return dual_norm(sp, w, dual_cfg) - floor;
    };
    FalsifyResult fr = falsify_inequality(
        residual, {{-8.0, 8.0}, {-8.0, 8.0}}, cfg);
    out.pairs[t] = {admissible[t][0], admissible[t][1], fr.min_residual,
                    std::move(fr.counterexample)};
  });
  return out;
}

SearchConfig params_default() { return SearchConfig{}; }

}  // namespace

AlphaEstimate alpha_estimate(const FunctionalFamily& sp) {
  return alpha_estimate(sp, std::nullopt, params_default());
}

AlphaEstimate alpha_estimate(const FunctionalFamily& sp,
                             const std::optional<WitnessMap>& witnesses,
                             const SearchConfig& config) {
  if (sp.m < 4)
    throw TooFewFunctionals("alpha_estimate: need at least 4 functionals");
  if (witnesses) return alpha_witnessed(sp, *witnesses);
  return alpha_numeric(sp, config);
}

BetaEstimate beta_estimate(const FunctionalFamily& sp) {
  return beta_estimate(sp, BetaMode::CoefficientCertificate, params_default());
}

BetaEstimate beta_estimate(const FunctionalFamily& sp, BetaMode mode,
                           const SearchConfig& config) {
  if (sp.m < 3)
    throw TooFewFunctionals("beta_estimate: need at least 3 functionals");
  if (mode == BetaMode::CoefficientCertificate)
    return beta_certificate(sp, config);
  return beta_numeric(sp, config);
}

CaseLabel classify_hyperplane(const FunctionalFamily& sp, const Hyperplane& f,
                              const EpsilonLedger& ledger) {
  return classify_impl(sp, f, ledger, params_default());
}

CaseLabel classify_hyperplane(const FunctionalFamily& sp, const Hyperplane& f,
                              const EpsilonLedger& ledger,
                              const SearchConfig& config) {
  return classify_impl(sp, f, ledger, config);
}

ExclusivityReport exclusivity_check(const FunctionalFamily& sp,
                                    const Hyperplane& f, double alpha,
                                    double K, double L) {
  SearchConfig cfg;
  cfg.restarts = 8;
  cfg.max_iters = 120;
  return exclusivity_impl(sp, f, alpha, K, L, cfg);
}

ExclusivityReport exclusivity_check(const FunctionalFamily& sp,
                                    const Hyperplane& f, double alpha,
                                    double K, double L,
                                    const SearchConfig& config) {
  return exclusivity_impl(sp, f, alpha, K, L, config);
}

}  // namespace projconst
