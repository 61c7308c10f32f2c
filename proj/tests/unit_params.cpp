#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "projconst/errors.hpp"
#include "projconst/params.hpp"
#include "projconst/rng.hpp"

using namespace projconst;

namespace {

FunctionalFamily corollary4() {
  MatrixDense f(6, 4);
  for (int i = 0; i < 4; ++i) f.at(i, i) = 1.0;
  for (int j = 0; j < 4; ++j) {
    f.at(4, j) = 1.0;
    f.at(5, j) = (j + 1) / 4.0;
  }
  return FunctionalFamily(3, std::move(f));
}

FunctionalFamily identity_family(std::size_t n, int p = 2) {
  return FunctionalFamily(p, MatrixDense::identity(n));
}

Vector e4(std::size_t i, double scale = 1.0) {
  Vector v(4, 0.0);
  v[i] = scale;
  return v;
}

Vector combine(Vector a, const Vector& b, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

// annihilating vectors for every (i; {j, k, l}) choice on corollary4();
// index 4 is the plain sum, index 5 the weighted sum, weights t + 1
WitnessMap corollary4_witnesses() {
  WitnessMap w;
  const std::size_t m = 6;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        for (std::size_t l = k + 1; l < m; ++l) {
          if (l == i) continue;
          std::array<std::size_t, 4> key{i, j, k, l};
          std::vector<std::size_t> coords, rest;
          bool has_sum = false, has_wtd = false;
          for (std::size_t s : {j, k, l}) {
            if (s == 4) has_sum = true;
            else if (s == 5) has_wtd = true;
            else coords.push_back(s);
          }
          for (std::size_t c = 0; c < 4; ++c) {
            if (c == i) continue;
            bool used = false;
            for (std::size_t s : coords) used = used || s == c;
            if (!used) rest.push_back(c);
          }
          Vector v;
          if (i < 4) {
            if (!has_sum && !has_wtd) {
              v = e4(i);
            } else if (has_sum && !has_wtd) {
              v = combine(e4(i), e4(rest[0]), -1.0);
            } else if (!has_sum && has_wtd) {
              const double s1 = rest[0] + 1.0;
              v = combine(e4(i, s1), e4(rest[0]), -(i + 1.0));
            } else {
              const double ww = i + 1.0, s1 = rest[0] + 1.0,
                           s2 = rest[1] + 1.0;
              v = combine(combine(e4(i, s2 - s1), e4(rest[0]), ww - s2),
                          e4(rest[1]), s1 - ww);
            }
          } else if (i == 4) {
            if (!has_wtd) {
              v = e4(rest[0]);
            } else {
              const double s1 = rest[0] + 1.0, s2 = rest[1] + 1.0;
              v = combine(e4(rest[0], s2), e4(rest[1]), -s1);
            }
          } else {
            if (!has_sum) {
              v = e4(rest[0]);
            } else {
              v = combine(e4(rest[0]), e4(rest[1]), -1.0);
            }
          }
          w[key] = std::move(v);
        }
      }
    }
  return w;
}

}  // namespace

TEST_CASE("alpha witness certificate on the weighted family") {
  auto sp = corollary4();
  auto witnesses = corollary4_witnesses();
  CHECK(witnesses.size() == 60);
  AlphaEstimate est = alpha_estimate(sp, witnesses, SearchConfig{});
  CHECK(est.mode == AlphaMode::WitnessCertificate);
  CHECK(est.value >= 1.0 / 8.0);
  CHECK(est.value <= 0.5);
  CHECK(est.value == est.raw_min);
  CHECK(witnesses.count(est.worst_tuple) == 1);
}

TEST_CASE("alpha witness map must cover every tuple") {
  auto sp = corollary4();
  auto witnesses = corollary4_witnesses();
  witnesses.erase(witnesses.begin());
  CHECK_THROWS_AS(alpha_estimate(sp, witnesses, SearchConfig{}), BadWitness);
}

TEST_CASE("alpha witness must be annihilated") {
  auto sp = corollary4();
  auto witnesses = corollary4_witnesses();
  witnesses[{0, 1, 2, 3}] = combine(e4(0), e4(1), 0.5);
  CHECK_THROWS_AS(alpha_estimate(sp, witnesses, SearchConfig{}), BadWitness);
}

TEST_CASE("alpha numeric detects a dependent functional") {
  MatrixDense f(4, 2);
  f.at(0, 0) = 1.0;
  f.at(0, 1) = 1.0;  // equals row 1 + row 2
  f.at(1, 0) = 1.0;
  f.at(2, 1) = 1.0;
  f.at(3, 0) = 1.0;
  f.at(3, 1) = 1.0;
  FunctionalFamily sp(2, std::move(f));
  SearchConfig cfg;
  cfg.max_iters = 80;
  cfg.tol = 1e-9;
  AlphaEstimate est = alpha_estimate(sp, std::nullopt, cfg);
  CHECK(est.mode == AlphaMode::NumericSearch);
  CHECK(est.raw_min < 1e-6);
}

TEST_CASE("alpha numeric dominates the witness certificate") {
  auto sp = corollary4();
  AlphaEstimate witness =
      alpha_estimate(sp, corollary4_witnesses(), SearchConfig{});
  SearchConfig cfg;
  cfg.seed = 3;
  cfg.max_iters = 100;
  cfg.tol = 1e-9;
  AlphaEstimate numeric = alpha_estimate(sp, std::nullopt, cfg);
  CHECK(numeric.value >= witness.value - 1e-7);
  CHECK(numeric.raw_min > 0.0);
}

TEST_CASE("alpha needs at least four functionals") {
  CHECK_THROWS_AS(alpha_estimate(identity_family(3)), TooFewFunctionals);
}

TEST_CASE("beta certificate stays below n squared") {
  auto sp = corollary4();
  BetaEstimate cert = beta_estimate(sp);
  CHECK(cert.mode == BetaMode::CoefficientCertificate);
  CHECK_FALSE(cert.not_spanning);
  CHECK(cert.value > 0.0);
  CHECK(cert.value <= 16.0 + 1e-9);
  CHECK(cert.worst_pair[0] < cert.worst_pair[1]);
}

TEST_CASE("beta numeric sits below the certificate") {
  auto sp = corollary4();
  BetaEstimate cert = beta_estimate(sp);
  SearchConfig cfg;
  cfg.seed = 7;
  cfg.restarts = 16;
  cfg.max_iters = 300;
  BetaEstimate numeric = beta_estimate(sp, BetaMode::NumericSearch, cfg);
  CHECK(numeric.mode == BetaMode::NumericSearch);
  CHECK(numeric.value > 0.0);
  CHECK(numeric.value <= cert.value + 1e-7);
}

TEST_CASE("beta on the identity family is unbounded") {
  BetaEstimate est = beta_estimate(identity_family(4));
  CHECK(est.not_spanning);
  CHECK(std::isinf(est.value));
  BetaEstimate numeric =
      beta_estimate(identity_family(4), BetaMode::NumericSearch,
                    SearchConfig{});
  CHECK(numeric.not_spanning);
  CHECK(std::isinf(numeric.value));
}

TEST_CASE("classify tags a functional proportional to a family member") {
  auto sp = corollary4();
  EpsilonLedger led = compute_ledger(4, 6, 3, 0.125, 16.0);
  Vector g(4);
  for (std::size_t c = 0; c < 4; ++c) g[c] = 3.0 * sp.F.at(5, c);
  Hyperplane f = make_hyperplane(sp, g);
  CaseLabel label = classify_hyperplane(sp, f, led);
  CHECK(label.tag == CaseLabel::Tag::NearSingle);
  CHECK(label.k == 5);
  CHECK(LogScalar::from_double(label.achieved_distance) <= led.K);
  CHECK(label.r0 < 0.0);
  const double nu = dual_norm(sp, Vector(sp.F.row(5), sp.F.row(5) + 4));
  CHECK(std::fabs(-label.r0 * 3.0 - 3.0 * nu) < 1e-3 * nu);
}

TEST_CASE("classify is scale invariant") {
  auto sp = corollary4();
  EpsilonLedger led = compute_ledger(4, 6, 3, 0.125, 16.0);
  Vector base(sp.F.row(2), sp.F.row(2) + 4);
  CaseLabel a = classify_hyperplane(sp, make_hyperplane(sp, base), led);
  Vector scaled = base, flipped = base;
  for (auto& c : scaled) c *= 3.0;
  for (auto& c : flipped) c *= -2.0;
  CaseLabel b = classify_hyperplane(sp, make_hyperplane(sp, scaled), led);
  CaseLabel c = classify_hyperplane(sp, make_hyperplane(sp, flipped), led);
  CHECK(a.tag == b.tag);
  CHECK(a.tag == c.tag);
  CHECK(a.k == b.k);
  CHECK(a.k == c.k);
}

TEST_CASE("classify marks a generic functional") {
  auto sp = corollary4();
  EpsilonLedger led = compute_ledger(4, 6, 3, 0.125, 16.0);
  rng::Stream st(41);
  for (int trial = 0; trial < 3; ++trial) {
    Hyperplane f = make_hyperplane(sp, st.normal_vec(4));
    CaseLabel label = classify_hyperplane(sp, f, led);
    CHECK(label.tag == CaseLabel::Tag::Generic);
    CHECK(LogScalar::from_double(label.achieved_distance) > led.L);
  }
}

TEST_CASE("classify finds a near pair under a widened ledger") {
  auto sp = corollary4();
  EpsilonLedger synth;
  synth.K = LogScalar::from_double(1e-4);
  synth.L = LogScalar::from_double(1e-6);
  Vector g(4);
  for (std::size_t c = 0; c < 4; ++c) g[c] = sp.F.at(4, c) + sp.F.at(5, c);
  Hyperplane f = make_hyperplane(sp, g);
  CaseLabel label = classify_hyperplane(sp, f, synth);
  CHECK(label.tag == CaseLabel::Tag::NearPair);
  CHECK(label.k + label.l == 9);
  CHECK(label.k >= 4);
  CHECK(label.achieved_distance < 1e-6);
  CHECK(std::fabs(std::fabs(label.a0) - 1.0) < 1e-3);
}

TEST_CASE("exclusivity precondition on the real ledger") {
  auto sp = corollary4();
  EpsilonLedger led = compute_ledger(4, 6, 3, 0.125, 16.0);
  rng::Stream st(5);
  Hyperplane f = make_hyperplane(sp, st.normal_vec(4));
  SearchConfig cfg;
  cfg.restarts = 6;
  cfg.max_iters = 80;
  ExclusivityReport rep = exclusivity_check(
      sp, f, 0.125, led.K.to_double(), led.L.to_double(), cfg);
  CHECK(rep.precondition_met);
  CHECK_FALSE(rep.witness_found);
  CHECK(rep.pairs.empty());
}

TEST_CASE("exclusivity reports an unmet precondition") {
  auto sp = corollary4();
  rng::Stream st(6);
  Hyperplane f = make_hyperplane(sp, st.normal_vec(4));
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 60;
  ExclusivityReport rep = exclusivity_check(sp, f, 0.25, 1e-10, 1.0, cfg);
  CHECK_FALSE(rep.precondition_met);
}

TEST_CASE("exclusivity rejects a bad alpha") {
  auto sp = corollary4();
  Hyperplane f = make_hyperplane(sp, e4(0));
  CHECK_THROWS_AS(exclusivity_check(sp, f, 0.75, 0.1, 1e-3),
                  HypothesisViolation);
}

TEST_CASE("exclusivity clears disjoint pairs around a near pair") {
  auto sp = corollary4();
  Vector g(4);
  for (std::size_t c = 0; c < 4; ++c)
    g[c] = sp.F.at(5, c) + 0.5 * sp.F.at(4, c);
  Hyperplane f = make_hyperplane(sp, g);
  const double alpha = 0.125, K = 0.01, L = 1e-6;
  SearchConfig cfg;
  cfg.seed = 11;
  cfg.restarts = 6;
  cfg.max_iters = 80;
  ExclusivityReport rep = exclusivity_check(sp, f, alpha, K, L, cfg);
  CHECK(rep.precondition_met);
  CHECK(rep.witness_found);
  CHECK(rep.k + rep.l == 9);
  CHECK(rep.pair_distance <= L);
  CHECK(rep.single_distance >= K);
  CHECK(rep.pairs.size() == 12);
  for (const auto& pr : rep.pairs) {
    CHECK(pr.i < 4);
    CHECK(pr.j < 4);
    CHECK_FALSE(pr.counterexample.has_value());
    CHECK(pr.min_residual > 0.0);
    // the pair witness distance is far below alpha / 2, so the lemma's
    // floor should hold with the stronger alpha / 2 threshold as well
    CHECK(pr.min_residual + K * alpha / 2.0 >= alpha / 2.0 - 1e-6);
  }
}
