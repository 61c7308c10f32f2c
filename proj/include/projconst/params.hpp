#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "projconst/bounds.hpp"
#include "projconst/optimize.hpp"
#include "projconst/space.hpp"

namespace projconst {

enum class AlphaMode { NumericSearch, WitnessCertificate };

struct AlphaEstimate {
  double value = 0.0;    // raw_min clamped to at most 1/2
  double raw_min = 0.0;  // smallest distance found before clamping
  AlphaMode mode = AlphaMode::NumericSearch;
  std::array<std::size_t, 4> worst_tuple{};  // (i, j, k, l) with j < k < l
};

// key: (i, j, k, l) with j < k < l; value: a vector annihilated by
// f_j, f_k, f_l with f_i(v) != 0
using WitnessMap = std::map<std::array<std::size_t, 4>, Vector>;

enum class BetaMode { CoefficientCertificate, NumericSearch };

struct BetaEstimate {
  double value = 0.0;  // +inf when some removal stops spanning
  BetaMode mode = BetaMode::CoefficientCertificate;
  std::array<std::size_t, 2> worst_pair{};  // (j, k) with j < k
  bool not_spanning = false;
};

struct CaseLabel {
  enum class Tag { NearSingle, NearPair, Generic };
  Tag tag = Tag::Generic;
  std::size_t k = 0;
  std::size_t l = 0;  // NearPair only
  double a0 = 0.0;    // NearPair only
  double r0 = 0.0;    // NearSingle and NearPair
  double achieved_distance = 0.0;
};

struct PairResidual {
  std::size_t i = 0;
  std::size_t j = 0;
  double min_residual = 0.0;
  std::optional<Vector> counterexample;  // (a, r) when the bound failed
};

struct ExclusivityReport {
  bool precondition_met = false;  // K * alpha > 4 * L
  bool witness_found = false;
  std::size_t k = 0;
  std::size_t l = 0;
  double a0 = 0.0;
  double r0 = 0.0;
  double pair_distance = 0.0;
  double single_distance = 0.0;  // min_r of f_l along f; must be >= K
  std::vector<PairResidual> pairs;
};

// Smallest dual distance from any f_i to the span of three others. Witness
// mode certifies each tuple from below with |f_i(v)| / ||v||; numeric mode
// minimizes dual_norm(f_i - a f_j - b f_k - c f_l) over the coefficients.
AlphaEstimate alpha_estimate(const FunctionalFamily& sp);
AlphaEstimate alpha_estimate(const FunctionalFamily& sp,
                             const std::optional<WitnessMap>& witnesses,
                             const SearchConfig& config);

// Smallest constant bounding max(|f_j(x)|, |f_k(x)|) by the largest of the
// remaining functionals, worst pair taken. Certificate mode expands f_j and
// f_k over the others and sums coefficients; numeric mode searches the
// sphere for the worst ratio.
BetaEstimate beta_estimate(const FunctionalFamily& sp);
BetaEstimate beta_estimate(const FunctionalFamily& sp, BetaMode mode,
                           const SearchConfig& config);

// Distance-based case split of a hyperplane functional against the family:
// NearSingle when some f_k is K-close to the line through f, NearPair when
// some f_k + a f_l is L-close, Generic otherwise. Ties go to the earlier
// case.
CaseLabel classify_hyperplane(const FunctionalFamily& sp, const Hyperplane& f,
                              const EpsilonLedger& ledger);
CaseLabel classify_hyperplane(const FunctionalFamily& sp, const Hyperplane& f,
                              const EpsilonLedger& ledger,
                              const SearchConfig& config);

// Searches for violations of dual_norm(f_i + a f_j + r f) >= K alpha / 2
// over pairs disjoint from a NearPair witness, when one exists.
ExclusivityReport exclusivity_check(const FunctionalFamily& sp,
                                    const Hyperplane& f, double alpha,
                                    double K, double L);
ExclusivityReport exclusivity_check(const FunctionalFamily& sp,
                                    const Hyperplane& f, double alpha,
                                    double K, double L,
                                    const SearchConfig& config);

}  // namespace projconst
