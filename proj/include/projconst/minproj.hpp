#pragma once

#include <cstddef>
#include <vector>

#include "projconst/optimize.hpp"
#include "projconst/space.hpp"
#include "projconst/vec.hpp"

namespace projconst {

// P(x) = x - f(x) w with f(w) = 1; the identity on ker f
struct Projection {
  Hyperplane f;
  Vector w;
};

struct TraceEntry {
  std::size_t restart = 0;
  double value = 0.0;
  SearchStatus status = SearchStatus::Converged;
  std::size_t evaluations = 0;
};

struct MinProjResult {
  Projection projection;
  double norm_estimate = 0.0;
  double crude_upper = 0.0;
  std::vector<TraceEntry> trace;
};

struct SmoothnessReport {
  double eps = 0.0;
  double t0 = 0.0;
  std::size_t samples = 0;
  double max_abs_fyw = 0.0;
  double w_norm = 0.0;
  double bound_lemma = 0.0;  // t0 (2 + eps)
  double bound_sqrt = 0.0;   // 8 sqrt(eps p)
  double falsify_min_residual = 0.0;
  bool ok = false;
};

struct ReplayReport {
  Vector nodes;        // f_i(z) / f_i(y)
  Vector v;            // f_i(y)^{2p-1} f_i(w)
  Vector derivatives;  // P^{(k)}(0) for k = 0..2p-1
  double max_abs_p = 0.0;
  Vector markov_bounds;
  bool markov_ok = true;
  double inverse_bound = 0.0;  // node-product bound on ||A^{-1}||_inf
  double inverse_exact = 0.0;  // 0 when the matrix is too large to invert
  bool inverse_ok = true;
  bool vector_bound_ok = true;  // ||A v||_inf >= ||v||_inf / ||A^{-1}||_inf
};

Projection make_projection(const FunctionalFamily& sp, Hyperplane f, Vector w);

// lower-bound estimate of ||P|| by sphere search
double projection_norm_estimate(const FunctionalFamily& sp,
                                const Projection& proj);
double projection_norm_estimate(const FunctionalFamily& sp,
                                const Projection& proj,
                                const SearchConfig& config);

// 1 + dual_norm(f) * norm_eval(w)
double projection_crude_upper(const FunctionalFamily& sp,
                              const Projection& proj);

// upper bound on the relative projection constant for Y = ker f: subgradient
// descent over {w : f(w) = 1}, multi-started, inner sphere search per step
MinProjResult minimal_projection_search(const FunctionalFamily& sp,
                                        const Hyperplane& f,
                                        const SearchConfig& config);

SmoothnessReport smoothness_gap_check(const FunctionalFamily& sp,
                                      const MinProjResult& result,
                                      std::size_t sample_count);
SmoothnessReport smoothness_gap_check(const FunctionalFamily& sp,
                                      const MinProjResult& result,
                                      std::size_t sample_count,
                                      const SearchConfig& config);

ReplayReport proof_chain_replay(const FunctionalFamily& sp,
                                const Hyperplane& f,
                                const MinProjResult& result, const Vector& y,
                                const Vector& z);

}  // namespace projconst
