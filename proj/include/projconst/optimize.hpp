#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "projconst/vec.hpp"

namespace projconst {

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = 64;
  std::size_t max_iters = 500;
  double tol = 1e-10;
};

enum class SearchStatus { Converged, IterLimit };

struct SearchResult {
  Vector point;
  double value = 0.0;
  SearchStatus status = SearchStatus::Converged;
  std::size_t evaluations = 0;
};

using Objective = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

// Projected gradient ascent on the Euclidean unit sphere, multi-start.
// Deterministic in (inputs, seed); the reported value is the best over all
// restarts and is a lower bound of the true maximum. Ties between restarts
// go to the lexicographically smallest point.
SearchResult maximize_on_sphere(const Objective& objective,
                                const GradientFn& gradient,
                                std::size_t dimension,
                                const SearchConfig& config);

// Coordinate descent with golden-section line searches, started from the
// best point of a coarse grid. Objective must be convex and coercive.
SearchResult minimize_convex_lowdim(const Objective& objective,
                                    std::size_t dimension,
                                    const SearchConfig& config);

// Same engine without the dimension cap; for internal callers that minimize
// over more than 4 coordinates.
SearchResult minimize_convex_nd(const Objective& objective,
                                std::size_t dimension,
                                const SearchConfig& config);

struct FalsifyResult {
  std::optional<Vector> counterexample;
  double min_residual = 0.0;
  Vector min_point;
  std::size_t evaluations = 0;
};

// Multi-start minimization of the residual over a box; a counterexample is
// reported only when the residual is driven below -tol. Absence of a
// counterexample is "none found", not a proof.
FalsifyResult falsify_inequality(
    const Objective& residual,
    const std::vector<std::pair<double, double>>& sample_space,
    const SearchConfig& config);

// Worker count requested via PROJCONST_THREADS; 1 when unset or invalid.
std::size_t thread_budget();

// Runs fn over 0..count-1 on up to thread_budget() workers. Completion order
// is unspecified; callers write into per-index slots and fold serially to
// keep results deterministic. The first exception is rethrown after join.
void parallel_for_index(std::size_t count,
                        const std::function<void(std::size_t)>& fn);

}  // namespace projconst
