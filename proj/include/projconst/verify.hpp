#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "projconst/optimize.hpp"
#include "projconst/space.hpp"
#include "projconst/vec.hpp"

namespace projconst {

using Rational = boost::multiprecision::cpp_rational;

struct CapMeasureSample {
  double t = 0.0;
  std::size_t n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct ModulusProbe {
  double t = 0.0;
  double delta_upper = 0.0;  // best witness found; valid upper bound
  double bound = 0.0;
  bool violation = false;  // witness fell below bound - 1e-6
};

// which norm the modulus search runs in
struct NormSpec {
  enum class Kind { Lq, DualFamily, Quotient };
  Kind kind = Kind::Lq;
  double q = 2.0;
  std::size_t dim = 2;
  std::optional<FunctionalFamily> family;
  std::vector<Vector> quotient_basis;  // the subspace Y in quotient mode

  static NormSpec lq(double q, std::size_t dim);
  static NormSpec dual(FunctionalFamily family);
  static NormSpec quotient(FunctionalFamily family, std::vector<Vector> basis);
};

struct WitnessRecord {
  std::string bullet;
  std::vector<std::size_t> indices;  // 0-based rows of the case
  std::string detail;                // the exact rational quantities involved
  bool ok = false;
};

struct CorollaryCertificate {
  std::size_t n = 0;
  std::size_t m = 0;
  int p = 1;
  Rational alpha_bound;  // 1/(2n)
  Rational beta_bound;   // n^2
  std::vector<WitnessRecord> witness_log;
};

struct MarkovReport {
  std::size_t degree = 0;
  std::size_t k = 0;
  std::size_t trials = 0;
  double max_ratio = 0.0;
  bool ok = false;
};

// maximizes min_i |f_i(x)| / ||f_i||_* over the unit sphere of the family
// norm, or of ker(constraint) when given; the returned value is recomputed
// at the witness, so it is a valid lower bound of the true max
SearchResult maxmin_search(const FunctionalFamily& sp,
                           const std::optional<Hyperplane>& subspace_constraint,
                           const SearchConfig& config);

// Monte Carlo measure of the slab {x on the euclidean sphere S^{n-1} :
// |x_1| <= t}, with a binomial standard error (add-one smoothed so it never
// degenerates to zero)
CapMeasureSample cap_measure_mc(std::size_t n, double t, std::size_t samples,
                                std::uint64_t seed);

std::vector<ModulusProbe> modulus_falsify(const NormSpec& spec,
                                          const std::vector<double>& t_grid,
                                          const SearchConfig& config);

MarkovReport markov_chain_check(std::size_t degree, std::size_t k,
                                std::size_t trials,
                                const SearchConfig& config);

FunctionalFamily build_corollary_space(std::size_t n);

CorollaryCertificate corollary_exact_verify(std::size_t n);

}  // namespace projconst
