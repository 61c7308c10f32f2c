#pragma once

#include <stdexcept>
#include <string>

namespace projconst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroFunctional : Error {
  ZeroFunctional() : Error("functional is identically zero") {}
  using Error::Error;
};

struct ZeroVector : Error {
  ZeroVector() : Error("vector is zero") {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct DuplicateNodes : Error {
  using Error::Error;
};

struct Singular : Error {
  using Error::Error;
};

struct PrecisionLoss : Error {
  using Error::Error;
};

struct NonFiniteObjective : Error {
  using Error::Error;
};

struct DependentBasis : Error {
  using Error::Error;
};

struct BadWitness : Error {
  using Error::Error;
};

struct TooFewFunctionals : Error {
  using Error::Error;
};

// a sampled smoothness bound failed; points at a bug in norm or search code
struct ViolationFound : Error {
  using Error::Error;
};

// an exact rational certificate check failed; the message names the bullet,
// the indices, and the rational residual
struct CertificateFailure : Error {
  using Error::Error;
};

struct HypothesisViolation : Error {
  using Error::Error;
};

struct DegenerateY : Error {
  using Error::Error;
};

struct BadExponent : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct ParseError : Error {
  std::string path;
  ParseError(std::string where, const std::string& what)
      : Error(where + ": " + what), path(std::move(where)) {}
};

}  // namespace projconst
