#pragma once

#include <stdexcept>
#include <string>

namespace k2bench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on evidence whose marginal probability is zero.
class ZeroProbabilityEvidence : public Error {
 public:
  ZeroProbabilityEvidence() : Error("zero-probability evidence") {}
};

/// Normal matrix of a least-squares problem is not invertible at the start point.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

}  // namespace k2bench
