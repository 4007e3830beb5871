// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace graphvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown vertex id or index.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range (exponent, order, radius, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two graph functions bound to different graphs were combined.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// An edge quantity was requested for a non-adjacent pair.
class AdjacencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed graph or configuration input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A domain without free vertices was used where a Dirichlet space is needed.
class DegenerateDomain : public Error {
 public:
  using Error::Error;
};

/// A function violates the support constraints of its space.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis on the graph does not hold (e.g. no common
/// minimizing vertex of the spike masses).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphvar
