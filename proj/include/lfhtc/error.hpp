#pragma once

#include <stdexcept>
#include <string>

namespace lfhtc {

// Base of every error thrown by the library. The CLI maps all of them to
// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, DIMACS, matrix files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid graph: duplicate labels, self-loops, latent parents...
class GraphError : public Error {
 public:
  using Error::Error;
};

// I - Lambda singular, or a recovery system without a unique solution.
class SingularError : public Error {
 public:
  using Error::Error;
};

// Triple violating its cardinality/disjointness invariants.
class MalformedTriple : public Error {
 public:
  using Error::Error;
};

// Enumeration or search outside of the supported size limits.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace lfhtc
