#pragma once

#include <string>
#include <vector>

#include "lfhtc/criterion.hpp"
#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"
#include "lfhtc/model.hpp"
#include "lfhtc/rational.hpp"

namespace lfhtc {

// Partially recovered Lambda. Reading a column that has not been recovered
// yet throws, so a recovery step can only depend on its prerequisites.
class KnownLambda {
 public:
  explicit KnownLambda(std::size_t d) : lambda_(d, d) {}

  bool known(std::size_t v) const { return known_.contains(v); }
  const NodeSet& known_columns() const { return known_; }

  // Entry (k, c) of I - Lambda.
  Rational i_minus(std::size_t k, std::size_t c) const {
    if (!known(c)) throw Error("recovery read unknown Lambda column " + std::to_string(c));
    Rational x = -lambda_(k, c);
    if (k == c) x += 1;
    return x;
  }

  void set_column(std::size_t v, const std::vector<std::size_t>& rows, const RMatrix& values) {
    for (std::size_t i = 0; i < rows.size(); ++i) lambda_(rows[i], v) = values(i, 0);
    known_.insert(v);
  }

  const RMatrix& matrix() const { return lambda_; }

 private:
  RMatrix lambda_;
  NodeSet known_;
};

struct RecoverySystem {
  std::size_t v = 0;
  std::vector<std::size_t> rows;     // Y
  std::vector<std::size_t> parents;  // pa_V(v), first n columns
  std::vector<std::size_t> z;        // Z, last r columns
  RMatrix M;                         // [A | B]
  RMatrix c;
};

// Linear system  A lambda + B psi = c  for the column of v. Rows y in
// htr_H(Z u {v}) use (I - Lambda)^T Sigma; the others use Sigma directly.
inline RecoverySystem build_system(const LatentFactorGraph& g, const HtcTriple& t, const RMatrix& s,
                                   const KnownLambda& known) {
  const std::size_t d = g.d();
  if (s.rows() != d || s.cols() != d) throw Error("covariance matrix has wrong dimensions");
  RecoverySystem sys;
  sys.v = t.v;
  sys.rows = t.Y.to_vector();
  sys.parents = g.pa_observed(t.v).to_vector();
  sys.z = t.Z.to_vector();
  const std::size_t n = sys.parents.size(), r = sys.z.size();
  if (sys.rows.size() != n + r) throw MalformedTriple("|Y| must equal |pa_V(v)| + |Z|");
  for (auto z : sys.z)
    if (!known.known(z)) throw Error("missing prerequisite column for Z node " + g.observed_label(z));
  NodeSet zv = t.Z;
  zv.insert(t.v);
  const NodeSet reach = g.htr(zv, t.H);

  // [(I - Lambda)^T Sigma]_{y, j}
  auto left = [&](std::size_t y, std::size_t j) {
    Rational acc;
    for (std::size_t k = 0; k < d; ++k) {
      const Rational f = known.i_minus(k, y);
      if (f != 0) acc += f * s(k, j);
    }
    return acc;
  };
  // [Sigma (I - Lambda)]_{i, z}
  auto right = [&](std::size_t i, std::size_t z) {
    Rational acc;
    for (std::size_t m = 0; m < d; ++m) {
      const Rational f = known.i_minus(m, z);
      if (f != 0) acc += s(i, m) * f;
    }
    return acc;
  };
  // [(I - Lambda)^T Sigma (I - Lambda)]_{y, z}
  auto both = [&](std::size_t y, std::size_t z) {
    Rational acc;
    for (std::size_t m = 0; m < d; ++m) {
      const Rational f = known.i_minus(m, z);
      if (f != 0) acc += left(y, m) * f;
    }
    return acc;
  };

  sys.M = RMatrix(n + r, n + r);
  sys.c = RMatrix(n + r, 1);
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    const std::size_t y = sys.rows[i];
    if (reach.contains(y)) {
      if (!known.known(y)) throw Error("missing prerequisite column for Y node " + g.observed_label(y));
      for (std::size_t j = 0; j < n; ++j) sys.M(i, j) = left(y, sys.parents[j]);
      for (std::size_t j = 0; j < r; ++j) sys.M(i, n + j) = both(y, sys.z[j]);
      sys.c(i, 0) = left(y, t.v);
    } else {
      for (std::size_t j = 0; j < n; ++j) sys.M(i, j) = s(y, sys.parents[j]);
      for (std::size_t j = 0; j < r; ++j) sys.M(i, n + j) = right(y, sys.z[j]);
      sys.c(i, 0) = s(y, t.v);
    }
  }
  return sys;
}

struct ColumnSolution {
  RMatrix lambda;  // n x 1, ordered like pa_V(v)
  RMatrix psi;     // r x 1
};

inline ColumnSolution solve_column(const RecoverySystem& sys) {
  const std::size_t n = sys.parents.size(), r = sys.z.size();
  if (n + r == 0) return {RMatrix(0, 1), RMatrix(0, 1)};
  RMatrix x;
  try {
    x = solve(sys.M, sys.c);
  } catch (const SingularError&) {
    throw SingularError("non-generic covariance input: singular system for node index " + std::to_string(sys.v));
  }
  ColumnSolution out{RMatrix(n, 1), RMatrix(r, 1)};
  for (std::size_t i = 0; i < n; ++i) out.lambda(i, 0) = x(i, 0);
  for (std::size_t i = 0; i < r; ++i) out.psi(i, 0) = x(n + i, 0);
  return out;
}

struct Recovery {
  RMatrix lambda;
  RMatrix omega;
};

// Fills Lambda column by column in certificate order, then
// Omega = (I - Lambda)^T Sigma (I - Lambda).
inline Recovery recover_all(const LatentFactorGraph& g, const Certificate& cert, const RMatrix& s) {
  if (!s.is_symmetric()) throw Error("covariance matrix must be symmetric");
  KnownLambda known(g.d());
  for (const auto& e : cert) {
    if (e.trivial) {
      if (!g.pa_observed(e.v).empty()) throw Error("trivial certificate entry for a node with parents");
      known.set_column(e.v, {}, RMatrix(0, 1));
      continue;
    }
    try {
      const auto sol = solve_column(build_system(g, e.triple, s, known));
      known.set_column(e.v, g.pa_observed(e.v).to_vector(), sol.lambda);
    } catch (const SingularError& err) {
      throw SingularError(std::string(err.what()) + " (node " + g.observed_label(e.v) + ")");
    }
  }
  if (known.known_columns().size() != g.d()) throw Error("certificate does not cover every observed node");
  return {known.matrix(), omega_from_sigma(s, known.matrix())};
}

}  // namespace lfhtc
