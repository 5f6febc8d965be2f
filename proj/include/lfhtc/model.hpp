#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"
#include "lfhtc/rational.hpp"

namespace lfhtc {

// lambda(w, v) is the effect of w on v (d x d); gamma(h, v) the loading of
// latent h on v (l x d); omega_diag is d x d diagonal.
struct ParameterSet {
  RMatrix lambda;
  RMatrix gamma;
  RMatrix omega_diag;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

// Omega = Omega_diag + Gamma^T Gamma.
inline RMatrix omega(const ParameterSet& p) { return p.omega_diag + p.gamma.transpose() * p.gamma; }

inline RMatrix i_minus(const RMatrix& lambda) { return RMatrix::identity(lambda.rows()) - lambda; }

// (I - Lambda)^{-1}; SingularError if it does not exist.
inline RMatrix regular_inverse(const RMatrix& lambda) {
  try {
    return inverse(i_minus(lambda));
  } catch (const SingularError&) {
    throw SingularError("I - Lambda is singular");
  }
}

// Sigma = (I - Lambda)^{-T} Omega (I - Lambda)^{-1}.
inline RMatrix sigma(const ParameterSet& p) {
  const RMatrix n = regular_inverse(p.lambda);
  return n.transpose() * omega(p) * n;
}

// Omega = (I - Lambda)^T Sigma (I - Lambda).
inline RMatrix omega_from_sigma(const RMatrix& s, const RMatrix& lambda) {
  if (!s.is_square() || s.rows() != lambda.rows() || !lambda.is_square())
    throw Error("omega_from_sigma: dimension mismatch");
  const RMatrix m = i_minus(lambda);
  if (determinant(m) == 0) throw SingularError("I - Lambda is singular");
  return m.transpose() * s * m;
}

enum class SampleMode { primes, small_rationals };

inline std::vector<long> first_primes(std::size_t n) {
  std::vector<long> out;
  for (long c = 2; out.size() < n; ++c) {
    bool prime = true;
    for (long p : out) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(c);
  }
  return out;
}

namespace detail {

// Uniform in [0, n) from raw engine output, so draws do not depend on the
// standard library's distribution implementations.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace detail

// Random parameters supported on G. `primes` assigns distinct primes to all
// free coordinates (Lambda, Gamma, Omega_diag) in a seed-dependent order;
// `small_rationals` draws p/q with p, q uniform in 1..97. Draws again if
// I - Lambda is singular.
inline ParameterSet sample_params(const LatentFactorGraph& g, std::uint64_t seed,
                                  SampleMode mode = SampleMode::primes) {
  std::mt19937_64 rng(seed);
  const std::size_t d = g.d(), l = g.l();
  const std::size_t free = g.directed_edges().size() + g.latent_edges().size() + d;
  const std::vector<long> pool = first_primes(free + 40);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Rational> values;
    if (mode == SampleMode::primes) {
      std::vector<long> p = pool;
      for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[detail::draw_below(rng, i)]);
      for (std::size_t i = 0; i < free; ++i) values.emplace_back(p[i]);
    } else {
      for (std::size_t i = 0; i < free; ++i) {
        const long num = 1 + static_cast<long>(detail::draw_below(rng, 97));
        const long den = 1 + static_cast<long>(detail::draw_below(rng, 97));
        Rational q(num, den);
        q.canonicalize();
        values.push_back(q);
      }
    }
    ParameterSet ps{RMatrix(d, d), RMatrix(l, d), RMatrix(d, d)};
    std::size_t k = 0;
    for (auto [u, w] : g.directed_edges()) ps.lambda(u, w) = values[k++];
    for (auto [h, w] : g.latent_edges()) ps.gamma(h, w) = values[k++];
    for (std::size_t v = 0; v < d; ++v) ps.omega_diag(v, v) = values[k++];
    if (determinant(i_minus(ps.lambda)) != 0) return ps;
  }
  throw SingularError("could not sample regular Lambda");
}

}  // namespace lfhtc
