#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "lfhtc/graph.hpp"
#include "lfhtc/model.hpp"
#include "lfhtc/rational.hpp"

namespace lfhtc {

// Dimension of the space of symmetric d x d matrices.
inline std::size_t sym_dim(std::size_t d) { return d * (d + 1) / 2; }

namespace detail {

// Row index of entry (i, j), i <= j, in the upper-triangle vectorization.
inline std::size_t sym_row(std::size_t d, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return seed + 0x9E3779B97F4A7C15ull * trial;
}

}  // namespace detail

// Jacobian of tau: (Gamma, Omega_diag) -> Omega_diag + Gamma^T Gamma at p.
// Columns: latent edges in graph order, then omega_v for v = 0..d-1.
inline RMatrix tau_jacobian(const LatentFactorGraph& g, const ParameterSet& p) {
  const std::size_t d = g.d();
  RMatrix j(sym_dim(d), g.latent_edges().size() + d);
  std::size_t col = 0;
  for (auto [h, v] : g.latent_edges()) {
    // dOmega_ab = [a == v] gamma_hb + [b == v] gamma_ha
    for (std::size_t b = 0; b < d; ++b) j(detail::sym_row(d, v, b), col) += p.gamma(h, b);
    j(detail::sym_row(d, v, v), col) += p.gamma(h, v);
    ++col;
  }
  for (std::size_t v = 0; v < d; ++v) j(detail::sym_row(d, v, v), col++) = 1;
  return j;
}

// Jacobian of (Lambda, Gamma, Omega_diag) -> Sigma at p. Columns: directed
// edges, latent edges, omega_v.
inline RMatrix sigma_jacobian(const LatentFactorGraph& g, const ParameterSet& p) {
  const std::size_t d = g.d();
  const RMatrix n = regular_inverse(p.lambda);
  const RMatrix s = n.transpose() * omega(p) * n;
  const RMatrix gn = p.gamma * n;
  RMatrix j(sym_dim(d), g.directed_edges().size() + g.latent_edges().size() + d);
  std::size_t col = 0;
  auto fill = [&](auto&& entry) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) j(detail::sym_row(d, a, b), col) = entry(a, b);
    ++col;
  };
  // dN = N dLambda N, so dSigma_ab = Sigma_au N_wb + N_wa Sigma_ub.
  for (auto [u, w] : g.directed_edges())
    fill([&](std::size_t a, std::size_t b) { return Rational(s(a, u) * n(w, b) + n(w, a) * s(u, b)); });
  // dSigma = N^T dOmega N.
  for (auto [h, v] : g.latent_edges())
    fill([&](std::size_t a, std::size_t b) { return Rational(n(v, a) * gn(h, b) + gn(h, a) * n(v, b)); });
  for (std::size_t v = 0; v < d; ++v)
    fill([&](std::size_t a, std::size_t b) { return Rational(n(v, a) * n(v, b)); });
  return j;
}

// Max over trials of the exact Jacobian rank of tau at prime-sampled points.
inline std::size_t dim_im_tau(const LatentFactorGraph& g, std::uint64_t seed = 1, std::size_t trials = 3) {
  const std::size_t bound = std::min(sym_dim(g.d()), g.latent_edges().size() + g.d());
  std::size_t best = 0;
  for (std::size_t t = 0; t < std::max<std::size_t>(trials, 1) && best < bound; ++t)
    best = std::max(best, rank(tau_jacobian(g, sample_params(g, detail::trial_seed(seed, t)))));
  return best;
}

inline bool is_trivially_infinite(const LatentFactorGraph& g, std::uint64_t seed = 1, std::size_t trials = 3) {
  return g.directed_edges().size() + dim_im_tau(g, seed, trials) > sym_dim(g.d());
}

enum class Verdict { finite_to_one, infinite_to_one, trivially_infinite };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::finite_to_one: return "finite-to-one";
    case Verdict::infinite_to_one: return "infinite-to-one";
    case Verdict::trivially_infinite: return "trivially-infinite";
  }
  return "?";
}

struct DimReport {
  std::size_t dim_im_tau = 0;
  std::size_t dim_theta = 0;
  std::size_t dim_image = 0;
  Verdict verdict = Verdict::infinite_to_one;
  std::size_t trials = 0;
};

// Finite-to-one iff the Jacobian of the full parametrization has rank
// |D_V| + dim Im(tau). Random-point ranks only bound the generic rank from
// below, so an infinite-to-one verdict is probabilistic. `tau_dim` skips
// recomputing dim Im(tau) when the caller already knows it.
inline DimReport is_finite_to_one(const LatentFactorGraph& g, std::uint64_t seed = 1, std::size_t trials = 3,
                                  std::optional<std::size_t> tau_dim = std::nullopt) {
  DimReport r;
  r.trials = std::max<std::size_t>(trials, 1);
  r.dim_im_tau = tau_dim ? *tau_dim : dim_im_tau(g, seed, r.trials);
  r.dim_theta = g.directed_edges().size() + r.dim_im_tau;
  const std::size_t cap = std::min(r.dim_theta, sym_dim(g.d()));
  for (std::size_t t = 0; t < r.trials && r.dim_image < cap; ++t)
    r.dim_image = std::max(r.dim_image, rank(sigma_jacobian(g, sample_params(g, detail::trial_seed(seed, t)))));
  if (r.dim_theta > sym_dim(g.d()))
    r.verdict = Verdict::trivially_infinite;
  else
    r.verdict = r.dim_image == r.dim_theta ? Verdict::finite_to_one : Verdict::infinite_to_one;
  return r;
}

inline nlohmann::json to_json(const DimReport& r) {
  return {{"dim_im_tau", r.dim_im_tau}, {"dim_theta", r.dim_theta}, {"dim_image", r.dim_image},
          {"verdict", to_string(r.verdict)}, {"trials", r.trials}};
}

// Parameter count of the mixed graph exceeds dim PD(d).
inline bool mixed_trivially_infinite(const MixedGraph& m) {
  return m.directed_edges().size() + m.d() + m.bidirected_edges().size() > sym_dim(m.d());
}

}  // namespace lfhtc
