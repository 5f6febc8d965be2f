#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"

namespace lfhtc {

// perm[i] is the image of observed node i.
using Permutation = std::vector<std::size_t>;

struct CanonicalKey {
  std::vector<Edge> directed;
  std::vector<Edge> latent;

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

inline bool is_permutation_of(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto x : p) {
    if (x >= n || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

// True iff h -> v  <=>  h -> p(v) for every latent h: the permutation is an
// isomorphism of the latent attachment pattern onto itself.
inline bool preserves_latent_edges(const LatentFactorGraph& g, const Permutation& p) {
  for (std::size_t h = 0; h < g.l(); ++h) {
    NodeSet image;
    g.ch_latent(h).for_each([&](std::size_t v) { image.insert(p[v]); });
    if (!(image == g.ch_latent(h))) return false;
  }
  return true;
}

// Relabels observed nodes: node i of g becomes node p[i]. Labels stay in
// place, so the result is the graph p.G over the same label table.
inline LatentFactorGraph permute(const LatentFactorGraph& g, const Permutation& p) {
  if (!is_permutation_of(p, g.d())) throw GraphError("not a permutation of the observed nodes");
  std::vector<Edge> dir, lat;
  for (auto [u, w] : g.directed_edges()) dir.emplace_back(p[u], p[w]);
  for (auto [h, w] : g.latent_edges()) lat.emplace_back(h, p[w]);
  return LatentFactorGraph(g.observed_labels(), g.latent_labels(), dir, lat);
}

// All observed-node permutations that fix every latent child set. Brute force
// over d! permutations.
inline std::vector<Permutation> latent_stabilizer(const LatentFactorGraph& g) {
  if (g.d() > 9) throw BudgetError("stabilizer enumeration limited to 9 observed nodes");
  Permutation p(g.d());
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    if (preserves_latent_edges(g, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<Permutation> symmetric_group(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Lexicographic minimum over the group of the sorted relabeled edge lists.
// Every group element must preserve the latent edges.
inline CanonicalKey canonical_form(const LatentFactorGraph& g,
                                   const std::vector<Permutation>& group) {
  if (group.empty()) throw GraphError("empty permutation group");
  CanonicalKey best;
  bool first = true;
  for (const auto& p : group) {
    if (!is_permutation_of(p, g.d())) throw GraphError("group element is not a permutation");
    if (!preserves_latent_edges(g, p))
      throw GraphError("group element does not preserve the latent edges");
    CanonicalKey k;
    for (auto [u, w] : g.directed_edges()) k.directed.emplace_back(p[u], p[w]);
    for (auto [h, w] : g.latent_edges()) k.latent.emplace_back(h, p[w]);
    std::sort(k.directed.begin(), k.directed.end());
    std::sort(k.latent.begin(), k.latent.end());
    if (first || k < best) best = std::move(k);
    first = false;
  }
  return best;
}

// Fast path for enumeration: observed edge sets on d <= 8 nodes packed as
// bit (u*d + w). Canonical key is the minimum packed mask over the group.
class MaskCanonicalizer {
 public:
  MaskCanonicalizer(std::size_t d, const std::vector<Permutation>& group) : d_(d) {
    if (d * d > 64) throw BudgetError("mask canonical form needs d <= 8");
    for (const auto& p : group) {
      if (!is_permutation_of(p, d)) throw GraphError("group element is not a permutation");
      std::vector<std::uint8_t> table(d * d);
      for (std::size_t u = 0; u < d; ++u)
        for (std::size_t w = 0; w < d; ++w) table[u * d + w] = static_cast<std::uint8_t>(p[u] * d + p[w]);
      tables_.push_back(std::move(table));
    }
  }

  std::uint64_t apply(std::size_t which, std::uint64_t mask) const {
    const auto& t = tables_[which];
    std::uint64_t out = 0;
    while (mask) {
      const int b = std::countr_zero(mask);
      out |= std::uint64_t{1} << t[static_cast<std::size_t>(b)];
      mask &= mask - 1;
    }
    return out;
  }

  std::uint64_t canonical(std::uint64_t mask) const {
    std::uint64_t best = ~std::uint64_t{0};
    for (std::size_t i = 0; i < tables_.size(); ++i) best = std::min(best, apply(i, mask));
    return best;
  }

  std::size_t d() const { return d_; }
  std::size_t group_size() const { return tables_.size(); }

 private:
  std::size_t d_;
  std::vector<std::vector<std::uint8_t>> tables_;
};

inline std::uint64_t edge_mask(const LatentFactorGraph& g) {
  if (g.d() * g.d() > 64) throw BudgetError("edge mask needs d <= 8");
  std::uint64_t m = 0;
  for (auto [u, w] : g.directed_edges()) m |= std::uint64_t{1} << (u * g.d() + w);
  return m;
}

}  // namespace lfhtc
