#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "lfhtc/canonical.hpp"
#include "lfhtc/criterion.hpp"
#include "lfhtc/dimension.hpp"
#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"
#include "lfhtc/htc.hpp"

namespace lfhtc {

// Observed nodes 1..d plus latent nodes h1, h2, ... with fixed child sets
// (0-based indices). The observed edges vary over the census.
struct LatentPattern {
  std::size_t d = 0;
  std::vector<NodeSet> child_sets;

  static LatentPattern global(std::size_t d) { return {d, {NodeSet::range(d)}}; }

  // h1 -> {1,2,3,4}, h2 -> {4,5,6}.
  static LatentPattern two_factor6() { return {6, {NodeSet{0, 1, 2, 3}, NodeSet{3, 4, 5}}}; }

  static LatentPattern from_graph(const LatentFactorGraph& g) {
    LatentPattern p{g.d(), {}};
    for (std::size_t h = 0; h < g.l(); ++h) p.child_sets.push_back(g.ch_latent(h));
    return p;
  }

  void validate() const {
    if (d == 0) throw GraphError("pattern needs at least one observed node");
    if (d > 7) throw BudgetError("census patterns are limited to 7 observed nodes");
    for (const auto& c : child_sets) {
      if (c.empty()) throw GraphError("latent child set must be nonempty");
      if (!c.subset_of(NodeSet::range(d))) throw GraphError("latent child set outside the observed nodes");
    }
  }

  // Graph with observed edges given as bits u*d + w.
  LatentFactorGraph graph(std::uint64_t mask) const {
    std::vector<std::string> obs, lat;
    for (std::size_t i = 0; i < d; ++i) obs.push_back(std::to_string(i + 1));
    std::vector<Edge> dir, lat_edges;
    for (std::size_t h = 0; h < child_sets.size(); ++h) {
      lat.push_back("h" + std::to_string(h + 1));
      child_sets[h].for_each([&](std::size_t v) { lat_edges.emplace_back(h, v); });
    }
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const auto b = static_cast<std::size_t>(std::countr_zero(m));
      dir.emplace_back(b / d, b % d);
    }
    return LatentFactorGraph(std::move(obs), std::move(lat), dir, lat_edges);
  }
};

namespace detail {

// True if adding u -> w to the DAG `mask` on d nodes keeps it acyclic,
// i.e. u is not reachable from w.
inline bool keeps_acyclic(std::uint64_t mask, std::size_t d, std::size_t u, std::size_t w) {
  std::uint64_t seen = std::uint64_t{1} << w, frontier = seen;
  while (frontier) {
    const auto x = static_cast<std::size_t>(std::countr_zero(frontier));
    frontier &= frontier - 1;
    if (x == u) return false;
    const std::uint64_t row = (mask >> (x * d)) & ((std::uint64_t{1} << d) - 1);
    const std::uint64_t fresh = row & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return true;
}

}  // namespace detail

// Canonical edge masks, one per isomorphism class of DAGs with at most
// max_edges observed edges, under the permutations fixing every latent child
// set. With the full symmetric group only upper-triangular edge sets are
// generated (every DAG has a topologically sorted relabeling); otherwise all
// acyclic edge sets are. Sorted by (edge count, mask).
inline std::vector<std::uint64_t> enumerate_unlabeled_masks(const LatentPattern& pattern, std::size_t max_edges) {
  pattern.validate();
  const std::size_t d = pattern.d;
  const auto group = latent_stabilizer(pattern.graph(0));
  std::size_t fact = 1;
  for (std::size_t i = 2; i <= d; ++i) fact *= i;
  const bool full = group.size() == fact;
  const MaskCanonicalizer canon(d, group);

  std::vector<std::size_t> edge_bits;
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t w = full ? u + 1 : 0; w < d; ++w)
      if (u != w) edge_bits.push_back(u * d + w);

  std::unordered_set<std::uint64_t> seen;
  std::function<void(std::size_t, std::uint64_t, std::size_t)> rec = [&](std::size_t start, std::uint64_t mask,
                                                                       std::size_t edges) {
    seen.insert(canon.canonical(mask));
    if (edges == max_edges) return;
    for (std::size_t i = start; i < edge_bits.size(); ++i) {
      const std::size_t b = edge_bits[i];
      if (!full && !detail::keeps_acyclic(mask, d, b / d, b % d)) continue;
      rec(i + 1, mask | (std::uint64_t{1} << b), edges + 1);
    }
  };
  rec(0, 0, 0);

  std::vector<std::uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

inline std::vector<LatentFactorGraph> enumerate_unlabeled(const LatentPattern& pattern, std::size_t max_edges) {
  std::vector<LatentFactorGraph> out;
  for (auto m : enumerate_unlabeled_masks(pattern, max_edges)) out.push_back(pattern.graph(m));
  return out;
}

struct CensusRow {
  std::size_t edges = 0;
  std::size_t total = 0;
  std::size_t finite_to_one = 0;
  std::size_t lfhtc = 0;
  std::size_t htc = 0;

  friend bool operator==(const CensusRow&, const CensusRow&) = default;
};

struct CensusOptions {
  std::size_t k = 2;
  bool with_htc = false;
  std::size_t trials = 3;
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
};

struct GraphClass {
  bool lfhtc = false;
  bool finite_to_one = false;
  bool htc = false;
};

// Classifies one graph. Jacobian seeds derive from the edge mask so the
// verdict does not depend on scheduling. An infinite-to-one verdict is
// retried once with four times the trials, since a random point can only
// underestimate the generic rank.
inline GraphClass classify(const LatentFactorGraph& g, std::uint64_t mask, std::size_t tau_dim,
                           const CensusOptions& opt) {
  GraphClass c;
  c.lfhtc = lfhtc_identifiable(g, opt.k).identifiable;
  const std::uint64_t seed = opt.seed ^ (mask * 0xD1B54A32D192ED03ull);
  auto rep = is_finite_to_one(g, seed, opt.trials, tau_dim);
  if (rep.verdict == Verdict::infinite_to_one) rep = is_finite_to_one(g, seed + 1, 4 * opt.trials, tau_dim);
  c.finite_to_one = rep.verdict == Verdict::finite_to_one;
  if (opt.with_htc) c.htc = htc_identifiable(latent_projection(g)).identifiable;
  return c;
}

// One row per observed edge count 0..max_edges.
inline std::vector<CensusRow> census(const LatentPattern& pattern, std::size_t max_edges, const CensusOptions& opt) {
  const auto masks = enumerate_unlabeled_masks(pattern, max_edges);
  const std::size_t tau_dim = dim_im_tau(pattern.graph(0), opt.seed, std::max<std::size_t>(opt.trials, 3));
  std::vector<GraphClass> result(masks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < masks.size();)
      result[i] = classify(pattern.graph(masks[i]), masks[i], tau_dim, opt);
  };
  const std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<CensusRow> rows(max_edges + 1);
  for (std::size_t e = 0; e <= max_edges; ++e) rows[e].edges = e;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    auto& r = rows[static_cast<std::size_t>(std::popcount(masks[i]))];
    ++r.total;
    r.finite_to_one += result[i].finite_to_one;
    r.lfhtc += result[i].lfhtc;
    r.htc += result[i].htc;
  }
  return rows;
}

inline CensusRow grand_total(const std::vector<CensusRow>& rows) {
  CensusRow t;
  for (const auto& r : rows) {
    t.total += r.total;
    t.finite_to_one += r.finite_to_one;
    t.lfhtc += r.lfhtc;
    t.htc += r.htc;
  }
  return t;
}

// edges,total,finite_to_one,lfhtc[,htc] with a closing "total" row.
inline std::string census_csv(const std::vector<CensusRow>& rows, bool with_htc) {
  std::ostringstream out;
  out << "edges,total,finite_to_one,lfhtc" << (with_htc ? ",htc" : "") << '\n';
  auto line = [&](const std::string& label, const CensusRow& r) {
    out << label << ',' << r.total << ',' << r.finite_to_one << ',' << r.lfhtc;
    if (with_htc) out << ',' << r.htc;
    out << '\n';
  };
  for (const auto& r : rows) line(std::to_string(r.edges), r);
  line("total", grand_total(rows));
  return out.str();
}

}  // namespace lfhtc
