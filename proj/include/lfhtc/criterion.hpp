#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lfhtc/error.hpp"
#include "lfhtc/flow.hpp"
#include "lfhtc/graph.hpp"
#include "lfhtc/node_set.hpp"

namespace lfhtc {

// Witness (Y, Z, H) for the column of Lambda with head v. Y and Z hold
// observed indices, H latent indices.
struct HtcTriple {
  std::size_t v = 0;
  NodeSet Y;
  NodeSet Z;
  NodeSet H;

  friend bool operator==(const HtcTriple&, const HtcTriple&) = default;
};

// One half-trek. `tail` lists the observed nodes after the source (or after
// the fork node), ending at the target; an empty tail is the trivial
// half-trek y == y.
struct HalfTrek {
  enum class Start { directed, latent_fork, bidirected };

  Start start = Start::directed;
  std::size_t source = 0;
  std::size_t latent = 0;  // meaningful for latent_fork only
  std::vector<std::size_t> tail;

  std::size_t target() const { return tail.empty() ? source : tail.back(); }

  // Left/Right sides as (observed, latent) sets. A bidirected start behaves
  // like a fork whose latent node is private to this half-trek.
  NodeSet left_observed() const { return NodeSet{source}; }
  NodeSet left_latent() const {
    return start == Start::latent_fork ? NodeSet{latent} : NodeSet{};
  }
  NodeSet right_observed() const {
    NodeSet s;
    if (start == Start::directed) s.insert(source);
    for (auto x : tail) s.insert(x);
    return s;
  }
  NodeSet right_latent() const { return left_latent(); }

  friend bool operator==(const HalfTrek&, const HalfTrek&) = default;
};

using HalfTrekSystem = std::vector<HalfTrek>;

inline bool has_no_sided_intersection(const HalfTrekSystem& sys) {
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = i + 1; j < sys.size(); ++j) {
      if (sys[i].left_observed().intersects(sys[j].left_observed())) return false;
      if (sys[i].left_latent().intersects(sys[j].left_latent())) return false;
      if (sys[i].right_observed().intersects(sys[j].right_observed())) return false;
      if (sys[i].right_latent().intersects(sys[j].right_latent())) return false;
    }
  return true;
}

// Checks that every half-trek follows edges of g.
inline bool is_valid_in(const HalfTrek& t, const LatentFactorGraph& g) {
  std::size_t prev = t.source;
  std::size_t i = 0;
  if (t.start == HalfTrek::Start::bidirected) return false;
  if (t.start == HalfTrek::Start::latent_fork) {
    if (t.latent >= g.l() || !g.ch_latent(t.latent).contains(t.source)) return false;
    if (t.tail.empty() || !g.ch_latent(t.latent).contains(t.tail[0])) return false;
    prev = t.tail[0];
    i = 1;
  }
  for (; i < t.tail.size(); ++i) {
    if (!g.has_directed(prev, t.tail[i])) return false;
    prev = t.tail[i];
  }
  return true;
}

// Role of a node of the LF-HTC flow graph.
struct FlowNodeRole {
  NodeKind kind = NodeKind::observed;
  std::size_t index = 0;
  bool primed = false;
  bool terminal = false;  // s or t
};

struct LfFlowGraph {
  FlowNetwork net;
  std::vector<FlowNodeRole> roles;
  long target = 0;  // |pa_V(v)| + |Z|
};

// Flow graph G_flow(v, A, Z): s -> a for a in A; a -> h for latent parents h
// of a; w -> w' for w in A u L; h' -> w' for latent edges; u' -> w' for
// directed edges with w outside Z; w' -> t for w in pa_V(v) u Z. All
// internal nodes have capacity 1.
inline LfFlowGraph build_flow_graph(const LatentFactorGraph& g, std::size_t v, const NodeSet& allowed,
                                    const NodeSet& Z) {
  LfFlowGraph fg;
  const std::size_t d = g.d(), l = g.l();
  fg.roles.resize(2);
  fg.roles[0].terminal = fg.roles[1].terminal = true;
  auto add = [&](std::string label, NodeKind kind, std::size_t idx, bool primed) {
    fg.roles.push_back({kind, idx, primed, false});
    return fg.net.add_node(std::move(label), 1);
  };
  std::vector<std::size_t> a_node(d, SIZE_MAX), h_node(l), v_prime(d), h_prime(l);
  allowed.for_each([&](std::size_t a) {
    a_node[a] = add(g.observed_label(a), NodeKind::observed, a, false);
  });
  for (std::size_t h = 0; h < l; ++h) h_node[h] = add(g.latent_label(h), NodeKind::latent, h, false);
  for (std::size_t w = 0; w < d; ++w) v_prime[w] = add(g.observed_label(w) + "'", NodeKind::observed, w, true);
  for (std::size_t h = 0; h < l; ++h) h_prime[h] = add(g.latent_label(h) + "'", NodeKind::latent, h, true);

  allowed.for_each([&](std::size_t a) {
    fg.net.add_arc(FlowNetwork::kSource, a_node[a]);                                // (a)
    g.pa_latent(a).for_each([&](std::size_t h) { fg.net.add_arc(a_node[a], h_node[h]); });  // (b)
    fg.net.add_arc(a_node[a], v_prime[a]);                                          // (c)
  });
  for (std::size_t h = 0; h < l; ++h) fg.net.add_arc(h_node[h], h_prime[h]);         // (c)
  for (auto [h, w] : g.latent_edges()) fg.net.add_arc(h_prime[h], v_prime[w]);       // (d)
  for (auto [u, w] : g.directed_edges())
    if (!Z.contains(w)) fg.net.add_arc(v_prime[u], v_prime[w]);                      // (d)
  const NodeSet sinks = g.pa_observed(v) | Z;
  sinks.for_each([&](std::size_t w) { fg.net.add_arc(v_prime[w], FlowNetwork::kSink); });  // (e)
  fg.target = static_cast<long>(sinks.size());
  fg.net.set_infinity_bound(std::max<long>(1, fg.target));
  return fg;
}

// Maps unit flow paths back to latent-factor half-treks.
inline HalfTrekSystem decode_system(const LfFlowGraph& fg, const FlowResult& flow) {
  HalfTrekSystem sys;
  for (const auto& path : flow.paths) {
    // path = s, y, [h, h'], y'|x', ..., k', t
    HalfTrek t;
    const auto& first = fg.roles.at(path.at(1));
    t.source = first.index;
    std::size_t i = 2;
    if (fg.roles.at(path.at(2)).kind == NodeKind::latent) {
      t.start = HalfTrek::Start::latent_fork;
      t.latent = fg.roles[path[2]].index;
      i = 4;  // skip h and h'
    } else {
      i = 3;  // skip y'
    }
    for (; i + 1 < path.size(); ++i) t.tail.push_back(fg.roles.at(path[i]).index);
    // y <- h -> ... -> y -> ... shortcuts to the directed half-trek from y.
    if (t.start == HalfTrek::Start::latent_fork) {
      auto it = std::find(t.tail.rbegin(), t.tail.rend(), t.source);
      if (it != t.tail.rend()) {
        const auto keep_from = static_cast<std::size_t>(t.tail.rend() - it);
        t.tail.erase(t.tail.begin(), t.tail.begin() + static_cast<long>(keep_from));
        t.start = HalfTrek::Start::directed;
        t.latent = 0;
      }
    }
    sys.push_back(std::move(t));
  }
  std::sort(sys.begin(), sys.end(), [](const HalfTrek& a, const HalfTrek& b) { return a.target() < b.target(); });
  return sys;
}

// Reports the first invariant a triple violates, or nullopt if well formed.
inline std::optional<std::string> triple_defect(const LatentFactorGraph& g, const HtcTriple& t) {
  if (t.v >= g.d()) return "v is not an observed node";
  const NodeSet V = g.observed_set();
  if (!t.Y.subset_of(V) || !t.Z.subset_of(V)) return "Y and Z must be observed nodes";
  if (!t.H.subset_of(g.latent_set())) return "H must be latent nodes";
  const NodeSet& pa = g.pa_observed(t.v);
  if (t.Y.size() != pa.size() + t.H.size()) return "|Y| must equal |pa_V(v)| + |H|";
  if (t.Z.size() != t.H.size()) return "|Z| must equal |H|";
  if (t.Z.intersects(pa)) return "Z must not meet pa_V(v)";
  if (t.Z.contains(t.v) || t.Y.contains(t.v)) return "Y and Z must not contain v";
  if (t.Y.intersects(t.Z)) return "Y and Z must be disjoint";
  return std::nullopt;
}

struct TripleCheck {
  bool satisfied = false;
  HalfTrekSystem system;  // filled when satisfied
};

// Conditions (ii) and (iii) of the criterion for a well-formed triple; (iii)
// is decided by one max-flow with allowed set Y.
inline TripleCheck check_triple(const LatentFactorGraph& g, const HtcTriple& t) {
  if (auto defect = triple_defect(g, t)) throw MalformedTriple(*defect);
  TripleCheck res;
  NodeSet zv = t.Z;
  zv.insert(t.v);
  if (!(g.pa_latent(t.Y) & g.pa_latent(zv)).subset_of(t.H)) return res;
  const auto fg = build_flow_graph(g, t.v, t.Y, t.Z);
  const auto flow = max_flow(fg.net);
  if (flow.value != fg.target) return res;
  res.satisfied = true;
  res.system = decode_system(fg, flow);
  return res;
}

struct FoundTriple {
  HtcTriple triple;
  HalfTrekSystem system;
};

struct SearchOptions {
  // Maximum |H|.
  std::size_t max_latent = 2;
  // Restrict H to latent nodes with at least four children.
  bool prune_small_latents = true;
};

// Latent nodes with at least four children.
inline NodeSet latents_with_four_children(const LatentFactorGraph& g) {
  NodeSet out;
  for (std::size_t h = 0; h < g.l(); ++h)
    if (g.ch_latent(h).size() >= 4) out.insert(h);
  return out;
}

// True if every z in Z can be matched to a distinct parent in H.
inline bool matchable(const LatentFactorGraph& g, const std::vector<std::size_t>& zs, const NodeSet& H) {
  std::vector<std::size_t> hs = H.to_vector();
  std::vector<std::size_t> match_of_h(hs.size(), SIZE_MAX);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t zi, std::vector<bool>& seen) {
    for (std::size_t j = 0; j < hs.size(); ++j) {
      if (seen[j] || !g.ch_latent(hs[j]).contains(zs[zi])) continue;
      seen[j] = true;
      if (match_of_h[j] == SIZE_MAX || augment(match_of_h[j], seen)) {
        match_of_h[j] = zi;
        return true;
      }
    }
    return false;
  };
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    std::vector<bool> seen(hs.size(), false);
    if (!augment(zi, seen)) return false;
  }
  return true;
}

// Searches a triple for v. With `solved` set, Z must be solved and allowed
// nodes that are half-trek reachable from Z u {v} must be solved too (the
// recursive criterion). Without it the raw single-node problem is decided,
// which is exponential in |H|. H runs by increasing size then
// lexicographically, Z lexicographically; the first hit is returned.
inline std::optional<FoundTriple> find_triple(const LatentFactorGraph& g, std::size_t v,
                                              const std::optional<NodeSet>& solved,
                                              const SearchOptions& opt = {}) {
  if (v >= g.d()) throw GraphError("find_triple: v is not an observed node");
  const NodeSet& pa = g.pa_observed(v);
  const NodeSet candidates = opt.prune_small_latents ? latents_with_four_children(g) : g.latent_set();
  const std::vector<std::size_t> cand = candidates.to_vector();
  const NodeSet V = g.observed_set();
  NodeSet v_and_pa = pa;
  v_and_pa.insert(v);

  std::optional<FoundTriple> found;
  const std::size_t kmax = std::min(opt.max_latent, cand.size());
  for (std::size_t k = 0; k <= kmax && !found; ++k) {
    for_each_k_subset(cand, k, [&](const NodeSet& H) {
      NodeSet za = g.ch_latent(H) - v_and_pa;
      if (solved) za &= *solved;
      if (za.size() < k) return false;
      return for_each_k_subset(za.to_vector(), k, [&](const NodeSet& Z) {
        if (k > 0 && !matchable(g, Z.to_vector(), H)) return false;
        NodeSet zv = Z;
        zv.insert(v);
        NodeSet excluded = zv | g.ch_latent(g.pa_latent(zv) - H);
        if (solved) excluded |= g.htr(zv, H) - *solved;
        const NodeSet allowed = V - excluded;
        if (allowed.size() < pa.size() + k) return false;
        const auto fg = build_flow_graph(g, v, allowed, Z);
        const auto flow = max_flow(fg.net);
        if (flow.value != fg.target) return false;
        FoundTriple ft;
        ft.triple.v = v;
        ft.triple.Z = Z;
        ft.triple.H = H;
        ft.system = decode_system(fg, flow);
        for (const auto& t : ft.system) ft.triple.Y.insert(t.source);
        found = std::move(ft);
        return true;
      });
    });
  }
  return found;
}

struct CertificateEntry {
  std::size_t v = 0;
  bool trivial = false;  // pa_V(v) empty; solved without a triple
  HtcTriple triple;
  HalfTrekSystem system;
};

// Entries in solve order.
using Certificate = std::vector<CertificateEntry>;

struct IdentifiabilityResult {
  bool identifiable = false;
  NodeSet solved;
  Certificate certificate;
};

// Recursive LF-HTC: sources first, then passes over the unsolved nodes in
// index order until nothing changes.
inline IdentifiabilityResult lfhtc_identifiable(const LatentFactorGraph& g, const SearchOptions& opt) {
  IdentifiabilityResult res;
  for (std::size_t v = 0; v < g.d(); ++v)
    if (g.pa_observed(v).empty()) {
      res.solved.insert(v);
      CertificateEntry e;
      e.v = v;
      e.trivial = true;
      e.triple.v = v;
      res.certificate.push_back(std::move(e));
    }
  bool changed = true;
  while (changed && res.solved.size() < g.d()) {
    changed = false;
    for (std::size_t v = 0; v < g.d(); ++v) {
      if (res.solved.contains(v)) continue;
      auto ft = find_triple(g, v, res.solved, opt);
      if (!ft) continue;
      res.solved.insert(v);
      res.certificate.push_back({v, false, std::move(ft->triple), std::move(ft->system)});
      changed = true;
    }
  }
  res.identifiable = res.solved.size() == g.d();
  return res;
}

inline IdentifiabilityResult lfhtc_identifiable(const LatentFactorGraph& g, std::size_t k = 2) {
  SearchOptions opt;
  opt.max_latent = k;
  return lfhtc_identifiable(g, opt);
}

// Nodes whose Lambda columns must be known before the column of t.v can be
// recovered: Z u (Y n htr_H(Z u {v})).
inline NodeSet prerequisites(const LatentFactorGraph& g, const HtcTriple& t) {
  NodeSet zv = t.Z;
  zv.insert(t.v);
  return t.Z | (t.Y & g.htr(zv, t.H));
}

// Replays a certificate entry by entry with the prefix as solved set.
// Returns an error description, or nullopt when every entry checks out.
inline std::optional<std::string> verify_certificate(const LatentFactorGraph& g, const Certificate& cert) {
  NodeSet solved;
  for (std::size_t i = 0; i < cert.size(); ++i) {
    const auto& e = cert[i];
    const std::string where = "entry " + std::to_string(i) + ": ";
    if (e.v >= g.d()) return where + "unknown node";
    if (solved.contains(e.v)) return where + "node solved twice";
    if (e.trivial) {
      if (!g.pa_observed(e.v).empty()) return where + "trivial entry for a node with observed parents";
    } else {
      if (e.triple.v != e.v) return where + "triple is for a different node";
      if (auto defect = triple_defect(g, e.triple)) return where + *defect;
      if (!check_triple(g, e.triple).satisfied) return where + "triple does not satisfy the criterion";
      if (!prerequisites(g, e.triple).subset_of(solved)) return where + "prerequisite node not yet solved";
    }
    solved.insert(e.v);
  }
  return std::nullopt;
}

}  // namespace lfhtc
