#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lfhtc/error.hpp"
#include "lfhtc/node_set.hpp"

namespace lfhtc {

enum class NodeKind { observed, latent };

struct NodeId {
  NodeKind kind;
  std::size_t index;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

// Directed graph over observed nodes V and latent source nodes L. Observed
// nodes are indexed 0..d-1 and latent nodes 0..l-1 in file order; every set
// returned by the queries below is a NodeSet over one of the two index
// spaces. Immutable after construction.
class LatentFactorGraph {
 public:
  LatentFactorGraph() = default;

  // Edges are given by index. directed: observed -> observed.
  // latent_edges: (latent index, observed index).
  LatentFactorGraph(std::vector<std::string> observed, std::vector<std::string> latent,
                    const std::vector<Edge>& directed, const std::vector<Edge>& latent_edges)
      : observed_(std::move(observed)), latent_(std::move(latent)) {
    index_labels();
    obs_parents_.resize(d());
    obs_children_.resize(d());
    lat_parents_.resize(d());
    lat_children_.resize(l());
    for (auto [u, w] : directed) add_directed(u, w);
    for (auto [h, w] : latent_edges) add_latent(h, w);
  }

  // Builds a graph from labels; edges may mix observed and latent tails in
  // `directed`, and a latent head is reported as "latent node with parent".
  static LatentFactorGraph from_labels(
      std::vector<std::string> observed, std::vector<std::string> latent,
      const std::vector<std::pair<std::string, std::string>>& directed,
      const std::vector<std::pair<std::string, std::string>>& latent_edges) {
    LatentFactorGraph g;
    g.observed_ = std::move(observed);
    g.latent_ = std::move(latent);
    g.index_labels();
    g.obs_parents_.resize(g.d());
    g.obs_children_.resize(g.d());
    g.lat_parents_.resize(g.d());
    g.lat_children_.resize(g.l());
    auto edge = [&](const std::string& a, const std::string& b, bool latent_list) {
      auto tail = g.find(a);
      auto head = g.find(b);
      if (!tail) throw GraphError("unknown endpoint '" + a + "'");
      if (!head) throw GraphError("unknown endpoint '" + b + "'");
      if (head->kind == NodeKind::latent)
        throw GraphError("latent node with parent: '" + b + "'");
      if (tail->kind == NodeKind::latent) {
        g.add_latent(tail->index, head->index);
      } else {
        if (latent_list)
          throw GraphError("latent edge with observed tail: '" + a + "' -> '" + b + "'");
        g.add_directed(tail->index, head->index);
      }
    };
    for (const auto& [a, b] : directed) edge(a, b, false);
    for (const auto& [a, b] : latent_edges) edge(a, b, true);
    return g;
  }

  std::size_t d() const { return observed_.size(); }
  std::size_t l() const { return latent_.size(); }

  const std::vector<std::string>& observed_labels() const { return observed_; }
  const std::vector<std::string>& latent_labels() const { return latent_; }
  const std::string& observed_label(std::size_t v) const { return observed_.at(v); }
  const std::string& latent_label(std::size_t h) const { return latent_.at(h); }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = labels_.find(label);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t observed_index(const std::string& label) const {
    auto id = find(label);
    if (!id || id->kind != NodeKind::observed)
      throw GraphError("no observed node '" + label + "'");
    return id->index;
  }

  std::size_t latent_index(const std::string& label) const {
    auto id = find(label);
    if (!id || id->kind != NodeKind::latent) throw GraphError("no latent node '" + label + "'");
    return id->index;
  }

  // D_V and D_LV in insertion order.
  const std::vector<Edge>& directed_edges() const { return directed_; }
  const std::vector<Edge>& latent_edges() const { return latent_edges_; }

  bool has_directed(std::size_t u, std::size_t w) const {
    return w < d() && obs_parents_[w].contains(u);
  }

  const NodeSet& pa_observed(std::size_t v) const { return obs_parents_.at(v); }
  const NodeSet& ch_observed(std::size_t v) const { return obs_children_.at(v); }
  const NodeSet& pa_latent(std::size_t v) const { return lat_parents_.at(v); }
  const NodeSet& ch_latent(std::size_t h) const { return lat_children_.at(h); }

  // Union of latent parents over a set of observed nodes.
  NodeSet pa_latent(const NodeSet& s) const {
    NodeSet out;
    s.for_each([&](std::size_t v) { out |= lat_parents_.at(v); });
    return out;
  }

  // Union of observed children over a set of latent nodes.
  NodeSet ch_latent(const NodeSet& hs) const {
    NodeSet out;
    hs.for_each([&](std::size_t h) { out |= lat_children_.at(h); });
    return out;
  }

  NodeSet observed_set() const { return NodeSet::range(d()); }
  NodeSet latent_set() const { return NodeSet::range(l()); }

  // Observed nodes w not in U that are the target of a latent-factor
  // half-trek from some u in U whose nodes avoid H. Trivial half-treks are
  // not counted.
  NodeSet htr(const NodeSet& sources, const NodeSet& avoid) const {
    NodeSet frontier;
    sources.for_each([&](std::size_t u) { frontier |= obs_children_[u]; });
    frontier |= ch_latent(pa_latent(sources) - avoid);
    NodeSet seen = frontier;
    std::vector<std::size_t> stack = frontier.to_vector();
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      obs_children_[x].for_each([&](std::size_t w) {
        if (!seen.contains(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
      });
    }
    return seen - sources;
  }

  friend bool operator==(const LatentFactorGraph& a, const LatentFactorGraph& b) {
    return a.observed_ == b.observed_ && a.latent_ == b.latent_ &&
           a.obs_parents_ == b.obs_parents_ && a.lat_children_ == b.lat_children_;
  }

 private:
  void index_labels() {
    labels_.clear();
    auto put = [&](const std::string& s, NodeId id) {
      if (!labels_.emplace(s, id).second) throw GraphError("duplicate label '" + s + "'");
    };
    for (std::size_t i = 0; i < observed_.size(); ++i) put(observed_[i], {NodeKind::observed, i});
    for (std::size_t i = 0; i < latent_.size(); ++i) put(latent_[i], {NodeKind::latent, i});
  }

  void add_directed(std::size_t u, std::size_t w) {
    if (u >= d() || w >= d()) throw GraphError("unknown endpoint in directed edge");
    if (u == w) throw GraphError("self-loop at '" + observed_[u] + "'");
    if (obs_parents_[w].contains(u)) return;
    obs_parents_[w].insert(u);
    obs_children_[u].insert(w);
    directed_.emplace_back(u, w);
  }

  void add_latent(std::size_t h, std::size_t w) {
    if (h >= l() || w >= d()) throw GraphError("unknown endpoint in latent edge");
    if (lat_children_[h].contains(w)) return;
    lat_children_[h].insert(w);
    lat_parents_[w].insert(h);
    latent_edges_.emplace_back(h, w);
  }

  std::vector<std::string> observed_;
  std::vector<std::string> latent_;
  std::unordered_map<std::string, NodeId> labels_;
  std::vector<Edge> directed_;
  std::vector<Edge> latent_edges_;
  std::vector<NodeSet> obs_parents_;
  std::vector<NodeSet> obs_children_;
  std::vector<NodeSet> lat_parents_;
  std::vector<NodeSet> lat_children_;
};

// Observed nodes with directed edges D_V and unordered bidirected edges B.
class MixedGraph {
 public:
  MixedGraph() = default;

  MixedGraph(std::vector<std::string> observed, const std::vector<Edge>& directed,
             const std::vector<Edge>& bidirected)
      : observed_(std::move(observed)) {
    parents_.resize(d());
    children_.resize(d());
    siblings_.resize(d());
    for (std::size_t i = 0; i < observed_.size(); ++i)
      if (!index_.emplace(observed_[i], i).second)
        throw GraphError("duplicate label '" + observed_[i] + "'");
    for (auto [u, w] : directed) {
      check(u, w);
      if (parents_[w].contains(u)) continue;
      parents_[w].insert(u);
      children_[u].insert(w);
      directed_.emplace_back(u, w);
    }
    for (auto [a, b] : bidirected) {
      check(a, b);
      if (siblings_[a].contains(b)) continue;
      siblings_[a].insert(b);
      siblings_[b].insert(a);
      bidirected_.emplace_back(std::min(a, b), std::max(a, b));
    }
  }

  std::size_t d() const { return observed_.size(); }
  const std::vector<std::string>& observed_labels() const { return observed_; }
  const std::string& observed_label(std::size_t v) const { return observed_.at(v); }

  std::size_t index(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw GraphError("unknown endpoint '" + label + "'");
    return it->second;
  }

  const std::vector<Edge>& directed_edges() const { return directed_; }
  // Stored as (min, max) pairs in insertion order.
  const std::vector<Edge>& bidirected_edges() const { return bidirected_; }

  const NodeSet& parents(std::size_t v) const { return parents_.at(v); }
  const NodeSet& children(std::size_t v) const { return children_.at(v); }
  const NodeSet& siblings(std::size_t v) const { return siblings_.at(v); }
  bool has_bidirected(std::size_t a, std::size_t b) const { return siblings_.at(a).contains(b); }

  // Half-trek reachable set of v: targets of v -> ... or v <-> x -> ...,
  // excluding v itself.
  NodeSet htr(std::size_t v) const {
    NodeSet seen = children_[v] | siblings_[v];
    std::vector<std::size_t> stack = seen.to_vector();
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      children_[x].for_each([&](std::size_t w) {
        if (!seen.contains(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
      });
    }
    seen.erase(v);
    return seen;
  }

  // Same edge sets, regardless of insertion order.
  friend bool operator==(const MixedGraph& a, const MixedGraph& b) {
    return a.observed_ == b.observed_ && a.parents_ == b.parents_ && a.siblings_ == b.siblings_;
  }

 private:
  void check(std::size_t a, std::size_t b) const {
    if (a >= d() || b >= d()) throw GraphError("unknown endpoint in mixed graph edge");
    if (a == b) throw GraphError("self-loop at '" + observed_[a] + "'");
  }

  std::vector<std::string> observed_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> directed_;
  std::vector<Edge> bidirected_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<NodeSet> siblings_;
};

// v <-> w for every pair of distinct observed nodes sharing a latent parent.
inline MixedGraph latent_projection(const LatentFactorGraph& g) {
  std::vector<Edge> bidirected;
  for (std::size_t v = 0; v < g.d(); ++v)
    for (std::size_t w = v + 1; w < g.d(); ++w)
      if (g.pa_latent(v).intersects(g.pa_latent(w))) bidirected.emplace_back(v, w);
  return MixedGraph(g.observed_labels(), g.directed_edges(), bidirected);
}

// One fresh latent node with exactly two children per bidirected edge.
inline LatentFactorGraph bidirected_expansion(const MixedGraph& m) {
  std::vector<std::string> latent;
  std::vector<Edge> latent_edges;
  std::unordered_map<std::string, bool> taken;
  for (const auto& s : m.observed_labels()) taken[s] = true;
  for (auto [a, b] : m.bidirected_edges()) {
    std::string name = "h_" + m.observed_label(a) + "_" + m.observed_label(b);
    while (taken.count(name)) name += "'";
    taken[name] = true;
    latent_edges.emplace_back(latent.size(), a);
    latent_edges.emplace_back(latent.size(), b);
    latent.push_back(std::move(name));
  }
  return LatentFactorGraph(m.observed_labels(), std::move(latent), m.directed_edges(),
                           latent_edges);
}

}  // namespace lfhtc
