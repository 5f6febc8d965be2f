#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "lfhtc/error.hpp"

namespace lfhtc {

// Integer flow network with node and arc capacities. Capacities are either
// finite positive integers or infinite. Node 0 is the source and node 1 the
// sink; both have infinite capacity. Infinite capacities are replaced by
// `infinity_bound()` when solving, which is exact as long as the bound is at
// least the true max-flow value.
class FlowNetwork {
 public:
  static constexpr long kInfinite = -1;
  static constexpr std::size_t kSource = 0;
  static constexpr std::size_t kSink = 1;

  struct Arc {
    std::size_t from;
    std::size_t to;
    long capacity;
  };

  FlowNetwork() {
    labels_ = {"s", "t"};
    node_caps_ = {kInfinite, kInfinite};
  }

  std::size_t add_node(std::string label, long capacity = 1) {
    if (capacity == 0 || capacity < kInfinite) throw Error("node capacity must be positive or infinite");
    labels_.push_back(std::move(label));
    node_caps_.push_back(capacity);
    return labels_.size() - 1;
  }

  void add_arc(std::size_t from, std::size_t to, long capacity = kInfinite) {
    if (from >= size() || to >= size()) throw Error("arc endpoint out of range");
    if (to == kSource) throw Error("arc into the source");
    if (from == kSink) throw Error("arc out of the sink");
    if (from == kSource && to == kSink) throw Error("direct source-sink arc");
    if (capacity == 0 || capacity < kInfinite) throw Error("arc capacity must be positive or infinite");
    arcs_.push_back({from, to, capacity});
  }

  // Overrides the value used for infinite capacities. Defaults to the
  // number of nodes, which bounds any flow through unit-capacity nodes.
  void set_infinity_bound(long b) { bound_ = b; }
  long infinity_bound() const {
    if (bound_ > 0) return bound_;
    long b = static_cast<long>(size());
    for (const auto& a : arcs_)
      if (a.capacity != kInfinite) b += a.capacity;
    return b;
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  long node_capacity(std::size_t i) const { return node_caps_.at(i); }
  const std::vector<Arc>& arcs() const { return arcs_; }

  bool has_arc(std::size_t from, std::size_t to) const {
    return std::any_of(arcs_.begin(), arcs_.end(),
                       [&](const Arc& a) { return a.from == from && a.to == to; });
  }

 private:
  std::vector<std::string> labels_;
  std::vector<long> node_caps_;
  std::vector<Arc> arcs_;
  long bound_ = 0;
};

struct FlowResult {
  long value = 0;
  // Unit s-t paths as node sequences of the network (including s and t).
  std::vector<std::vector<std::size_t>> paths;
};

namespace detail {

// Residual graph over split nodes: network node i becomes in = 2i and
// out = 2i + 1 joined by an arc carrying the node capacity.
class SplitResidual {
 public:
  explicit SplitResidual(std::size_t n) : adj_(2 * n) {}

  std::size_t add(std::size_t u, std::size_t v, long cap) {
    const std::size_t id = to_.size();
    push(u, v, cap);
    push(v, u, 0);
    return id;
  }

  long max_flow(std::size_t s, std::size_t t) {
    long total = 0;
    std::vector<std::size_t> via(adj_.size());
    while (true) {
      std::fill(via.begin(), via.end(), npos);
      std::queue<std::size_t> q;
      q.push(s);
      std::vector<bool> seen(adj_.size(), false);
      seen[s] = true;
      while (!q.empty() && !seen[t]) {
        const std::size_t x = q.front();
        q.pop();
        for (std::size_t e : adj_[x]) {
          if (cap_[e] > 0 && !seen[to_[e]]) {
            seen[to_[e]] = true;
            via[to_[e]] = e;
            q.push(to_[e]);
          }
        }
      }
      if (!seen[t]) return total;
      long push_amount = std::numeric_limits<long>::max();
      for (std::size_t x = t; x != s; x = to_[via[x] ^ 1]) push_amount = std::min(push_amount, cap_[via[x]]);
      for (std::size_t x = t; x != s; x = to_[via[x] ^ 1]) {
        cap_[via[x]] -= push_amount;
        cap_[via[x] ^ 1] += push_amount;
      }
      total += push_amount;
    }
  }

  // Flow currently on forward edge e.
  long flow(std::size_t e) const { return cap_[e ^ 1]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  // Adjacency keeps insertion order, so searches prefer earlier arcs.
  void push(std::size_t u, std::size_t v, long cap) {
    to_.push_back(v);
    cap_.push_back(cap);
    adj_[u].push_back(to_.size() - 1);
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> to_;
  std::vector<long> cap_;
};

}  // namespace detail

// Shortest-augmenting-path max flow with the optimal flow decomposed into
// unit paths. Paths are internally node-disjoint whenever all internal nodes
// have capacity 1.
inline FlowResult max_flow(const FlowNetwork& net) {
  const long inf = net.infinity_bound();
  const std::size_t n = net.size();
  detail::SplitResidual r(n);
  auto cap_of = [&](long c) { return c == FlowNetwork::kInfinite ? inf : c; };
  for (std::size_t i = 0; i < n; ++i) r.add(2 * i, 2 * i + 1, cap_of(net.node_capacity(i)));
  std::vector<std::size_t> arc_edge;
  arc_edge.reserve(net.arcs().size());
  for (const auto& a : net.arcs()) arc_edge.push_back(r.add(2 * a.from + 1, 2 * a.to, cap_of(a.capacity)));

  FlowResult res;
  res.value = r.max_flow(2 * FlowNetwork::kSource, 2 * FlowNetwork::kSink + 1);

  // Decompose: remaining flow per arc, then walk unit paths from s.
  std::vector<long> remaining(net.arcs().size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = r.flow(arc_edge[i]);
  std::vector<std::vector<std::size_t>> out_arcs(n);
  for (std::size_t i = 0; i < net.arcs().size(); ++i) out_arcs[net.arcs()[i].from].push_back(i);

  for (long k = 0; k < res.value; ++k) {
    std::vector<std::size_t> path{FlowNetwork::kSource};
    std::vector<std::size_t> used;
    std::size_t x = FlowNetwork::kSource;
    while (x != FlowNetwork::kSink) {
      std::size_t next_arc = SIZE_MAX;
      for (auto ai : out_arcs[x])
        if (remaining[ai] > 0) {
          next_arc = ai;
          break;
        }
      if (next_arc == SIZE_MAX) throw Error("flow decomposition failed");
      x = net.arcs()[next_arc].to;
      // Drop a circulation if the walk returns to a node already on it.
      auto pos = std::find(path.begin(), path.end(), x);
      if (pos != path.end()) {
        const auto keep = static_cast<std::size_t>(pos - path.begin());
        remaining[next_arc] -= 1;
        for (std::size_t j = keep; j < used.size(); ++j) remaining[used[j]] -= 1;
        path.resize(keep + 1);
        used.resize(keep);
        continue;
      }
      used.push_back(next_arc);
      path.push_back(x);
    }
    for (auto ai : used) remaining[ai] -= 1;
    res.paths.push_back(std::move(path));
  }
  return res;
}

}  // namespace lfhtc
