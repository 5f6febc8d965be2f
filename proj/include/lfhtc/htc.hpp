#pragma once

#include <optional>
#include <vector>

#include "lfhtc/criterion.hpp"
#include "lfhtc/flow.hpp"
#include "lfhtc/graph.hpp"

namespace lfhtc {

// Half-trek criterion on a mixed graph. Half-treks are directed paths,
// optionally starting with one bidirected step y <-> x; two half-treks may
// only meet at observed nodes on opposite sides.
struct MixedFlowGraph {
  FlowNetwork net;
  std::vector<std::size_t> left_of;   // network node -> observed index (left copies)
  std::vector<std::size_t> right_of;  // network node -> observed index (right copies)
  std::vector<bool> is_left;
  long target = 0;
};

// s -> y for y in `allowed`; y -> y' and y -> w' for siblings w of y;
// u' -> w' per directed edge; p' -> t for parents p of v.
inline MixedFlowGraph build_mixed_flow_graph(const MixedGraph& m, std::size_t v, const NodeSet& allowed) {
  MixedFlowGraph fg;
  const std::size_t d = m.d();
  fg.left_of.assign(2, SIZE_MAX);
  fg.right_of.assign(2, SIZE_MAX);
  fg.is_left.assign(2, false);
  std::vector<std::size_t> left(d, SIZE_MAX), right(d);
  allowed.for_each([&](std::size_t y) {
    left[y] = fg.net.add_node(m.observed_label(y), 1);
    fg.left_of.push_back(y);
    fg.right_of.push_back(SIZE_MAX);
    fg.is_left.push_back(true);
  });
  for (std::size_t w = 0; w < d; ++w) {
    right[w] = fg.net.add_node(m.observed_label(w) + "'", 1);
    fg.left_of.push_back(SIZE_MAX);
    fg.right_of.push_back(w);
    fg.is_left.push_back(false);
  }
  allowed.for_each([&](std::size_t y) {
    fg.net.add_arc(FlowNetwork::kSource, left[y]);
    fg.net.add_arc(left[y], right[y]);
    m.siblings(y).for_each([&](std::size_t w) { fg.net.add_arc(left[y], right[w]); });
  });
  for (auto [u, w] : m.directed_edges()) fg.net.add_arc(right[u], right[w]);
  m.parents(v).for_each([&](std::size_t p) { fg.net.add_arc(right[p], FlowNetwork::kSink); });
  fg.target = static_cast<long>(m.parents(v).size());
  fg.net.set_infinity_bound(std::max<long>(1, fg.target));
  return fg;
}

inline HalfTrekSystem decode_mixed_system(const MixedFlowGraph& fg, const FlowResult& flow) {
  HalfTrekSystem sys;
  for (const auto& path : flow.paths) {
    // s, y, x1', ..., k', t
    HalfTrek t;
    t.source = fg.left_of.at(path.at(1));
    const std::size_t first = fg.right_of.at(path.at(2));
    std::size_t i = 2;
    if (first == t.source) {
      i = 3;
    } else {
      t.start = HalfTrek::Start::bidirected;
    }
    for (; i + 1 < path.size(); ++i) t.tail.push_back(fg.right_of.at(path[i]));
    sys.push_back(std::move(t));
  }
  std::sort(sys.begin(), sys.end(), [](const HalfTrek& a, const HalfTrek& b) { return a.target() < b.target(); });
  return sys;
}

// Allowed set for v: (solved u (V \ htr(v))) \ ({v} u sib(v)).
inline NodeSet htc_allowed(const MixedGraph& m, std::size_t v, const NodeSet& solved) {
  NodeSet excluded = m.siblings(v);
  excluded.insert(v);
  return (solved | (NodeSet::range(m.d()) - m.htr(v))) - excluded;
}

inline std::optional<FoundTriple> htc_find(const MixedGraph& m, std::size_t v, const NodeSet& solved) {
  const NodeSet allowed = htc_allowed(m, v, solved);
  if (allowed.size() < m.parents(v).size()) return std::nullopt;
  const auto fg = build_mixed_flow_graph(m, v, allowed);
  const auto flow = max_flow(fg.net);
  if (flow.value != fg.target) return std::nullopt;
  FoundTriple ft;
  ft.triple.v = v;
  ft.system = decode_mixed_system(fg, flow);
  for (const auto& t : ft.system) ft.triple.Y.insert(t.source);
  return ft;
}

inline IdentifiabilityResult htc_identifiable(const MixedGraph& m) {
  IdentifiabilityResult res;
  for (std::size_t v = 0; v < m.d(); ++v)
    if (m.parents(v).empty()) {
      res.solved.insert(v);
      CertificateEntry e;
      e.v = v;
      e.trivial = true;
      e.triple.v = v;
      res.certificate.push_back(std::move(e));
    }
  bool changed = true;
  while (changed && res.solved.size() < m.d()) {
    changed = false;
    for (std::size_t v = 0; v < m.d(); ++v) {
      if (res.solved.contains(v)) continue;
      auto ft = htc_find(m, v, res.solved);
      if (!ft) continue;
      res.solved.insert(v);
      res.certificate.push_back({v, false, std::move(ft->triple), std::move(ft->system)});
      changed = true;
    }
  }
  res.identifiable = res.solved.size() == m.d();
  return res;
}

}  // namespace lfhtc
