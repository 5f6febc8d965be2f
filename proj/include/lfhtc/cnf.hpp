#pragma once

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "lfhtc/criterion.hpp"
#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"

namespace lfhtc {

// Clauses hold signed 1-based variable indices; -i is the negation of x_i.
struct CnfFormula {
  std::size_t n = 0;
  std::vector<std::vector<int>> clauses;

  void validate() const {
    for (const auto& c : clauses)
      for (int lit : c) {
        if (lit == 0) throw ParseError("zero literal inside a clause");
        if (static_cast<std::size_t>(std::abs(lit)) > n)
          throw ParseError("literal " + std::to_string(lit) + " exceeds variable count " + std::to_string(n));
      }
  }
};

// DIMACS CNF: comment lines start with 'c', header "p cnf <vars> <clauses>",
// clauses are 0-terminated and may span lines. A '%' line ends the input.
inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  bool header = false;
  std::size_t expected = 0, lineno = 0;
  std::vector<int> current;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      if (header) fail("second header line");
      std::string fmt;
      long long nv = -1, nc = -1;
      if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0) fail("malformed header, expected 'p cnf <vars> <clauses>'");
      f.n = static_cast<std::size_t>(nv);
      expected = static_cast<std::size_t>(nc);
      header = true;
      continue;
    }
    if (!header) fail("clause before the 'p cnf' header");
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') fail("bad literal '" + tok + "'");
      if (lit == 0) {
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::labs(lit)) > f.n) fail("literal " + tok + " exceeds the declared variable count");
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!header) throw ParseError("missing 'p cnf' header");
  if (!current.empty()) f.clauses.push_back(std::move(current));
  if (f.clauses.size() != expected)
    throw ParseError("header declares " + std::to_string(expected) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  return f;
}

inline std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.n << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

struct CnfReduction {
  LatentFactorGraph graph;
  std::size_t v = 0;
};

// Graph whose node v has an LF-HTC triple iff f is satisfiable. Per clause k
// a node w_k with w_k -> v and w_k <- h_wk_v -> v; per variable x_i the
// occurrence nodes u_i_j / ubar_i_j (j-th occurrence from the left, in
// clause order) with edges into the clause nodes, the nodes u_i, ubar_i,
// q_i, the stars h_i and hbar_i, and one latent pair node for each pair in
// the u- and ubar-clusters.
inline CnfReduction reduce_cnf(const CnfFormula& f) {
  f.validate();
  const std::size_t m = f.clauses.size();
  std::vector<std::string> obs{"v"}, lat;
  std::vector<std::pair<std::string, std::string>> dir, lat_edges;
  for (std::size_t k = 1; k <= m; ++k) {
    const std::string w = "w" + std::to_string(k), h = "h_w" + std::to_string(k) + "_v";
    obs.push_back(w);
    lat.push_back(h);
    dir.emplace_back(w, "v");
    lat_edges.emplace_back(h, w);
    lat_edges.emplace_back(h, "v");
  }
  std::vector<std::string> pair_latents;
  std::vector<std::pair<std::string, std::string>> pair_edges;
  for (std::size_t i = 1; i <= f.n; ++i) {
    const std::string si = std::to_string(i);
    std::vector<std::string> pos{"u" + si}, neg{"ubar" + si};
    std::size_t a = 0, b = 0;
    for (std::size_t k = 0; k < m; ++k)
      for (int lit : f.clauses[k]) {
        if (static_cast<std::size_t>(std::abs(lit)) != i) continue;
        const std::string w = "w" + std::to_string(k + 1);
        if (lit > 0) {
          const std::string u = "u" + si + "_" + std::to_string(++a);
          obs.push_back(u);
          pos.push_back(u);
          dir.emplace_back(u, w);
        } else {
          const std::string u = "ubar" + si + "_" + std::to_string(++b);
          obs.push_back(u);
          neg.push_back(u);
          dir.emplace_back(u, w);
        }
      }
    const std::string q = "q" + si;
    obs.push_back(pos[0]);
    obs.push_back(neg[0]);
    obs.push_back(q);
    lat.push_back("h" + si);
    lat.push_back("hbar" + si);
    for (const auto& x : pos) lat_edges.emplace_back("h" + si, x);
    lat_edges.emplace_back("h" + si, q);
    lat_edges.emplace_back("h" + si, "v");
    for (const auto& x : neg) lat_edges.emplace_back("hbar" + si, x);
    lat_edges.emplace_back("hbar" + si, q);
    lat_edges.emplace_back("hbar" + si, "v");
    for (const auto* cluster : {&pos, &neg})
      for (std::size_t x = 0; x < cluster->size(); ++x)
        for (std::size_t y = x + 1; y < cluster->size(); ++y) {
          const std::string h = "h_" + (*cluster)[x] + "_" + (*cluster)[y];
          pair_latents.push_back(h);
          pair_edges.emplace_back(h, (*cluster)[x]);
          pair_edges.emplace_back(h, (*cluster)[y]);
        }
  }
  lat.insert(lat.end(), pair_latents.begin(), pair_latents.end());
  lat_edges.insert(lat_edges.end(), pair_edges.begin(), pair_edges.end());
  CnfReduction r{LatentFactorGraph::from_labels(obs, lat, dir, lat_edges), 0};
  return r;
}

// Decides f through the reduction: unrestricted single-node search with
// |H| up to the number of latent nodes. Exponential; capped at 8 variables.
inline bool sat_via_lfhtc(const CnfFormula& f) {
  if (f.n > 8) throw BudgetError("sat_via_lfhtc supports at most 8 variables");
  const auto r = reduce_cnf(f);
  SearchOptions opt;
  opt.max_latent = r.graph.l();
  return find_triple(r.graph, r.v, std::nullopt, opt).has_value();
}

inline bool brute_force_sat(const CnfFormula& f) {
  f.validate();
  if (f.n > 20) throw BudgetError("brute_force_sat supports at most 20 variables");
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << f.n); ++a) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool sat = false;
      for (int lit : c) {
        const bool val = (a >> (std::abs(lit) - 1)) & 1u;
        if ((lit > 0) == val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace lfhtc
