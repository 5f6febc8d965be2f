#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"

namespace lfhtc {

namespace detail {

inline std::vector<std::string> label_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  for (const auto& x : arr) {
    if (x.is_string())
      out.push_back(x.get<std::string>());
    else if (x.is_number_integer())
      out.push_back(std::to_string(x.get<long long>()));
    else
      throw ParseError(std::string("'") + key + "' entries must be strings");
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> pair_list(const nlohmann::json& j,
                                                                  const char* key) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 2)
      throw ParseError(std::string("'") + key + "'[" + std::to_string(i) +
                       "] must be a pair of labels");
    auto lab = [&](const nlohmann::json& x) {
      if (x.is_string()) return x.get<std::string>();
      if (x.is_number_integer()) return std::to_string(x.get<long long>());
      throw ParseError(std::string("'") + key + "'[" + std::to_string(i) +
                       "] has a non-string label");
    };
    out.emplace_back(lab(e[0]), lab(e[1]));
  }
  return out;
}

inline nlohmann::json parse_object(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("graph file must hold a JSON object");
  return j;
}

}  // namespace detail

inline LatentFactorGraph graph_from_json(const nlohmann::json& j) {
  return LatentFactorGraph::from_labels(
      detail::label_list(j, "observed"), detail::label_list(j, "latent"),
      detail::pair_list(j, "directed"), detail::pair_list(j, "latent_edges"));
}

// Graph file: {"observed": [...], "latent": [...], "directed": [[u,v],...],
// "latent_edges": [[h,v],...]}. Node order is file order.
inline LatentFactorGraph parse_graph(const std::string& text) {
  return graph_from_json(detail::parse_object(text));
}

inline nlohmann::json to_json(const LatentFactorGraph& g) {
  nlohmann::json j;
  j["observed"] = g.observed_labels();
  j["latent"] = g.latent_labels();
  auto& dir = j["directed"] = nlohmann::json::array();
  for (auto [u, w] : g.directed_edges())
    dir.push_back({g.observed_label(u), g.observed_label(w)});
  auto& lat = j["latent_edges"] = nlohmann::json::array();
  for (auto [h, w] : g.latent_edges()) lat.push_back({g.latent_label(h), g.observed_label(w)});
  return j;
}

inline MixedGraph mixed_graph_from_json(const nlohmann::json& j) {
  auto observed = detail::label_list(j, "observed");
  if (!detail::label_list(j, "latent").empty())
    throw GraphError("mixed graph must not declare latent nodes");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (!index.emplace(observed[i], i).second)
      throw GraphError("duplicate label '" + observed[i] + "'");
  auto resolve = [&](const std::vector<std::pair<std::string, std::string>>& in) {
    std::vector<Edge> out;
    for (const auto& [a, b] : in) {
      auto ia = index.find(a);
      auto ib = index.find(b);
      if (ia == index.end()) throw GraphError("unknown endpoint '" + a + "'");
      if (ib == index.end()) throw GraphError("unknown endpoint '" + b + "'");
      out.emplace_back(ia->second, ib->second);
    }
    return out;
  };
  return MixedGraph(observed, resolve(detail::pair_list(j, "directed")),
                    resolve(detail::pair_list(j, "bidirected")));
}

inline MixedGraph parse_mixed_graph(const std::string& text) {
  return mixed_graph_from_json(detail::parse_object(text));
}

inline nlohmann::json to_json(const MixedGraph& m) {
  nlohmann::json j;
  j["observed"] = m.observed_labels();
  auto& dir = j["directed"] = nlohmann::json::array();
  for (auto [u, w] : m.directed_edges())
    dir.push_back({m.observed_label(u), m.observed_label(w)});
  auto& bi = j["bidirected"] = nlohmann::json::array();
  for (auto [a, b] : m.bidirected_edges())
    bi.push_back({m.observed_label(a), m.observed_label(b)});
  return j;
}

}  // namespace lfhtc
