#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lfhtc/criterion.hpp"
#include "lfhtc/error.hpp"
#include "lfhtc/graph.hpp"

namespace lfhtc {

// Half-trek as labels: [y, x1, ..., target] or [y, h, x1, ..., target].
inline nlohmann::json to_json(const LatentFactorGraph& g, const HalfTrek& t) {
  nlohmann::json j = nlohmann::json::array();
  j.push_back(g.observed_label(t.source));
  if (t.start == HalfTrek::Start::latent_fork) j.push_back(g.latent_label(t.latent));
  for (auto x : t.tail) j.push_back(g.observed_label(x));
  return j;
}

inline nlohmann::json to_json(const LatentFactorGraph& g, const Certificate& cert) {
  nlohmann::json out = nlohmann::json::array();
  auto labels = [&](const NodeSet& s, bool latent) {
    nlohmann::json a = nlohmann::json::array();
    s.for_each([&](std::size_t i) { a.push_back(latent ? g.latent_label(i) : g.observed_label(i)); });
    return a;
  };
  for (const auto& e : cert) {
    nlohmann::json j;
    j["v"] = g.observed_label(e.v);
    if (e.trivial) j["trivial"] = true;
    j["Y"] = labels(e.triple.Y, false);
    j["Z"] = labels(e.triple.Z, false);
    j["H"] = labels(e.triple.H, true);
    j["system"] = nlohmann::json::array();
    for (const auto& t : e.system) j["system"].push_back(to_json(g, t));
    out.push_back(std::move(j));
  }
  return out;
}

inline Certificate certificate_from_json(const LatentFactorGraph& g, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("certificate must be a JSON array");
  auto label = [](const nlohmann::json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer()) return std::to_string(x.get<long long>());
    throw ParseError("certificate labels must be strings");
  };
  auto nodes = [&](const nlohmann::json& e, const char* key, bool latent) {
    NodeSet s;
    if (!e.contains(key)) return s;
    if (!e.at(key).is_array()) throw ParseError(std::string("certificate field '") + key + "' must be an array");
    for (const auto& x : e.at(key)) s.insert(latent ? g.latent_index(label(x)) : g.observed_index(label(x)));
    return s;
  };
  Certificate cert;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("v")) throw ParseError("certificate entry must be an object with 'v'");
    CertificateEntry ce;
    ce.v = g.observed_index(label(e.at("v")));
    ce.trivial = e.value("trivial", false);
    ce.triple.v = ce.v;
    ce.triple.Y = nodes(e, "Y", false);
    ce.triple.Z = nodes(e, "Z", false);
    ce.triple.H = nodes(e, "H", true);
    if (e.contains("system")) {
      for (const auto& p : e.at("system")) {
        if (!p.is_array() || p.empty()) throw ParseError("half-trek must be a nonempty array");
        HalfTrek t;
        t.source = g.observed_index(label(p[0]));
        std::size_t i = 1;
        if (p.size() > 1) {
          auto id = g.find(label(p[1]));
          if (id && id->kind == NodeKind::latent) {
            t.start = HalfTrek::Start::latent_fork;
            t.latent = id->index;
            i = 2;
          }
        }
        for (; i < p.size(); ++i) t.tail.push_back(g.observed_index(label(p[i])));
        ce.system.push_back(std::move(t));
      }
    }
    cert.push_back(std::move(ce));
  }
  return cert;
}

}  // namespace lfhtc
