#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_util.hpp"

using namespace lfhtc;
using namespace lfhtc::testing;

TEST(NodeSet, BasicOps) {
  NodeSet a{1, 3, 5}, b{3, 4};
  EXPECT_EQ((a | b).to_vector(), (std::vector<std::size_t>{1, 3, 4, 5}));
  EXPECT_EQ((a & b).to_vector(), (std::vector<std::size_t>{3}));
  EXPECT_EQ((a - b).to_vector(), (std::vector<std::size_t>{1, 5}));
  EXPECT_TRUE(NodeSet{3}.subset_of(a));
  EXPECT_FALSE(b.subset_of(a));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_EQ(a.size(), 3u);
}

TEST(NodeSet, SpillsPastSixtyFour) {
  NodeSet s{2, 70, 130};
  EXPECT_TRUE(s.contains(70));
  EXPECT_TRUE(s.contains(130));
  EXPECT_FALSE(s.contains(66));
  EXPECT_EQ(s.size(), 3u);
  std::vector<std::size_t> seen(s.begin(), s.end());
  EXPECT_EQ(seen, (std::vector<std::size_t>{2, 70, 130}));
  s.erase(130);
  EXPECT_EQ(s, (NodeSet{2, 70}));
  EXPECT_EQ((s - NodeSet{70}), NodeSet{2});
}

TEST(NodeSet, KSubsetsLexicographic) {
  std::vector<std::vector<std::size_t>> got;
  for_each_k_subset({4, 5, 6, 7}, 2, [&](const NodeSet& s) {
    got.push_back(s.to_vector());
    return false;
  });
  ASSERT_EQ(got.size(), 6u);
  EXPECT_EQ(got.front(), (std::vector<std::size_t>{4, 5}));
  EXPECT_EQ(got[2], (std::vector<std::size_t>{4, 7}));
  EXPECT_EQ(got.back(), (std::vector<std::size_t>{6, 7}));
  int empty = 0;
  for_each_k_subset({}, 0, [&](const NodeSet& s) {
    empty += s.empty();
    return false;
  });
  EXPECT_EQ(empty, 1);
}

TEST(ParseGraph, GlobalFactor) {
  auto g = load("global_a");
  EXPECT_EQ(g.d(), 5u);
  EXPECT_EQ(g.l(), 1u);
  EXPECT_EQ(g.directed_edges().size(), 4u);
  EXPECT_EQ(g.latent_edges().size(), 5u);
}

TEST(ParseGraph, SingleNode) {
  auto g = parse_graph(R"({"observed": ["a"]})");
  EXPECT_EQ(g.d(), 1u);
  EXPECT_EQ(g.l(), 0u);
}

TEST(ParseGraph, Errors) {
  auto msg = [](const std::string& text) {
    try {
      parse_graph(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(msg(R"({"observed": ["1"], "latent": ["h1","h2"], "directed": [["h1","h2"]]})").find("latent node with parent"),
            std::string::npos);
  EXPECT_NE(msg(R"({"observed": ["1","1"]})").find("duplicate label"), std::string::npos);
  EXPECT_NE(msg(R"({"observed": ["1"], "directed": [["1","1"]]})").find("self-loop"), std::string::npos);
  EXPECT_NE(msg(R"({"observed": ["1"], "directed": [["1","x"]]})").find("unknown endpoint"), std::string::npos);
  EXPECT_NE(msg(R"({"observed": ["1","2"], "latent_edges": [["1","2"]]})").find("observed tail"), std::string::npos);
  EXPECT_THROW(parse_graph("[1,2]"), ParseError);
  EXPECT_THROW(parse_graph("{"), ParseError);
}

TEST(ParseGraph, JsonRoundTrip) {
  auto g = load("two_factors");
  EXPECT_EQ(parse_graph(to_json(g).dump()), g);
}

TEST(Queries, Parents) {
  auto g = load("global_a");
  EXPECT_EQ(g.pa_observed(obs(g, "4")), obs_set(g, {"3"}));
  EXPECT_TRUE(g.pa_observed(obs(g, "1")).empty());
  auto f1 = load("treatment_outcome");
  EXPECT_EQ(f1.pa_observed(obs(f1, "O2")), obs_set(f1, {"T1", "O1"}));
  EXPECT_EQ(g.pa_latent(obs_set(g, {"1"})), lat_set(g, {"h1"}));
  auto f8 = load("two_factors");
  EXPECT_EQ(f8.pa_latent(obs_set(f8, {"4"})), lat_set(f8, {"h1", "h2"}));
  EXPECT_TRUE(f8.pa_latent(NodeSet{}).empty());
}

TEST(Htr, WorkedExample) {
  auto g = load("global_a");
  EXPECT_TRUE(g.htr(obs_set(g, {"1"}), {}).contains(obs(g, "2")));
  EXPECT_TRUE(g.htr(obs_set(g, {"1"}), lat_set(g, {"h1"})).empty());
  auto empty = parse_graph(R"({"observed": ["1","2","3"]})");
  EXPECT_TRUE(empty.htr(NodeSet{0, 1}, {}).empty());
}

TEST(Htr, MatchesPathEnumeration) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    const std::size_t d = 2 + rng() % 4, l = rng() % 3;
    auto g = random_graph(rng, d, l, 0.3);
    for (std::uint64_t um = 1; um < (1u << d); um += 1 + rng() % 3)
      for (std::uint64_t hm = 0; hm < (1u << l); ++hm) {
        const NodeSet U = NodeSet::from_word(um), H = NodeSet::from_word(hm);
        EXPECT_EQ(g.htr(U, H), brute_htr(g, U, H));
      }
  }
}

TEST(Htr, MonotoneInAvoidedSet) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 200; ++it) {
    const std::size_t d = 2 + rng() % 5, l = 1 + rng() % 3;
    auto g = random_graph(rng, d, l, 0.3);
    const NodeSet U = NodeSet::from_word(1 + rng() % ((1u << d) - 1));
    for (std::uint64_t a = 0; a < (1u << l); ++a)
      for (std::uint64_t b = a;; b = (b + 1) | a) {
        EXPECT_TRUE(g.htr(U, NodeSet::from_word(b)).subset_of(g.htr(U, NodeSet::from_word(a))));
        if (b == (1u << l) - 1) break;
      }
  }
}

TEST(Projection, PartialFactor) {
  auto m = latent_projection(load("partial_factor"));
  std::set<Edge> bi(m.bidirected_edges().begin(), m.bidirected_edges().end());
  EXPECT_EQ(bi, (std::set<Edge>{{0, 2}, {2, 3}, {0, 3}}));
  EXPECT_EQ(m.directed_edges().size(), 4u);
}

TEST(Projection, CompleteBidirected) {
  auto m = latent_projection(load("global_a"));
  EXPECT_EQ(m.bidirected_edges().size(), 10u);
}

TEST(Projection, NoLatents) {
  auto m = latent_projection(parse_graph(R"({"observed": ["1","2"], "directed": [["1","2"]]})"));
  EXPECT_TRUE(m.bidirected_edges().empty());
}

TEST(Expansion, RoundTrip) {
  auto m = latent_projection(load("partial_factor"));
  auto g = bidirected_expansion(m);
  EXPECT_EQ(g.l(), 3u);
  for (std::size_t h = 0; h < g.l(); ++h) EXPECT_EQ(g.ch_latent(h).size(), 2u);
  EXPECT_EQ(latent_projection(g), m);

  MixedGraph single({"v", "w"}, {}, {{0, 1}});
  auto gs = bidirected_expansion(single);
  ASSERT_EQ(gs.l(), 1u);
  EXPECT_EQ(gs.ch_latent(0), (NodeSet{0, 1}));
  EXPECT_EQ(bidirected_expansion(MixedGraph({"a"}, {}, {})).l(), 0u);

  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 1 + rng() % 6;
    std::vector<Edge> dir, bi;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        if (a != b && rng() % 4 == 0) dir.emplace_back(a, b);
        if (a < b && rng() % 3 == 0) bi.emplace_back(a, b);
      }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d; ++i) labels.push_back("n" + std::to_string(i));
    MixedGraph mg(labels, dir, bi);
    EXPECT_EQ(latent_projection(bidirected_expansion(mg)), mg);
  }
}

TEST(MixedGraphIo, RoundTrip) {
  auto m = latent_projection(load("three_factors"));
  EXPECT_EQ(parse_mixed_graph(to_json(m).dump()), m);
  EXPECT_THROW(parse_mixed_graph(R"({"observed": ["1"], "latent": ["h"]})"), GraphError);
}

namespace {

LatentFactorGraph six_global(const std::vector<Edge>& dir) {
  std::vector<std::string> o{"1", "2", "3", "4", "5", "6"};
  std::vector<Edge> lat;
  for (std::size_t v = 0; v < 6; ++v) lat.emplace_back(0, v);
  return LatentFactorGraph(o, {"h1"}, dir, lat);
}

}  // namespace

TEST(Canonical, RelabeledChainsShareKey) {
  const auto group = symmetric_group(6);
  EXPECT_EQ(canonical_form(six_global({{0, 1}}), group), canonical_form(six_global({{1, 2}}), group));
  EXPECT_NE(canonical_form(six_global({{0, 1}, {1, 2}}), group), canonical_form(six_global({{0, 1}, {0, 2}}), group));
}

TEST(Canonical, TwoFactorStabilizer) {
  const auto g = LatentPattern::two_factor6().graph(0);
  const auto stab = latent_stabilizer(g);
  // Independent count: permutations mapping {1,2,3,4} and {4,5,6} to themselves.
  std::size_t expected = 0;
  for (const auto& p : symmetric_group(6)) {
    bool ok = true;
    for (std::size_t v = 0; v < 6; ++v) {
      const bool in1 = v < 4, in2 = v >= 3;
      if ((p[v] < 4) != in1 || (p[v] >= 3) != in2) ok = false;
    }
    expected += ok;
  }
  EXPECT_EQ(expected, 12u);
  EXPECT_EQ(stab.size(), expected);
  for (const auto& p : stab) EXPECT_EQ(p[3], 3u);
}

TEST(Canonical, IdentityGivesSortedEdges) {
  auto g = six_global({{3, 4}, {0, 1}});
  Permutation id{0, 1, 2, 3, 4, 5};
  auto key = canonical_form(g, {id});
  EXPECT_EQ(key.directed, (std::vector<Edge>{{0, 1}, {3, 4}}));
}

TEST(Canonical, RejectsNonPreservingGroup) {
  const auto g = LatentPattern::two_factor6().graph(0);
  EXPECT_THROW(canonical_form(g, symmetric_group(6)), GraphError);
}

TEST(Canonical, ConstantOnOrbits) {
  std::mt19937_64 rng(3);
  const auto pattern = LatentPattern::two_factor6();
  const auto group = latent_stabilizer(pattern.graph(0));
  const MaskCanonicalizer mc(6, group);
  for (int it = 0; it < 200; ++it) {
    std::uint64_t mask = 0;
    for (std::size_t u = 0; u < 6; ++u)
      for (std::size_t w = 0; w < 6; ++w)
        if (u != w && rng() % 5 == 0) mask |= std::uint64_t{1} << (u * 6 + w);
    const auto g = pattern.graph(mask);
    const auto key = canonical_form(g, group);
    for (const auto& p : group) {
      const auto pg = permute(g, p);
      EXPECT_EQ(canonical_form(pg, group), key);
      EXPECT_EQ(mc.canonical(edge_mask(pg)), mc.canonical(mask));
    }
  }
}
