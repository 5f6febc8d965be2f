// Acceptance checks. One line per criterion; the exit status is the number
// of failed criteria.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "test_util.hpp"

using namespace lfhtc;
using namespace lfhtc::testing;

namespace {

// Collects failed expectations for one criterion.
struct Checker {
  std::ostringstream failures, info;
  int failed = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failed < 5) failures << (failed ? "; " : "") << what;
    ++failed;
  }
  template <class A, class B>
  void equal(const A& a, const B& b, const std::string& what) {
    if (a == b) return;
    std::ostringstream s;
    s << what << " (got " << a << ", want " << b << ")";
    expect(false, s.str());
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int n, const std::string& desc, double limit_s, const std::function<void(Checker&)>& body) {
  Checker c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0) c.expect(secs <= limit_s, "took longer than " + std::to_string(limit_s) + "s");
  const bool ok = c.failed == 0;
  failures += !ok;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << desc << " (" << secs << "s)";
  if (!c.info.str().empty()) std::cout << " [" << c.info.str() << "]";
  if (!ok) std::cout << " -- " << c.failures.str();
  std::cout << std::endl;
}

HtcTriple triple(const LatentFactorGraph& g, const char* v, std::initializer_list<const char*> y,
                 std::initializer_list<const char*> z, std::initializer_list<const char*> h) {
  return {obs(g, v), obs_set(g, y), obs_set(g, z), lat_set(g, h)};
}

std::size_t env_jobs() {
  if (const char* e = std::getenv("LFHTC_JOBS")) {
    const long n = std::atol(e);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void compare_census(Checker& c, const std::vector<CensusRow>& got, const std::vector<CensusRow>& want, bool htc) {
  c.equal(got.size(), want.size(), "row count");
  CensusRow sum{}, wsum{};
  for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
    const auto& g = got[i];
    const auto& w = want[i];
    const std::string row = "row " + std::to_string(i);
    c.equal(g.total, w.total, row + " total");
    c.equal(g.finite_to_one, w.finite_to_one, row + " finite-to-one");
    c.equal(g.lfhtc, w.lfhtc, row + " lfhtc");
    if (htc) c.equal(g.htc, w.htc, row + " htc");
    sum.total += g.total, sum.finite_to_one += g.finite_to_one, sum.lfhtc += g.lfhtc, sum.htc += g.htc;
    wsum.total += w.total, wsum.finite_to_one += w.finite_to_one, wsum.lfhtc += w.lfhtc, wsum.htc += w.htc;
  }
  c.info << "totals " << sum.total << "/" << sum.finite_to_one << "/" << sum.lfhtc;
  if (htc) c.info << "/" << sum.htc;
  c.equal(sum.total, wsum.total, "grand total");
  c.equal(sum.finite_to_one, wsum.finite_to_one, "finite-to-one total");
}

// All clauses over n variables with 1..3 distinct literals.
std::vector<std::vector<int>> all_clauses(std::size_t n) {
  std::vector<int> lits;
  for (int i = 1; i <= static_cast<int>(n); ++i) lits.push_back(i), lits.push_back(-i);
  std::vector<std::vector<int>> out;
  for (std::uint32_t m = 1; m < (1u << lits.size()); ++m) {
    if (std::popcount(m) > 3) continue;
    std::vector<int> c;
    for (std::size_t i = 0; i < lits.size(); ++i)
      if (m >> i & 1) c.push_back(lits[i]);
    out.push_back(c);
  }
  return out;
}

}  // namespace

int main() {
  std::cout.precision(3);

  criterion(1, "criterion verdicts on the fixture graphs", 1.0, [](Checker& c) {
    auto a = load("global_a");
    c.expect(lfhtc_identifiable(a).identifiable, "global_a identifiable");
    for (auto t : {triple(a, "4", {"2", "3"}, {"1"}, {"h1"}), triple(a, "3", {"2", "4"}, {"1"}, {"h1"}),
                   triple(a, "5", {"2", "3", "4"}, {"1"}, {"h1"})})
      c.expect(check_triple(a, t).satisfied, "triple for node " + a.observed_label(t.v));
    c.expect(!lfhtc_identifiable(load("global_b")).identifiable, "global_b not identifiable");
    c.expect(!lfhtc_identifiable(load("global_c")).identifiable, "global_c not identifiable");
    c.expect(lfhtc_identifiable(load("treatment_outcome")).identifiable, "treatment_outcome identifiable");
    c.expect(lfhtc_identifiable(load("two_factors")).identifiable, "two_factors identifiable");
    auto f = load("three_factors");
    for (std::size_t k = 1; k <= f.l(); ++k)
      c.expect(!lfhtc_identifiable(f, k).identifiable, "three_factors not identifiable, k=" + std::to_string(k));
    c.expect(htc_identifiable(latent_projection(f)).identifiable, "three_factors projection HTC");
    c.expect(htc_identifiable(latent_projection(load("partial_factor"))).identifiable, "partial_factor HTC");
    c.expect(mixed_trivially_infinite(latent_projection(a)), "global_a projection trivially infinite");
  });

  criterion(2, "dimension of the factor covariance image", 1.0, [](Checker& c) {
    const auto s = load("chain_saturated");
    c.equal(dim_im_tau(s), 10u, "chain_saturated dim");
    c.expect(is_trivially_infinite(s), "chain_saturated trivially infinite");
    c.equal(dim_im_tau(load("three_factors")), 11u, "three_factors dim");
  });

  criterion(3, "finite-to-one trichotomy by Jacobian rank", 1.0, [](Checker& c) {
    const auto a = is_finite_to_one(load("global_a"), 1, 3);
    c.equal(a.dim_image, 14u, "a image");
    c.equal(a.dim_theta, 14u, "a params");
    const auto b = is_finite_to_one(load("global_b"), 1, 3);
    c.expect(b.verdict == Verdict::finite_to_one && b.dim_image == b.dim_theta, "b finite-to-one");
    const auto d = is_finite_to_one(load("global_c"), 1, 3);
    c.equal(d.dim_image, 13u, "c image");
    c.equal(d.dim_theta, 14u, "c params");
    c.expect(d.verdict == Verdict::infinite_to_one, "c infinite-to-one");
  });

  criterion(4, "exact recovery of Lambda and Omega", 5.0, [](Checker& c) {
    std::size_t runs = 0;
    for (const char* name : {"treatment_outcome", "global_a", "two_factors"}) {
      auto g = load(name);
      const auto res = lfhtc_identifiable(g);
      c.expect(res.identifiable, std::string(name) + " identifiable");
      for (std::uint64_t seed = 1; seed <= 20 && res.identifiable; ++seed, ++runs) {
        const auto p = sample_params(g, seed);
        const auto r = recover_all(g, res.certificate, sigma(p));
        c.expect(r.lambda == p.lambda && r.omega == omega(p), std::string(name) + " seed " + std::to_string(seed));
      }
    }
    auto t = load("treatment_outcome");
    const auto st = sigma(sample_params(t, 4));
    const auto rt = recover_all(t, lfhtc_identifiable(t).certificate, st);
    const auto t1 = obs(t, "T1"), o1 = obs(t, "O1");
    c.expect(rt.lambda(t1, o1) == st(t1, o1) / st(t1, t1), "T1->O1 regression coefficient");
    auto g = load("two_factors");
    const auto cert = lfhtc_identifiable(g).certificate;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = sigma(sample_params(g, seed));
      const auto r = recover_all(g, cert, s);
      auto sg = [&](int i, int j) { return s(i - 1, j - 1); };
      c.expect(r.lambda(3, 4) == sg(1, 5) / sg(1, 4), "4->5 ratio");
      c.expect(r.lambda(1, 2) ==
                   (sg(1, 3) * sg(2, 4) - sg(1, 4) * sg(2, 3)) / (sg(1, 2) * sg(2, 4) - sg(1, 4) * sg(2, 2)),
               "2->3 formula");
    }
    c.info << runs << " round trips";
  });

  criterion(5, "census of DAGs on 6 nodes with one global factor", 0, [](Checker& c) {
    const std::vector<CensusRow> want{{0, 1, 1, 1, 0},         {1, 1, 1, 1, 0},       {2, 4, 4, 4, 0},
                                      {3, 13, 13, 13, 0},      {4, 51, 51, 50, 0},    {5, 163, 160, 134, 0},
                                      {6, 407, 401, 250, 0},   {7, 796, 770, 234, 0}, {8, 1169, 1047, 64, 0},
                                      {9, 1291, 896, 4, 0}};
    CensusOptions opt;
    opt.jobs = env_jobs();
    compare_census(c, census(LatentPattern::global(6), 9, opt), want, false);
  });

  criterion(6, "census of DAGs on 6 nodes with two overlapping factors", 0, [](Checker& c) {
    const std::vector<CensusRow> want{{0, 1, 1, 1, 1},           {1, 8, 6, 6, 4},          {2, 63, 45, 43, 24},
                                      {3, 391, 255, 236, 104},   {4, 1983, 1171, 1018, 384}, {5, 7570, 3907, 3028, 900},
                                      {6, 21029, 9080, 5861, 1157}};
    CensusOptions opt;
    opt.with_htc = true;
    opt.jobs = env_jobs();
    c.info << "jobs " << opt.jobs << ", ";
    compare_census(c, census(LatentPattern::two_factor6(), 6, opt), want, true);
  });

  criterion(7, "max-flow decision equals exhaustive half-trek search", 0, [](Checker& c) {
    // Every digraph on 1..4 nodes (cycles allowed) with zero, one or two
    // latent nodes, each with at least two children.
    std::size_t graphs = 0, cases = 0;
    std::string mismatch;
    for (std::size_t d = 1; d <= 4 && mismatch.empty(); ++d) {
      std::vector<NodeSet> sets;
      for (std::uint64_t m = 1; m < (1u << d); ++m)
        if (std::popcount(m) >= 2) sets.push_back(NodeSet::from_word(m));
      std::vector<std::vector<NodeSet>> latents{{}};
      for (std::size_t i = 0; i < sets.size(); ++i) {
        latents.push_back({sets[i]});
        for (std::size_t j = i; j < sets.size(); ++j) latents.push_back({sets[i], sets[j]});
      }
      std::vector<Edge> pairs;
      for (std::size_t u = 0; u < d; ++u)
        for (std::size_t w = 0; w < d; ++w)
          if (u != w) pairs.emplace_back(u, w);
      std::vector<std::string> o;
      for (std::size_t i = 0; i < d; ++i) o.push_back(std::to_string(i + 1));
      for (std::uint64_t dm = 0; dm < (std::uint64_t{1} << pairs.size()) && mismatch.empty(); ++dm) {
        std::vector<Edge> dir;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (dm >> i & 1) dir.push_back(pairs[i]);
        for (const auto& lat : latents) {
          std::vector<std::string> h;
          std::vector<Edge> le;
          for (std::size_t j = 0; j < lat.size(); ++j) {
            h.push_back("h" + std::to_string(j + 1));
            lat[j].for_each([&](std::size_t v) { le.emplace_back(j, v); });
          }
          const LatentFactorGraph g(o, h, dir, le);
          ++graphs;
          cases += compare_flow_with_search(g, 2, &mismatch);
          if (!mismatch.empty()) break;
        }
      }
    }
    c.expect(mismatch.empty(), "mismatch " + mismatch);
    c.info << graphs << " graphs, " << cases << " (v, Z, H) cases";
  });

  criterion(8, "SAT via the graph reduction equals brute force", 300.0, [](Checker& c) {
    std::size_t formulas = 0, sat = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto clauses = all_clauses(n);
      const std::size_t m = clauses.size();
      auto run = [&](const CnfFormula& f) {
        const bool want = brute_force_sat(f);
        ++formulas;
        sat += want;
        c.expect(sat_via_lfhtc(f) == want, "formula " + to_dimacs(f));
      };
      run(CnfFormula{n, {}});
      for (std::size_t i = 0; i < m; ++i) {
        run(CnfFormula{n, {clauses[i]}});
        for (std::size_t j = i; j < m; ++j) {
          run(CnfFormula{n, {clauses[i], clauses[j]}});
          for (std::size_t k = j; k < m; ++k) run(CnfFormula{n, {clauses[i], clauses[j], clauses[k]}});
        }
      }
    }
    std::mt19937_64 rng(8);
    for (int it = 0; it < 200; ++it) {
      CnfFormula f{4, {}};
      const std::size_t m = 1 + rng() % 6;
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<int> cl;
        for (std::size_t w = 1 + rng() % 3; cl.size() < w;) {
          const int lit = (1 + static_cast<int>(rng() % 4)) * (rng() % 2 ? 1 : -1);
          if (std::find(cl.begin(), cl.end(), lit) == cl.end()) cl.push_back(lit);
        }
        f.clauses.push_back(cl);
      }
      const bool want = brute_force_sat(f);
      ++formulas;
      sat += want;
      c.expect(sat_via_lfhtc(f) == want, "formula " + to_dimacs(f));
    }
    c.expect(sat_via_lfhtc(parse_dimacs(read_file(data_path("cnf/small_sat.cnf")))), "small_sat.cnf is SAT");
    c.info << formulas << " formulas, " << sat << " satisfiable";
  });

  criterion(9, "pruning latents with fewer than four children keeps verdicts", 0, [](Checker& c) {
    std::mt19937_64 rng(2024);
    std::size_t checks = 0, found = 0;
    for (int it = 0; it < 500; ++it) {
      const std::size_t d = 2 + rng() % 5, l = 1 + rng() % 3;
      const auto g = random_graph(rng, d, l, 0.1 + 0.3 * static_cast<double>(rng() % 100) / 100.0, rng() % 2, 1);
      SearchOptions pruned, full;
      pruned.max_latent = full.max_latent = l;
      full.prune_small_latents = false;
      const NodeSet solved = NodeSet::from_word(rng() % (1u << d));
      for (std::size_t v = 0; v < d; ++v) {
        NodeSet s = solved;
        s.erase(v);
        for (const auto& sv : {std::optional<NodeSet>{}, std::optional<NodeSet>{s}}) {
          const bool a = find_triple(g, v, sv, pruned).has_value();
          const bool b = find_triple(g, v, sv, full).has_value();
          ++checks;
          found += a;
          c.expect(a == b, to_json(g).dump() + " v=" + g.observed_label(v));
        }
      }
      c.expect(lfhtc_identifiable(g, pruned).identifiable == lfhtc_identifiable(g, full).identifiable,
               "recursive verdict " + to_json(g).dump());
    }
    c.info << checks << " searches, " << found << " with a triple";
  });

  return failures;
}
