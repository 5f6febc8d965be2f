// lfhtc command-line front end. Exit codes: 0 success, 1 negative verdict,
// 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfhtc/lfhtc.hpp"

namespace {

using namespace lfhtc;
using nlohmann::json;

constexpr int kOk = 0, kNegative = 1, kInputError = 2;

// Error tied to a file, so messages name the offending input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class F>
auto with_file(const std::string& path, F&& f) {
  const std::string text = slurp(path);
  try {
    return f(text);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

LatentFactorGraph load_graph(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_graph(t); });
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write file");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json labels(const LatentFactorGraph& g, const NodeSet& s) {
  json a = json::array();
  s.for_each([&](std::size_t v) { a.push_back(g.observed_label(v)); });
  return a;
}

struct CheckArgs {
  std::string graph, verify_cert, cert_out;
  std::size_t k = 2;
  bool htc = false;
};

int run_check(const CheckArgs& a) {
  const auto g = load_graph(a.graph);
  if (!a.verify_cert.empty()) {
    const auto cert = with_file(a.verify_cert, [&](const std::string& t) {
      return certificate_from_json(g, json::parse(t));
    });
    if (auto err = verify_certificate(g, cert)) {
      std::cout << "invalid: " << *err << "\n";
      return kNegative;
    }
    NodeSet covered;
    for (const auto& e : cert) covered.insert(e.v);
    std::cout << "valid" << (covered.size() == g.d() ? "" : " (partial)") << "\n";
    return kOk;
  }
  if (a.htc) {
    const auto m = latent_projection(g);
    const auto r = htc_identifiable(m);
    json order = json::array();
    for (const auto& e : r.certificate) order.push_back(m.observed_label(e.v));
    emit("", dump({{"criterion", "htc"}, {"identifiable", r.identifiable}, {"order", order}}));
    return r.identifiable ? kOk : kNegative;
  }
  const auto r = lfhtc_identifiable(g, a.k);
  const json cert = to_json(g, r.certificate);
  if (!a.cert_out.empty()) emit(a.cert_out, dump(cert));
  emit("", dump({{"criterion", "lfhtc"},
                 {"k", a.k},
                 {"identifiable", r.identifiable},
                 {"solved", labels(g, r.solved)},
                 {"certificate", cert}}));
  return r.identifiable ? kOk : kNegative;
}

struct SimulateArgs {
  std::string graph, mode = "primes", params_out, sigma_out;
  std::uint64_t seed = 1;
};

int run_simulate(const SimulateArgs& a) {
  const auto g = load_graph(a.graph);
  const auto p = sample_params(g, a.seed, a.mode == "primes" ? SampleMode::primes : SampleMode::small_rationals);
  const auto s = sigma(p);
  if (a.params_out.empty() && a.sigma_out.empty()) {
    emit("", dump({{"params", to_json(p)}, {"Sigma", to_json(s)}}));
    return kOk;
  }
  if (!a.params_out.empty()) emit(a.params_out, dump(to_json(p)));
  if (!a.sigma_out.empty()) emit(a.sigma_out, dump(to_json(s)));
  return kOk;
}

struct IdentifyArgs {
  std::string graph, sigma, lambda_out, omega_out, cert_out;
  std::size_t k = 2;
};

int run_identify(const IdentifyArgs& a) {
  const auto g = load_graph(a.graph);
  const auto s = with_file(a.sigma, [](const std::string& t) { return parse_matrix(t); });
  if (s.rows() != g.d() || s.cols() != g.d())
    throw InputError(a.sigma + ": expected a " + std::to_string(g.d()) + "x" + std::to_string(g.d()) + " matrix");
  if (!s.is_symmetric()) throw InputError(a.sigma + ": covariance matrix is not symmetric");
  const auto r = lfhtc_identifiable(g, a.k);
  if (!r.identifiable) {
    std::cerr << "not LF-HTC-identifiable with k = " << a.k << "; solved " << labels(g, r.solved).dump() << "\n";
    return kNegative;
  }
  Recovery rec;
  try {
    rec = recover_all(g, r.certificate, s);
  } catch (const SingularError& e) {
    throw InputError(a.sigma + ": " + e.what());
  }
  const json cert = to_json(g, r.certificate);
  if (!a.lambda_out.empty()) emit(a.lambda_out, dump(to_json(rec.lambda)));
  if (!a.omega_out.empty()) emit(a.omega_out, dump(to_json(rec.omega)));
  if (!a.cert_out.empty()) emit(a.cert_out, dump(cert));
  if (a.lambda_out.empty() && a.omega_out.empty())
    emit("", dump({{"Lambda", to_json(rec.lambda)}, {"Omega", to_json(rec.omega)}, {"certificate", cert}}));
  return kOk;
}

int run_project(const std::string& graph, const std::string& out) {
  emit(out, dump(to_json(latent_projection(load_graph(graph)))));
  return kOk;
}

struct DimArgs {
  std::string graph;
  std::uint64_t seed = 1;
  std::size_t trials = 3;
};

int run_dim(const DimArgs& a) {
  const auto g = load_graph(a.graph);
  const auto r = is_finite_to_one(g, a.seed, a.trials);
  json j = to_json(r);
  j["trivially_infinite"] = r.verdict == Verdict::trivially_infinite;
  j["mixed_trivially_infinite"] = mixed_trivially_infinite(latent_projection(g));
  emit("", dump(j));
  return r.verdict == Verdict::finite_to_one ? kOk : kNegative;
}

int run_sat(const std::string& path, bool brute) {
  const auto f = with_file(path, [](const std::string& t) { return parse_dimacs(t); });
  const bool sat = brute ? brute_force_sat(f) : sat_via_lfhtc(f);
  std::cout << (sat ? "SAT" : "UNSAT") << "\n";
  return sat ? kOk : kNegative;
}

struct CensusArgs {
  std::string pattern = "global6", out;
  std::size_t max_edges = 9, k = 2, trials = 3, jobs = 1;
  bool htc = false;
  std::uint64_t seed = 1;
};

int run_census(const CensusArgs& a) {
  LatentPattern p;
  if (a.pattern == "global6")
    p = LatentPattern::global(6);
  else if (a.pattern == "twofactor6")
    p = LatentPattern::two_factor6();
  else
    p = LatentPattern::from_graph(load_graph(a.pattern));
  CensusOptions opt;
  opt.k = a.k;
  opt.with_htc = a.htc;
  opt.trials = a.trials;
  opt.jobs = a.jobs;
  opt.seed = a.seed;
  emit(a.out, census_csv(census(p, a.max_edges, opt), a.htc));
  return kOk;
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("LFHTC_JOBS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiability of linear structural equation models with latent factors"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Run the recursive LF-HTC and print a certificate");
  c->add_option("graph", check.graph, "Latent-factor graph (JSON)")->required();
  c->add_option("--k", check.k, "Maximum number of latent nodes per triple")->capture_default_str();
  c->add_option("--verify-cert", check.verify_cert, "Validate a certificate file instead of searching");
  c->add_option("--cert-out", check.cert_out, "Also write the certificate to this file");
  c->add_flag("--htc", check.htc, "Run the mixed-graph HTC on the latent projection");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Sample parameters and the implied covariance matrix");
  s->add_option("graph", sim.graph)->required();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--mode", sim.mode)->check(CLI::IsMember({"primes", "small-rationals"}))->capture_default_str();
  s->add_option("--params-out", sim.params_out, "Parameter file (Lambda, Gamma, Omega_diag)");
  s->add_option("--sigma-out", sim.sigma_out, "Covariance matrix file");

  IdentifyArgs ident;
  auto* i = app.add_subcommand("identify", "Recover Lambda and Omega from a covariance matrix");
  i->add_option("graph", ident.graph)->required();
  i->add_option("sigma", ident.sigma, "Covariance matrix (JSON rows of integers or \"p/q\")")->required();
  i->add_option("--k", ident.k)->capture_default_str();
  i->add_option("--lambda-out", ident.lambda_out);
  i->add_option("--omega-out", ident.omega_out);
  i->add_option("--cert-out", ident.cert_out);

  std::string project_graph, project_out;
  auto* p = app.add_subcommand("project", "Latent projection to a mixed graph");
  p->add_option("graph", project_graph)->required();
  p->add_option("-o,--out", project_out);

  DimArgs dim;
  auto* d = app.add_subcommand("dim", "Jacobian dimension report");
  d->add_option("graph", dim.graph)->required();
  d->add_option("--seed", dim.seed)->capture_default_str();
  d->add_option("--trials", dim.trials)->check(CLI::PositiveNumber)->capture_default_str();

  std::string sat_file;
  bool sat_brute = false;
  auto* t = app.add_subcommand("sat", "Decide a DIMACS CNF formula through the graph reduction");
  t->add_option("formula", sat_file)->required();
  t->add_flag("--brute-force", sat_brute, "Use exhaustive assignment search instead");

  CensusArgs cen;
  cen.jobs = default_jobs();
  auto* n = app.add_subcommand("census", "Classify unlabeled DAGs with a fixed latent pattern");
  n->add_option("--pattern", cen.pattern, "global6, twofactor6, or a graph file whose latent child sets are used")
      ->capture_default_str();
  n->add_option("--max-edges", cen.max_edges)->capture_default_str();
  n->add_option("--k", cen.k)->capture_default_str();
  n->add_flag("--htc", cen.htc, "Add the HTC column");
  n->add_option("--trials", cen.trials)->check(CLI::PositiveNumber)->capture_default_str();
  n->add_option("--jobs", cen.jobs, "Worker threads (default: LFHTC_JOBS or 1)")->check(CLI::PositiveNumber);
  n->add_option("--seed", cen.seed)->capture_default_str();
  n->add_option("-o,--out", cen.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*c) return run_check(check);
    if (*s) return run_simulate(sim);
    if (*i) return run_identify(ident);
    if (*p) return run_project(project_graph, project_out);
    if (*d) return run_dim(dim);
    if (*t) return run_sat(sat_file, sat_brute);
    if (*n) return run_census(cen);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
