#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weylgraph/errors.hpp"
#include "weylgraph/kernels.hpp"
#include "weylgraph/parse.hpp"
#include "weylgraph/report.hpp"
#include "weylgraph/weyl.hpp"

using namespace weylgraph;

namespace {

// Unreadable or malformed input; exit status 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  std::uint64_t seed = 1;
  std::size_t max_depth = 3;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphPtr load_graph(const std::string& path) {
  try {
    return std::make_shared<const Graph>(parse_graph(read_file(path)));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

EdgeLabeling load_labels(const GraphPtr& g, const std::string& path) {
  try {
    return parse_labeling(g, read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

const char* kRose2 = "vertices: v\nedge a v v\nedge b v v\n";

Json path_pair(const Graph& g, const FinitePath& mu, const FinitePath& nu) {
  return Json::array({format_path(g, mu), format_path(g, nu)});
}

Report graph_check(const std::string& path) {
  auto g = load_graph(path);
  Report r("graph check " + path);
  auto names = [&](const std::vector<VertexId>& vs) {
    Json out = Json::array();
    for (auto v : vs) out.push_back(g->vertex_name(v));
    return out;
  };
  auto sinks = check_no_sinks(*g);
  r.check("no-sinks", sinks.passed, sinks.passed ? Json(nullptr) : Json{{"sinks", names(sinks.witnesses)}});
  auto sources = check_no_sources(*g);
  r.check("no-sources", sources.passed, sources.passed ? Json(nullptr) : Json{{"sources", names(sources.witnesses)}});
  auto cond_l = check_condition_L(*g);
  r.check("condition-L", cond_l.passed,
          cond_l.cycle ? Json{{"cycle without exit", format_path(*g, *cond_l.cycle)}} : Json(nullptr));
  auto sync = check_pair_sync(*g);
  Json witnesses = Json::array();
  for (const auto& w : sync.witnesses)
    witnesses.push_back(g->vertex_name(w.v) + ", " + g->vertex_name(w.w) + ": '" + format_path(*g, w.from_v) + "' / '" +
                        format_path(*g, w.from_w) + "'");
  Json detail{{"witnesses", witnesses}};
  if (sync.failing_pair)
    detail["failing pair"] = g->vertex_name(sync.failing_pair->first) + ", " + g->vertex_name(sync.failing_pair->second);
  r.check("pair-sync", sync.passed, detail);
  r.set("topologically transitive", check_topological_transitivity(*g));
  auto classes = tilde_classes(*g);
  Json cls = Json::array();
  for (const auto& c : classes.classes) cls.push_back(names(c));
  r.set("tilde classes", cls);
  if (classes.projection_support) r.set("central projection support", names(*classes.projection_support));
  return r;
}

Report algebra_eval(const std::string& file, std::string graph_path) {
  auto text = read_file(file);
  // An optional first line "graph: <path>" names the graph relative to the file.
  if (text.rfind("graph:", 0) == 0) {
    auto eol = text.find('\n');
    auto name = text.substr(6, eol == std::string::npos ? std::string::npos : eol - 6);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t\r") + 1);
    if (graph_path.empty()) graph_path = (std::filesystem::path(file).parent_path() / name).string();
    text = eol == std::string::npos ? "" : "\n" + text.substr(eol + 1);
  }
  if (graph_path.empty()) throw InputError("no graph: pass --graph or start the file with 'graph: <path>'");
  auto g = load_graph(graph_path);
  AlgebraElement a = AlgebraElement::zero(g);
  try {
    a = parse_expression(g, text);
  } catch (const ParseError& e) {
    throw InputError(file + ": " + e.what());
  }
  Report r("algebra eval " + file);
  r.set("normal form", a.to_string());
  r.set("terms", to_json(a));
  return r;
}

Report verify_relations(const std::string& path) {
  auto g = load_graph(path);
  Report r("algebra verify-relations " + path);
  auto rel = check_cuntz_relations(g);
  for (const auto& c : rel.checks) r.check(c.name, c.passed);
  return r;
}

Report oracle_test(std::uint64_t seed, std::size_t count, std::size_t graphs) {
  Report r("algebra oracle-test");
  auto t = random_oracle_test(seed, graphs, count);
  Json gs = Json::array();
  for (const auto& g : t.graphs) {
    std::string line;
    for (EdgeId e = 0; e < g->edge_count(); ++e)
      line += (e ? ", " : "") + g->edge_name(e) + ": " + g->vertex_name(g->origin(e)) + " -> " +
              g->vertex_name(g->target(e));
    gs.push_back(line);
  }
  r.check("normal-form product equals pointwise convolution", t.result.mismatches == 0,
          {{"triples", t.result.checked}, {"mismatches", t.result.mismatches}});
  if (t.result.first_mismatch) r.set("first mismatch", *t.result.first_mismatch);
  r.set("seed", seed);
  r.set("graphs", gs);
  return r;
}

Report watatani(const std::string& graph_path, const std::string& labels_path, std::uint64_t seed, std::size_t depth) {
  auto g = load_graph(graph_path);
  auto theta = load_labels(g, labels_path);
  Report r("watatani " + graph_path + " " + labels_path);
  auto qb = quasi_basis(theta);
  Json entries = Json::array();
  for (const auto& e : qb.entries)
    entries.push_back("s = " + theta.group().format(e.s) + ": u = " + e.u.to_string());
  r.set("quasi-basis", entries);
  Rng rng(seed);
  RandomElementSpec spec;
  spec.max_length = depth;
  try {
    auto index = watatani_index(qb, theta, rng, 100, spec);
    r.check("x = sum u_i F(v_i x) on 100 random elements", true);
    const auto order = theta.group().order();
    const bool scalar = order && index == AlgebraElement::scalar(g, Scalar(static_cast<long>(*order)));
    r.check("Ind F = " + (scalar ? std::to_string(*order) + "·1" : index.to_string()), scalar,
            {{"|group|", order ? Json(*order) : Json("infinite")}});
  } catch (const VerificationError& e) {
    r.check("x = sum u_i F(v_i x) on 100 random elements", false, {{"counterexample", e.what()}});
  }
  return r;
}

Report cocycle_factor(const std::string& graph_path, const std::string& labels_path, const std::string& cocycle_path,
                      std::uint64_t seed) {
  auto g = load_graph(graph_path);
  auto theta = load_labels(g, labels_path);
  Cocycle c = Cocycle::trivial();
  try {
    c = parse_cocycle(theta, read_file(cocycle_path));
  } catch (const ParseError& e) {
    throw InputError(cocycle_path + ": " + e.what());
  }
  Report r("cocycle factor " + cocycle_path);
  r.set("cocycle", c.describe());
  Rng rng(seed);
  try {
    auto f = factor_through_abelianization(c, theta, rng);
    r.check("factors through the abelianization", f.index.has_value(),
            {{"character index", f.index ? Json(*f.index) : Json(nullptr)}, {"character", f.chi.to_string()}});
    r.set("abelianization order", f.ab.quotient.size());
    r.set("certificate", f.certificate);
  } catch (const PreconditionError& e) {
    r.check("factors through the abelianization", false, {{"reason", e.what()}});
  } catch (const VerificationError& e) {
    r.check("factors through the abelianization", false, {{"counterexample", e.what()}});
  }
  return r;
}

Report cocycle_transitivity(const std::string& graph_path, const std::string& labels_path) {
  auto g = load_graph(graph_path);
  auto theta = load_labels(g, labels_path);
  Report r("cocycle transitivity " + graph_path + " " + labels_path);
  auto image = image_subgroup(theta);
  r.check("labels generate the group", image.full);
  auto kt = kernel_transitivity(theta);
  r.check("kernel transitivity", kt.passed,
          kt.failing ? Json{{"unjoined cylinders", path_pair(*g, kt.failing->first, kt.failing->second)}} : Json(nullptr));
  r.check("kernel minimality (sufficient criterion)", kernel_minimality_sufficient(theta));
  return r;
}

Report conjugacy(const std::string& p1, const std::string& p2, std::size_t w, std::size_t m, bool flip,
                 std::uint64_t seed) {
  auto g1 = load_graph(p1), g2 = load_graph(p2);
  Report r("conjugacy search " + p1 + " " + p2);
  r.set("bounds", {{"w", w}, {"m", m}, {"flip", flip}});
  try {
    auto s = eventual_conjugacy_search(g1, g2, {w, m, 2'000'000}, flip);
    const auto& cert = s.found ? s.found->certificate : s.certificate;
    r.set("candidates", {{"forward", cert.candidates_forward}, {"backward", cert.candidates_backward}});
    r.set("prune log", cert.prune_log);
    r.check(s.found ? "eventual conjugacy found" : "no eventual conjugacy within bounds", s.found.has_value());
    if (s.found) {
      const auto& phi = s.found->phi;
      r.set("sign", phi.sign);
      r.set("h", to_json(phi.h));
      r.set("h inverse", to_json(phi.h_inv));
      Json ids = Json::array();
      for (const auto& c : s.found->certificate.identities) ids.push_back(to_json(c));
      r.set("identities", ids);
      bool replayed = true;
      Json rep = Json::array();
      for (const auto& c : replay(*s.found, seed)) {
        replayed = replayed && c.passed;
        rep.push_back(to_json(c));
      }
      r.check("certificate replays", replayed, {{"checks", rep}});
    }
  } catch (const PreconditionError& e) {
    r.check("search hypotheses", false, {{"hypothesis", e.what()}});
  }
  return r;
}

Report flip_check(const std::string& path, std::size_t L) {
  auto g = load_graph(path);
  Report r("flip check " + path);
  auto found = flip_obstruction_search(*g, L);
  if (!found) {
    r.check("flip obstruction with pieces of length <= " + std::to_string(L), false, {{"result", "absent"}});
    return r;
  }
  Json pieces = Json::array();
  for (const auto& p : found->U.paths) pieces.push_back("C(" + format_path(*g, p) + ")");
  r.set("U", pieces);
  auto v = verify_flip_obstruction(*g, found->U);
  r.check("T(U) = X", v.image_is_whole);
  r.check("T injective on U", v.injective);
  r.check("U is a proper subset of X", v.proper);
  return r;
}

Report weyl_enumerate(const std::string& path, std::size_t w, std::size_t m) {
  auto g = load_graph(path);
  Report r("weyl enumerate " + path);
  r.set("bounds", {{"w", w}, {"m", m}});
  WeylEnumeration e;
  try {
    e = enumerate_A(g, {w, m, 2'000'000});
  } catch (const HypothesisError& err) {
    r.check("hypothesis: " + err.hypothesis(), false, {{"reason", err.what()}});
    return r;
  }
  for (const auto& h : e.hypotheses) r.check("hypothesis: " + h.name, h.passed);
  bool certified = true;
  Json certs = Json::array();
  for (const auto& c : e.certificates) {
    certified = certified && c.passed;
    certs.push_back(to_json(c));
  }
  r.check(std::to_string(e.automorphisms.size()) + " automorphisms certified", certified);
  Json autos = Json::array();
  for (const auto& a : e.automorphisms) autos.push_back(to_json(a.h));
  r.set("automorphisms", autos);
  Json table = Json::array();
  for (const auto& row : e.table) {
    Json jr = Json::array();
    for (const auto& c : row) jr.push_back(c ? Json(*c) : Json("out-of-bound"));
    table.push_back(jr);
  }
  r.set("composition table", table);
  r.set("certificates", certs);
  r.set("log", e.log);
  return r;
}

Report semidirect_test(std::uint64_t seed, const std::string& graph_path, std::size_t pairs, std::size_t depth) {
  auto g = graph_path.empty() ? std::make_shared<const Graph>(parse_graph(kRose2)) : load_graph(graph_path);
  Report r("weyl semidirect-test");
  try {
    auto rep = semidirect_random_test(g, seed, pairs, depth);
    r.check("composition law on all monomials of depth <= " + std::to_string(depth), rep.passed,
            {{"pairs", rep.pairs}, {"monomial checks", rep.monomials}});
    if (rep.counterexample) r.set("counterexample", *rep.counterexample);
  } catch (const HypothesisError& err) {
    r.check("hypothesis: " + err.hypothesis(), false, {{"reason", err.what()}});
  }
  r.set("seed", seed);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks on graph groupoids, their algebras, cocycles and eventual conjugacies"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals gl;
  app.add_flag("--json", gl.json, "Emit the report as JSON");
  app.add_option("--seed", gl.seed, "Seed for all sampling");
  app.add_option("--max-depth", gl.max_depth, "Monomial depth and random path length bound")->check(CLI::PositiveNumber);
  app.add_option("--threads", gl.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  std::function<Report()> run;
  std::string a1, a2, a3;
  std::size_t w = 1, m = 0, L = 1, count = 10000, graphs = 5, pairs = 20;
  bool flip = false;

  auto* graph = app.add_subcommand("graph", "Graph criteria");
  graph->require_subcommand(1);
  auto* gcheck = graph->add_subcommand("check", "No sinks/sources, condition (L), pair synchronization");
  gcheck->add_option("graph", a1)->required();
  gcheck->callback([&] { run = [&] { return graph_check(a1); }; });

  auto* alg = app.add_subcommand("algebra", "Path-pair algebra");
  alg->require_subcommand(1);
  auto* eval = alg->add_subcommand("eval", "Normal form of an expression");
  eval->add_option("expr-file", a1)->required();
  eval->add_option("--graph", a2, "Graph file (else the expression file's 'graph:' line)");
  eval->callback([&] { run = [&] { return algebra_eval(a1, a2); }; });
  auto* rel = alg->add_subcommand("verify-relations", "Cuntz-Krieger relations");
  rel->add_option("graph", a1)->required();
  rel->callback([&] { run = [&] { return verify_relations(a1); }; });
  auto* oracle = alg->add_subcommand("oracle-test", "Product against pointwise convolution");
  oracle->add_option("--count", count, "Number of (a, b, point) triples")->check(CLI::PositiveNumber);
  oracle->add_option("--graphs", graphs, "Number of random graphs")->check(CLI::PositiveNumber);
  oracle->callback([&] { run = [&] { return oracle_test(gl.seed, count, graphs); }; });

  auto* wat = app.add_subcommand("watatani", "Quasi-basis and index of the kernel expectation");
  wat->add_option("graph", a1)->required();
  wat->add_option("labels", a2)->required();
  wat->callback([&] { run = [&] { return watatani(a1, a2, gl.seed, gl.max_depth); }; });

  auto* coc = app.add_subcommand("cocycle", "Cocycles of a labeling");
  coc->require_subcommand(1);
  auto* factor = coc->add_subcommand("factor", "Factor a cocycle through the abelianization");
  factor->add_option("graph", a1)->required();
  factor->add_option("labels", a2)->required();
  factor->add_option("cocycle", a3)->required();
  factor->callback([&] { run = [&] { return cocycle_factor(a1, a2, a3, gl.seed); }; });
  auto* trans = coc->add_subcommand("transitivity", "Kernel transitivity and minimality");
  trans->add_option("graph", a1)->required();
  trans->add_option("labels", a2)->required();
  trans->callback([&] { run = [&] { return cocycle_transitivity(a1, a2); }; });

  auto* conj = app.add_subcommand("conjugacy", "Eventual conjugacy");
  conj->require_subcommand(1);
  auto* search = conj->add_subcommand("search", "Bounded-window search");
  search->add_option("g1", a1)->required();
  search->add_option("g2", a2)->required();
  search->add_option("--w", w, "Block and extra head window")->check(CLI::PositiveNumber);
  search->add_option("--m", m, "Largest lag");
  search->add_flag("--flip", flip, "Also consider degree-reversing conjugacies");
  search->callback([&] { run = [&] { return conjugacy(a1, a2, w, m, flip, gl.seed); }; });

  auto* fl = app.add_subcommand("flip", "Flip obstructions");
  fl->require_subcommand(1);
  auto* fcheck = fl->add_subcommand("check", "Search for U with T(U) = X, T injective on U, U proper");
  fcheck->add_option("graph", a1)->required();
  fcheck->add_option("--L", L, "Longest cylinder path")->check(CLI::PositiveNumber);
  fcheck->callback([&] { run = [&] { return flip_check(a1, L); }; });

  auto* weyl = app.add_subcommand("weyl", "Weyl group data");
  weyl->require_subcommand(1);
  auto* en = weyl->add_subcommand("enumerate", "Invertible eventual automorphisms within bounds");
  en->add_option("graph", a1)->required();
  en->add_option("--w", w, "Block and extra head window")->check(CLI::PositiveNumber);
  en->add_option("--m", m, "Largest lag");
  en->callback([&] { run = [&] { return weyl_enumerate(a1, w, m); }; });
  auto* semi = weyl->add_subcommand("semidirect-test", "Composition law of (automorphism, cocycle) pairs");
  semi->add_option("--graph", a1, "Graph file (default: the 2-rose)");
  semi->add_option("--pairs", pairs, "Number of random ordered pairs")->check(CLI::PositiveNumber);
  semi->callback([&] { run = [&] { return semidirect_test(gl.seed, a1, pairs, gl.max_depth); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (gl.threads > 0) omp_set_num_threads(gl.threads);

  try {
    auto report = run();
    std::cout << (gl.json ? report.json() : report.text());
    return report.passed() ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  }
}
