// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <set>
#include <sys/wait.h>

#include <json.hpp>

#include "support.hpp"
#include "weylgraph/errors.hpp"
#include "weylgraph/kernels.hpp"
#include "weylgraph/weyl.hpp"

using namespace weylgraph;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

struct Run {
  int status = -1;
  std::string out;
  double seconds = 0;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(WEYLGRAPH_CLI) + " " + args + " 2>&1";
  Run r;
  auto t0 = Clock::now();
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string fixture_path(const std::string& name) { return std::string(WEYLGRAPH_FIXTURE_DIR) + "/" + name; }

// Collects failure reasons for one criterion.
struct Criterion {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int failed = 0;

void run(int id, const std::string& title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = c.failures.empty();
  failed += !ok;
  std::printf("%s criterion %2d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), s);
  for (const auto& n : c.notes) std::printf("       note: %s\n", n.c_str());
  for (const auto& f : c.failures) std::printf("       failed: %s\n", f.c_str());
  std::fflush(stdout);
}

// Synchronous pair-graph reachability of the diagonal, written out independently.
bool pairs_meet(const Graph& g, VertexId v, VertexId w) {
  std::set<std::pair<VertexId, VertexId>> seen{{v, w}};
  std::queue<std::pair<VertexId, VertexId>> todo;
  todo.push({v, w});
  while (!todo.empty()) {
    auto [x, y] = todo.front();
    todo.pop();
    if (x == y) return true;
    for (auto e : g.out_edges(x))
      for (auto f : g.out_edges(y))
        if (seen.insert({g.target(e), g.target(f)}).second) todo.push({g.target(e), g.target(f)});
  }
  return false;
}

// A cycle without an exit: every vertex along a closed cycle has out-degree 1.
bool cycle_without_exit(const Graph& g, const FinitePath& c) {
  if (c.empty() || c.origin() != c.target()) return false;
  for (auto e : c.edges())
    if (g.out_edges(g.origin(e)).size() != 1) return false;
  return true;
}

std::vector<FinitePath> paths_up_to(const Graph& g, std::size_t n) {
  std::vector<FinitePath> out;
  for (std::size_t k = 0; k <= n; ++k)
    for (auto& p : paths_of_length(g, k)) out.push_back(p);
  return out;
}

// Sign of a permutation from its cycle notation "(1 2)(3 4 5)".
int sign_from_cycles(const std::string& s) {
  int sign = 1, len = 0;
  for (char ch : s) {
    if (ch == '(') len = 0;
    else if (ch == ' ') ++len;
    else if (ch == ')' && len % 2 == 1) sign = -sign;
  }
  return sign;
}

}  // namespace

int main() {
  const auto rose2 = fixture_graph("rose2");

  run(1, "Cuntz relations on the 2-rose and 3-rose via the CLI, exact, < 1 s", [](Criterion& c) {
    for (const auto* g : {"rose2.graph", "rose3.graph"}) {
      auto r = cli("--json algebra verify-relations " + fixture_path(g));
      c.require(r.status == 0, std::string(g) + ": exit status " + std::to_string(r.status));
      c.require(r.seconds < 1.0, std::string(g) + ": took " + std::to_string(r.seconds) + " s");
      auto j = nlohmann::json::parse(r.out);
      const std::size_t n = std::string(g) == "rose2.graph" ? 2 : 3;
      // n² products S_i^*S_j, one sum relation, plus the vertex projection checks.
      c.require(j["checks"].size() >= n * n + 1, std::string(g) + ": too few relations checked");
      for (const auto& ch : j["checks"]) c.require(ch["passed"].get<bool>(), ch["name"].get<std::string>());
    }
  });

  run(2, "10,000 product-vs-convolution triples over 5 random graphs, exact, < 30 s", [](Criterion& c) {
    auto t0 = Clock::now();
    auto t = random_oracle_test(2024, 5, 10000);
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    c.require(t.graphs.size() == 5, "graph count");
    for (const auto& g : t.graphs) c.require(g->vertex_count() <= 4 && g->edge_count() <= 6, "graph too large");
    c.require(t.result.checked == 10000, "checked " + std::to_string(t.result.checked));
    c.require(t.result.mismatches == 0, "mismatches: " + std::to_string(t.result.mismatches) + " first: " +
                                            t.result.first_mismatch.value_or(""));
    c.require(s < 30.0, "took " + std::to_string(s) + " s");
  });

  run(3, "Watatani index 2·1 (Z/2 parity) and 6·1 (S3), quasi-basis identity on 100 elements", [&](Criterion& c) {
    Rng rng(3);
    for (auto [labels, order] : {std::pair{"z2_parity", 2L}, std::pair{"s3", 6L}}) {
      auto theta = fixture_labels(rose2, labels);
      auto qb = quasi_basis(theta);
      // watatani_index throws VerificationError if x = Σ u_i F(v_i x) fails on a sample.
      auto index = watatani_index(qb, theta, rng, 100);
      c.require(index == AlgebraElement::scalar(rose2, Scalar(order)),
                std::string(labels) + ": index " + index.to_string());
    }
    c.notes.push_back("an n!-valued index for the n-rose disagrees with the order of the group: the 2-rose with "
                      "labels (1 2), (2 3) in S3 has index 6 = |S3|, not 2! = 2; the |group| value is what holds");
  });

  run(4, "200 random degree <= 3 elements: Z/8-gauge fixed iff fixed by the length-kernel expectation", [&](Criterion& c) {
    Rng rng(4);
    auto gauge = EdgeLabeling::length_mod(rose2, 8);
    auto length = EdgeLabeling::length(rose2);
    auto chars = enumerate_characters(gauge.group().finite_group());
    std::size_t fixed = 0;
    for (int i = 0; i < 200; ++i) {
      RandomElementSpec spec;
      spec.terms = 1 + rng.below(3);
      spec.max_length = 3;
      auto a = random_element(rose2, rng, spec);
      bool by_gauge = true;
      for (const auto& chi : chars) by_gauge = by_gauge && group_act(a, chi, gauge) == a;
      const bool by_expectation = expectation_kernel(a, length) == a;
      bool degree_zero = true;
      for (const auto& [m, coeff] : a.terms()) degree_zero = degree_zero && m.mu.length() == m.nu.length();
      c.require(by_gauge == by_expectation, "disagreement on " + a.to_string());
      c.require(by_gauge == degree_zero, "degree oracle disagrees on " + a.to_string());
      fixed += by_gauge;
    }
    c.require(fixed > 0 && fixed < 200, "sample has only one kind of element");
    c.notes.push_back(std::to_string(fixed) + " of 200 fixed");
  });

  run(5, "S3 labeling: kernel-vanishing edge cocycles are {trivial, sign}; character round trip", [&](Criterion& c) {
    Rng rng(5);
    auto theta = fixture_labels(rose2, "s3");
    auto ab = abelianize(theta.group().finite_group());
    auto chars = enumerate_characters(ab.quotient);
    c.require(ab.quotient.size() == 2 && chars.size() == 2, "abelianization is not Z/2");
    auto found = kernel_vanishing_edge_cocycles(theta, 6, 3);
    c.require(found.size() == 2, "found " + std::to_string(found.size()) + " cocycles");
    std::set<std::vector<int>> got, want{{1, 1}};
    std::vector<int> sign;
    for (EdgeId e = 0; e < rose2->edge_count(); ++e)
      sign.push_back(sign_from_cycles(theta.group().format(theta.label(e))));
    want.insert(sign);
    for (const auto& k : found) {
      std::vector<int> values;
      for (EdgeId e = 0; e < rose2->edge_count(); ++e) {
        auto arrow = random_arrow_in(*rose2, rng, {FinitePath::of(*rose2, {e}), FinitePath::at(rose2->origin(e))});
        auto v = eval_circle(k, arrow);
        values.push_back(v.is_one() ? 1 : v == RootOfUnity::make(1, 2) ? -1 : 0);
      }
      got.insert(values);
    }
    c.require(got == want, "edge values differ from {trivial, sign}");
    for (std::size_t i = 0; i < chars.size(); ++i) {
      auto f = factor_through_abelianization(Cocycle::labeled(theta, lift_character(chars[i], ab)), theta, rng);
      c.require(f.index == i && f.chi == chars[i], "round trip fails for character " + std::to_string(i));
    }
  });

  run(6, "condition (L) and pair-sync verdicts on 8 fixtures, witnesses replayed", [](Criterion& c) {
    // name -> (condition L, pair sync)
    const std::map<std::string, std::pair<bool, bool>> expected{
        {"rose2", {true, true}},          {"rose3", {true, true}},           {"loop1", {false, true}},
        {"disjoint_loops", {false, false}}, {"golden_mean", {true, true}},   {"cycle3_extra", {true, false}},
        {"subdivided_rose", {true, false}}, {"two_cycle_loop", {true, true}}};
    for (const auto& [name, verdict] : expected) {
      auto g = fixture_graph(name);
      auto l = check_condition_L(*g);
      c.require(l.passed == verdict.first, name + ": condition (L) verdict");
      if (!l.passed) c.require(l.cycle && cycle_without_exit(*g, *l.cycle), name + ": (L) witness does not replay");
      auto s = check_pair_sync(*g);
      c.require(s.passed == verdict.second, name + ": pair-sync verdict");
      for (const auto& w : s.witnesses)
        c.require(w.from_v.origin() == w.v && w.from_w.origin() == w.w && w.from_v.length() == w.from_w.length() &&
                      w.from_v.target() == w.from_w.target(),
                  name + ": sync witness does not replay");
      if (s.passed) {
        for (VertexId v = 0; v < g->vertex_count(); ++v)
          for (VertexId w = v + 1; w < g->vertex_count(); ++w) c.require(pairs_meet(*g, v, w), name + ": oracle disagrees");
      } else {
        c.require(s.failing_pair && !pairs_meet(*g, s.failing_pair->first, s.failing_pair->second),
                  name + ": failing pair does not replay");
      }
    }
  });

  run(7, "flip check --L 1: U = C(a) on the 2-rose, absent on the single loop", [&](Criterion& c) {
    auto r = cli("--json flip check " + fixture_path("rose2.graph") + " --L 1");
    c.require(r.status == 0, "2-rose exit status " + std::to_string(r.status));
    auto j = nlohmann::json::parse(r.out);
    c.require(j["data"]["U"] == nlohmann::json::array({"C(a)"}), "U = " + j["data"]["U"].dump());
    c.require(j["checks"].size() == 3, "expected three verified properties");
    for (const auto& ch : j["checks"]) c.require(ch["passed"].get<bool>(), ch["name"].get<std::string>());
    // Oracle on words: T maps a·w to w, so words of length 4 in C(a) hit every word of length 3 once.
    const Graph& g = *rose2;
    std::map<FinitePath, int> hits;
    for (const auto& w : paths_of_length(g, 4))
      if (w[0] == 0) ++hits[drop_front(g, w, 1)];
    c.require(hits.size() == paths_of_length(g, 3).size(), "oracle: T(C(a)) misses a word");
    for (const auto& [w, n] : hits) c.require(n == 1, "oracle: T not injective on C(a)");
    auto loop = cli("flip check " + fixture_path("loop1.graph") + " --L 1");
    c.require(loop.status == 1, "single loop exit status " + std::to_string(loop.status));
    c.require(loop.out.find("absent") != std::string::npos, "single loop does not report absent");
  });

  run(8, "Weyl enumeration on the 2-rose (w = 1, m <= 1) has identity and flip, flip o flip = id", [&](Criterion& c) {
    auto e = enumerate_A(rose2, {1, 1, 2'000'000});
    auto index_of = [&](const EventualAutomorphism& h) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < e.automorphisms.size(); ++i)
        if (same_map(e.automorphisms[i].h, h)) return i;
      return std::nullopt;
    };
    auto id = index_of(identity_automorphism(rose2));
    auto flip = index_of(first_symbol_map(rose2, {1, 0}));
    c.require(id.has_value(), "identity missing");
    c.require(flip.has_value(), "first-symbol flip missing");
    if (!id || !flip) return;
    c.require(check_property_P(e.automorphisms[*id].h).passed, "identity fails property (P)");
    c.require(check_property_P(e.automorphisms[*flip].h).passed, "flip fails property (P)");
    c.require(e.table[*flip][*flip] == id, "flip o flip is not the identity");
    c.notes.push_back(std::to_string(e.automorphisms.size()) + " automorphisms within the bounds");
  });

  run(9, "semidirect law for 20 random (automorphism, cocycle) pairs on monomials of depth <= 3", [&](Criterion& c) {
    auto rep = semidirect_random_test(rose2, 9, 20, 3);
    c.require(rep.pairs == 20, "pairs " + std::to_string(rep.pairs));
    c.require(rep.passed, rep.counterexample.value_or("failed"));
    c.notes.push_back(std::to_string(rep.monomials) + " monomial checks");
  });

  run(10, "separating coboundary for every non-diagonal monomial of depth <= 3 on the 2-rose", [&](Criterion& c) {
    const Graph& g = *rose2;
    auto paths = paths_up_to(g, 3);
    std::size_t n = 0;
    for (const auto& mu : paths)
      for (const auto& nu : paths) {
        if (mu == nu) continue;
        auto s = find_separating_coboundary(rose2, mu, nu);
        const auto label = format_bisection(g, {mu, nu});
        c.require(!s.value.is_one(), label + ": value 1");
        c.require(bisection_contains(g, BasicBisection{mu, nu}, s.witness), label + ": witness outside Z(mu, nu)");
        // Recompute c(α) = f(r(α)) / f(s(α)) from the function itself.
        c.require(s.value == s.f(g, s.witness.target()) * s.f(g, s.witness.source()).inverse(), label + ": value");
        c.require(eval_circle(s.cocycle, s.witness) == s.value, label + ": cocycle value");
        ++n;
      }
    c.notes.push_back(std::to_string(n) + " monomials");
  });

  run(11, "conjugacy search: self-conjugacy on all fixtures, 2-rose vs loop pruned, certificates replay", [](Criterion& c) {
    for (const auto* name : {"rose2", "rose3", "loop1", "disjoint_loops", "golden_mean", "cycle3_extra",
                             "subdivided_rose", "two_cycle_loop"}) {
      auto g = fixture_graph(name);
      auto s = eventual_conjugacy_search(g, g, {1, 0, 2'000'000}, false);
      c.require(s.found.has_value(), std::string(name) + ": no self-conjugacy found");
      if (!s.found) continue;
      bool property_p = false, orbit = false;
      for (const auto& chk : replay(*s.found, 11)) {
        c.require(chk.passed, std::string(name) + ": replay failed: " + chk.name);
        property_p = property_p || chk.name.find("property (P)") != std::string::npos;
        orbit = orbit || chk.name.find("orbit map") != std::string::npos;
      }
      c.require(property_p && orbit, std::string(name) + ": replay skipped property (P) or the orbit map");
    }
    auto none = eventual_conjugacy_search(fixture_graph("rose2"), fixture_graph("loop1"), {1, 0, 2'000'000}, true);
    c.require(!none.found, "2-rose vs loop reported conjugate");
    bool pruned = false;
    for (const auto& line : none.certificate.prune_log) pruned = pruned || line.find("structural prune") == 0;
    c.require(pruned, "no structural-prune certificate");
  });

  std::printf("%d of 11 criteria failed\n", failed);
  return failed;
}
