#include <doctest.h>

#include <functional>
#include <set>

#include "support.hpp"
#include "weylgraph/errors.hpp"
#include "weylgraph/graph.hpp"

using namespace weylgraph;
using testsupport::fixture_graph;
using testsupport::graph;

namespace {

std::set<VertexId> step(const Graph& g, const std::set<VertexId>& from) {
  std::set<VertexId> out;
  for (VertexId v : from)
    for (EdgeId e : g.out_edges(v)) out.insert(g.target(e));
  return out;
}

// Equal-length common targets by iterating exact-length reachable sets.
bool brute_pair_sync(const Graph& g, VertexId v, VertexId w) {
  std::set<VertexId> a{v}, b{w};
  std::size_t bound = g.vertex_count() * g.vertex_count();
  for (std::size_t n = 0; n <= bound; ++n) {
    for (VertexId x : a)
      if (b.count(x)) return true;
    a = step(g, a);
    b = step(g, b);
  }
  return false;
}

std::set<VertexId> reachable(const Graph& g, VertexId v) {
  std::set<VertexId> seen{v}, frontier{v};
  while (!frontier.empty()) {
    std::set<VertexId> next;
    for (VertexId x : step(g, frontier))
      if (seen.insert(x).second) next.insert(x);
    frontier = next;
  }
  return seen;
}

// Every simple cycle, found by DFS from its least vertex; true iff each has an exit.
bool brute_condition_L(const Graph& g) {
  bool ok = true;
  std::vector<EdgeId> stack;
  std::vector<bool> on(g.vertex_count(), false);
  std::function<void(VertexId, VertexId)> dfs = [&](VertexId start, VertexId v) {
    for (EdgeId e : g.out_edges(v)) {
      VertexId t = g.target(e);
      if (t < start) continue;
      if (t == start) {
        stack.push_back(e);
        bool exit = false;
        for (EdgeId c : stack)
          if (g.out_edges(g.origin(c)).size() > 1) exit = true;
        ok = ok && exit;
        stack.pop_back();
      } else if (!on[t]) {
        on[t] = true;
        stack.push_back(e);
        dfs(start, t);
        stack.pop_back();
        on[t] = false;
      }
    }
  };
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    on[s] = true;
    dfs(s, s);
    on[s] = false;
  }
  return ok;
}

}  // namespace

TEST_CASE("parse_graph builds declaration-ordered graphs") {
  auto g = parse_graph("vertices: v\nedge a v v\nedge b v v");
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 2);
  CHECK(g.edge_name(1) == "b");
  auto sink = parse_graph("vertices: v w\nedge a v w");
  CHECK(sink.target(0) == 1);
  CHECK(parse_graph(format_graph(g)) == g);
}

TEST_CASE("parse_graph reports line numbers") {
  try {
    parse_graph("vertices: v w\n# c\nedge a v u\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_graph("vertices: v v\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("vertices: v\nedge a v v\nedge a v v\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("vertices: v\nedgy a v v\n"), ParseError);
}

TEST_CASE("sinks and sources") {
  auto rose = fixture_graph("rose2");
  CHECK(check_no_sinks(*rose).passed);
  CHECK(check_no_sources(*rose).passed);
  auto vw = parse_graph("vertices: v w\nedge a v w");
  auto sinks = check_no_sinks(vw);
  CHECK_FALSE(sinks.passed);
  CHECK(sinks.witnesses == std::vector<VertexId>{1});
  auto sources = check_no_sources(vw);
  CHECK(sources.witnesses == std::vector<VertexId>{0});
  CHECK_FALSE(check_no_sinks(parse_graph("vertices: v\n")).passed);
  CHECK(check_no_sources(*fixture_graph("loop1")).passed);
}

TEST_CASE("condition L verdicts and witnesses") {
  CHECK(check_condition_L(*fixture_graph("rose2")).passed);
  auto loop = check_condition_L(*fixture_graph("loop1"));
  REQUIRE_FALSE(loop.passed);
  CHECK(loop.cycle->edges() == std::vector<EdgeId>{0});
  auto g = fixture_graph("cycle3_extra");
  CHECK(check_condition_L(*g).passed);
  CHECK(brute_condition_L(*g));
}

TEST_CASE("pair sync and transitivity on fixtures") {
  CHECK(check_pair_sync(*fixture_graph("rose2")).passed);
  auto dl = check_pair_sync(*fixture_graph("disjoint_loops"));
  CHECK_FALSE(dl.passed);
  CHECK(dl.failing_pair == std::pair<VertexId, VertexId>{0, 1});
  CHECK(check_topological_transitivity(*fixture_graph("rose2")));
  CHECK_FALSE(check_topological_transitivity(*fixture_graph("disjoint_loops")));
  CHECK(check_topological_transitivity(*fixture_graph("two_cycle_loop")));
  auto sub = fixture_graph("subdivided_rose");
  CHECK(check_pair_sync(*sub).passed == brute_pair_sync(*sub, 0, 1));
  CHECK_THROWS_AS(check_topological_transitivity(parse_graph("vertices: v w\nedge a v w")),
                  PreconditionError);
}

TEST_CASE("tilde classes") {
  auto rose = tilde_classes(*fixture_graph("rose2"));
  CHECK(rose.classes.size() == 1);
  CHECK_FALSE(rose.projection_support);
  auto dl = tilde_classes(*fixture_graph("disjoint_loops"));
  CHECK(dl.classes.size() == 2);
  CHECK(dl.projection_support == std::vector<VertexId>{0});
}

TEST_CASE("the closure of pair-sync can be one class without pair-sync") {
  // v and w both meet u, but their futures are disjoint loops.
  auto g = parse_graph(
      "vertices: u v w x y\nedge a u x\nedge b u y\nedge c v x\nedge d w y\n"
      "edge e x x\nedge f y y\n");
  CHECK_FALSE(check_pair_sync(g).passed);
  CHECK(tilde_classes(g).classes.size() == 1);
}

TEST_CASE("graph criteria agree with brute force on random graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t nv = 1 + rng.below(4), ne = nv + rng.below(4);
    auto g = testsupport::random_graph(rng, nv, ne, trial % 3 != 0);
    CHECK(check_condition_L(*g).passed == brute_condition_L(*g));
    auto sync = check_pair_sync(*g);
    bool all = true;
    for (VertexId v = 0; v < nv; ++v)
      for (VertexId w = 0; w < nv; ++w) all = all && brute_pair_sync(*g, v, w);
    CHECK(sync.passed == all);
    for (const auto& wit : sync.witnesses) {
      CHECK(wit.from_v.origin() == wit.v);
      CHECK(wit.from_w.origin() == wit.w);
      CHECK(wit.from_v.length() == wit.from_w.length());
      CHECK(wit.from_v.target() == wit.from_w.target());
    }
    auto classes = tilde_classes(*g);
    if (sync.passed) CHECK(classes.classes.size() == 1);
    // Classes are the closure of the brute-force relation.
    std::vector<std::size_t> cls(nv);
    for (std::size_t c = 0; c < classes.classes.size(); ++c)
      for (VertexId v : classes.classes[c]) cls[v] = c;
    for (VertexId v = 0; v < nv; ++v)
      for (VertexId w = 0; w < nv; ++w)
        if (brute_pair_sync(*g, v, w)) CHECK(cls[v] == cls[w]);
    for (const auto& c : classes.classes) {
      std::set<VertexId> reached{c.front()}, frontier{c.front()};
      while (!frontier.empty()) {
        std::set<VertexId> next;
        for (VertexId x : frontier)
          for (VertexId y = 0; y < nv; ++y)
            if (brute_pair_sync(*g, x, y) && reached.insert(y).second) next.insert(y);
        frontier = next;
      }
      CHECK(reached == std::set<VertexId>(c.begin(), c.end()));
    }
    if (auto l = check_condition_L(*g); !l.passed)
      for (EdgeId e : l.cycle->edges()) CHECK(g->out_edges(g->origin(e)).size() == 1);
    if (check_no_sinks(*g).passed) {
      bool trans = true;
      for (VertexId v = 0; v < nv; ++v)
        for (VertexId w = 0; w < nv; ++w) {
          auto a = reachable(*g, v), b = reachable(*g, w);
          bool meet = false;
          for (VertexId x : a) meet = meet || b.count(x);
          trans = trans && meet;
        }
      CHECK(check_topological_transitivity(*g) == trans);
      if (sync.passed) CHECK(trans);
    }
    CHECK(check_pair_sync(*g).witnesses.size() == sync.witnesses.size());
  }
}
