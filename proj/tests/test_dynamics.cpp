#include <doctest.h>

#include "support.hpp"
#include "weylgraph/dynamics.hpp"
#include "weylgraph/errors.hpp"
#include "weylgraph/sampling.hpp"

using namespace weylgraph;
using testsupport::fixture_graph;

namespace {

const char* kFixtures[] = {"rose2",        "rose3",       "loop1",           "disjoint_loops",
                           "cycle3_extra", "two_cycle_loop", "subdivided_rose", "golden_mean"};

EventualAutomorphism rose_flip(const GraphPtr& g) { return first_symbol_map(g, {1, 0}); }

// First n symbols of h(x), read straight off the rule tables.
std::vector<EdgeId> rule_image(const EventualAutomorphism& h, const EvPeriodicPath& x, std::size_t n) {
  const Graph& g = *h.source;
  auto window = [&](std::int64_t start, std::size_t len) {
    std::vector<EdgeId> e;
    for (std::size_t i = 0; i < len; ++i) e.push_back(x.at(static_cast<std::size_t>(start) + i));
    VertexId base = start == 0 ? x.origin() : g.target(x.at(static_cast<std::size_t>(start) - 1));
    return FinitePath::of(g, base, e);
  };
  std::vector<EdgeId> out = h.head.at(window(0, h.head_window)).edges();
  for (std::size_t j = h.m; j < n; ++j)
    out.push_back(h.block.at(window(static_cast<std::int64_t>(j) + h.block_offset, h.block_window)));
  out.resize(n);
  return out;
}

// Points through every core word of length ≤ n.
std::vector<EvPeriodicPath> points(const Graph& g, std::size_t n) {
  std::vector<EvPeriodicPath> pts;
  for (std::size_t l = 0; l <= n; ++l)
    for (const auto& w : paths_of_length(g, l)) pts.push_back(continuation(g, w));
  return pts;
}

bool same_on(const EventualAutomorphism& a, const EventualAutomorphism& b, const std::vector<EvPeriodicPath>& pts) {
  for (const auto& p : pts)
    if (apply(a, p) != apply(b, p)) return false;
  return true;
}

}  // namespace

TEST_CASE("first-symbol flip on the 2-rose") {
  auto g = fixture_graph("rose2");
  auto flip = rose_flip(g);
  REQUIRE_FALSE(validate(flip).has_value());
  CHECK(format_point(*g, apply(flip, parse_point(*g, "| a"))) == "b | a");
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto x = random_point(*g, rng);
    CHECK(apply(flip, apply(flip, x)) == x);
    CHECK(apply(flip, x).take(12) == rule_image(flip, x, 12));
  }
  CHECK(check_property_P(flip).passed);
  CHECK(check_property_P(flip, 1).passed);
  CHECK_FALSE(check_property_P(flip, 0).passed);
  CHECK(same_map(compose(flip, flip), identity_automorphism(g)));
  auto id = compose(flip, flip);
  CHECK(id.m == 0);
  CHECK(id.head_window == 0);
  CHECK(id.block_window == 1);
}

TEST_CASE("property (P) agrees with a pointwise oracle") {
  auto g = fixture_graph("rose2");
  auto small = enumerate_candidates(g, g, {1, 1, 2'000'000});
  auto wide = enumerate_candidates(g, g, {2, 1, 2'000'000});
  REQUIRE(wide.maps.size() > 1000);
  std::vector<EventualAutomorphism> maps = small.maps;
  for (std::size_t i = 0; i < wide.maps.size(); i += 41) maps.push_back(wide.maps[i]);
  auto pts = points(*g, 6);
  std::size_t shown_false = 0;
  for (const auto& h : maps) {
    for (std::size_t lag = 0; lag <= 2; ++lag) {
      bool oracle = true;
      for (const auto& p : pts)
        if (shift(*g, apply(h, p), lag + 1) != shift(*g, apply(h, shift(*g, p)), lag)) oracle = false;
      CHECK(check_property_P(h, lag).passed == oracle);
      shown_false += !oracle;
    }
  }
  CHECK(shown_false > 0);
}

TEST_CASE("rule application, composition and inverses against pointwise oracles") {
  for (const char* name : {"rose2", "golden_mean", "cycle3_extra"}) {
    CAPTURE(name);
    auto g = fixture_graph(name);
    auto cands = enumerate_candidates(g, g, {1, 1, 2'000'000});
    REQUIRE_FALSE(cands.maps.empty());
    auto pts = points(*g, 6);
    Rng rng(11);
    for (const auto& h : cands.maps) {
      CHECK_FALSE(validate(h).has_value());
      for (int i = 0; i < 5; ++i) {
        auto x = random_point(*g, rng);
        CHECK(apply(h, x).take(10) == rule_image(h, x, 10));
      }
    }
    for (std::size_t i = 0; i < cands.maps.size(); i += 3)
      for (std::size_t j = 0; j < cands.maps.size(); j += 5) {
        const auto& a = cands.maps[i];
        const auto& b = cands.maps[j];
        auto c = compose(a, b);
        for (const auto& p : pts) CHECK(apply(c, p) == apply(a, apply(b, p)));
        bool oracle = true;
        for (const auto& p : pts) oracle = oracle && apply(a, apply(b, p)) == p;
        // Points through all words of length 6 separate maps of this size.
        CHECK(check_left_inverse(a, b).passed == oracle);
        CHECK(same_map(a, b) == same_on(a, b, pts));
      }
  }
}

TEST_CASE("canonical presentations") {
  auto g = fixture_graph("rose2");
  auto flip = rose_flip(g);
  // Pad the flip with an unused block symbol and a longer head window.
  EventualAutomorphism padded = flip;
  padded.block_window = 2;
  padded.block.clear();
  for (const auto& w : paths_of_length(*g, 2)) padded.block.emplace(w, w[0]);
  padded.head_window = 2;
  padded.head.clear();
  for (const auto& w : paths_of_length(*g, 2)) padded.head.emplace(w, FinitePath::of(*g, {w[0] == 0 ? 1u : 0u}));
  REQUIRE_FALSE(validate(padded).has_value());
  auto c = canonicalize(padded);
  CHECK(c.block_window == 1);
  CHECK(c.head_window == 1);
  CHECK(c.m == 1);
  CHECK(same_map(c, flip));
}

TEST_CASE("serial and parallel enumeration agree") {
  for (const char* name : {"rose2", "golden_mean", "two_cycle_loop"}) {
    CAPTURE(name);
    auto g = fixture_graph(name);
    SearchBounds b{2, 1, 2'000'000};
    auto s = enumerate_candidates(g, g, b, Execution::serial);
    auto p = enumerate_candidates(g, g, b, Execution::parallel);
    CHECK(s.enumerated == p.enumerated);
    CHECK(s.log == p.log);
    REQUIRE(s.maps.size() == p.maps.size());
    for (std::size_t i = 0; i < s.maps.size(); ++i) CHECK(same_map(s.maps[i], p.maps[i]));
  }
}

TEST_CASE("oversized families are skipped and logged") {
  auto g = fixture_graph("rose3");
  auto c = enumerate_candidates(g, g, {2, 1, 1000});
  bool skipped = false;
  for (const auto& line : c.log) skipped = skipped || line.find("skipped") != std::string::npos;
  CHECK(skipped);
}

TEST_CASE("identity self-conjugacy on every fixture") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    auto g = fixture_graph(name);
    auto r = eventual_conjugacy_search(g, g, {1, 0, 2'000'000}, false);
    REQUIRE(r.found.has_value());
    CHECK(same_map(r.found->phi.h, identity_automorphism(g)));
    CHECK(r.found->phi.sign == 1);
    for (const auto& c : replay(*r.found)) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("structural prune and flip pruning") {
  auto rose = fixture_graph("rose2");
  auto loop = fixture_graph("loop1");
  auto r = eventual_conjugacy_search(rose, loop, {1, 0, 2'000'000}, true);
  CHECK_FALSE(r.found.has_value());
  REQUIRE_FALSE(r.certificate.prune_log.empty());
  CHECK(r.certificate.prune_log.front().find("structural prune") == 0);

  auto self = eventual_conjugacy_search(rose, rose, {1, 1, 2'000'000}, true);
  REQUIRE(self.found.has_value());
  bool pruned = false;
  for (const auto& line : self.certificate.prune_log)
    pruned = pruned || line.find("flip obstruction on first graph, U = C(a)") != std::string::npos;
  CHECK(pruned);

  auto sink = testsupport::graph("vertices: v w\nedge a v w\nedge b v v\n");
  CHECK_THROWS_AS(eventual_conjugacy_search(sink, sink, {1, 0, 100}, false), PreconditionError);
}

TEST_CASE("orbit maps induce groupoid homomorphisms") {
  auto g = fixture_graph("rose2");
  auto flip = rose_flip(g);
  auto map = orbit_map_to_groupoid_hom(2, 1, flip);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto a = random_arrow(*g, rng, 3);
    auto fa = map.apply(a);
    CHECK(fa.degree() == a.degree());
    CHECK(fa.source() == apply(flip, a.source()));
    CHECK(fa.target() == apply(flip, a.target()));
  }
  CHECK_THROWS_AS(orbit_map_to_groupoid_hom(1, 0, flip), VerificationError);
  CHECK_THROWS_AS(orbit_map_to_groupoid_hom(1, 2, flip), VerificationError);
}

TEST_CASE("finite path spaces") {
  CHECK(finite_path_space(*fixture_graph("loop1")));
  CHECK(finite_path_space(*fixture_graph("disjoint_loops")));
  CHECK_FALSE(finite_path_space(*fixture_graph("rose2")));
}
