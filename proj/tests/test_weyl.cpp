#include <doctest.h>

#include "support.hpp"
#include "weylgraph/errors.hpp"
#include "weylgraph/weyl.hpp"

using namespace weylgraph;
using testsupport::fixture_graph;

namespace {

struct RoseAutos {
  GraphPtr g = fixture_graph("rose2");
  WeylEnumeration e = enumerate_A(g, {1, 1, 2'000'000});

  std::size_t index_of(const EventualAutomorphism& h) const {
    for (std::size_t i = 0; i < e.automorphisms.size(); ++i)
      if (same_map(e.automorphisms[i].h, h)) return i;
    FAIL("automorphism not enumerated");
    return 0;
  }
  GroupoidAutomorphism flip() const { return e.automorphisms[index_of(first_symbol_map(g, {1, 0}))]; }
};

Cocycle window2_coboundary(const GraphPtr& g, Rng& rng) {
  CircleFunction f{2, {}, RootOfUnity::one()};
  for (const auto& w : paths_of_length(*g, 2)) f.values.emplace(w, RootOfUnity::make(static_cast<std::int64_t>(rng.below(4)), 4));
  return Cocycle::coboundary(g, f);
}

GroupoidElement preimage(const GroupoidAutomorphism& phi, const GroupoidElement& a) {
  return groupoid_map(inverse(phi)).apply(a);
}

}  // namespace

TEST_CASE("enumeration of the 2-rose automorphisms") {
  RoseAutos r;
  REQUIRE(r.e.automorphisms.size() >= 2);
  for (const auto& h : r.e.hypotheses) CHECK(h.passed);
  for (const auto& c : r.e.certificates) CHECK(c.passed);
  auto id = r.index_of(identity_automorphism(r.g));
  auto flip = r.index_of(first_symbol_map(r.g, {1, 0}));
  CHECK(id == 0);
  CHECK(check_property_P(r.e.automorphisms[flip].h).passed);
  REQUIRE(r.e.table[flip][flip].has_value());
  CHECK(*r.e.table[flip][flip] == id);
  // Every listed map is a bijection with a listed inverse.
  for (std::size_t i = 0; i < r.e.automorphisms.size(); ++i) {
    bool has_inverse = false;
    for (std::size_t j = 0; j < r.e.automorphisms.size(); ++j)
      has_inverse = has_inverse || r.e.table[i][j] == id;
    CHECK(has_inverse);
  }
  // Deterministic across execution modes.
  auto serial = enumerate_A(r.g, {1, 1, 2'000'000}, Execution::serial);
  REQUIRE(serial.automorphisms.size() == r.e.automorphisms.size());
  CHECK(serial.table == r.e.table);
}

TEST_CASE("enumeration hypotheses are typed") {
  auto loop = fixture_graph("loop1");
  try {
    enumerate_A(loop, {1, 0, 1000});
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK(e.hypothesis() == "condition (L)");
  }
  try {
    enumerate_A(fixture_graph("disjoint_loops"), {1, 0, 1000});
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK(e.hypothesis() == "condition (L)");
  }
  auto source = testsupport::graph("vertices: u v\nedge a u v\nedge b v v\nedge c v v\n");
  try {
    enumerate_A(source, {1, 0, 1000});
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK(e.hypothesis() == "no sources");
  }
}

TEST_CASE("bisection images") {
  RoseAutos r;
  const Graph& g = *r.g;
  auto id = identity_groupoid_automorphism(r.g);
  BasicBisection aa{parse_path(g, "a"), parse_path(g, "a")};
  CHECK(image_of_bisection(id, aa) == Bisection{aa});
  Rng rng(31);
  for (const auto& phi : r.e.automorphisms) {
    auto fwd = groupoid_map(phi);
    for (int t = 0; t < 6; ++t) {
      auto b = testsupport::random_basic(g, rng, 2);
      auto img = image_of_bisection(phi, b);
      CHECK_NOTHROW(require_bisection(g, img));
      for (int i = 0; i < 50; ++i) {
        CHECK(bisection_contains(g, img, fwd.apply(random_arrow_in(g, rng, b))));
        auto beta = random_arrow(g, rng, 3);
        CHECK(bisection_contains(g, img, beta) == bisection_contains(g, b, preimage(phi, beta)));
      }
      // Inverse-semigroup homomorphism on sampled pairs.
      auto c = testsupport::random_basic(g, rng, 2);
      Bisection bc;
      if (auto p = multiply_basic(g, b, c)) bc.push_back(*p);
      Bisection img_bc;
      for (const auto& piece : bc) {
        auto part = image_of_bisection(phi, piece);
        img_bc.insert(img_bc.end(), part.begin(), part.end());
      }
      CHECK(bisection_multiply(g, img, image_of_bisection(phi, c)) == normalize_bisection(g, img_bc));
      CHECK(bisection_star(g, img) == image_of_bisection(phi, star(b)));
    }
  }
  // The flip moves Z(a, a) onto the arrows over h(C(a)).
  auto flip = r.flip();
  auto img = image_of_bisection(flip, aa);
  for (int i = 0; i < 50; ++i) {
    auto x = random_point(g, rng);
    CHECK(bisection_contains(g, img, unit(x)) == in_cylinder(parse_path(g, "a"), apply(flip.h_inv, x)));
  }
}

TEST_CASE("generating bisections determine the automorphism") {
  RoseAutos r;
  auto gens = generating_bisections(*r.g);
  const auto& autos = r.e.automorphisms;
  for (std::size_t i = 0; i < autos.size(); ++i)
    for (std::size_t j = 0; j < autos.size(); ++j) {
      bool equal_images = true;
      for (const auto& b : gens) equal_images = equal_images && image_of_bisection(autos[i], b) == image_of_bisection(autos[j], b);
      CHECK(equal_images == (i == j));
    }
}

TEST_CASE("algebra automorphisms against the defining formula") {
  RoseAutos r;
  const Graph& g = *r.g;
  Rng rng(77);
  std::vector<Cocycle> cocycles{Cocycle::trivial(), Cocycle::gauge(r.g, 8, 3), window2_coboundary(r.g, rng)};
  std::size_t checked = 0;
  for (const auto& phi : r.e.automorphisms)
    for (const auto& c : cocycles) {
      AlgebraAutomorphism A{phi, c};
      for (int t = 0; t < 4; ++t) {
        auto a = random_element(r.g, rng, {3, 2, true, 3});
        auto b = random_element(r.g, rng, {3, 2, true, 3});
        auto fa = apply_automorphism(A, a);
        for (int i = 0; i < 6; ++i) {
          auto alpha = random_arrow(g, rng, 3);
          auto pre = preimage(phi, alpha);
          CHECK(evaluate(fa, alpha) == eval_circle(c, pre).to_scalar() * evaluate(a, pre));
          ++checked;
        }
        CHECK(apply_automorphism(A, a * b) == fa * apply_automorphism(A, b));
        CHECK(apply_automorphism(A, involute(a)) == involute(fa));
      }
      CHECK(apply_automorphism(A, AlgebraElement::unit(r.g)) == AlgebraElement::unit(r.g));
    }
  CHECK(checked >= 500);
}

TEST_CASE("diagonal-fixing automorphisms") {
  RoseAutos r;
  Rng rng(5);
  auto id = identity_groupoid_automorphism(r.g);
  AlgebraAutomorphism cob{id, window2_coboundary(r.g, rng)};
  CHECK(check_fixes_diagonal(cob, 3));
  CHECK(check_fixes_diagonal({id, Cocycle::gauge(r.g, 8, 1)}, 3));
  CHECK_FALSE(check_fixes_diagonal({r.flip(), Cocycle::trivial()}, 1));
  // Gauge action: S_a ↦ ζ·S_a.
  AlgebraAutomorphism gauge{id, Cocycle::gauge(r.g, 8, 1)};
  auto sa = AlgebraElement::edge(r.g, 0);
  CHECK(apply_automorphism(gauge, sa) == RootOfUnity::make(1, 8).to_scalar() * sa);
  // Every non-diagonal monomial of depth ≤ 3 is moved by its separating coboundary.
  const Graph& g = *r.g;
  std::vector<FinitePath> paths;
  for (std::size_t n = 0; n <= 3; ++n)
    for (const auto& p : paths_of_length(g, n)) paths.push_back(p);
  std::size_t moved = 0;
  for (const auto& mu : paths)
    for (const auto& nu : paths) {
      if (mu == nu) continue;
      auto s = find_separating_coboundary(r.g, mu, nu);
      auto m = AlgebraElement::monomial(r.g, mu, nu);
      moved += !(apply_automorphism({id, s.cocycle}, m) == m);
    }
  CHECK(moved == paths.size() * paths.size() - paths.size());
}

TEST_CASE("semidirect law") {
  RoseAutos r;
  Rng rng(19);
  auto id = identity_groupoid_automorphism(r.g);
  auto f = window2_coboundary(r.g, rng), h = window2_coboundary(r.g, rng);
  std::vector<AlgebraAutomorphism> autos{{id, Cocycle::trivial()}, {id, f}, {r.flip(), Cocycle::trivial()},
                                         {r.flip(), h}, {r.e.automorphisms.back(), Cocycle::gauge(r.g, 8, 5)}};
  auto report = check_semidirect_law(autos, 2);
  CHECK(report.passed);
  CHECK(report.pairs == 25);
  // Conjugating a coboundary by the flip: (flip,1)(id,∂f) = (id, ∂f∘flip⁻¹)(flip,1) pointwise.
  AlgebraAutomorphism left = compose(AlgebraAutomorphism{r.flip(), Cocycle::trivial()}, AlgebraAutomorphism{id, f});
  AlgebraAutomorphism right = compose(AlgebraAutomorphism{id, Cocycle::pullback(f, groupoid_map(inverse(r.flip())))},
                                      AlgebraAutomorphism{r.flip(), Cocycle::trivial()});
  for (int i = 0; i < 50; ++i) {
    auto a = random_arrow(*r.g, rng, 3);
    CHECK(eval_circle(left.c, a) == eval_circle(right.c, a));
  }
  for (const auto& m : {AlgebraElement::edge(r.g, 0), AlgebraElement::monomial(r.g, parse_path(*r.g, "a b"), parse_path(*r.g, "b"))})
    CHECK(apply_automorphism(left, m) == apply_automorphism(right, m));
}

TEST_CASE("degree is preserved by enumerated automorphisms") {
  RoseAutos r;
  Rng rng(3);
  auto length = EdgeLabeling::length(r.g);
  for (const auto& phi : r.e.automorphisms)
    CHECK(induced_group_hom(groupoid_map(phi), length, length, rng, 30).is_identity(length.group(), length.group()));
}
