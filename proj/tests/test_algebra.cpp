#include <doctest.h>

#include "support.hpp"
#include "weylgraph/algebra.hpp"
#include "weylgraph/errors.hpp"

using namespace weylgraph;
using testsupport::fixture_graph;
using testsupport::fixture_labels;

namespace {

struct Rose {
  GraphPtr g = fixture_graph("rose2");
  AlgebraElement a = AlgebraElement::edge(g, 0), b = AlgebraElement::edge(g, 1);
  AlgebraElement one = AlgebraElement::unit(g), zero = AlgebraElement::zero(g);
  AlgebraElement mono(const std::string& mu, const std::string& nu, Scalar c = Scalar(1)) const {
    return AlgebraElement::monomial(g, parse_path(*g, mu), parse_path(*g, nu), c);
  }
};

GroupoidElement point_in(const Graph& g, Rng& rng, const Monomial& m) {
  return random_arrow_in(g, rng, BasicBisection{m.mu, m.nu});
}

}  // namespace

TEST_CASE("monomial products on the 2-rose") {
  Rose r;
  CHECK(involute(r.a) * r.b == r.zero);
  CHECK(involute(r.a) * r.a == r.one);
  CHECK(r.mono("a", "b") * r.mono("b", "a") == r.mono("a", "a"));
  CHECK(r.a * involute(r.a) + r.b * involute(r.b) == r.one);
  // Normal form: S_bS_b* is rewritten through the last (special) edge.
  CHECK((r.b * involute(r.b)).to_string() == "P(v) - S(a)*S(a)^*");
  CHECK(r.mono("a b", "b b").to_string() == "S(a)*S(b)^* - S(a a)*S(b a)^*");
}

TEST_CASE("involution") {
  Rose r;
  CHECK(involute(r.a).terms().begin()->first.nu == parse_path(*r.g, "a"));
  auto x = r.mono("a", "b", Scalar::i());
  CHECK(involute(x) == r.mono("b", "a", -Scalar::i()));
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    auto p = random_element(r.g, rng), q = random_element(r.g, rng);
    CHECK(involute(p * q) == involute(q) * involute(p));
    CHECK(involute(involute(p)) == p);
  }
}

TEST_CASE("evaluate") {
  Rose r;
  auto v = AlgebraElement::vertex(r.g, 0);
  Rng rng(8);
  auto x = random_point(*r.g, rng);
  CHECK(evaluate(v, unit(x)) == Scalar(1));
  auto z = random_point(*r.g, rng);
  auto alpha = *make_arrow(*r.g, prepend(*r.g, parse_path(*r.g, "a"), z), 0,
                           prepend(*r.g, parse_path(*r.g, "b"), z));
  CHECK(evaluate(r.mono("a", "b"), alpha) == Scalar(1));
  CHECK(evaluate(r.mono("b", "a"), alpha) == Scalar(0));
  for (int i = 0; i < 50; ++i) {
    auto p = random_element(r.g, rng), q = random_element(r.g, rng);
    auto g = random_arrow(*r.g, rng, 3);
    Scalar c = Scalar(3) + Scalar::i();
    CHECK(evaluate(p + c * q, g) == evaluate(p, g) + c * evaluate(q, g));
    CHECK(evaluate(involute(p), g) == evaluate(p, inverse(g)).conj());
  }
}

TEST_CASE("two-vertex example with sinks is handled by the Leavitt relations") {
  auto g = testsupport::graph("vertices: v w\nedge e v w\nedge f v v\n");
  auto e = AlgebraElement::edge(g, 0), f = AlgebraElement::edge(g, 1);
  CHECK(involute(e) * e == AlgebraElement::vertex(g, 1));
  CHECK(e * involute(e) + f * involute(f) == AlgebraElement::vertex(g, 0));
  CHECK_THROWS_AS(check_cuntz_relations(g), PreconditionError);
}

TEST_CASE("product agrees with the pointwise convolution oracle") {
  Rng rng(2024);
  for (int t = 0; t < 6; ++t) {
    auto g = testsupport::random_graph(rng, 1 + rng.below(3), 4 + rng.below(2));
    for (int i = 0; i < 20; ++i) {
      auto p = random_element(g, rng), q = random_element(g, rng);
      auto pq = p * q;
      for (int j = 0; j < 20; ++j) {
        GroupoidElement gamma = random_arrow(*g, rng, 4);
        if (!pq.is_zero() && rng.coin()) {
          auto it = pq.terms().begin();
          std::advance(it, static_cast<long>(rng.below(pq.terms().size())));
          gamma = point_in(*g, rng, it->first);
        }
        CHECK(evaluate(pq, gamma) == convolve_pointwise_oracle(p, q, gamma));
      }
    }
  }
}

TEST_CASE("normal forms are separated by points") {
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    auto g = testsupport::random_graph(rng, 1 + rng.below(3), 4);
    for (int i = 0; i < 30; ++i) {
      auto p = random_element(g, rng);
      if (p.is_zero()) continue;
      bool found = false;
      for (const auto& [m, c] : p.terms())
        for (int s = 0; s < 30 && !found; ++s) found = !evaluate(p, point_in(*g, rng, m)).is_zero();
      CHECK(found);
    }
  }
}

TEST_CASE("degree grading") {
  Rng rng(12);
  auto g = fixture_graph("rose2");
  for (int i = 0; i < 50; ++i) {
    auto p = AlgebraElement::zero(g), q = AlgebraElement::zero(g);
    auto m1 = testsupport::random_basic(*g, rng, 3), m2 = testsupport::random_basic(*g, rng, 3);
    p.add(m1.mu, m1.nu, Scalar(1));
    q.add(m2.mu, m2.nu, Scalar(1));
    auto pq = p * q;
    auto ps = involute(p);
    for (const auto& [m, c] : pq.terms())
      CHECK(BasicBisection{m.mu, m.nu}.degree() == m1.degree() + m2.degree());
    for (const auto& [m, c] : ps.terms()) CHECK(BasicBisection{m.mu, m.nu}.degree() == -m1.degree());
  }
}

TEST_CASE("expectations") {
  Rose r;
  CHECK(expectation_diagonal(r.mono("a", "b")).is_zero());
  CHECK(expectation_diagonal(r.mono("a", "a") + r.mono("a", "b", Scalar(2))) == r.mono("a", "a"));
  auto s3 = fixture_labels(r.g, "s3");
  CHECK(expectation_kernel(r.mono("a", "b"), s3).is_zero());
  CHECK(expectation_kernel(r.mono("a b", "b a"), s3).is_zero());
  CHECK(expectation_kernel(r.mono("a a", "a a"), s3) == r.mono("a a", "a a"));
  auto len = EdgeLabeling::length(r.g);
  CHECK(expectation_kernel(r.mono("a b", "b a") + r.a, len) == r.mono("a b", "b a"));
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto p = random_element(r.g, rng);
    auto d = expectation_diagonal(random_element(r.g, rng));
    auto d2 = expectation_diagonal(random_element(r.g, rng));
    auto e = expectation_diagonal(p);
    CHECK(expectation_diagonal(e) == e);
    CHECK(expectation_diagonal(d * p * d2) == d * e * d2);
    auto k = expectation_kernel(random_element(r.g, rng), s3);
    CHECK(expectation_kernel(k * p, s3) == k * expectation_kernel(p, s3));
    CHECK(expectation_kernel(expectation_kernel(p, s3), s3) == expectation_kernel(p, s3));
    // E(p*p) is a sum of projections with coefficients |c|² on a diagonal point.
    auto pp = expectation_diagonal(involute(p) * p);
    auto x = random_point(*r.g, rng);
    auto val = evaluate(pp, unit(x));
    CHECK(val == val.conj());
  }
  CHECK(expectation_diagonal(r.one) == r.one);
  CHECK(expectation_kernel(r.one, s3) == r.one);
}

TEST_CASE("group actions") {
  Rose r;
  auto gauge = EdgeLabeling::length_mod(r.g, 8);
  auto chars = enumerate_characters(gauge.group().finite_group());
  auto zeta = chars[1];
  CHECK(group_act(r.a, zeta, gauge) == zeta({1}).to_scalar() * r.a);
  for (const auto& chi : chars) CHECK(group_act(AlgebraElement::vertex(r.g, 0), chi, gauge) == AlgebraElement::vertex(r.g, 0));
  CHECK_THROWS_AS(group_act(r.a, zeta, fixture_labels(r.g, "s3")), PreconditionError);
  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    auto p = random_element(r.g, rng), q = random_element(r.g, rng);
    const auto& c1 = chars[rng.below(8)];
    const auto& c2 = chars[rng.below(8)];
    std::vector<RootOfUnity> prod;
    for (std::int64_t g = 0; g < 8; ++g) prod.push_back(c1({g}) * c2({g}));
    auto c12 = GroupCharacter::from_table(prod);
    CHECK(group_act(group_act(p, c2, gauge), c1, gauge) == group_act(p, c12, gauge));
    CHECK(group_act(p * q, c1, gauge) == group_act(p, c1, gauge) * group_act(q, c1, gauge));
    CHECK(group_act(involute(p), c1, gauge) == involute(group_act(p, c1, gauge)));
  }
}

TEST_CASE("quasi-bases and Watatani indices") {
  Rose r;
  auto trivial = EdgeLabeling::trivial(r.g);
  auto qt = quasi_basis(trivial);
  REQUIRE(qt.entries.size() == 1);
  CHECK(qt.entries[0].u == AlgebraElement::vertex(r.g, 0));
  Rng rng(1);
  CHECK(watatani_index(qt, trivial, rng, 20) == r.one);

  auto parity = fixture_labels(r.g, "z2_parity");
  auto qp = quasi_basis(parity);
  REQUIRE(qp.entries.size() == 3);
  CHECK(qp.entries[0].u == AlgebraElement::vertex(r.g, 0));
  CHECK(qp.entries[1].u == r.a);
  CHECK(qp.entries[2].u == r.b);
  CHECK(watatani_index(qp, parity, rng, 50) == Scalar(2) * r.one);

  auto s3 = fixture_labels(r.g, "s3");
  auto qs = quasi_basis(s3);
  for (const auto& e : qs.entries) CHECK(s3.label(e.rho, e.nu) == e.s);
  CHECK(watatani_index(qs, s3, rng, 50) == Scalar(6) * r.one);

  CHECK_THROWS_AS(quasi_basis(EdgeLabeling::length(r.g)), PreconditionError);
  auto dl = fixture_graph("disjoint_loops");
  CHECK_THROWS_AS(quasi_basis(EdgeLabeling::trivial(dl)), PreconditionError);
}

TEST_CASE("Cuntz relations") {
  for (const char* name : {"rose2", "rose3", "cycle3_extra", "two_cycle_loop", "subdivided_rose"}) {
    auto report = check_cuntz_relations(fixture_graph(name));
    CHECK(report.passed);
    CHECK_FALSE(report.checks.empty());
  }
}
