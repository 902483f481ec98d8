#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "weylgraph/labeling.hpp"
#include "weylgraph/pathspace.hpp"
#include "weylgraph/sampling.hpp"
#include "weylgraph/scalar.hpp"

namespace weylgraph {

// S_μ S_ν*, t(μ) = t(ν).
struct Monomial {
  FinitePath mu, nu;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// (|μ|+|ν|, |μ|, μ, ν) with paths ordered by (length, edges, base).
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Element of the path-pair algebra in normal form. For each vertex with outgoing
// edges, its last declared edge e is special, and no stored monomial has μ and ν
// both ending in a special e; S_{μe}S_{νe}* is rewritten with P_{o(e)} = Σ S_f S_f*.
// The remaining monomials form a linear basis, so the normal form is unique.
class AlgebraElement {
 public:
  using Terms = std::map<Monomial, Scalar, MonomialOrder>;

  explicit AlgebraElement(GraphPtr g);
  static AlgebraElement zero(GraphPtr g) { return AlgebraElement(std::move(g)); }
  // Σ_v P_v.
  static AlgebraElement unit(GraphPtr g);
  static AlgebraElement vertex(GraphPtr g, VertexId v);
  static AlgebraElement edge(GraphPtr g, EdgeId e);
  static AlgebraElement monomial(GraphPtr g, const FinitePath& mu, const FinitePath& nu,
                                 const Scalar& c = Scalar(1));
  static AlgebraElement scalar(GraphPtr g, const Scalar& c);

  const GraphPtr& graph_ptr() const { return graph_; }
  const Graph& graph() const { return *graph_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c·S_μS_ν* and restores normal form.
  void add(const FinitePath& mu, const FinitePath& nu, const Scalar& c);

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(const Scalar& c);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(const Scalar& c, AlgebraElement a) { return a *= c; }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

  std::string to_string() const;

 private:
  void require_same_graph(const AlgebraElement& o) const;
  GraphPtr graph_;
  Terms terms_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }
AlgebraElement involute(const AlgebraElement& a);

// Value of a at α as a function on the groupoid.
Scalar evaluate(const AlgebraElement& a, const GroupoidElement& alpha);
// Σ_{αβ=γ} a(α) b(β) computed pointwise, without the algebra product.
Scalar convolve_pointwise_oracle(const AlgebraElement& a, const AlgebraElement& b,
                                 const GroupoidElement& gamma);

AlgebraElement expectation_diagonal(const AlgebraElement& a);
AlgebraElement expectation_kernel(const AlgebraElement& a, const EdgeLabeling& theta);
// Scales S_μS_ν* by χ(θ(μ)θ(ν)⁻¹); Γ must be abelian.
AlgebraElement group_act(const AlgebraElement& a, const GroupCharacter& chi, const EdgeLabeling& theta);

struct QuasiBasisEntry {
  GroupElement s;
  FinitePath rho, nu;  // u = S_ρ S_ν*, v = u*
  AlgebraElement u, v;
};

struct QuasiBasis {
  std::vector<QuasiBasisEntry> entries;
};

// Requires no sinks and the kernel-minimality sufficient criterion. For each s the
// ranges C(ρ) partition the path space: a vertex cylinder is kept when θ(ρ) = s,
// otherwise split once into edge cylinders; ν is the shortest path into t(ρ) with
// θ(ν) = s⁻¹θ(ρ). Σ u u* = 1 is verified per s.
QuasiBasis quasi_basis(const EdgeLabeling& theta);

struct RandomElementSpec {
  std::size_t terms = 4;
  std::size_t max_length = 3;
  bool gaussian = true;  // coefficients in Q(i), else in Q
  long coefficient_range = 3;
};

AlgebraElement random_element(const GraphPtr& g, Rng& rng, const RandomElementSpec& spec = {});

// Checks x = Σ u_i F(v_i x) on random samples (throws VerificationError with the
// counterexample) and returns Σ u_i v_i.
AlgebraElement watatani_index(const QuasiBasis& qb, const EdgeLabeling& theta, Rng& rng,
                              std::size_t samples = 100, const RandomElementSpec& spec = {});

struct NamedCheck {
  std::string name;
  bool passed;
};

struct RelationReport {
  bool passed = true;
  std::vector<NamedCheck> checks;
};

// Requires no sinks.
RelationReport check_cuntz_relations(const GraphPtr& g);
AlgebraElement projection_sum(const GraphPtr& g, const std::vector<VertexId>& vertices);

}  // namespace weylgraph
