#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weylgraph/labeling.hpp"
#include "weylgraph/pathspace.hpp"
#include "weylgraph/sampling.hpp"
#include "weylgraph/scalar.hpp"

namespace weylgraph {

// Locally constant function on the path space: the value at x is looked up by
// the first `window` edges of x (the empty path at o(x) when window = 0).
template <class V>
struct WindowFunction {
  std::size_t window = 0;
  std::map<FinitePath, V> values;
  V fallback{};

  V operator()(const Graph& g, const EvPeriodicPath& x) const {
    auto it = values.find(x.word(g, window));
    return it == values.end() ? fallback : it->second;
  }
};

using CircleFunction = WindowFunction<RootOfUnity>;
using IntFunction = WindowFunction<std::int64_t>;

using CocycleValue = std::variant<RootOfUnity, std::int64_t, GroupElement>;

std::string format_value(const CocycleValue& v, const Group* group = nullptr);

// Type-erased groupoid homomorphism. `lookahead` bounds how many symbols past a
// basic bisection's paths the image of a point depends on.
struct GroupoidMap {
  std::string name;
  std::function<GroupoidElement(const GroupoidElement&)> apply;
  std::size_t lookahead = 0;

  static GroupoidMap identity();
};

class Cocycle {
 public:
  enum class Kind { coboundary, labeled, birkhoff, product, pullback };

  // ∂f(α) = f(r(α))·conj(f(d(α))).
  static Cocycle coboundary(GraphPtr g, CircleFunction f);
  // θ̃(α) = θ(μ)θ(ν)⁻¹ for any Z(μ,ν) ∋ α, followed by χ when given.
  static Cocycle labeled(EdgeLabeling theta, std::optional<GroupCharacter> chi = std::nullopt);
  // σ_f(y,p−q,x) = Σ_{i<p} f(T^i y) − Σ_{j<q} f(T^j x), in ℤ.
  static Cocycle birkhoff(GraphPtr g, IntFunction f);
  // Multiplicative Birkhoff sum with root-of-unity values.
  static Cocycle birkhoff(GraphPtr g, CircleFunction f);
  // Pointwise product of circle-valued cocycles; the empty product is 1.
  static Cocycle product(std::vector<Cocycle> factors);
  // c∘Φ.
  static Cocycle pullback(Cocycle inner, GroupoidMap map);
  static Cocycle trivial() { return product({}); }
  // z ↦ χ_k(length mod n): the gauge character e^{2πik/n} per edge.
  static Cocycle gauge(GraphPtr g, std::size_t n, std::int64_t k);

  Kind kind() const;
  bool circle_valued() const;
  // Extra symbols of z beyond (μ, ν) that the value on (μz, k, νz) depends on.
  std::size_t lookahead() const;
  std::string describe() const;

  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit Cocycle(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

CocycleValue eval_cocycle(const Cocycle& c, const GroupoidElement& alpha);
// Circle-valued cocycles only; PreconditionError otherwise.
RootOfUnity eval_circle(const Cocycle& c, const GroupoidElement& alpha);
// Birkhoff sum with an explicit witness T^p y = T^q x, p − q = degree.
CocycleValue eval_birkhoff_with_witness(const Cocycle& c, const GroupoidElement& alpha,
                                        std::size_t p, std::size_t q);

// Value of c on Z(μ,ν) when constant there, found by evaluating at one point per
// extension of length lookahead(); nullopt when two extensions disagree.
std::optional<CocycleValue> constant_value_on(const Graph& g, const Cocycle& c, const BasicBisection& b);

// The element of Z(μ,ν) with tail continuation(t(μ)).
GroupoidElement canonical_point(const Graph& g, const BasicBisection& b);

// Circle-valued edge cocycles e ↦ e^{2πi k_e/order} that are 1 on every kernel
// pair of θ with lengths ≤ max_length, in lexicographic order of (k_e).
std::vector<Cocycle> kernel_vanishing_edge_cocycles(const EdgeLabeling& theta, std::size_t order,
                                                    std::size_t max_length);

struct AbelianFactor {
  Abelianization ab;
  GroupCharacter chi;                 // on Γ^ab
  std::optional<std::size_t> index;   // position in enumerate_characters(Γ^ab)
  std::vector<std::string> certificate;
};

// Requires kernel transitivity, a surjective θ and c = 1 on kernel samples.
AbelianFactor factor_through_abelianization(const Cocycle& c, const EdgeLabeling& theta, Rng& rng,
                                            std::size_t samples = 100);

struct GroupHom {
  // Finite Γ1: image of every element. Γ1 = ℤ: image of 1 in images[0].
  std::vector<GroupElement> images;
  std::vector<std::string> certificate;
  bool is_identity(const Group& g1, const Group& g2) const;
};

// τ with σ2∘Φ = τ∘σ1, read off on one arrow per generator and verified on all
// products (finite Γ1) and on random arrows.
GroupHom induced_group_hom(const GroupoidMap& phi, const EdgeLabeling& theta1,
                           const EdgeLabeling& theta2, Rng& rng, std::size_t samples = 100);

struct SeparatingCoboundary {
  Cocycle cocycle;
  CircleFunction f;
  GroupoidElement witness;
  RootOfUnity value;
};

// For μ ≠ ν with common target: α ∈ Z(μ,ν) with d(α) ≠ r(α) and f = −1 on the
// cylinder of d(α) up to the first disagreement, so ∂f(α) = −1.
SeparatingCoboundary find_separating_coboundary(const GraphPtr& g, const FinitePath& mu,
                                                const FinitePath& nu);

}  // namespace weylgraph
