#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weylgraph/graph.hpp"

namespace weylgraph {

// Eventually periodic infinite path prefix·cycle·cycle·... in canonical form:
// the cycle is primitive and the prefix does not end with the cycle's last edge.
class EvPeriodicPath {
 public:
  // Validates composability and canonicalizes. Throws PreconditionError.
  static EvPeriodicPath make(const Graph& g, std::vector<EdgeId> prefix, std::vector<EdgeId> cycle);

  VertexId origin() const { return origin_; }
  const std::vector<EdgeId>& prefix() const { return prefix_; }
  const std::vector<EdgeId>& cycle() const { return cycle_; }
  EdgeId at(std::size_t i) const {
    return i < prefix_.size() ? prefix_[i] : cycle_[(i - prefix_.size()) % cycle_.size()];
  }
  std::vector<EdgeId> take(std::size_t n) const;
  FinitePath word(const Graph& g, std::size_t n) const;

  friend bool operator==(const EvPeriodicPath&, const EvPeriodicPath&) = default;
  friend auto operator<=>(const EvPeriodicPath&, const EvPeriodicPath&) = default;

 private:
  VertexId origin_ = 0;
  std::vector<EdgeId> prefix_, cycle_;
};

EvPeriodicPath shift(const Graph& g, const EvPeriodicPath& x, std::size_t n = 1);
// μ·x; requires t(μ) = o(x).
EvPeriodicPath prepend(const Graph& g, const FinitePath& mu, const EvPeriodicPath& x);
bool in_cylinder(const FinitePath& mu, const EvPeriodicPath& x);

// "a b | c d" (prefix ab, cycle cd); "| a" for a pure cycle.
std::string format_point(const Graph& g, const EvPeriodicPath& x);
EvPeriodicPath parse_point(const Graph& g, std::string_view text);

// Least p ≥ max(0,n) with T^p y = T^{p-n} x, or nullopt.
std::optional<std::size_t> ell_tilde(const Graph& g, const EvPeriodicPath& y, std::int64_t n,
                                     const EvPeriodicPath& x);

// Arrow (y, k, x) with T^p y = T^q x, p - q = k, p minimal.
class GroupoidElement {
 public:
  const EvPeriodicPath& target() const { return y_; }
  const EvPeriodicPath& source() const { return x_; }
  std::int64_t degree() const { return k_; }
  std::pair<std::size_t, std::size_t> witness() const {
    return {p_, static_cast<std::size_t>(static_cast<std::int64_t>(p_) - k_)};
  }

  friend bool operator==(const GroupoidElement& a, const GroupoidElement& b) {
    return a.k_ == b.k_ && a.y_ == b.y_ && a.x_ == b.x_;
  }

 private:
  EvPeriodicPath y_, x_;
  std::int64_t k_ = 0;
  std::size_t p_ = 0;

  friend std::optional<GroupoidElement> make_arrow(const Graph&, const EvPeriodicPath&,
                                                   std::int64_t, const EvPeriodicPath&);
  friend GroupoidElement unit(const EvPeriodicPath&);
  friend GroupoidElement inverse(const GroupoidElement&);
};

std::optional<GroupoidElement> make_arrow(const Graph& g, const EvPeriodicPath& y, std::int64_t k,
                                          const EvPeriodicPath& x);
GroupoidElement unit(const EvPeriodicPath& x);
GroupoidElement inverse(const GroupoidElement& a);
// a·b; requires source(a) = target(b). Throws PreconditionError.
GroupoidElement compose(const Graph& g, const GroupoidElement& a, const GroupoidElement& b);
std::string format_arrow(const Graph& g, const GroupoidElement& a);

// Z(μ,ν) = {(μz, |μ|-|ν|, νz)}.
struct BasicBisection {
  FinitePath mu, nu;

  static BasicBisection make(const FinitePath& mu, const FinitePath& nu);
  std::int64_t degree() const {
    return static_cast<std::int64_t>(mu.length()) - static_cast<std::int64_t>(nu.length());
  }
  friend bool operator==(const BasicBisection&, const BasicBisection&) = default;
  friend auto operator<=>(const BasicBisection&, const BasicBisection&) = default;
};

BasicBisection star(const BasicBisection& b);
bool is_empty(const Graph& g, const BasicBisection& b);
bool bisection_contains(const Graph& g, const BasicBisection& b, const GroupoidElement& a);
// Z(μ,ν)·Z(α,β) by the prefix rule.
std::optional<BasicBisection> multiply_basic(const Graph& g, const BasicBisection& a,
                                             const BasicBisection& b);
std::string format_bisection(const Graph& g, const BasicBisection& b);

// Finite union of basic bisections. Normal form: no empty or nested pieces,
// no complete sibling family, sorted. Equal sets have equal normal forms.
using Bisection = std::vector<BasicBisection>;

Bisection normalize_bisection(const Graph& g, Bisection pieces);
// Throws PreconditionError when the union is not a bisection.
void require_bisection(const Graph& g, const Bisection& pieces);
Bisection bisection_multiply(const Graph& g, const Bisection& a, const Bisection& b);
Bisection bisection_star(const Graph& g, const Bisection& a);
bool bisection_contains(const Graph& g, const Bisection& b, const GroupoidElement& a);

// Union of cylinders C(μ); normal form as for Bisection.
struct CylinderUnion {
  std::vector<FinitePath> paths;
  friend bool operator==(const CylinderUnion&, const CylinderUnion&) = default;
};

CylinderUnion normalize_cylinders(const Graph& g, std::vector<FinitePath> paths);
CylinderUnion whole_space(const Graph& g);
// C(μ) ⊂ ⋃ C(p) over pieces.
bool cylinder_covered(const Graph& g, const std::vector<FinitePath>& pieces, const FinitePath& mu);

struct FlipVerification {
  bool image_is_whole = false;
  bool injective = false;
  bool proper = false;
  bool holds() const { return image_is_whole && injective && proper; }
};

struct FlipObstruction {
  CylinderUnion U;
  std::size_t length;
  FlipVerification verification;
};

FlipVerification verify_flip_obstruction(const Graph& g, const CylinderUnion& U);
std::optional<FlipObstruction> flip_obstruction_search(const Graph& g, std::size_t L);

std::vector<BasicBisection> generating_bisections(const Graph& g);

}  // namespace weylgraph
