#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weylgraph/algebra.hpp"
#include "weylgraph/cocycles.hpp"
#include "weylgraph/dynamics.hpp"

namespace weylgraph {

// φ_{Φ,c}(f)(α) = c(Φ⁻¹α)·f(Φ⁻¹α). c must be circle-valued.
struct AlgebraAutomorphism {
  GroupoidAutomorphism phi;
  Cocycle c;
};

GroupoidAutomorphism identity_groupoid_automorphism(const GraphPtr& g);
AlgebraAutomorphism identity_algebra_automorphism(const GraphPtr& g);

// h(C(σ)) as a normalized union of cylinders, read off the inverse rule.
CylinderUnion image_of_cylinder(const GroupoidAutomorphism& phi, const FinitePath& sigma);

// Φ(Z(μ,ν)) as a normalized union. Only degree-preserving Φ (sign +1).
Bisection image_of_bisection(const GroupoidAutomorphism& phi, const BasicBisection& b);

// χ_B ↦ Σ_i c(B_i)·χ_{Φ(B_i)} over a refinement on whose pieces c is constant.
// Throws BoundExceeded when refining past max_depth extra symbols.
AlgebraElement apply_automorphism(const AlgebraAutomorphism& a, const AlgebraElement& x,
                                  std::size_t max_depth = 8);

// (Φ,c)·(Φ',c') = (ΦΦ', (c∘Φ')·c').
AlgebraAutomorphism compose(const AlgebraAutomorphism& after, const AlgebraAutomorphism& before);

struct SemidirectReport {
  bool passed = true;
  std::size_t pairs = 0, monomials = 0;
  std::optional<std::string> counterexample;
};

// For every ordered pair, φ_A∘φ_B = φ_{A·B} on all monomials S_μS_ν* with
// |μ|, |ν| ≤ depth.
SemidirectReport check_semidirect_law(const std::vector<AlgebraAutomorphism>& autos, std::size_t depth = 3);

// φ_A∘φ_B = φ_{A·B} for each listed (A, B).
SemidirectReport check_semidirect_pairs(
    const std::vector<std::pair<AlgebraAutomorphism, AlgebraAutomorphism>>& pairs, std::size_t depth = 3);

// `pairs` random ordered pairs of (Φ, c) with Φ from enumerate_A(g, w = 1, m ≤ 1) and
// c a window-2 coboundary or a gauge character, checked with check_semidirect_pairs.
SemidirectReport semidirect_random_test(const GraphPtr& g, std::uint64_t seed, std::size_t pairs,
                                        std::size_t depth = 3);

// True iff every S_μS_μ* with |μ| ≤ depth is fixed.
bool check_fixes_diagonal(const AlgebraAutomorphism& a, std::size_t depth);

struct WeylEnumeration {
  std::vector<GroupoidAutomorphism> automorphisms;
  // table[i][j] = index of automorphisms[i]∘automorphisms[j]; nullopt = out-of-bound.
  std::vector<std::vector<std::optional<std::size_t>>> table;
  std::vector<NamedCheck> hypotheses;
  std::vector<IdentityCheck> certificates;
  std::vector<std::string> log;
};

// All certified-invertible eventual automorphisms within bounds. Throws
// HypothesisError naming the first failed hypothesis.
WeylEnumeration enumerate_A(const GraphPtr& g, const SearchBounds& bounds, Execution exec = Execution::parallel);

// Whether a canonical presentation fits the enumeration bounds.
bool within_bounds(const EventualAutomorphism& h, const SearchBounds& bounds);

}  // namespace weylgraph
