#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weylgraph/scalar.hpp"

namespace weylgraph {

// An integer for Γ = ℤ; an element index for finite groups.
struct GroupElement {
  std::int64_t value = 0;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

// Images of 0..n-1.
using Permutation = std::vector<std::uint32_t>;

// Finite group by multiplication table; element 0 is the identity.
class FiniteGroup {
 public:
  // Verifies the group axioms; throws PreconditionError.
  static FiniteGroup from_table(std::vector<std::vector<std::uint32_t>> table,
                                std::vector<std::string> names);
  // Breadth-first closure from the identity, right-multiplying by generators in order.
  // Products compose right to left: (στ)(i) = σ(τ(i)). Names are 1-based cycle notation.
  static FiniteGroup generated_by(std::size_t degree, const std::vector<Permutation>& generators);
  // Generated by the adjacent transpositions (1 2), (2 3), ...
  static FiniteGroup symmetric(std::size_t n);
  static FiniteGroup cyclic(std::size_t n);

  std::size_t size() const { return table_.size(); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a][b]; }
  std::uint32_t inv(std::uint32_t a) const { return inv_[a]; }
  const std::string& name(std::uint32_t a) const { return names_[a]; }
  bool is_abelian() const;
  std::uint32_t order_of(std::uint32_t a) const;
  std::optional<std::uint32_t> find(std::string_view name) const;
  // Degree of the permutation representation; 0 when built from a table.
  std::size_t degree() const { return degree_; }
  std::optional<std::uint32_t> find_permutation(const Permutation& p) const;

 private:
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::string> names_;
  std::size_t degree_ = 0;
  std::vector<Permutation> perms_;
};

std::string cycle_notation(const Permutation& p);

// ℤ, handled symbolically, or a finite group.
class Group {
 public:
  static Group integers();
  static Group finite(FiniteGroup g, std::string label = "");

  bool is_integers() const { return !finite_; }
  const FiniteGroup& finite_group() const { return *finite_; }
  std::optional<std::size_t> order() const;
  bool is_abelian() const;
  GroupElement identity() const { return {0}; }
  GroupElement mul(GroupElement a, GroupElement b) const;
  GroupElement inverse(GroupElement a) const;
  GroupElement pow(GroupElement a, std::int64_t k) const;
  std::vector<GroupElement> elements() const;  // finite groups only
  std::string format(GroupElement a) const;
  // Integers; "(1 2)(3 4)" or "perm 2 1 3" in permutation groups; element names otherwise.
  GroupElement parse_element(std::string_view text) const;
  const std::string& label() const { return label_; }

 private:
  std::shared_ptr<const FiniteGroup> finite_;
  std::string label_;
};

// "Z", "Z/N", "S<n>".
Group parse_group(std::string_view text);

struct Abelianization {
  FiniteGroup quotient;
  std::vector<std::uint32_t> class_of;  // q: Γ → Γ^ab
};

Abelianization abelianize(const FiniteGroup& g);

// Homomorphism into the roots of unity: a value table for finite groups,
// the image of 1 for ℤ.
class GroupCharacter {
 public:
  static GroupCharacter from_table(std::vector<RootOfUnity> values);
  static GroupCharacter on_integers(RootOfUnity generator_value);

  RootOfUnity operator()(GroupElement g) const;
  bool is_on_integers() const { return table_.empty(); }
  const std::vector<RootOfUnity>& table() const { return table_; }
  RootOfUnity generator_value() const { return generator_; }
  bool is_trivial() const;
  std::string to_string() const;
  friend bool operator==(const GroupCharacter&, const GroupCharacter&) = default;

 private:
  std::vector<RootOfUnity> table_;
  RootOfUnity generator_;
};

// All characters of a finite abelian group in a fixed order; index 0 is trivial.
std::vector<GroupCharacter> enumerate_characters(const FiniteGroup& abelian);
bool is_homomorphism(const FiniteGroup& g, const GroupCharacter& chi);
// χ∘q as a character of Γ.
GroupCharacter lift_character(const GroupCharacter& chi, const Abelianization& ab);

}  // namespace weylgraph
