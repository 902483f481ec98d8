#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "weylgraph/graph.hpp"
#include "weylgraph/group.hpp"

namespace weylgraph {

// θ: E → Γ extended to paths by θ(μ) = θ(μ_1)···θ(μ_k), θ(empty) = identity.
class EdgeLabeling {
 public:
  EdgeLabeling(GraphPtr g, Group group, std::vector<GroupElement> labels);
  // ℤ with every edge labeled 1; its cocycle is the degree.
  static EdgeLabeling length(GraphPtr g);
  static EdgeLabeling length_mod(GraphPtr g, std::size_t n);
  static EdgeLabeling trivial(GraphPtr g);

  const GraphPtr& graph_ptr() const { return graph_; }
  const Graph& graph() const { return *graph_; }
  const Group& group() const { return group_; }
  GroupElement label(EdgeId e) const { return labels_.at(e); }
  GroupElement label(const FinitePath& p) const;
  // θ(μ)θ(ν)⁻¹
  GroupElement label(const FinitePath& mu, const FinitePath& nu) const;

 private:
  GraphPtr graph_;
  Group group_;
  std::vector<GroupElement> labels_;
};

// "group: <Z | Z/N | S<n>>" then one "label <edge> <element>" per edge.
EdgeLabeling parse_labeling(GraphPtr g, std::string_view text);

struct SubgroupImage {
  bool full = false;
  std::vector<GroupElement> elements;  // finite Γ
  std::int64_t generator = 0;          // Γ = ℤ: the image is generator·ℤ
};

struct KernelTransitivityResult {
  bool passed = true;
  // Cylinders C(μ), C(ν) joined by no kernel arrow.
  std::optional<std::pair<FinitePath, FinitePath>> failing;
};

SubgroupImage image_subgroup(const EdgeLabeling& theta);
KernelTransitivityResult kernel_transitivity(const EdgeLabeling& theta);
bool kernel_minimality_sufficient(const EdgeLabeling& theta);
// Paths μ, ν with t(μ) = t(ν) in the core and θ(μ)θ(ν)⁻¹ = γ, breadth-first.
// For Γ = ℤ the search covers paths of length ≤ max_length.
std::optional<std::pair<FinitePath, FinitePath>> find_arrow_with_label(const EdgeLabeling& theta,
                                                                       GroupElement gamma,
                                                                       std::size_t max_length = 8);
// Distinct pairs (μ, ν) with common core target, θ(μ) = θ(ν), lengths ≤ max_length.
std::vector<std::pair<FinitePath, FinitePath>> kernel_pairs(const EdgeLabeling& theta,
                                                            std::size_t max_length);

}  // namespace weylgraph
