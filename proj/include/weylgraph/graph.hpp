#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace weylgraph {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  std::string name;
  VertexId origin;
  VertexId target;
};

// Finite directed multigraph. Vertex and edge ids are declaration indices.
class Graph {
 public:
  Graph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  const std::string& edge_name(EdgeId e) const { return edges_.at(e).name; }
  VertexId origin(EdgeId e) const { return edges_[e].origin; }
  VertexId target(EdgeId e) const { return edges_[e].target; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }
  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

  // Vertices at which some infinite path starts.
  bool in_core(VertexId v) const { return core_[v]; }
  // Outgoing edges whose target is in the core, in declaration order.
  const std::vector<EdgeId>& core_out_edges(VertexId v) const { return core_out_[v]; }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_, in_, core_out_;
  std::vector<bool> core_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

using GraphPtr = std::shared_ptr<const Graph>;

Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

// Path with a base vertex; the empty path at v has origin = target = v.
class FinitePath {
 public:
  FinitePath() = default;
  static FinitePath at(VertexId v) { return FinitePath(v, v, {}); }
  // Throws PreconditionError when edges is empty or does not compose.
  static FinitePath of(const Graph& g, std::vector<EdgeId> edges);
  static FinitePath of(const Graph& g, VertexId base, std::vector<EdgeId> edges);

  VertexId origin() const { return origin_; }
  VertexId target() const { return target_; }
  std::size_t length() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<EdgeId>& edges() const { return edges_; }
  EdgeId operator[](std::size_t i) const { return edges_[i]; }
  EdgeId back() const { return edges_.back(); }

  friend bool operator==(const FinitePath&, const FinitePath&) = default;
  // Shorter first, then edge sequence, then base vertex.
  friend std::strong_ordering operator<=>(const FinitePath& a, const FinitePath& b);

 private:
  FinitePath(VertexId o, VertexId t, std::vector<EdgeId> e)
      : origin_(o), target_(t), edges_(std::move(e)) {}
  VertexId origin_ = 0;
  VertexId target_ = 0;
  std::vector<EdgeId> edges_;

  friend FinitePath concat(const FinitePath&, const FinitePath&);
  friend FinitePath extend(const Graph&, const FinitePath&, EdgeId);
};

// Requires a.target() == b.origin().
FinitePath concat(const FinitePath& a, const FinitePath& b);
FinitePath extend(const Graph& g, const FinitePath& p, EdgeId e);
FinitePath take_front(const Graph& g, const FinitePath& p, std::size_t n);
FinitePath drop_front(const Graph& g, const FinitePath& p, std::size_t n);
// True iff q = p·γ for some γ (for an empty p: same origin).
bool is_prefix(const FinitePath& p, const FinitePath& q);
bool comparable(const FinitePath& p, const FinitePath& q);

// Edge names separated by spaces; an empty path prints as "@v".
std::string format_path(const Graph& g, const FinitePath& p);
// Accepts "a b c", "@v", or "path v; a b c".
FinitePath parse_path(const Graph& g, std::string_view text);

// All paths of the given length, lexicographic in (origin, edges). With
// core_only, only those whose target is in the core.
std::vector<FinitePath> paths_of_length(const Graph& g, std::size_t length, bool core_only = true);
std::vector<FinitePath> paths_from(const Graph& g, VertexId v, std::size_t length,
                                   bool core_only = true);
// Extensions p·e with t(e) in the core.
std::vector<FinitePath> children(const Graph& g, const FinitePath& p);

struct VertexCheck {
  bool passed = true;
  std::vector<VertexId> witnesses;
};

struct ConditionLResult {
  bool passed = true;
  std::optional<FinitePath> cycle;
};

struct SyncWitness {
  VertexId v, w;
  FinitePath from_v, from_w;
};

struct PairSyncResult {
  bool passed = true;
  std::optional<std::pair<VertexId, VertexId>> failing_pair;
  // Shortest equal-length paths to a common target, for each pair v < w that has them.
  std::vector<SyncWitness> witnesses;
};

struct TildeClasses {
  std::vector<std::vector<VertexId>> classes;
  // Support of the central projection candidate; present iff more than one class.
  std::optional<std::vector<VertexId>> projection_support;
};

VertexCheck check_no_sinks(const Graph& g);
VertexCheck check_no_sources(const Graph& g);
ConditionLResult check_condition_L(const Graph& g);
PairSyncResult check_pair_sync(const Graph& g);
std::optional<SyncWitness> sync_witness(const Graph& g, VertexId v, VertexId w);
bool check_topological_transitivity(const Graph& g);
TildeClasses tilde_classes(const Graph& g);

}  // namespace weylgraph
