#include "weylgraph/sampling.hpp"

#include <algorithm>

#include "weylgraph/errors.hpp"

namespace weylgraph {

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

namespace {

// Walk from v choosing edges by pick until a vertex repeats; returns (lead-in, cycle).
template <class Pick>
std::pair<std::vector<EdgeId>, std::vector<EdgeId>> walk_to_cycle(const Graph& g, VertexId v, Pick pick) {
  if (!g.in_core(v)) throw PreconditionError("no infinite path starts at vertex '" + g.vertex_name(v) + "'");
  std::vector<VertexId> visited{v};
  std::vector<EdgeId> edges;
  for (;;) {
    const auto& outs = g.core_out_edges(v);
    EdgeId e = outs[pick(outs.size())];
    edges.push_back(e);
    v = g.target(e);
    auto it = std::find(visited.begin(), visited.end(), v);
    if (it != visited.end()) {
      auto i = static_cast<std::size_t>(it - visited.begin());
      return {{edges.begin(), edges.begin() + i}, {edges.begin() + i, edges.end()}};
    }
    visited.push_back(v);
  }
}

EvPeriodicPath close_up(const Graph& g, const FinitePath& start,
                        std::pair<std::vector<EdgeId>, std::vector<EdgeId>> walk) {
  auto prefix = start.edges();
  prefix.insert(prefix.end(), walk.first.begin(), walk.first.end());
  return EvPeriodicPath::make(g, std::move(prefix), std::move(walk.second));
}

}  // namespace

EvPeriodicPath continuation(const Graph& g, const FinitePath& mu) {
  return close_up(g, mu, walk_to_cycle(g, mu.target(), [](std::size_t) { return std::size_t{0}; }));
}

FinitePath random_path(const Graph& g, Rng& rng, VertexId from, std::size_t length) {
  FinitePath p = FinitePath::at(from);
  for (std::size_t i = 0; i < length; ++i) {
    const auto& outs = g.core_out_edges(p.target());
    if (outs.empty()) break;
    p = extend(g, p, outs[rng.below(outs.size())]);
  }
  return p;
}

EvPeriodicPath random_point(const Graph& g, Rng& rng, const FinitePath& start) {
  auto lead = random_path(g, rng, start.target(), rng.below(4));
  auto mu = concat(start, lead);
  return close_up(g, mu, walk_to_cycle(g, mu.target(), [&](std::size_t n) { return rng.below(n); }));
}

Graph random_graph(Rng& rng, std::size_t vertices, std::size_t edges) {
  if (vertices == 0 || edges < vertices) throw PreconditionError("random graph needs edges >= vertices > 0");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vertices; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Edge> es;
  for (std::size_t i = 0; i < edges; ++i) {
    auto o = static_cast<VertexId>(i < vertices ? i : rng.below(vertices));
    es.push_back({"e" + std::to_string(i), o, static_cast<VertexId>(rng.below(vertices))});
  }
  return Graph(std::move(names), std::move(es));
}

VertexId random_core_vertex(const Graph& g, Rng& rng) {
  std::vector<VertexId> core;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_core(v)) core.push_back(v);
  if (core.empty()) throw PreconditionError("graph has no infinite paths");
  return core[rng.below(core.size())];
}

EvPeriodicPath random_point(const Graph& g, Rng& rng) {
  return random_point(g, rng, FinitePath::at(random_core_vertex(g, rng)));
}

GroupoidElement random_arrow_in(const Graph& g, Rng& rng, const BasicBisection& b) {
  auto z = random_point(g, rng, FinitePath::at(b.mu.target()));
  auto a = make_arrow(g, prepend(g, b.mu, z), b.degree(), prepend(g, b.nu, z));
  if (!a) throw VerificationError("random_arrow_in: tails failed to equalize");
  return *a;
}

GroupoidElement random_arrow(const Graph& g, Rng& rng, std::size_t max_length) {
  auto w = random_core_vertex(g, rng);
  // Build μ and ν backwards from a common core target.
  auto back = [&](std::size_t len) {
    std::vector<EdgeId> edges;
    VertexId v = w;
    for (std::size_t i = 0; i < len; ++i) {
      const auto& ins = g.in_edges(v);
      if (ins.empty()) break;
      EdgeId e = ins[rng.below(ins.size())];
      edges.push_back(e);
      v = g.origin(e);
    }
    std::reverse(edges.begin(), edges.end());
    return FinitePath::of(g, v, std::move(edges));
  };
  auto mu = back(rng.below(max_length + 1));
  auto nu = back(rng.below(max_length + 1));
  return random_arrow_in(g, rng, {mu, nu});
}

}  // namespace weylgraph
