#pragma once

#include <cstdint>
#include <random>

#include "weylgraph/pathspace.hpp"

namespace weylgraph {

// Seeded generator; below() is platform independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // Uniform on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
};

// μ followed by first core edges until a vertex repeats.
EvPeriodicPath continuation(const Graph& g, const FinitePath& mu);
FinitePath random_path(const Graph& g, Rng& rng, VertexId from, std::size_t length);
// Random point of C(start); start must end in the core.
EvPeriodicPath random_point(const Graph& g, Rng& rng, const FinitePath& start);
EvPeriodicPath random_point(const Graph& g, Rng& rng);
// Random element of Z(μ, ν).
GroupoidElement random_arrow_in(const Graph& g, Rng& rng, const BasicBisection& b);
// Random arrow with |μ|, |ν| ≤ max_length in its defining bisection.
GroupoidElement random_arrow(const Graph& g, Rng& rng, std::size_t max_length);
VertexId random_core_vertex(const Graph& g, Rng& rng);
// Random multigraph without sinks: edge i < vertices leaves vertex i, the rest are uniform.
Graph random_graph(Rng& rng, std::size_t vertices, std::size_t edges);

}  // namespace weylgraph
