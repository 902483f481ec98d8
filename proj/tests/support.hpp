#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "weylgraph/graph.hpp"
#include "weylgraph/labeling.hpp"

namespace testsupport {

inline std::string read_fixture(const std::string& file) {
  std::ifstream in(std::string(WEYLGRAPH_FIXTURE_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing fixture " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline weylgraph::GraphPtr graph(const std::string& text) {
  return std::make_shared<const weylgraph::Graph>(weylgraph::parse_graph(text));
}

inline weylgraph::GraphPtr fixture_graph(const std::string& name) {
  return graph(read_fixture(name + ".graph"));
}

inline weylgraph::EdgeLabeling fixture_labels(const weylgraph::GraphPtr& g, const std::string& name) {
  return weylgraph::parse_labeling(g, read_fixture(name + ".labels"));
}

}  // namespace testsupport

#include "weylgraph/sampling.hpp"

namespace testsupport {

// Random multigraph; with no_sinks, every vertex gets an outgoing edge first.
inline weylgraph::GraphPtr random_graph(weylgraph::Rng& rng, std::size_t vertices, std::size_t edges,
                                        bool no_sinks = true) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vertices; ++i) names.push_back("v" + std::to_string(i));
  std::vector<weylgraph::Edge> es;
  for (std::size_t i = 0; i < edges; ++i) {
    auto o = static_cast<weylgraph::VertexId>(no_sinks && i < vertices ? i : rng.below(vertices));
    auto t = static_cast<weylgraph::VertexId>(rng.below(vertices));
    es.push_back({"e" + std::to_string(i), o, t});
  }
  return std::make_shared<const weylgraph::Graph>(std::move(names), std::move(es));
}

}  // namespace testsupport

namespace testsupport {

inline weylgraph::FinitePath path_into(const weylgraph::Graph& g, weylgraph::Rng& rng,
                                       weylgraph::VertexId w, std::size_t length) {
  std::vector<weylgraph::EdgeId> rev;
  weylgraph::VertexId cur = w;
  for (std::size_t i = 0; i < length && !g.in_edges(cur).empty(); ++i) {
    const auto& in = g.in_edges(cur);
    rev.push_back(in[rng.below(in.size())]);
    cur = g.origin(rev.back());
  }
  return weylgraph::FinitePath::of(g, cur, {rev.rbegin(), rev.rend()});
}

inline weylgraph::BasicBisection random_basic(const weylgraph::Graph& g, weylgraph::Rng& rng,
                                              std::size_t max_len) {
  auto w = weylgraph::random_core_vertex(g, rng);
  return weylgraph::BasicBisection::make(path_into(g, rng, w, rng.below(max_len + 1)),
                                         path_into(g, rng, w, rng.below(max_len + 1)));
}

}  // namespace testsupport
