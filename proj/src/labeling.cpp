#include "weylgraph/labeling.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

EdgeLabeling::EdgeLabeling(GraphPtr g, Group group, std::vector<GroupElement> labels)
    : graph_(std::move(g)), group_(std::move(group)), labels_(std::move(labels)) {
  if (labels_.size() != graph_->edge_count())
    throw PreconditionError("labeling must assign one element per edge");
  if (auto n = group_.order())
    for (auto l : labels_)
      if (l.value < 0 || static_cast<std::size_t>(l.value) >= *n)
        throw PreconditionError("label outside the group");
}

EdgeLabeling EdgeLabeling::length(GraphPtr g) {
  auto n = g->edge_count();
  return EdgeLabeling(std::move(g), Group::integers(), std::vector<GroupElement>(n, {1}));
}

EdgeLabeling EdgeLabeling::length_mod(GraphPtr g, std::size_t n) {
  auto e = g->edge_count();
  return EdgeLabeling(std::move(g), Group::finite(FiniteGroup::cyclic(n), "Z/" + std::to_string(n)),
                      std::vector<GroupElement>(e, {n > 1 ? 1 : 0}));
}

EdgeLabeling EdgeLabeling::trivial(GraphPtr g) {
  auto e = g->edge_count();
  return EdgeLabeling(std::move(g), Group::finite(FiniteGroup::cyclic(1), "Z/1"),
                      std::vector<GroupElement>(e, {0}));
}

GroupElement EdgeLabeling::label(const FinitePath& p) const {
  GroupElement r = group_.identity();
  for (EdgeId e : p.edges()) r = group_.mul(r, labels_[e]);
  return r;
}

GroupElement EdgeLabeling::label(const FinitePath& mu, const FinitePath& nu) const {
  return group_.mul(label(mu), group_.inverse(label(nu)));
}

EdgeLabeling parse_labeling(GraphPtr g, std::string_view text) {
  std::optional<Group> group;
  std::vector<std::optional<GroupElement>> labels(g->edge_count());
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string head;
    if (!(in >> head)) continue;
    std::string rest;
    std::getline(in, rest);
    try {
      if (head == "group:" || head.rfind("group:", 0) == 0) {
        if (group) throw ParseError(line_no, "group declared twice");
        group = parse_group(head.size() > 6 ? head.substr(6) + rest : rest);
      } else if (head == "label") {
        if (!group) throw ParseError(line_no, "'label' before 'group:'");
        std::istringstream r(rest);
        std::string edge;
        r >> edge;
        auto e = g->find_edge(edge);
        if (!e) throw ParseError(line_no, "unknown edge '" + edge + "'");
        if (labels[*e]) throw ParseError(line_no, "edge '" + edge + "' labeled twice");
        std::string elem;
        std::getline(r, elem);
        labels[*e] = group->parse_element(elem);
      } else {
        throw ParseError(line_no, "unknown directive '" + head + "'");
      }
    } catch (const ParseError& err) {
      if (err.line() != 0) throw;
      throw ParseError(line_no, err.what());
    }
  }
  if (!group) throw ParseError(0, "labeling has no 'group:' line");
  std::vector<GroupElement> out;
  for (EdgeId e = 0; e < g->edge_count(); ++e) {
    if (!labels[e]) throw ParseError(0, "edge '" + g->edge_name(e) + "' has no label");
    out.push_back(*labels[e]);
  }
  return EdgeLabeling(std::move(g), std::move(*group), std::move(out));
}

namespace {

void require_finite_no_sinks(const EdgeLabeling& theta, const char* op) {
  if (theta.group().is_integers())
    throw PreconditionError(std::string(op) + " requires a finite group");
  if (!check_no_sinks(theta.graph()).passed)
    throw PreconditionError(std::string(op) + " requires a graph without sinks");
}

// Forward BFS over (vertex, label) from the empty paths at all vertices; for each
// reached state, a shortest path ending there realizing the label.
struct EndingLabels {
  std::size_t order;
  std::vector<bool> reached;
  std::vector<std::uint32_t> prev;
  std::vector<EdgeId> via;

  FinitePath path(const Graph& g, std::size_t state) const {
    std::vector<EdgeId> edges;
    while (prev[state] != UINT32_MAX) {
      edges.push_back(via[state]);
      state = prev[state];
    }
    std::reverse(edges.begin(), edges.end());
    return FinitePath::of(g, static_cast<VertexId>(state / order), std::move(edges));
  }
};

EndingLabels ending_labels(const EdgeLabeling& theta) {
  const auto& g = theta.graph();
  const auto n = g.vertex_count(), G = *theta.group().order();
  EndingLabels r{G, std::vector<bool>(n * G, false), std::vector<std::uint32_t>(n * G, UINT32_MAX),
                 std::vector<EdgeId>(n * G, 0)};
  std::deque<std::size_t> queue;
  for (VertexId v = 0; v < n; ++v) {
    r.reached[v * G] = true;
    queue.push_back(v * G);
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    auto v = static_cast<VertexId>(s / G);
    GroupElement lambda{static_cast<std::int64_t>(s % G)};
    for (EdgeId e : g.out_edges(v)) {
      auto t = g.target(e) * G + theta.group().mul(lambda, theta.label(e)).value;
      if (!r.reached[t]) {
        r.reached[t] = true;
        r.prev[t] = static_cast<std::uint32_t>(s);
        r.via[t] = e;
        queue.push_back(t);
      }
    }
  }
  return r;
}

}  // namespace

SubgroupImage image_subgroup(const EdgeLabeling& theta) {
  const auto& g = theta.graph();
  const auto& grp = theta.group();
  SubgroupImage r;
  // θ(e) = θ(e)θ(@t(e))⁻¹ is realized by Z(e, @t(e)) whenever t(e) is in the core,
  // and every θ(μ)θ(ν)⁻¹ is a word in these labels.
  std::vector<GroupElement> gens;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.in_core(g.target(e))) gens.push_back(theta.label(e));
  if (grp.is_integers()) {
    std::int64_t d = 0;
    for (auto x : gens) d = std::gcd(d, x.value < 0 ? -x.value : x.value);
    r.generator = d;
    r.full = d == 1;
    return r;
  }
  const auto n = *grp.order();
  std::vector<bool> in(n, false);
  in[0] = true;
  r.elements.push_back(grp.identity());
  for (std::size_t i = 0; i < r.elements.size(); ++i)
    for (auto x : gens) {
      auto y = grp.mul(r.elements[i], x);
      if (!in[y.value]) {
        in[y.value] = true;
        r.elements.push_back(y);
      }
    }
  std::sort(r.elements.begin(), r.elements.end());
  r.full = r.elements.size() == n;
  return r;
}

KernelTransitivityResult kernel_transitivity(const EdgeLabeling& theta) {
  require_finite_no_sinks(theta, "kernel_transitivity");
  const auto& g = theta.graph();
  const auto& grp = theta.group();
  const auto n = g.vertex_count(), G = *grp.order();
  auto idx = [&](VertexId a, VertexId b, std::int64_t d) { return (a * n + b) * G + d; };
  // good: state (u1,u2,δ) extends to a kernel arrow. δ = θ(first side)⁻¹θ(second side).
  std::vector<bool> good(n * n * G, false);
  std::deque<std::size_t> queue;
  for (VertexId u = 0; u < n; ++u) {
    good[idx(u, u, 0)] = true;
    queue.push_back(idx(u, u, 0));
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    GroupElement delta{static_cast<std::int64_t>(s % G)};
    auto pair = s / G;
    VertexId u1 = static_cast<VertexId>(pair / n), u2 = static_cast<VertexId>(pair % n);
    auto visit = [&](std::size_t t) {
      if (!good[t]) {
        good[t] = true;
        queue.push_back(t);
      }
    };
    for (EdgeId e : g.in_edges(u1)) visit(idx(g.origin(e), u2, grp.mul(theta.label(e), delta).value));
    for (EdgeId f : g.in_edges(u2))
      visit(idx(u1, g.origin(f), grp.mul(delta, grp.inverse(theta.label(f))).value));
  }
  // Cylinders C(μ), C(ν) start the search at (t(μ), t(ν), θ(μ)⁻¹θ(ν)).
  auto ends = ending_labels(theta);
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = 0; w < n; ++w)
      for (std::size_t a = 0; a < G; ++a) {
        if (!ends.reached[v * G + a]) continue;
        for (std::size_t b = 0; b < G; ++b) {
          if (!ends.reached[w * G + b]) continue;
          auto delta = grp.mul(grp.inverse({static_cast<std::int64_t>(a)}), {static_cast<std::int64_t>(b)});
          if (!good[idx(v, w, delta.value)])
            return {false, std::make_pair(ends.path(g, v * G + a), ends.path(g, w * G + b))};
        }
      }
  return {true, std::nullopt};
}

bool kernel_minimality_sufficient(const EdgeLabeling& theta) {
  require_finite_no_sinks(theta, "kernel_minimality_sufficient");
  const auto& g = theta.graph();
  const auto n = g.vertex_count(), G = *theta.group().order();
  for (VertexId u = 0; u < n; ++u) {
    std::vector<bool> seen(n * G, false);
    std::deque<std::size_t> queue{u * G};
    seen[u * G] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      auto s = queue.front();
      queue.pop_front();
      GroupElement lambda{static_cast<std::int64_t>(s % G)};
      for (EdgeId e : g.out_edges(static_cast<VertexId>(s / G))) {
        auto t = g.target(e) * G + theta.group().mul(lambda, theta.label(e)).value;
        if (!seen[t]) {
          seen[t] = true;
          ++count;
          queue.push_back(t);
        }
      }
    }
    if (count != n * G) return false;
  }
  return true;
}

std::optional<std::pair<FinitePath, FinitePath>> find_arrow_with_label(const EdgeLabeling& theta,
                                                                       GroupElement gamma,
                                                                       std::size_t max_length) {
  const auto& g = theta.graph();
  const auto& grp = theta.group();
  if (grp.is_integers()) {
    for (std::size_t total = 0; total <= 2 * max_length; ++total)
      for (std::size_t lm = 0; lm <= std::min(total, max_length); ++lm) {
        auto ln = total - lm;
        if (ln > max_length) continue;
        for (const auto& mu : paths_of_length(g, lm))
          for (const auto& nu : paths_of_length(g, ln))
            if (mu.target() == nu.target() && theta.label(mu, nu) == gamma) return std::make_pair(mu, nu);
      }
    return std::nullopt;
  }
  const auto n = g.vertex_count(), G = *grp.order();
  auto idx = [&](VertexId a, VertexId b, std::int64_t d) { return (a * n + b) * G + d; };
  struct Parent {
    std::size_t prev;
    bool first_side;
    EdgeId edge;
  };
  constexpr std::size_t kRoot = SIZE_MAX;
  std::vector<std::optional<Parent>> parent(n * n * G);
  std::deque<std::size_t> queue;
  for (VertexId w = 0; w < n; ++w) {
    if (!g.in_core(w)) continue;
    parent[idx(w, w, 0)] = Parent{kRoot, true, 0};
    queue.push_back(idx(w, w, 0));
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    GroupElement lambda{static_cast<std::int64_t>(s % G)};
    VertexId u1 = static_cast<VertexId>(s / G / n), u2 = static_cast<VertexId>(s / G % n);
    if (lambda == gamma) {
      std::vector<EdgeId> mu, nu;
      for (auto cur = s; parent[cur]->prev != kRoot; cur = parent[cur]->prev)
        (parent[cur]->first_side ? mu : nu).push_back(parent[cur]->edge);
      return std::make_pair(FinitePath::of(g, u1, mu), FinitePath::of(g, u2, nu));
    }
    auto visit = [&](std::size_t t, bool first, EdgeId e) {
      if (!parent[t]) {
        parent[t] = Parent{s, first, e};
        queue.push_back(t);
      }
    };
    // Prepending e to μ maps λ ↦ θ(e)λ; prepending f to ν maps λ ↦ λθ(f)⁻¹.
    for (EdgeId e : g.in_edges(u1)) visit(idx(g.origin(e), u2, grp.mul(theta.label(e), lambda).value), true, e);
    for (EdgeId f : g.in_edges(u2))
      visit(idx(u1, g.origin(f), grp.mul(lambda, grp.inverse(theta.label(f))).value), false, f);
  }
  return std::nullopt;
}

std::vector<std::pair<FinitePath, FinitePath>> kernel_pairs(const EdgeLabeling& theta,
                                                            std::size_t max_length) {
  const auto& g = theta.graph();
  std::vector<FinitePath> all;
  for (std::size_t l = 0; l <= max_length; ++l) {
    auto layer = paths_of_length(g, l);
    all.insert(all.end(), layer.begin(), layer.end());
  }
  std::vector<std::pair<FinitePath, FinitePath>> out;
  for (const auto& mu : all)
    for (const auto& nu : all)
      if (mu != nu && mu.target() == nu.target() && theta.label(mu) == theta.label(nu))
        out.emplace_back(mu, nu);
  return out;
}

}  // namespace weylgraph
