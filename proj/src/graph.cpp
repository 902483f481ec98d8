#include "weylgraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <regex>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

namespace {

bool valid_identifier(const std::string& s) {
  static const std::regex pattern("[A-Za-z0-9_]+");
  return std::regex_match(s, pattern);
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Graph::Graph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
  const auto n = vertex_names_.size();
  for (VertexId v = 0; v < n; ++v) {
    if (!vertex_index_.emplace(vertex_names_[v], v).second)
      throw PreconditionError("duplicate vertex '" + vertex_names_[v] + "'");
  }
  out_.resize(n);
  in_.resize(n);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.origin >= n || ed.target >= n)
      throw PreconditionError("edge '" + ed.name + "' references an undeclared vertex");
    if (!edge_index_.emplace(ed.name, e).second)
      throw PreconditionError("duplicate edge '" + ed.name + "'");
    out_[ed.origin].push_back(e);
    in_[ed.target].push_back(e);
  }
  // Core: greatest set of vertices each having an edge into the set.
  core_.assign(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (VertexId v = 0; v < n; ++v) {
      if (!core_[v]) continue;
      bool alive = std::any_of(out_[v].begin(), out_[v].end(),
                               [&](EdgeId e) { return core_[edges_[e].target]; });
      if (!alive) {
        core_[v] = false;
        changed = true;
      }
    }
  }
  core_out_.resize(n);
  for (VertexId v = 0; v < n; ++v)
    for (EdgeId e : out_[v])
      if (core_[edges_[e].target]) core_out_[v].push_back(e);
}

std::optional<VertexId> Graph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.vertex_names_ != b.vertex_names_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto &x = a.edges_[i], &y = b.edges_[i];
    if (x.name != y.name || x.origin != y.origin || x.target != y.target) return false;
  }
  return true;
}

Graph parse_graph(std::string_view text) {
  std::vector<std::string> vertices;
  struct PendingEdge {
    std::string name, origin, target;
    std::size_t line;
  };
  std::vector<PendingEdge> pending;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens[0].rfind("vertices:", 0) == 0) {
      std::string rest = tokens[0].substr(9);
      if (!rest.empty()) tokens.insert(tokens.begin() + 1, rest);
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!valid_identifier(tokens[i]))
          throw ParseError(line_no, "invalid vertex identifier '" + tokens[i] + "'");
        if (std::find(vertices.begin(), vertices.end(), tokens[i]) != vertices.end())
          throw ParseError(line_no, "duplicate vertex '" + tokens[i] + "'");
        vertices.push_back(tokens[i]);
      }
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 4)
        throw ParseError(line_no, "expected 'edge <id> <origin> <target>'");
      for (std::size_t i = 1; i < 4; ++i)
        if (!valid_identifier(tokens[i]))
          throw ParseError(line_no, "invalid identifier '" + tokens[i] + "'");
      for (const auto& p : pending)
        if (p.name == tokens[1]) throw ParseError(line_no, "duplicate edge '" + tokens[1] + "'");
      pending.push_back({tokens[1], tokens[2], tokens[3], line_no});
    } else {
      throw ParseError(line_no, "unknown directive '" + tokens[0] + "'");
    }
    if (end == text.size()) break;
  }
  std::vector<Edge> edges;
  for (const auto& p : pending) {
    auto find = [&](const std::string& name) -> VertexId {
      auto it = std::find(vertices.begin(), vertices.end(), name);
      if (it == vertices.end())
        throw ParseError(p.line, "edge '" + p.name + "' references undeclared vertex '" + name + "'");
      return static_cast<VertexId>(it - vertices.begin());
    };
    edges.push_back({p.name, find(p.origin), find(p.target)});
  }
  return Graph(std::move(vertices), std::move(edges));
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "vertices:";
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << ' ' << g.vertex_name(v);
  out << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out << "edge " << g.edge_name(e) << ' ' << g.vertex_name(g.origin(e)) << ' '
        << g.vertex_name(g.target(e)) << '\n';
  return out.str();
}

FinitePath FinitePath::of(const Graph& g, std::vector<EdgeId> edges) {
  if (edges.empty()) throw PreconditionError("FinitePath::of needs a base vertex for the empty path");
  VertexId base = g.origin(edges.front());
  return of(g, base, std::move(edges));
}

FinitePath FinitePath::of(const Graph& g, VertexId base, std::vector<EdgeId> edges) {
  if (base >= g.vertex_count()) throw PreconditionError("base vertex out of range");
  VertexId at = base;
  for (EdgeId e : edges) {
    if (e >= g.edge_count()) throw PreconditionError("edge id out of range");
    if (g.origin(e) != at)
      throw PreconditionError("edges do not compose at '" + g.edge_name(e) + "'");
    at = g.target(e);
  }
  return FinitePath(base, at, std::move(edges));
}

std::strong_ordering operator<=>(const FinitePath& a, const FinitePath& b) {
  if (auto c = a.edges_.size() <=> b.edges_.size(); c != 0) return c;
  if (auto c = a.edges_ <=> b.edges_; c != 0) return c;
  return a.origin_ <=> b.origin_;
}

FinitePath concat(const FinitePath& a, const FinitePath& b) {
  if (a.target() != b.origin()) throw PreconditionError("concat: paths do not compose");
  std::vector<EdgeId> e = a.edges_;
  e.insert(e.end(), b.edges_.begin(), b.edges_.end());
  return FinitePath(a.origin_, b.target_, std::move(e));
}

FinitePath extend(const Graph& g, const FinitePath& p, EdgeId e) {
  if (g.origin(e) != p.target()) throw PreconditionError("extend: edge does not compose");
  std::vector<EdgeId> edges = p.edges_;
  edges.push_back(e);
  return FinitePath(p.origin_, g.target(e), std::move(edges));
}

FinitePath take_front(const Graph& g, const FinitePath& p, std::size_t n) {
  if (n >= p.length()) return p;
  return FinitePath::of(g, p.origin(), {p.edges().begin(), p.edges().begin() + n});
}

FinitePath drop_front(const Graph& g, const FinitePath& p, std::size_t n) {
  if (n == 0) return p;
  if (n > p.length()) throw PreconditionError("drop_front past end of path");
  VertexId base = g.target(p[n - 1]);
  return FinitePath::of(g, base, {p.edges().begin() + n, p.edges().end()});
}

bool is_prefix(const FinitePath& p, const FinitePath& q) {
  if (p.origin() != q.origin() || p.length() > q.length()) return false;
  return std::equal(p.edges().begin(), p.edges().end(), q.edges().begin());
}

bool comparable(const FinitePath& p, const FinitePath& q) {
  return is_prefix(p, q) || is_prefix(q, p);
}

std::string format_path(const Graph& g, const FinitePath& p) {
  if (p.empty()) return "@" + g.vertex_name(p.origin());
  std::string out;
  for (std::size_t i = 0; i < p.length(); ++i) {
    if (i) out += ' ';
    out += g.edge_name(p[i]);
  }
  return out;
}

FinitePath parse_path(const Graph& g, std::string_view text) {
  std::optional<VertexId> base;
  std::string body(text);
  auto semi = body.find(';');
  auto head = split_ws(semi == std::string::npos ? std::string_view{} : std::string_view(body).substr(0, semi));
  if (semi != std::string::npos) {
    if (head.size() != 2 || head[0] != "path")
      throw ParseError(0, "expected 'path <vertex>; <edges>'");
    base = g.find_vertex(head[1]);
    if (!base) throw ParseError(0, "unknown vertex '" + head[1] + "'");
    body = body.substr(semi + 1);
  }
  auto tokens = split_ws(body);
  if (tokens.size() == 1 && tokens[0].size() > 1 && tokens[0][0] == '@') {
    auto v = g.find_vertex(tokens[0].substr(1));
    if (!v) throw ParseError(0, "unknown vertex '" + tokens[0].substr(1) + "'");
    return FinitePath::at(*v);
  }
  std::vector<EdgeId> edges;
  for (const auto& t : tokens) {
    auto e = g.find_edge(t);
    if (!e) throw ParseError(0, "unknown edge '" + t + "'");
    edges.push_back(*e);
  }
  if (edges.empty()) {
    if (!base) throw ParseError(0, "empty path needs a base vertex");
    return FinitePath::at(*base);
  }
  VertexId start = base ? *base : g.origin(edges.front());
  try {
    return FinitePath::of(g, start, std::move(edges));
  } catch (const PreconditionError& e) {
    throw ParseError(0, e.what());
  }
}

std::vector<FinitePath> paths_from(const Graph& g, VertexId v, std::size_t length, bool core_only) {
  std::vector<FinitePath> layer{FinitePath::at(v)};
  if (core_only && !g.in_core(v)) return {};
  for (std::size_t d = 0; d < length; ++d) {
    std::vector<FinitePath> next;
    for (const auto& p : layer) {
      const auto& outs = core_only ? g.core_out_edges(p.target()) : g.out_edges(p.target());
      for (EdgeId e : outs) next.push_back(extend(g, p, e));
    }
    layer = std::move(next);
  }
  return layer;
}

std::vector<FinitePath> paths_of_length(const Graph& g, std::size_t length, bool core_only) {
  std::vector<FinitePath> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto from = paths_from(g, v, length, core_only);
    out.insert(out.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FinitePath> children(const Graph& g, const FinitePath& p) {
  std::vector<FinitePath> out;
  for (EdgeId e : g.core_out_edges(p.target())) out.push_back(extend(g, p, e));
  return out;
}

VertexCheck check_no_sinks(const Graph& g) {
  VertexCheck r;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.out_edges(v).empty()) r.witnesses.push_back(v);
  r.passed = r.witnesses.empty();
  return r;
}

VertexCheck check_no_sources(const Graph& g) {
  VertexCheck r;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_edges(v).empty()) r.witnesses.push_back(v);
  r.passed = r.witnesses.empty();
  return r;
}

ConditionLResult check_condition_L(const Graph& g) {
  const auto n = g.vertex_count();
  // On out-degree-1 vertices the successor map is a partial function; a cycle of it
  // is exactly a cycle without exit.
  enum : std::uint8_t { kNew, kActive, kDone };
  std::vector<std::uint8_t> state(n, kNew);
  for (VertexId start = 0; start < n; ++start) {
    if (state[start] != kNew || g.out_edges(start).size() != 1) continue;
    std::vector<VertexId> trail;
    VertexId v = start;
    while (g.out_edges(v).size() == 1 && state[v] == kNew) {
      state[v] = kActive;
      trail.push_back(v);
      v = g.target(g.out_edges(v)[0]);
    }
    if (g.out_edges(v).size() == 1 && state[v] == kActive) {
      auto pos = std::find(trail.begin(), trail.end(), v);
      VertexId first = *std::min_element(pos, trail.end());
      std::vector<EdgeId> cycle;
      VertexId u = first;
      do {
        EdgeId e = g.out_edges(u)[0];
        cycle.push_back(e);
        u = g.target(e);
      } while (u != first);
      return {false, FinitePath::of(g, first, std::move(cycle))};
    }
    for (VertexId u : trail) state[u] = kDone;
  }
  return {true, std::nullopt};
}

namespace {

// good[v*n+w]: the synchronous pair (v,w) reaches the diagonal.
std::vector<bool> sync_reachable(const Graph& g) {
  const auto n = g.vertex_count();
  std::vector<bool> good(n * n, false);
  std::deque<std::pair<VertexId, VertexId>> queue;
  for (VertexId v = 0; v < n; ++v) {
    good[v * n + v] = true;
    queue.emplace_back(v, v);
  }
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    for (EdgeId e : g.in_edges(a))
      for (EdgeId f : g.in_edges(b)) {
        VertexId pa = g.origin(e), pb = g.origin(f);
        if (!good[pa * n + pb]) {
          good[pa * n + pb] = true;
          queue.emplace_back(pa, pb);
        }
      }
  }
  return good;
}

}  // namespace

std::optional<SyncWitness> sync_witness(const Graph& g, VertexId v, VertexId w) {
  const auto n = g.vertex_count();
  struct Parent {
    std::uint32_t prev;
    EdgeId e, f;
  };
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<Parent> parent(n * n, {kNone, 0, 0});
  std::vector<bool> seen(n * n, false);
  std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(v * n + w)};
  seen[v * n + w] = true;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    VertexId a = s / n, b = s % n;
    if (a == b) {
      std::vector<EdgeId> left, right;
      for (auto cur = s; cur != v * n + w; cur = parent[cur].prev) {
        left.push_back(parent[cur].e);
        right.push_back(parent[cur].f);
      }
      std::reverse(left.begin(), left.end());
      std::reverse(right.begin(), right.end());
      return SyncWitness{v, w, FinitePath::of(g, v, left), FinitePath::of(g, w, right)};
    }
    for (EdgeId e : g.out_edges(a))
      for (EdgeId f : g.out_edges(b)) {
        auto t = g.target(e) * n + g.target(f);
        if (!seen[t]) {
          seen[t] = true;
          parent[t] = {s, e, f};
          queue.push_back(t);
        }
      }
  }
  return std::nullopt;
}

PairSyncResult check_pair_sync(const Graph& g) {
  const auto n = g.vertex_count();
  auto good = sync_reachable(g);
  PairSyncResult r;
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = v + 1; w < n; ++w) {
      if (!good[v * n + w]) {
        if (r.passed) r.failing_pair = std::make_pair(v, w);
        r.passed = false;
      } else {
        r.witnesses.push_back(*sync_witness(g, v, w));
      }
    }
  return r;
}

bool check_topological_transitivity(const Graph& g) {
  if (!check_no_sinks(g).passed)
    throw PreconditionError("topological transitivity requires a graph without sinks");
  const auto n = g.vertex_count();
  std::vector<bool> good(n * n, false);
  std::deque<std::pair<VertexId, VertexId>> queue;
  for (VertexId v = 0; v < n; ++v) {
    good[v * n + v] = true;
    queue.emplace_back(v, v);
  }
  // Backward closure of the diagonal under single-coordinate steps.
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    auto visit = [&](VertexId x, VertexId y) {
      if (!good[x * n + y]) {
        good[x * n + y] = true;
        queue.emplace_back(x, y);
      }
    };
    for (EdgeId e : g.in_edges(a)) visit(g.origin(e), b);
    for (EdgeId f : g.in_edges(b)) visit(a, g.origin(f));
  }
  return std::all_of(good.begin(), good.end(), [](bool b) { return b; });
}

TildeClasses tilde_classes(const Graph& g) {
  const auto n = g.vertex_count();
  auto good = sync_reachable(g);
  std::vector<VertexId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = v + 1; w < n; ++w)
      if (good[v * n + w]) {
        auto a = find(v), b = find(w);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  TildeClasses r;
  std::vector<int> slot(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    auto root = find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(r.classes.size());
      r.classes.emplace_back();
    }
    r.classes[slot[root]].push_back(v);
  }
  if (r.classes.size() > 1) r.projection_support = r.classes.front();
  return r;
}

}  // namespace weylgraph
