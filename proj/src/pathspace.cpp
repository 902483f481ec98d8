#include "weylgraph/pathspace.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<EdgeId> edges_by_name(const Graph& g, std::string_view text) {
  std::vector<EdgeId> out;
  for (const auto& t : split_ws(text)) {
    auto e = g.find_edge(t);
    if (!e) throw ParseError(0, "unknown edge '" + t + "'");
    out.push_back(*e);
  }
  return out;
}

bool same_tail(const FinitePath& outer_mu, const FinitePath& outer_nu, const FinitePath& mu,
               const FinitePath& nu) {
  // (mu, nu) = (outer_mu·γ, outer_nu·γ) for one γ.
  if (!is_prefix(outer_mu, mu) || !is_prefix(outer_nu, nu)) return false;
  if (mu.length() - outer_mu.length() != nu.length() - outer_nu.length()) return false;
  return std::equal(mu.edges().begin() + outer_mu.length(), mu.edges().end(),
                    nu.edges().begin() + outer_nu.length());
}

bool nested_in(const BasicBisection& inner, const BasicBisection& outer) {
  return same_tail(outer.mu, outer.nu, inner.mu, inner.nu);
}

bool covers_all_core_children(const Graph& g, VertexId v, const std::vector<EdgeId>& present) {
  const auto& need = g.core_out_edges(v);
  if (need.empty()) return false;
  return std::all_of(need.begin(), need.end(), [&](EdgeId e) {
    return std::find(present.begin(), present.end(), e) != present.end();
  });
}

}  // namespace

EvPeriodicPath EvPeriodicPath::make(const Graph& g, std::vector<EdgeId> prefix,
                                    std::vector<EdgeId> cycle) {
  if (cycle.empty()) throw PreconditionError("eventually periodic path needs a nonempty cycle");
  for (EdgeId e : prefix)
    if (e >= g.edge_count()) throw PreconditionError("edge id out of range");
  for (EdgeId e : cycle)
    if (e >= g.edge_count()) throw PreconditionError("edge id out of range");
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (g.target(prefix[i - 1]) != g.origin(prefix[i]))
      throw PreconditionError("prefix does not compose");
  for (std::size_t i = 0; i < cycle.size(); ++i)
    if (g.target(cycle[i]) != g.origin(cycle[(i + 1) % cycle.size()]))
      throw PreconditionError("cycle does not close up");
  if (!prefix.empty() && g.target(prefix.back()) != g.origin(cycle.front()))
    throw PreconditionError("prefix does not lead into the cycle");

  EvPeriodicPath x;
  x.origin_ = prefix.empty() ? g.origin(cycle.front()) : g.origin(prefix.front());
  const auto n = cycle.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = cycle[i] == cycle[i - p];
    if (periodic) {
      cycle.resize(p);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == cycle.back()) {
    prefix.pop_back();
    std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
  }
  x.prefix_ = std::move(prefix);
  x.cycle_ = std::move(cycle);
  return x;
}

std::vector<EdgeId> EvPeriodicPath::take(std::size_t n) const {
  std::vector<EdgeId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
  return out;
}

FinitePath EvPeriodicPath::word(const Graph& g, std::size_t n) const {
  return FinitePath::of(g, origin_, take(n));
}

EvPeriodicPath shift(const Graph& g, const EvPeriodicPath& x, std::size_t n) {
  if (n == 0) return x;
  const auto& pre = x.prefix();
  if (n <= pre.size()) return EvPeriodicPath::make(g, {pre.begin() + n, pre.end()}, x.cycle());
  auto cycle = x.cycle();
  std::rotate(cycle.begin(), cycle.begin() + (n - pre.size()) % cycle.size(), cycle.end());
  return EvPeriodicPath::make(g, {}, std::move(cycle));
}

EvPeriodicPath prepend(const Graph& g, const FinitePath& mu, const EvPeriodicPath& x) {
  if (mu.target() != x.origin()) throw PreconditionError("prepend: path does not lead to the point");
  auto pre = mu.edges();
  pre.insert(pre.end(), x.prefix().begin(), x.prefix().end());
  return EvPeriodicPath::make(g, std::move(pre), x.cycle());
}

bool in_cylinder(const FinitePath& mu, const EvPeriodicPath& x) {
  if (mu.origin() != x.origin()) return false;
  for (std::size_t i = 0; i < mu.length(); ++i)
    if (x.at(i) != mu[i]) return false;
  return true;
}

std::string format_point(const Graph& g, const EvPeriodicPath& x) {
  std::string out;
  for (EdgeId e : x.prefix()) out += g.edge_name(e) + " ";
  out += "|";
  for (EdgeId e : x.cycle()) out += " " + g.edge_name(e);
  return out;
}

EvPeriodicPath parse_point(const Graph& g, std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos) throw ParseError(0, "expected 'prefix | cycle'");
  auto prefix = edges_by_name(g, text.substr(0, bar));
  auto cycle = edges_by_name(g, text.substr(bar + 1));
  try {
    return EvPeriodicPath::make(g, std::move(prefix), std::move(cycle));
  } catch (const PreconditionError& e) {
    throw ParseError(0, e.what());
  }
}

std::optional<std::size_t> ell_tilde(const Graph& g, const EvPeriodicPath& y, std::int64_t n,
                                     const EvPeriodicPath& x) {
  const std::size_t lo = n > 0 ? static_cast<std::size_t>(n) : 0;
  const std::size_t hi = lo + y.prefix().size() + x.prefix().size() +
                         std::lcm(y.cycle().size(), x.cycle().size());
  auto ty = shift(g, y, lo);
  auto tx = shift(g, x, static_cast<std::size_t>(static_cast<std::int64_t>(lo) - n));
  for (std::size_t p = lo; p <= hi; ++p) {
    if (ty == tx) return p;
    ty = shift(g, ty);
    tx = shift(g, tx);
  }
  return std::nullopt;
}

std::optional<GroupoidElement> make_arrow(const Graph& g, const EvPeriodicPath& y, std::int64_t k,
                                          const EvPeriodicPath& x) {
  auto p = ell_tilde(g, y, k, x);
  if (!p) return std::nullopt;
  GroupoidElement a;
  a.y_ = y;
  a.x_ = x;
  a.k_ = k;
  a.p_ = *p;
  return a;
}

GroupoidElement unit(const EvPeriodicPath& x) {
  GroupoidElement a;
  a.y_ = x;
  a.x_ = x;
  return a;
}

GroupoidElement inverse(const GroupoidElement& a) {
  GroupoidElement b;
  b.y_ = a.x_;
  b.x_ = a.y_;
  b.k_ = -a.k_;
  b.p_ = a.witness().second;
  return b;
}

GroupoidElement compose(const Graph& g, const GroupoidElement& a, const GroupoidElement& b) {
  if (a.source() != b.target()) throw PreconditionError("compose: arrows are not composable");
  auto c = make_arrow(g, a.target(), a.degree() + b.degree(), b.source());
  if (!c) throw VerificationError("compose: composite failed tail equalization");
  return *c;
}

std::string format_arrow(const Graph& g, const GroupoidElement& a) {
  return "(" + format_point(g, a.target()) + " ; " + std::to_string(a.degree()) + " ; " +
         format_point(g, a.source()) + ")";
}

BasicBisection BasicBisection::make(const FinitePath& mu, const FinitePath& nu) {
  if (mu.target() != nu.target()) throw PreconditionError("Z(mu,nu) needs t(mu) = t(nu)");
  return {mu, nu};
}

BasicBisection star(const BasicBisection& b) { return {b.nu, b.mu}; }

bool is_empty(const Graph& g, const BasicBisection& b) { return !g.in_core(b.mu.target()); }

bool bisection_contains(const Graph& g, const BasicBisection& b, const GroupoidElement& a) {
  if (a.degree() != b.degree()) return false;
  if (!in_cylinder(b.mu, a.target()) || !in_cylinder(b.nu, a.source())) return false;
  return shift(g, a.target(), b.mu.length()) == shift(g, a.source(), b.nu.length());
}

std::optional<BasicBisection> multiply_basic(const Graph& g, const BasicBisection& a,
                                             const BasicBisection& b) {
  if (is_prefix(a.nu, b.mu)) return BasicBisection{concat(a.mu, drop_front(g, b.mu, a.nu.length())), b.nu};
  if (is_prefix(b.mu, a.nu)) return BasicBisection{a.mu, concat(b.nu, drop_front(g, a.nu, b.mu.length()))};
  return std::nullopt;
}

std::string format_bisection(const Graph& g, const BasicBisection& b) {
  return "Z(" + format_path(g, b.mu) + ", " + format_path(g, b.nu) + ")";
}

namespace {

Bisection drop_empty_and_nested(const Graph& g, Bisection pieces) {
  std::erase_if(pieces, [&](const BasicBisection& b) { return is_empty(g, b); });
  std::sort(pieces.begin(), pieces.end());
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  Bisection kept;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bool nested = false;
    for (std::size_t j = 0; j < pieces.size() && !nested; ++j)
      nested = j != i && nested_in(pieces[i], pieces[j]);
    if (!nested) kept.push_back(pieces[i]);
  }
  return kept;
}

}  // namespace

Bisection normalize_bisection(const Graph& g, Bisection pieces) {
  pieces = drop_empty_and_nested(g, std::move(pieces));
  for (bool merged = true; merged;) {
    merged = false;
    std::map<std::pair<FinitePath, FinitePath>, std::vector<EdgeId>> families;
    for (const auto& b : pieces)
      if (!b.mu.empty() && !b.nu.empty() && b.mu.back() == b.nu.back())
        families[{take_front(g, b.mu, b.mu.length() - 1), take_front(g, b.nu, b.nu.length() - 1)}]
            .push_back(b.mu.back());
    for (const auto& [parent, last] : families) {
      if (!covers_all_core_children(g, parent.first.target(), last)) continue;
      std::erase_if(pieces, [&](const BasicBisection& b) {
        return !b.mu.empty() && !b.nu.empty() && b.mu.back() == b.nu.back() &&
               b.mu.length() == parent.first.length() + 1 && b.nu.length() == parent.second.length() + 1 &&
               is_prefix(parent.first, b.mu) && is_prefix(parent.second, b.nu);
      });
      pieces.push_back({parent.first, parent.second});
      merged = true;
      break;
    }
  }
  std::sort(pieces.begin(), pieces.end());
  return pieces;
}

void require_bisection(const Graph& g, const Bisection& pieces) {
  auto kept = drop_empty_and_nested(g, pieces);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if (comparable(kept[i].mu, kept[j].mu))
        throw PreconditionError("not a bisection: ranges of " + format_bisection(g, kept[i]) +
                                " and " + format_bisection(g, kept[j]) + " overlap");
      if (comparable(kept[i].nu, kept[j].nu))
        throw PreconditionError("not a bisection: sources of " + format_bisection(g, kept[i]) +
                                " and " + format_bisection(g, kept[j]) + " overlap");
    }
}

Bisection bisection_multiply(const Graph& g, const Bisection& a, const Bisection& b) {
  require_bisection(g, a);
  require_bisection(g, b);
  Bisection out;
  for (const auto& x : a)
    for (const auto& y : b)
      if (auto p = multiply_basic(g, x, y)) out.push_back(*p);
  return normalize_bisection(g, std::move(out));
}

Bisection bisection_star(const Graph& g, const Bisection& a) {
  Bisection out;
  for (const auto& b : a) out.push_back(star(b));
  return normalize_bisection(g, std::move(out));
}

bool bisection_contains(const Graph& g, const Bisection& b, const GroupoidElement& a) {
  return std::any_of(b.begin(), b.end(), [&](const BasicBisection& piece) {
    return bisection_contains(g, piece, a);
  });
}

CylinderUnion normalize_cylinders(const Graph& g, std::vector<FinitePath> paths) {
  std::erase_if(paths, [&](const FinitePath& p) { return !g.in_core(p.target()); });
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  std::vector<FinitePath> kept;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool nested = false;
    for (std::size_t j = 0; j < paths.size() && !nested; ++j)
      nested = j != i && is_prefix(paths[j], paths[i]);
    if (!nested) kept.push_back(paths[i]);
  }
  for (bool merged = true; merged;) {
    merged = false;
    std::map<FinitePath, std::vector<EdgeId>> families;
    for (const auto& p : kept)
      if (!p.empty()) families[take_front(g, p, p.length() - 1)].push_back(p.back());
    for (const auto& [parent, last] : families) {
      if (!covers_all_core_children(g, parent.target(), last)) continue;
      std::erase_if(kept, [&](const FinitePath& p) {
        return p.length() == parent.length() + 1 && is_prefix(parent, p);
      });
      kept.push_back(parent);
      merged = true;
      break;
    }
  }
  std::sort(kept.begin(), kept.end());
  return {kept};
}

CylinderUnion whole_space(const Graph& g) {
  std::vector<FinitePath> paths;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_core(v)) paths.push_back(FinitePath::at(v));
  return {paths};
}

bool cylinder_covered(const Graph& g, const std::vector<FinitePath>& pieces, const FinitePath& mu) {
  if (!g.in_core(mu.target())) return true;
  bool inside = false;
  for (const auto& p : pieces) {
    if (is_prefix(p, mu)) return true;
    inside = inside || is_prefix(mu, p);
  }
  if (!inside) return false;
  for (const auto& c : children(g, mu))
    if (!cylinder_covered(g, pieces, c)) return false;
  return true;
}

FlipVerification verify_flip_obstruction(const Graph& g, const CylinderUnion& U) {
  std::vector<FinitePath> pieces;
  for (const auto& p : U.paths) {
    if (p.empty()) {
      for (auto& c : children(g, p)) pieces.push_back(std::move(c));
    } else if (g.in_core(p.target())) {
      pieces.push_back(p);
    }
  }
  std::vector<FinitePath> tails;
  for (const auto& p : pieces) tails.push_back(drop_front(g, p, 1));
  FlipVerification v;
  v.image_is_whole = normalize_cylinders(g, tails) == whole_space(g);
  v.injective = true;
  for (std::size_t i = 0; i < tails.size() && v.injective; ++i)
    for (std::size_t j = i + 1; j < tails.size() && v.injective; ++j)
      v.injective = !comparable(tails[i], tails[j]);
  v.proper = normalize_cylinders(g, U.paths) != whole_space(g);
  return v;
}

std::optional<FlipObstruction> flip_obstruction_search(const Graph& g, std::size_t L) {
  if (!check_no_sinks(g).passed) throw PreconditionError("flip obstruction search requires no sinks");
  if (!check_no_sources(g).passed) throw PreconditionError("flip obstruction search requires no sources");
  for (std::size_t len = 1; len <= L; ++len) {
    // One chosen incoming edge per tail; any such choice has T(U) = X with T|U
    // injective, and properness depends only on in-degrees, so the first choice decides.
    std::vector<FinitePath> pieces;
    for (const auto& tau : paths_of_length(g, len - 1, false)) {
      EdgeId e = g.in_edges(tau.origin()).front();
      pieces.push_back(concat(FinitePath::of(g, {e}), tau));
    }
    CylinderUnion U = normalize_cylinders(g, std::move(pieces));
    auto verification = verify_flip_obstruction(g, U);
    if (verification.holds()) return FlipObstruction{U, len, verification};
  }
  return std::nullopt;
}

std::vector<BasicBisection> generating_bisections(const Graph& g) {
  std::vector<BasicBisection> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    out.push_back({FinitePath::of(g, {e}), FinitePath::at(g.target(e))});
  for (VertexId v = 0; v < g.vertex_count(); ++v) out.push_back({FinitePath::at(v), FinitePath::at(v)});
  return out;
}

}  // namespace weylgraph
