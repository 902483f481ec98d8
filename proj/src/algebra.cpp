#include "weylgraph/algebra.hpp"

#include <deque>
#include <map>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  auto ta = a.mu.length() + a.nu.length(), tb = b.mu.length() + b.nu.length();
  if (ta != tb) return ta < tb;
  if (a.mu.length() != b.mu.length()) return a.mu.length() < b.mu.length();
  if (auto c = a.mu <=> b.mu; c != 0) return c < 0;
  return (a.nu <=> b.nu) < 0;
}

namespace {

bool is_special(const Graph& g, EdgeId e) { return g.out_edges(g.origin(e)).back() == e; }

void accumulate(AlgebraElement::Terms& terms, const Graph& g, FinitePath mu, FinitePath nu,
                const Scalar& c) {
  if (c.is_zero()) return;
  while (!mu.empty() && !nu.empty() && mu.back() == nu.back() && is_special(g, mu.back())) {
    EdgeId e = mu.back();
    mu = take_front(g, mu, mu.length() - 1);
    nu = take_front(g, nu, nu.length() - 1);
    // S_{μe}S_{νe}* = S_μS_ν* − Σ_{f≠e} S_{μf}S_{νf}*; the siblings are already normal.
    for (EdgeId f : g.out_edges(g.origin(e))) {
      if (f == e) continue;
      Monomial m{extend(g, mu, f), extend(g, nu, f)};
      auto [it, fresh] = terms.try_emplace(std::move(m), -c);
      if (!fresh) {
        it->second -= c;
        if (it->second.is_zero()) terms.erase(it);
      }
    }
  }
  auto [it, fresh] = terms.try_emplace(Monomial{std::move(mu), std::move(nu)}, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

std::string format_monomial(const Graph& g, const Monomial& m) {
  if (m.mu.empty() && m.nu.empty()) return "P(" + g.vertex_name(m.mu.origin()) + ")";
  std::string s;
  if (!m.mu.empty()) s = "S(" + format_path(g, m.mu) + ")";
  if (!m.nu.empty()) s += (s.empty() ? "" : "*") + std::string("S(") + format_path(g, m.nu) + ")^*";
  return s;
}

}  // namespace

AlgebraElement::AlgebraElement(GraphPtr g) : graph_(std::move(g)) {
  if (!graph_) throw PreconditionError("algebra element without a graph");
}

AlgebraElement AlgebraElement::unit(GraphPtr g) {
  AlgebraElement a(std::move(g));
  for (VertexId v = 0; v < a.graph().vertex_count(); ++v)
    a.add(FinitePath::at(v), FinitePath::at(v), Scalar(1));
  return a;
}

AlgebraElement AlgebraElement::vertex(GraphPtr g, VertexId v) {
  return monomial(std::move(g), FinitePath::at(v), FinitePath::at(v));
}

AlgebraElement AlgebraElement::edge(GraphPtr g, EdgeId e) {
  auto mu = FinitePath::of(*g, {e});
  auto nu = FinitePath::at(g->target(e));
  return monomial(std::move(g), mu, nu);
}

AlgebraElement AlgebraElement::monomial(GraphPtr g, const FinitePath& mu, const FinitePath& nu,
                                        const Scalar& c) {
  AlgebraElement a(std::move(g));
  a.add(mu, nu, c);
  return a;
}

AlgebraElement AlgebraElement::scalar(GraphPtr g, const Scalar& c) {
  AlgebraElement a = unit(std::move(g));
  return a *= c;
}

void AlgebraElement::add(const FinitePath& mu, const FinitePath& nu, const Scalar& c) {
  if (mu.target() != nu.target()) throw PreconditionError("monomial paths must share a target");
  accumulate(terms_, *graph_, mu, nu, c);
}

void AlgebraElement::require_same_graph(const AlgebraElement& o) const {
  if (graph_ != o.graph_ && !(*graph_ == *o.graph_))
    throw PreconditionError("algebra elements over different graphs");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same_graph(o);
  for (const auto& [m, c] : o.terms_) accumulate(terms_, *graph_, m.mu, m.nu, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same_graph(o);
  for (const auto& [m, c] : o.terms_) accumulate(terms_, *graph_, m.mu, m.nu, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_graph(b);
  return a.terms_ == b.terms_;
}

std::string AlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string mono = format_monomial(*graph_, m);
    std::string term;
    if (c == Scalar(1)) {
      term = mono;
    } else if (c == Scalar(-1)) {
      term = "-" + mono;
    } else if (c.is_rational()) {
      term = c.to_string() + "*" + mono;
    } else {
      term = "(" + c.to_string() + ")*" + mono;
    }
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r(a.graph_ptr());
  if (a.graph_ptr() != b.graph_ptr() && !(a.graph() == b.graph()))
    throw PreconditionError("algebra elements over different graphs");
  const Graph& g = a.graph();
  for (const auto& [m1, c1] : a.terms()) {
    for (const auto& [m2, c2] : b.terms()) {
      // (S_μS_ν*)(S_αS_β*)
      if (is_prefix(m1.nu, m2.mu)) {
        auto gamma = drop_front(g, m2.mu, m1.nu.length());
        r.add(concat(m1.mu, gamma), m2.nu, c1 * c2);
      } else if (is_prefix(m2.mu, m1.nu)) {
        auto gamma = drop_front(g, m1.nu, m2.mu.length());
        r.add(m1.mu, concat(m2.nu, gamma), c1 * c2);
      }
    }
  }
  return r;
}

AlgebraElement involute(const AlgebraElement& a) {
  AlgebraElement r(a.graph_ptr());
  // Swapping μ and ν preserves normal form.
  for (const auto& [m, c] : a.terms()) r.add(m.nu, m.mu, c.conj());
  return r;
}

Scalar evaluate(const AlgebraElement& a, const GroupoidElement& alpha) {
  Scalar s;
  for (const auto& [m, c] : a.terms())
    if (bisection_contains(a.graph(), BasicBisection{m.mu, m.nu}, alpha)) s += c;
  return s;
}

Scalar convolve_pointwise_oracle(const AlgebraElement& a, const AlgebraElement& b,
                                 const GroupoidElement& gamma) {
  const Graph& g = a.graph();
  const EvPeriodicPath& y = gamma.target();
  std::vector<GroupoidElement> alphas;
  for (const auto& [m, c] : a.terms()) {
    if (!in_cylinder(m.mu, y)) continue;
    // The unique element of Z(μ,ν) with range y.
    auto x = prepend(g, m.nu, shift(g, y, m.mu.length()));
    auto alpha = make_arrow(g, y, static_cast<std::int64_t>(m.mu.length()) -
                                      static_cast<std::int64_t>(m.nu.length()), x);
    if (!alpha) throw VerificationError("range point of a basic bisection has no arrow");
    bool seen = false;
    for (const auto& prev : alphas) seen = seen || prev == *alpha;
    if (!seen) alphas.push_back(*alpha);
  }
  Scalar total;
  for (const auto& alpha : alphas) {
    Scalar fa = evaluate(a, alpha);
    if (fa.is_zero()) continue;
    total += fa * evaluate(b, compose(g, inverse(alpha), gamma));
  }
  return total;
}

AlgebraElement expectation_diagonal(const AlgebraElement& a) {
  AlgebraElement r(a.graph_ptr());
  for (const auto& [m, c] : a.terms())
    if (m.mu == m.nu) r.add(m.mu, m.nu, c);
  return r;
}

namespace {

void require_labeling_graph(const AlgebraElement& a, const EdgeLabeling& theta) {
  if (a.graph_ptr() != theta.graph_ptr() && !(a.graph() == theta.graph()))
    throw PreconditionError("labeling is over a different graph");
}

}  // namespace

AlgebraElement expectation_kernel(const AlgebraElement& a, const EdgeLabeling& theta) {
  require_labeling_graph(a, theta);
  AlgebraElement r(a.graph_ptr());
  for (const auto& [m, c] : a.terms())
    if (theta.label(m.mu) == theta.label(m.nu)) r.add(m.mu, m.nu, c);
  return r;
}

AlgebraElement group_act(const AlgebraElement& a, const GroupCharacter& chi, const EdgeLabeling& theta) {
  require_labeling_graph(a, theta);
  if (!theta.group().is_abelian()) throw PreconditionError("group action needs an abelian group");
  AlgebraElement r(a.graph_ptr());
  for (const auto& [m, c] : a.terms()) r.add(m.mu, m.nu, c * chi(theta.label(m.mu, m.nu)).to_scalar());
  return r;
}

QuasiBasis quasi_basis(const EdgeLabeling& theta) {
  const Graph& g = theta.graph();
  const Group& group = theta.group();
  if (group.is_integers()) throw PreconditionError("quasi-basis needs a finite group");
  if (!check_no_sinks(g).passed) throw PreconditionError("quasi-basis needs a graph without sinks");
  if (!kernel_minimality_sufficient(theta))
    throw PreconditionError("kernel-minimality sufficient criterion fails");
  const std::size_t n = *group.order();

  // into[w][λ]: shortest path ν with t(ν) = w and θ(ν) = λ, by backward BFS.
  std::vector<std::vector<std::optional<FinitePath>>> into(g.vertex_count());
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    auto& best = into[w];
    best.assign(n, std::nullopt);
    std::vector<std::vector<bool>> seen(g.vertex_count(), std::vector<bool>(n, false));
    std::deque<std::pair<FinitePath, std::size_t>> queue;
    queue.emplace_back(FinitePath::at(w), 0);
    seen[w][0] = true;
    while (!queue.empty()) {
      auto [p, lambda] = queue.front();
      queue.pop_front();
      if (!best[lambda]) best[lambda] = p;
      for (EdgeId f : g.in_edges(p.origin())) {
        auto l2 = static_cast<std::size_t>(group.mul(theta.label(f), {static_cast<std::int64_t>(lambda)}).value);
        VertexId u = g.origin(f);
        if (seen[u][l2]) continue;
        seen[u][l2] = true;
        std::vector<EdgeId> edges{f};
        edges.insert(edges.end(), p.edges().begin(), p.edges().end());
        queue.emplace_back(FinitePath::of(g, edges), l2);
      }
    }
  }

  QuasiBasis qb;
  auto gp = theta.graph_ptr();
  for (GroupElement s : group.elements()) {
    AlgebraElement cover(gp);
    auto add_entry = [&](const FinitePath& rho) {
      GroupElement need = group.mul(group.inverse(s), theta.label(rho));
      const auto& nu = into[rho.target()][static_cast<std::size_t>(need.value)];
      if (!nu) throw BoundExceeded("no label " + group.format(need) + " into " + format_path(g, rho));
      auto u = AlgebraElement::monomial(gp, rho, *nu);
      auto v = involute(u);
      cover += multiply(u, v);
      qb.entries.push_back({s, rho, *nu, u, v});
    };
    for (VertexId w = 0; w < g.vertex_count(); ++w) {
      auto rho = FinitePath::at(w);
      if (theta.label(rho) == s) {
        add_entry(rho);
      } else {
        for (const auto& child : children(g, rho)) add_entry(child);
      }
    }
    if (!(cover == AlgebraElement::unit(gp)))
      throw VerificationError("quasi-basis ranges for s = " + group.format(s) +
                              " do not partition the unit: " + cover.to_string());
  }
  return qb;
}

namespace {

FinitePath random_path_into(const Graph& g, Rng& rng, VertexId w, std::size_t length) {
  std::vector<EdgeId> rev;
  VertexId cur = w;
  for (std::size_t i = 0; i < length; ++i) {
    const auto& in = g.in_edges(cur);
    if (in.empty()) break;
    EdgeId e = in[rng.below(in.size())];
    rev.push_back(e);
    cur = g.origin(e);
  }
  if (rev.empty()) return FinitePath::at(w);
  return FinitePath::of(g, std::vector<EdgeId>(rev.rbegin(), rev.rend()));
}

Scalar random_rational(Rng& rng, long range) {
  long num = static_cast<long>(rng.below(2 * range + 1)) - range;
  long den = static_cast<long>(rng.below(3)) + 1;
  return Scalar(mpq_class(num, den));
}

}  // namespace

AlgebraElement random_element(const GraphPtr& g, Rng& rng, const RandomElementSpec& spec) {
  AlgebraElement a(g);
  for (std::size_t t = 0; t < spec.terms; ++t) {
    VertexId w = random_core_vertex(*g, rng);
    auto mu = random_path_into(*g, rng, w, rng.below(spec.max_length + 1));
    auto nu = random_path_into(*g, rng, w, rng.below(spec.max_length + 1));
    Scalar c = random_rational(rng, spec.coefficient_range);
    if (spec.gaussian) c += random_rational(rng, spec.coefficient_range) * Scalar::i();
    if (c.is_zero()) c = Scalar(1);
    a.add(mu, nu, c);
  }
  return a;
}

AlgebraElement watatani_index(const QuasiBasis& qb, const EdgeLabeling& theta, Rng& rng,
                              std::size_t samples, const RandomElementSpec& spec) {
  const auto& gp = theta.graph_ptr();
  for (std::size_t i = 0; i < samples; ++i) {
    auto x = random_element(gp, rng, spec);
    AlgebraElement rebuilt(gp);
    for (const auto& entry : qb.entries)
      rebuilt += multiply(entry.u, expectation_kernel(multiply(entry.v, x), theta));
    if (!(rebuilt == x))
      throw VerificationError("quasi-basis identity fails at x = " + x.to_string() + ": got " +
                              rebuilt.to_string());
  }
  AlgebraElement index(gp);
  for (const auto& entry : qb.entries) index += multiply(entry.u, entry.v);
  return index;
}

RelationReport check_cuntz_relations(const GraphPtr& g) {
  auto sinks = check_no_sinks(*g);
  if (!sinks.passed)
    throw PreconditionError("graph has a sink: " + g->vertex_name(sinks.witnesses.front()));
  RelationReport report;
  auto record = [&](std::string name, bool ok) {
    report.passed = report.passed && ok;
    report.checks.push_back({std::move(name), ok});
  };
  auto one = AlgebraElement::unit(g);
  auto zero = AlgebraElement::zero(g);
  for (EdgeId e = 0; e < g->edge_count(); ++e) {
    auto se = AlgebraElement::edge(g, e);
    auto se_star = involute(se);
    for (EdgeId f = 0; f < g->edge_count(); ++f) {
      auto prod = multiply(se_star, AlgebraElement::edge(g, f));
      std::string name = "S(" + g->edge_name(e) + ")^*S(" + g->edge_name(f) + ") = ";
      if (e == f)
        record(name + "P(" + g->vertex_name(g->target(e)) + ")",
               prod == AlgebraElement::vertex(g, g->target(e)));
      else
        record(name + "0", prod == zero);
    }
  }
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    AlgebraElement sum(g);
    std::string rhs;
    for (EdgeId e : g->out_edges(v)) {
      auto se = AlgebraElement::edge(g, e);
      sum += multiply(se, involute(se));
      rhs += (rhs.empty() ? "" : " + ") + std::string("S(") + g->edge_name(e) + ")S(" +
             g->edge_name(e) + ")^*";
    }
    record("P(" + g->vertex_name(v) + ") = " + rhs, sum == AlgebraElement::vertex(g, v));
  }
  AlgebraElement total(g);
  for (VertexId v = 0; v < g->vertex_count(); ++v) {
    auto pv = AlgebraElement::vertex(g, v);
    total += pv;
    for (VertexId w = 0; w < g->vertex_count(); ++w) {
      auto prod = multiply(pv, AlgebraElement::vertex(g, w));
      record("P(" + g->vertex_name(v) + ")P(" + g->vertex_name(w) + ") = " +
                 (v == w ? "P(" + g->vertex_name(v) + ")" : std::string("0")),
             v == w ? prod == pv : prod == zero);
    }
  }
  bool unit_ok = total == one;
  for (EdgeId e = 0; e < g->edge_count() && unit_ok; ++e) {
    auto se = AlgebraElement::edge(g, e);
    unit_ok = multiply(total, se) == se && multiply(se, total) == se;
  }
  record("sum of P(v) = 1", unit_ok);
  return report;
}

AlgebraElement projection_sum(const GraphPtr& g, const std::vector<VertexId>& vertices) {
  AlgebraElement p(g);
  for (VertexId v : vertices) p += AlgebraElement::vertex(g, v);
  return p;
}

}  // namespace weylgraph
