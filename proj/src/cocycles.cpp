#include "weylgraph/cocycles.hpp"

#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

struct Cocycle::Node {
  Kind kind = Kind::product;
  GraphPtr graph;
  CircleFunction circle_f;
  IntFunction int_f;
  bool circle = false;  // Birkhoff: which function is used
  std::optional<EdgeLabeling> theta;
  std::optional<GroupCharacter> chi;
  std::vector<Cocycle> factors;  // product factors, or the single pullback inner cocycle
  GroupoidMap map;
};

std::string format_value(const CocycleValue& v, const Group* group) {
  if (auto r = std::get_if<RootOfUnity>(&v)) return r->to_string();
  if (auto n = std::get_if<std::int64_t>(&v)) return std::to_string(*n);
  auto g = std::get<GroupElement>(v);
  return group ? group->format(g) : "#" + std::to_string(g.value);
}

GroupoidMap GroupoidMap::identity() {
  return {"id", [](const GroupoidElement& a) { return a; }, 0};
}

Cocycle Cocycle::coboundary(GraphPtr g, CircleFunction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::coboundary;
  n->graph = std::move(g);
  n->circle_f = std::move(f);
  return Cocycle(n);
}

Cocycle Cocycle::labeled(EdgeLabeling theta, std::optional<GroupCharacter> chi) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::labeled;
  n->graph = theta.graph_ptr();
  n->theta = std::move(theta);
  n->chi = std::move(chi);
  return Cocycle(n);
}

Cocycle Cocycle::birkhoff(GraphPtr g, IntFunction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::birkhoff;
  n->graph = std::move(g);
  n->int_f = std::move(f);
  return Cocycle(n);
}

Cocycle Cocycle::birkhoff(GraphPtr g, CircleFunction f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::birkhoff;
  n->graph = std::move(g);
  n->circle_f = std::move(f);
  n->circle = true;
  return Cocycle(n);
}

Cocycle Cocycle::product(std::vector<Cocycle> factors) {
  for (const auto& f : factors)
    if (!f.circle_valued()) throw PreconditionError("product of cocycles needs circle values");
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->factors = std::move(factors);
  return Cocycle(n);
}

Cocycle Cocycle::pullback(Cocycle inner, GroupoidMap map) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pullback;
  n->factors.push_back(std::move(inner));
  n->map = std::move(map);
  return Cocycle(n);
}

Cocycle Cocycle::gauge(GraphPtr g, std::size_t n, std::int64_t k) {
  std::vector<RootOfUnity> table;
  for (std::size_t j = 0; j < n; ++j)
    table.push_back(RootOfUnity::make(k * static_cast<std::int64_t>(j), static_cast<std::int64_t>(n)));
  return labeled(EdgeLabeling::length_mod(std::move(g), n), GroupCharacter::from_table(std::move(table)));
}

Cocycle::Kind Cocycle::kind() const { return node_->kind; }

bool Cocycle::circle_valued() const {
  switch (node_->kind) {
    case Kind::coboundary:
    case Kind::product:
      return true;
    case Kind::labeled:
      return node_->chi.has_value();
    case Kind::birkhoff:
      return node_->circle;
    case Kind::pullback:
      return node_->factors.front().circle_valued();
  }
  return false;
}

std::size_t Cocycle::lookahead() const {
  switch (node_->kind) {
    case Kind::coboundary:
      return node_->circle_f.window;
    case Kind::labeled:
      return 0;
    case Kind::birkhoff:
      return node_->circle ? node_->circle_f.window : node_->int_f.window;
    case Kind::product: {
      std::size_t m = 0;
      for (const auto& f : node_->factors) m = std::max(m, f.lookahead());
      return m;
    }
    case Kind::pullback:
      return node_->factors.front().lookahead() + node_->map.lookahead;
  }
  return 0;
}

namespace {

template <class V>
std::string describe_function(const Graph& g, const WindowFunction<V>& f) {
  std::ostringstream out;
  out << "window " << f.window << ";";
  for (const auto& [w, v] : f.values) {
    out << " [" << format_path(g, w) << "]=";
    if constexpr (std::is_same_v<V, RootOfUnity>)
      out << v.to_string();
    else
      out << v;
  }
  out << " else ";
  if constexpr (std::is_same_v<V, RootOfUnity>)
    out << f.fallback.to_string();
  else
    out << f.fallback;
  return out.str();
}

}  // namespace

std::string Cocycle::describe() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::coboundary:
      return "coboundary(" + describe_function(*n.graph, n.circle_f) + ")";
    case Kind::labeled:
      return "labeled(" + n.theta->group().label() + (n.chi ? ", " + n.chi->to_string() : "") + ")";
    case Kind::birkhoff:
      return "birkhoff(" +
             (n.circle ? describe_function(*n.graph, n.circle_f) : describe_function(*n.graph, n.int_f)) + ")";
    case Kind::product: {
      if (n.factors.empty()) return "1";
      std::string s;
      for (const auto& f : n.factors) s += (s.empty() ? "" : " * ") + f.describe();
      return s;
    }
    case Kind::pullback:
      return "(" + n.factors.front().describe() + ") o " + n.map.name;
  }
  return "";
}

namespace {

CocycleValue birkhoff_sum(const Cocycle::Node& n, const GroupoidElement& a, std::size_t p, std::size_t q) {
  const Graph& g = *n.graph;
  if (n.circle) {
    RootOfUnity r = RootOfUnity::one();
    EvPeriodicPath y = a.target(), x = a.source();
    for (std::size_t i = 0; i < p; ++i, y = shift(g, y)) r = r * n.circle_f(g, y);
    for (std::size_t j = 0; j < q; ++j, x = shift(g, x)) r = r * n.circle_f(g, x).inverse();
    return r;
  }
  std::int64_t s = 0;
  EvPeriodicPath y = a.target(), x = a.source();
  for (std::size_t i = 0; i < p; ++i, y = shift(g, y)) s += n.int_f(g, y);
  for (std::size_t j = 0; j < q; ++j, x = shift(g, x)) s -= n.int_f(g, x);
  return s;
}

}  // namespace

CocycleValue eval_cocycle(const Cocycle& c, const GroupoidElement& alpha) {
  const auto& n = c.node();
  switch (n.kind) {
    case Cocycle::Kind::coboundary: {
      const Graph& g = *n.graph;
      return n.circle_f(g, alpha.target()) * n.circle_f(g, alpha.source()).inverse();
    }
    case Cocycle::Kind::labeled: {
      const Graph& g = n.theta->graph();
      auto [p, q] = alpha.witness();
      auto value = n.theta->label(alpha.target().word(g, p), alpha.source().word(g, q));
      if (n.chi) return (*n.chi)(value);
      if (n.theta->group().is_integers()) return value.value;
      return value;
    }
    case Cocycle::Kind::birkhoff: {
      auto [p, q] = alpha.witness();
      return birkhoff_sum(n, alpha, p, q);
    }
    case Cocycle::Kind::product: {
      RootOfUnity r = RootOfUnity::one();
      for (const auto& f : n.factors) r = r * std::get<RootOfUnity>(eval_cocycle(f, alpha));
      return r;
    }
    case Cocycle::Kind::pullback:
      return eval_cocycle(n.factors.front(), n.map.apply(alpha));
  }
  throw PreconditionError("unknown cocycle kind");
}

RootOfUnity eval_circle(const Cocycle& c, const GroupoidElement& alpha) {
  if (!c.circle_valued()) throw PreconditionError("cocycle is not circle-valued: " + c.describe());
  return std::get<RootOfUnity>(eval_cocycle(c, alpha));
}

CocycleValue eval_birkhoff_with_witness(const Cocycle& c, const GroupoidElement& alpha, std::size_t p,
                                        std::size_t q) {
  if (c.kind() != Cocycle::Kind::birkhoff) throw PreconditionError("not a Birkhoff cocycle");
  if (static_cast<std::int64_t>(p) - static_cast<std::int64_t>(q) != alpha.degree() ||
      !(shift(*c.node().graph, alpha.target(), p) == shift(*c.node().graph, alpha.source(), q)))
    throw PreconditionError("not a witness for this arrow");
  return birkhoff_sum(c.node(), alpha, p, q);
}

GroupoidElement canonical_point(const Graph& g, const BasicBisection& b) {
  auto y = continuation(g, b.mu);
  auto x = prepend(g, b.nu, shift(g, y, b.mu.length()));
  auto a = make_arrow(g, y, b.degree(), x);
  if (!a) throw VerificationError("basic bisection point has no arrow");
  return *a;
}

std::optional<CocycleValue> constant_value_on(const Graph& g, const Cocycle& c, const BasicBisection& b) {
  if (!g.in_core(b.mu.target())) return std::nullopt;
  std::optional<CocycleValue> value;
  for (const auto& rho : paths_from(g, b.mu.target(), c.lookahead())) {
    auto v = eval_cocycle(c, canonical_point(g, {concat(b.mu, rho), concat(b.nu, rho)}));
    if (!value)
      value = v;
    else if (!(*value == v))
      return std::nullopt;
  }
  return value;
}

std::vector<Cocycle> kernel_vanishing_edge_cocycles(const EdgeLabeling& theta, std::size_t order,
                                                    std::size_t max_length) {
  const Graph& g = theta.graph();
  const std::size_t ne = g.edge_count();
  double total = 1;
  for (std::size_t i = 0; i < ne; ++i) total *= static_cast<double>(order);
  if (order == 0 || total > 1e6) throw BoundExceeded("too many edge cocycles to enumerate");
  auto pairs = kernel_pairs(theta, max_length);
  auto cyclic = Group::finite(FiniteGroup::cyclic(order), "Z/" + std::to_string(order));
  std::vector<RootOfUnity> table;
  for (std::size_t j = 0; j < order; ++j)
    table.push_back(RootOfUnity::make(static_cast<std::int64_t>(j), static_cast<std::int64_t>(order)));
  auto chi = GroupCharacter::from_table(table);

  std::vector<Cocycle> out;
  std::vector<std::int64_t> k(ne, 0);
  const auto n = static_cast<std::int64_t>(order);
  while (true) {
    bool vanishes = true;
    for (const auto& [mu, nu] : pairs) {
      std::int64_t s = 0;
      for (EdgeId e : mu.edges()) s += k[e];
      for (EdgeId e : nu.edges()) s -= k[e];
      if (((s % n) + n) % n != 0) {
        vanishes = false;
        break;
      }
    }
    if (vanishes) {
      std::vector<GroupElement> labels;
      for (auto v : k) labels.push_back({v});
      out.push_back(Cocycle::labeled(EdgeLabeling(theta.graph_ptr(), cyclic, labels), chi));
    }
    std::size_t i = ne;
    while (i > 0 && ++k[i - 1] == n) k[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

namespace {

GroupElement label_of(const EdgeLabeling& theta, const GroupoidElement& a) {
  auto [p, q] = a.witness();
  const Graph& g = theta.graph();
  return theta.label(a.target().word(g, p), a.source().word(g, q));
}

}  // namespace

AbelianFactor factor_through_abelianization(const Cocycle& c, const EdgeLabeling& theta, Rng& rng,
                                            std::size_t samples) {
  const Graph& g = theta.graph();
  const Group& group = theta.group();
  if (group.is_integers()) throw PreconditionError("abelianization needs a finite group");
  if (!c.circle_valued()) throw PreconditionError("cocycle must be circle-valued");
  if (!kernel_transitivity(theta).passed) throw PreconditionError("kernel transitivity fails");
  if (!image_subgroup(theta).full) throw PreconditionError("labeling is not surjective");

  AbelianFactor result{abelianize(group.finite_group()), GroupCharacter::on_integers(RootOfUnity::one()), std::nullopt, {}};
  auto pairs = kernel_pairs(theta, 3);
  std::size_t checked = 0;
  for (const auto& [mu, nu] : pairs) {
    BasicBisection b{mu, nu};
    for (int t = 0; t < 3; ++t) {
      auto a = t == 0 ? canonical_point(g, b) : random_arrow_in(g, rng, b);
      if (!eval_circle(c, a).is_one())
        throw PreconditionError("cocycle is not 1 on the kernel arrow " + format_arrow(g, a));
      ++checked;
    }
  }
  result.certificate.push_back("kernel vanishing: " + std::to_string(checked) + " kernel arrows");

  const auto order = *group.order();
  std::vector<RootOfUnity> value(order);
  for (std::size_t i = 0; i < order; ++i) {
    GroupElement gamma{static_cast<std::int64_t>(i)};
    auto arrow = find_arrow_with_label(theta, gamma);
    if (!arrow) throw VerificationError("no arrow with label " + group.format(gamma));
    value[i] = eval_circle(c, canonical_point(g, {arrow->first, arrow->second}));
    result.certificate.push_back("c on Z(" + format_path(g, arrow->first) + ", " +
                                 format_path(g, arrow->second) + ") with label " + group.format(gamma) +
                                 " = " + value[i].to_string());
  }
  for (std::size_t i = 0; i < samples; ++i) {
    auto a = random_arrow(g, rng, 4);
    auto gamma = label_of(theta, a);
    if (!(eval_circle(c, a) == value[static_cast<std::size_t>(gamma.value)]))
      throw VerificationError("cocycle value depends on more than the label at " + format_arrow(g, a));
  }
  result.certificate.push_back("label-determined on " + std::to_string(samples) + " random arrows");

  std::vector<std::optional<RootOfUnity>> table(result.ab.quotient.size());
  for (std::size_t i = 0; i < order; ++i) {
    auto& slot = table[result.ab.class_of[i]];
    if (slot && !(*slot == value[i]))
      throw VerificationError("cocycle is not constant on the coset of " + group.format({static_cast<std::int64_t>(i)}));
    slot = value[i];
  }
  std::vector<RootOfUnity> values;
  for (const auto& v : table) values.push_back(*v);
  result.chi = GroupCharacter::from_table(values);
  if (!is_homomorphism(result.ab.quotient, result.chi))
    throw VerificationError("induced map on the abelianization is not a character");
  result.certificate.push_back("character of the abelianization: homomorphism checked on all pairs");
  auto chars = enumerate_characters(result.ab.quotient);
  for (std::size_t i = 0; i < chars.size(); ++i)
    if (chars[i] == result.chi) result.index = i;
  return result;
}

bool GroupHom::is_identity(const Group& g1, const Group& g2) const {
  if (g1.is_integers() != g2.is_integers()) return false;
  if (g1.is_integers()) return images.size() == 1 && images[0].value == 1;
  for (std::size_t i = 0; i < images.size(); ++i)
    if (images[i].value != static_cast<std::int64_t>(i)) return false;
  return true;
}

GroupHom induced_group_hom(const GroupoidMap& phi, const EdgeLabeling& theta1, const EdgeLabeling& theta2,
                           Rng& rng, std::size_t samples) {
  const Graph& g1 = theta1.graph();
  const Group& G1 = theta1.group();
  const Group& G2 = theta2.group();
  if (!image_subgroup(theta1).full) throw PreconditionError("first labeling is not surjective");
  if (G1.is_integers() ? !check_pair_sync(g1).passed : !kernel_transitivity(theta1).passed)
    throw PreconditionError("kernel of the first cocycle is not transitive");

  GroupHom hom;
  for (const auto& [mu, nu] : kernel_pairs(theta1, 3)) {
    auto a = canonical_point(g1, {mu, nu});
    auto img = phi.apply(a);
    if (!(label_of(theta2, img) == G2.identity()))
      throw PreconditionError("map does not send the kernel arrow " + format_arrow(g1, a) + " into the kernel");
  }
  hom.certificate.push_back("kernel preserved on kernel pairs up to length 3");

  auto image_of = [&](GroupElement gamma) {
    auto arrow = find_arrow_with_label(theta1, gamma);
    if (!arrow) throw BoundExceeded("no arrow with label " + G1.format(gamma));
    auto a = canonical_point(g1, {arrow->first, arrow->second});
    auto t = label_of(theta2, phi.apply(a));
    hom.certificate.push_back("tau(" + G1.format(gamma) + ") = " + G2.format(t) + " via " + format_arrow(g1, a));
    return t;
  };
  if (G1.is_integers()) {
    hom.images.push_back(image_of({1}));
  } else {
    for (auto gamma : G1.elements()) hom.images.push_back(image_of(gamma));
    for (auto a : G1.elements())
      for (auto b : G1.elements())
        if (!(hom.images[static_cast<std::size_t>(G1.mul(a, b).value)] ==
              G2.mul(hom.images[static_cast<std::size_t>(a.value)], hom.images[static_cast<std::size_t>(b.value)])))
          throw VerificationError("induced map is not a homomorphism at " + G1.format(a) + ", " + G1.format(b));
    hom.certificate.push_back("homomorphism checked on all pairs");
  }
  auto tau = [&](GroupElement gamma) {
    return G1.is_integers() ? G2.pow(hom.images[0], gamma.value) : hom.images[static_cast<std::size_t>(gamma.value)];
  };
  for (std::size_t i = 0; i < samples; ++i) {
    auto a = random_arrow(g1, rng, 4);
    if (!(label_of(theta2, phi.apply(a)) == tau(label_of(theta1, a))))
      throw VerificationError("sigma2 o Phi differs from tau o sigma1 at " + format_arrow(g1, a));
  }
  hom.certificate.push_back("sigma2 o Phi = tau o sigma1 on " + std::to_string(samples) + " random arrows");
  return hom;
}

SeparatingCoboundary find_separating_coboundary(const GraphPtr& gp, const FinitePath& mu, const FinitePath& nu) {
  const Graph& g = *gp;
  if (mu == nu) throw PreconditionError("monomial is diagonal");
  if (mu.target() != nu.target()) throw PreconditionError("paths must share a target");
  if (!check_condition_L(g).passed) throw PreconditionError("condition (L) fails");
  const std::size_t bound = 2 * (mu.length() + nu.length()) + g.vertex_count() + 2;
  for (std::size_t depth = 0; depth <= bound; ++depth) {
    for (const auto& rho : paths_from(g, mu.target(), depth)) {
      auto a = canonical_point(g, {concat(mu, rho), concat(nu, rho)});
      const auto& y = a.target();
      const auto& x = a.source();
      if (y == x) continue;
      std::size_t w = 0;
      if (y.origin() == x.origin()) {
        while (y.at(w) == x.at(w)) ++w;
        ++w;
      }
      CircleFunction f{w, {{x.word(g, w), RootOfUnity::make(1, 2)}}, RootOfUnity::one()};
      auto c = Cocycle::coboundary(gp, f);
      return {c, f, a, eval_circle(c, a)};
    }
  }
  throw BoundExceeded("no separating point found");
}

}  // namespace weylgraph
