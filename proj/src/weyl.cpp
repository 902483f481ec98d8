#include "weylgraph/weyl.hpp"

#include <algorithm>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

GroupoidAutomorphism identity_groupoid_automorphism(const GraphPtr& g) {
  auto id = identity_automorphism(g);
  return {id, id, 1};
}

AlgebraAutomorphism identity_algebra_automorphism(const GraphPtr& g) {
  return {identity_groupoid_automorphism(g), Cocycle::trivial()};
}

CylinderUnion image_of_cylinder(const GroupoidAutomorphism& phi, const FinitePath& sigma) {
  const auto& k = phi.h_inv;
  const Graph& y = *k.source;
  const std::size_t n = word_length_for(k, sigma.length());
  std::vector<FinitePath> hits;
  for (const auto& u : paths_of_length(y, n))
    if (is_prefix(sigma, *eval_word(k, u))) hits.push_back(u);
  return normalize_cylinders(y, std::move(hits));
}

namespace {

// Extra symbols η such that, on Z(μη, νη), both images are A·t and A'·t with
// t ranging over T^m h(C(σ)), σ the last `tail` symbols of η.
struct Refinement {
  std::size_t depth, tail;
};

Refinement minimal_refinement(const EventualAutomorphism& h, const BasicBisection& b) {
  const auto tail = static_cast<std::size_t>(std::max<std::int64_t>(
      0, static_cast<std::int64_t>(h.m) + h.block_offset + static_cast<std::int64_t>(h.block_window) - 1));
  const std::size_t shortest = std::min(b.mu.length(), b.nu.length());
  const std::size_t head = h.head_window > shortest ? h.head_window - shortest : 0;
  return {std::max(tail, head), tail};
}

// Φ(Z(μη, νη)) for |η| ≥ the minimal refinement.
std::vector<BasicBisection> image_of_piece(const GroupoidAutomorphism& phi, const BasicBisection& b,
                                           const FinitePath& eta, std::size_t tail) {
  const auto& h = phi.h;
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  auto mu = concat(b.mu, eta), nu = concat(b.nu, eta);
  const std::size_t lead = eta.length() - tail;
  auto a = take_front(y, *eval_word(h, mu), h.m + b.mu.length() + lead);
  auto a2 = take_front(y, *eval_word(h, nu), h.m + b.nu.length() + lead);
  auto sigma = drop_front(x, eta, lead);
  // T^m of the cylinder union, after extending every piece to length ≥ m.
  std::vector<FinitePath> shifted;
  std::vector<FinitePath> todo = image_of_cylinder(phi, sigma).paths;
  while (!todo.empty()) {
    auto u = todo.back();
    todo.pop_back();
    if (u.length() < h.m) {
      for (auto& c : children(y, u)) todo.push_back(std::move(c));
      continue;
    }
    shifted.push_back(drop_front(y, u, h.m));
  }
  std::vector<BasicBisection> out;
  for (const auto& tau : normalize_cylinders(y, std::move(shifted)).paths) {
    if (tau.origin() != a.target() || tau.origin() != a2.target())
      throw VerificationError("bisection image does not continue the head images");
    out.push_back({concat(a, tau), concat(a2, tau)});
  }
  return out;
}

void require_degree_preserving(const GroupoidAutomorphism& phi) {
  if (phi.sign != 1) throw PreconditionError("bisection images are computed for degree-preserving automorphisms");
}

}  // namespace

Bisection image_of_bisection(const GroupoidAutomorphism& phi, const BasicBisection& b) {
  require_degree_preserving(phi);
  const Graph& x = *phi.h.source;
  if (!x.in_core(b.mu.target())) return {};
  auto r = minimal_refinement(phi.h, b);
  Bisection out;
  for (const auto& eta : paths_from(x, b.mu.target(), r.depth)) {
    auto pieces = image_of_piece(phi, b, eta, r.tail);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return normalize_bisection(*phi.h.target, std::move(out));
}

AlgebraElement apply_automorphism(const AlgebraAutomorphism& a, const AlgebraElement& el, std::size_t max_depth) {
  const auto& phi = a.phi;
  require_degree_preserving(phi);
  if (!a.c.circle_valued()) throw PreconditionError("automorphism cocycle must be circle-valued");
  const Graph& x = *phi.h.source;
  if (!(el.graph() == x)) throw PreconditionError("element lives on a different graph");
  AlgebraElement out(phi.h.target);
  for (const auto& [mono, coef] : el.terms()) {
    BasicBisection b{mono.mu, mono.nu};
    if (!x.in_core(b.mu.target())) throw PreconditionError("automorphisms act on graphs without sinks");
    auto r = minimal_refinement(phi.h, b);
    for (std::size_t depth = r.depth;; ++depth) {
      if (depth > r.depth + max_depth) throw BoundExceeded("cocycle is not constant on refined pieces");
      std::vector<std::pair<FinitePath, RootOfUnity>> values;
      bool constant = true;
      for (const auto& eta : paths_from(x, b.mu.target(), depth)) {
        auto v = constant_value_on(x, a.c, {concat(b.mu, eta), concat(b.nu, eta)});
        if (!v) {
          constant = false;
          break;
        }
        values.emplace_back(eta, std::get<RootOfUnity>(*v));
      }
      if (!constant) continue;
      for (const auto& [eta, value] : values)
        for (const auto& piece : image_of_piece(phi, b, eta, r.tail + (depth - r.depth)))
          out.add(piece.mu, piece.nu, coef * value.to_scalar());
      break;
    }
  }
  return out;
}

AlgebraAutomorphism compose(const AlgebraAutomorphism& after, const AlgebraAutomorphism& before) {
  return {compose(after.phi, before.phi),
          Cocycle::product({Cocycle::pullback(after.c, groupoid_map(before.phi)), before.c})};
}

namespace {

std::vector<FinitePath> core_paths_up_to(const Graph& g, std::size_t depth) {
  std::vector<FinitePath> out;
  for (std::size_t n = 0; n <= depth; ++n) {
    auto layer = paths_of_length(g, n);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace

namespace {

std::vector<AlgebraElement> monomials_up_to(const GraphPtr& gp, std::size_t depth) {
  auto paths = core_paths_up_to(*gp, depth);
  std::vector<AlgebraElement> out;
  for (const auto& mu : paths)
    for (const auto& nu : paths)
      if (mu.target() == nu.target()) out.push_back(AlgebraElement::monomial(gp, mu, nu));
  return out;
}

// False with a counterexample when φ_A∘φ_B and φ_{A·B} differ on a monomial.
bool check_pair(const AlgebraAutomorphism& a, const AlgebraAutomorphism& b, const std::vector<AlgebraElement>& monomials,
                const std::string& label, SemidirectReport& report) {
  auto ab = compose(a, b);
  ++report.pairs;
  for (const auto& m : monomials) {
    ++report.monomials;
    auto lhs = apply_automorphism(a, apply_automorphism(b, m));
    auto rhs = apply_automorphism(ab, m);
    if (!(lhs == rhs)) {
      report.passed = false;
      report.counterexample =
          label + " on " + m.to_string() + ": composite of actions " + lhs.to_string() + " vs action of product " + rhs.to_string();
      return false;
    }
  }
  return true;
}

}  // namespace

SemidirectReport check_semidirect_law(const std::vector<AlgebraAutomorphism>& autos, std::size_t depth) {
  SemidirectReport report;
  if (autos.empty()) return report;
  auto monomials = monomials_up_to(autos.front().phi.h.source, depth);
  for (std::size_t i = 0; i < autos.size(); ++i)
    for (std::size_t j = 0; j < autos.size(); ++j)
      if (!check_pair(autos[i], autos[j], monomials, "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")", report))
        return report;
  return report;
}

SemidirectReport check_semidirect_pairs(
    const std::vector<std::pair<AlgebraAutomorphism, AlgebraAutomorphism>>& pairs, std::size_t depth) {
  SemidirectReport report;
  if (pairs.empty()) return report;
  auto monomials = monomials_up_to(pairs.front().first.phi.h.source, depth);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!check_pair(pairs[i].first, pairs[i].second, monomials, "pair " + std::to_string(i), report)) return report;
  return report;
}

SemidirectReport semidirect_random_test(const GraphPtr& g, std::uint64_t seed, std::size_t count, std::size_t depth) {
  Rng rng(seed);
  auto autos = enumerate_A(g, {1, 1, 2'000'000}).automorphisms;
  auto random_auto = [&]() -> AlgebraAutomorphism {
    const auto& phi = autos[rng.below(autos.size())];
    if (rng.coin()) return {phi, Cocycle::gauge(g, 8, static_cast<std::int64_t>(rng.below(8)))};
    CircleFunction f{2, {}, RootOfUnity::one()};
    for (const auto& w : paths_of_length(*g, 2))
      f.values.emplace(w, RootOfUnity::make(static_cast<std::int64_t>(rng.below(4)), 4));
    return {phi, Cocycle::coboundary(g, f)};
  };
  std::vector<std::pair<AlgebraAutomorphism, AlgebraAutomorphism>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    auto a = random_auto();
    pairs.emplace_back(a, random_auto());
  }
  return check_semidirect_pairs(pairs, depth);
}

bool check_fixes_diagonal(const AlgebraAutomorphism& a, std::size_t depth) {
  const auto& gp = a.phi.h.source;
  for (const auto& mu : core_paths_up_to(*gp, depth)) {
    auto p = AlgebraElement::monomial(gp, mu, mu);
    if (!(apply_automorphism(a, p) == p)) return false;
  }
  return true;
}

bool within_bounds(const EventualAutomorphism& h, const SearchBounds& bounds) {
  const std::size_t w = std::max<std::size_t>(bounds.w, 1);
  return h.m <= bounds.mmax && h.block_window <= w && h.head_window <= h.m + w && h.block_offset <= 0 &&
         h.block_offset >= -static_cast<std::int64_t>(h.m);
}

WeylEnumeration enumerate_A(const GraphPtr& g, const SearchBounds& bounds, Execution exec) {
  WeylEnumeration out;
  auto require = [&](const std::string& name, bool passed, const std::string& detail) {
    out.hypotheses.push_back({name, passed});
    if (!passed) throw HypothesisError(name, "hypothesis '" + name + "' fails: " + detail);
  };
  auto sinks = check_no_sinks(*g);
  require("no sinks", sinks.passed, "a vertex has no outgoing edge");
  auto sources = check_no_sources(*g);
  require("no sources", sources.passed, "a vertex has no incoming edge");
  auto cond_l = check_condition_L(*g);
  require("condition (L)", cond_l.passed,
          cond_l.cycle ? "cycle '" + format_path(*g, *cond_l.cycle) + "' has no exit" : "a cycle has no exit");
  auto sync = check_pair_sync(*g);
  require("pair synchronization", sync.passed,
          sync.failing_pair ? "vertices '" + g->vertex_name(sync.failing_pair->first) + "' and '" +
                                  g->vertex_name(sync.failing_pair->second) + "' never meet"
                            : "two vertices never meet");

  auto cands = enumerate_candidates(g, g, bounds, exec);
  out.log = cands.log;
  std::vector<std::optional<std::size_t>> inverse_of(cands.maps.size());
  for (const auto& [i, j] : inverse_pairs(cands, cands, bounds))
    if (!inverse_of[i]) inverse_of[i] = j;
  for (std::size_t i = 0; i < cands.maps.size(); ++i) {
    if (!inverse_of[i]) continue;
    const auto& h = cands.maps[i];
    const auto& k = cands.maps[*inverse_of[i]];
    std::vector<IdentityCheck> checks{check_property_P(h), check_property_P(k), check_left_inverse(k, h),
                                      check_left_inverse(h, k)};
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
    const std::string tag = "automorphism " + std::to_string(out.automorphisms.size()) + ": ";
    const char* roles[] = {"h ", "h inverse ", "h inverse o h = id", "h o h inverse = id"};
    for (std::size_t r = 0; r < checks.size(); ++r) {
      checks[r].name = tag + (r < 2 ? roles[r] + checks[r].name : roles[r]);
      out.certificates.push_back(checks[r]);
    }
    if (!ok) throw VerificationError(tag + "certificate failed");
    out.automorphisms.push_back({h, k, 1});
  }

  const std::size_t n = out.automorphisms.size();
  out.table.assign(n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      try {
        auto c = compose(out.automorphisms[i].h, out.automorphisms[j].h);
        for (std::size_t t = 0; t < n && !out.table[i][j]; ++t)
          if (same_map(c, out.automorphisms[t].h)) out.table[i][j] = t;
        if (!out.table[i][j] && within_bounds(c, bounds))
          out.log.push_back("composite " + std::to_string(i) + "o" + std::to_string(j) +
                            " fits the bounds but was not enumerated");
      } catch (const BoundExceeded&) {
      }
    }
  return out;
}

}  // namespace weylgraph
