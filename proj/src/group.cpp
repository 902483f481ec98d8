#include "weylgraph/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

namespace {

Permutation compose_perm(const Permutation& s, const Permutation& t) {
  Permutation r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = s[t[i]];
  return r;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string cycle_notation(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    out += "(";
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (out.back() != '(') out += " ";
      out += std::to_string(j + 1);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<std::uint32_t>> table,
                                    std::vector<std::string> names) {
  const auto n = table.size();
  if (n == 0 || names.size() != n) throw PreconditionError("group table and names disagree");
  for (const auto& row : table) {
    if (row.size() != n) throw PreconditionError("group table is not square");
    for (auto v : row)
      if (v >= n) throw PreconditionError("group table entry out of range");
  }
  FiniteGroup g;
  g.table_ = std::move(table);
  g.names_ = std::move(names);
  g.inv_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    if (g.table_[0][a] != a || g.table_[a][0] != a)
      throw PreconditionError("element 0 is not the identity");
    bool found = false;
    for (std::uint32_t b = 0; b < n && !found; ++b)
      if (g.table_[a][b] == 0 && g.table_[b][a] == 0) {
        g.inv_[a] = b;
        found = true;
      }
    if (!found) throw PreconditionError("element without inverse");
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (g.table_[g.table_[a][b]][c] != g.table_[a][g.table_[b][c]])
          throw PreconditionError("group table is not associative");
  return g;
}

FiniteGroup FiniteGroup::generated_by(std::size_t degree, const std::vector<Permutation>& generators) {
  Permutation id(degree);
  std::iota(id.begin(), id.end(), 0);
  for (const auto& gen : generators) {
    if (gen.size() != degree) throw PreconditionError("generator has the wrong degree");
    auto sorted = gen;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != id) throw PreconditionError("generator is not a permutation");
  }
  std::vector<Permutation> elems{id};
  std::map<Permutation, std::uint32_t> index{{id, 0}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& gen : generators) {
      auto next = compose_perm(elems[i], gen);
      if (index.emplace(next, static_cast<std::uint32_t>(elems.size())).second) elems.push_back(next);
    }
  const auto n = elems.size();
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(cycle_notation(elems[a]));
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose_perm(elems[a], elems[b]));
  }
  FiniteGroup g = from_table(std::move(table), std::move(names));
  g.degree_ = degree;
  g.perms_ = std::move(elems);
  return g;
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  std::vector<Permutation> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[i], p[i + 1]);
    gens.push_back(p);
  }
  return generated_by(n, gens);
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw PreconditionError("cyclic group of order 0");
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) table[a][b] = static_cast<std::uint32_t>((a + b) % n);
  }
  return from_table(std::move(table), std::move(names));
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

std::uint32_t FiniteGroup::order_of(std::uint32_t a) const {
  std::uint32_t k = 1;
  for (std::uint32_t x = a; x != 0; x = table_[x][a]) ++k;
  return k;
}

std::optional<std::uint32_t> FiniteGroup::find(std::string_view name) const {
  for (std::uint32_t a = 0; a < size(); ++a)
    if (names_[a] == name) return a;
  return std::nullopt;
}

std::optional<std::uint32_t> FiniteGroup::find_permutation(const Permutation& p) const {
  for (std::uint32_t a = 0; a < perms_.size(); ++a)
    if (perms_[a] == p) return a;
  return std::nullopt;
}

Group Group::integers() {
  Group g;
  g.label_ = "Z";
  return g;
}

Group Group::finite(FiniteGroup fg, std::string label) {
  Group g;
  if (label.empty()) label = "finite group of order " + std::to_string(fg.size());
  g.finite_ = std::make_shared<const FiniteGroup>(std::move(fg));
  g.label_ = std::move(label);
  return g;
}

std::optional<std::size_t> Group::order() const {
  if (!finite_) return std::nullopt;
  return finite_->size();
}

bool Group::is_abelian() const { return !finite_ || finite_->is_abelian(); }

GroupElement Group::mul(GroupElement a, GroupElement b) const {
  if (!finite_) return {a.value + b.value};
  return {finite_->mul(static_cast<std::uint32_t>(a.value), static_cast<std::uint32_t>(b.value))};
}

GroupElement Group::inverse(GroupElement a) const {
  if (!finite_) return {-a.value};
  return {finite_->inv(static_cast<std::uint32_t>(a.value))};
}

GroupElement Group::pow(GroupElement a, std::int64_t k) const {
  if (!finite_) return {a.value * k};
  GroupElement base = k < 0 ? inverse(a) : a, r = identity();
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) r = mul(r, base);
  return r;
}

std::vector<GroupElement> Group::elements() const {
  if (!finite_) throw PreconditionError("elements() of an infinite group");
  std::vector<GroupElement> out;
  for (std::size_t a = 0; a < finite_->size(); ++a) out.push_back({static_cast<std::int64_t>(a)});
  return out;
}

std::string Group::format(GroupElement a) const {
  if (!finite_) return std::to_string(a.value);
  return finite_->name(static_cast<std::uint32_t>(a.value));
}

GroupElement Group::parse_element(std::string_view text) const {
  std::string t = trim(text);
  if (!finite_) {
    try {
      std::size_t used = 0;
      auto v = std::stoll(t, &used);
      if (used == t.size()) return {v};
    } catch (const std::exception&) {
    }
    throw ParseError(0, "expected an integer, got '" + t + "'");
  }
  const auto& fg = *finite_;
  if (auto a = fg.find(t)) return {*a};
  if (fg.degree() > 0) {
    const auto n = fg.degree();
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    auto read_point = [&](const std::string& tok) -> std::uint32_t {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 1 || static_cast<std::size_t>(v) > n)
        throw ParseError(0, "bad permutation point '" + tok + "'");
      return static_cast<std::uint32_t>(v - 1);
    };
    if (t.rfind("perm", 0) == 0) {
      std::istringstream in(t.substr(4));
      std::string tok;
      Permutation q;
      while (in >> tok) q.push_back(read_point(tok));
      p = q;
    } else {
      // Product of cycles, rightmost applied first.
      std::size_t pos = 0;
      while (pos < t.size()) {
        if (t[pos] == ' ') {
          ++pos;
          continue;
        }
        if (t[pos] != '(') throw ParseError(0, "expected '(' in '" + t + "'");
        auto close = t.find(')', pos);
        if (close == std::string::npos) throw ParseError(0, "unclosed cycle in '" + t + "'");
        std::istringstream in(t.substr(pos + 1, close - pos - 1));
        std::vector<std::uint32_t> pts;
        std::string tok;
        while (in >> tok) pts.push_back(read_point(tok));
        Permutation c(n);
        std::iota(c.begin(), c.end(), 0);
        for (std::size_t i = 0; i < pts.size(); ++i) c[pts[i]] = pts[(i + 1) % pts.size()];
        p = compose_perm(p, c);
        pos = close + 1;
      }
    }
    if (auto a = fg.find_permutation(p)) return {*a};
    throw ParseError(0, "permutation '" + t + "' is not in the group");
  }
  throw ParseError(0, "unknown group element '" + t + "'");
}

Group parse_group(std::string_view text) {
  std::string t = trim(text);
  if (t == "Z") return Group::integers();
  if (t.rfind("Z/", 0) == 0) {
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(t.substr(2), &used);
    } catch (const std::exception&) {
    }
    if (n <= 0 || used + 2 != t.size()) throw ParseError(0, "bad cyclic group '" + t + "'");
    return Group::finite(FiniteGroup::cyclic(static_cast<std::size_t>(n)), t);
  }
  if (t.size() > 1 && t[0] == 'S') {
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(t.substr(1), &used);
    } catch (const std::exception&) {
    }
    if (n <= 0 || n > 7 || used + 1 != t.size())
      throw ParseError(0, "bad symmetric group '" + t + "' (S1..S7 supported)");
    return Group::finite(FiniteGroup::symmetric(static_cast<std::size_t>(n)), t);
  }
  throw ParseError(0, "unknown group '" + t + "'");
}

Abelianization abelianize(const FiniteGroup& g) {
  const auto n = g.size();
  std::vector<bool> in_k(n, false);
  std::vector<std::uint32_t> k{0};
  in_k[0] = true;
  auto add = [&](std::uint32_t x) {
    if (!in_k[x]) {
      in_k[x] = true;
      k.push_back(x);
    }
  };
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      add(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      add(g.mul(k[i], k[j]));
      add(g.mul(k[j], k[i]));
    }
  std::vector<std::uint32_t> class_of(n, UINT32_MAX), reps;
  for (std::uint32_t a = 0; a < n; ++a) {
    if (class_of[a] != UINT32_MAX) continue;
    auto c = static_cast<std::uint32_t>(reps.size());
    reps.push_back(a);
    for (auto x : k) class_of[g.mul(a, x)] = c;
  }
  const auto m = reps.size();
  std::vector<std::vector<std::uint32_t>> table(m, std::vector<std::uint32_t>(m));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back("[" + g.name(reps[a]) + "]");
    for (std::size_t b = 0; b < m; ++b) table[a][b] = class_of[g.mul(reps[a], reps[b])];
  }
  return {FiniteGroup::from_table(std::move(table), std::move(names)), std::move(class_of)};
}

GroupCharacter GroupCharacter::from_table(std::vector<RootOfUnity> values) {
  if (values.empty()) throw PreconditionError("character table is empty");
  GroupCharacter c;
  c.table_ = std::move(values);
  return c;
}

GroupCharacter GroupCharacter::on_integers(RootOfUnity generator_value) {
  GroupCharacter c;
  c.generator_ = generator_value;
  return c;
}

RootOfUnity GroupCharacter::operator()(GroupElement g) const {
  if (table_.empty()) return generator_.pow(g.value);
  return table_.at(static_cast<std::size_t>(g.value));
}

bool GroupCharacter::is_trivial() const {
  if (table_.empty()) return generator_.is_one();
  return std::all_of(table_.begin(), table_.end(), [](const RootOfUnity& r) { return r.is_one(); });
}

std::string GroupCharacter::to_string() const {
  if (table_.empty()) return "n -> " + generator_.to_string() + "^n";
  std::string out = "[";
  for (std::size_t i = 0; i < table_.size(); ++i) out += (i ? ", " : "") + table_[i].to_string();
  return out + "]";
}

bool is_homomorphism(const FiniteGroup& g, const GroupCharacter& chi) {
  if (chi.table().size() != g.size()) return false;
  for (std::uint32_t a = 0; a < g.size(); ++a)
    for (std::uint32_t b = 0; b < g.size(); ++b)
      if (chi.table()[g.mul(a, b)] != chi.table()[a] * chi.table()[b]) return false;
  return true;
}

std::vector<GroupCharacter> enumerate_characters(const FiniteGroup& g) {
  if (!g.is_abelian()) throw PreconditionError("characters are enumerated for abelian groups only");
  const auto n = g.size();
  // Greedy generating set in element order.
  std::vector<std::uint32_t> gens;
  std::set<std::uint32_t> span{0};
  for (std::uint32_t a = 0; a < n; ++a) {
    if (span.count(a)) continue;
    gens.push_back(a);
    std::vector<std::uint32_t> frontier(span.begin(), span.end());
    for (std::size_t i = 0; i < frontier.size(); ++i)
      for (auto x : {a}) {
        auto y = g.mul(frontier[i], x);
        if (span.insert(y).second) frontier.push_back(y);
      }
  }
  std::vector<std::uint32_t> orders;
  for (auto a : gens) orders.push_back(g.order_of(a));
  std::vector<GroupCharacter> out;
  std::vector<std::uint32_t> j(gens.size(), 0);
  for (;;) {
    std::vector<std::optional<RootOfUnity>> values(n);
    bool consistent = true;
    std::vector<std::uint32_t> e(gens.size(), 0);
    for (bool more = true; more && consistent;) {
      std::uint32_t elem = 0;
      RootOfUnity val;
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::uint32_t r = 0; r < e[i]; ++r) {
          elem = g.mul(elem, gens[i]);
          val = val * RootOfUnity::make(j[i], orders[i]);
        }
      if (values[elem] && *values[elem] != val) consistent = false;
      values[elem] = val;
      more = false;
      for (std::size_t i = gens.size(); i-- > 0;) {
        if (++e[i] < orders[i]) {
          more = true;
          break;
        }
        e[i] = 0;
      }
    }
    if (consistent) {
      std::vector<RootOfUnity> table;
      for (auto& v : values) table.push_back(v.value_or(RootOfUnity::one()));
      auto chi = GroupCharacter::from_table(std::move(table));
      if (is_homomorphism(g, chi)) out.push_back(std::move(chi));
    }
    std::size_t i = gens.size();
    while (i-- > 0) {
      if (++j[i] < orders[i]) break;
      j[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

GroupCharacter lift_character(const GroupCharacter& chi, const Abelianization& ab) {
  std::vector<RootOfUnity> table;
  for (auto c : ab.class_of) table.push_back(chi.table().at(c));
  return GroupCharacter::from_table(std::move(table));
}

}  // namespace weylgraph
