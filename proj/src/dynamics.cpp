#include "weylgraph/dynamics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "weylgraph/errors.hpp"
#include "weylgraph/sampling.hpp"

namespace weylgraph {

namespace {

using Int = std::int64_t;

FinitePath subword(const Graph& g, const FinitePath& word, std::size_t start, std::size_t len) {
  VertexId base = start == 0 ? word.origin() : g.target(word[start - 1]);
  return FinitePath::of(g, base, {word.edges().begin() + static_cast<long>(start),
                                  word.edges().begin() + static_cast<long>(start + len)});
}

std::optional<std::size_t> output_length(const EventualAutomorphism& h, std::size_t n) {
  if (n < h.head_window) return std::nullopt;
  Int blocks = static_cast<Int>(n) - h.block_offset - static_cast<Int>(h.block_window) -
               static_cast<Int>(h.m) + 1;
  return h.m + static_cast<std::size_t>(std::max<Int>(0, blocks));
}

// Least word length whose image prefix has at least `need` symbols.
std::size_t length_for(const EventualAutomorphism& h, std::size_t need) {
  for (std::size_t n = 0;; ++n)
    if (auto l = output_length(h, n); l && *l >= need) return n;
}

struct RawImage {
  bool composable = true;
  VertexId origin = 0;
  std::vector<EdgeId> edges;
};

RawImage eval_raw(const EventualAutomorphism& h, const FinitePath& word) {
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  auto hit = h.head.find(take_front(x, word, h.head_window));
  if (hit == h.head.end())
    throw PreconditionError("head rule undefined on '" + format_path(x, take_front(x, word, h.head_window)) + "'");
  RawImage r;
  r.origin = hit->second.origin();
  r.edges = hit->second.edges();
  VertexId at = hit->second.target();
  const Int n = static_cast<Int>(word.length());
  for (Int j = static_cast<Int>(h.m); j + h.block_offset + static_cast<Int>(h.block_window) <= n; ++j) {
    auto key = subword(x, word, static_cast<std::size_t>(j + h.block_offset), h.block_window);
    auto bit = h.block.find(key);
    if (bit == h.block.end()) throw PreconditionError("block rule undefined on '" + format_path(x, key) + "'");
    EdgeId e = bit->second;
    if (y.origin(e) != at) r.composable = false;
    at = y.target(e);
    r.edges.push_back(e);
  }
  return r;
}

FinitePath to_path(const Graph& g, const RawImage& r) { return FinitePath::of(g, r.origin, r.edges); }

// Words occurring at position p shrink as p grows and are stable once p reaches the
// vertex count. Without sources in the core every word occurs everywhere.
std::size_t stabilization(const Graph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_core(v) && g.in_edges(v).empty()) return g.vertex_count();
  return 0;
}

}  // namespace

EventualAutomorphism identity_automorphism(const GraphPtr& g) {
  EventualAutomorphism h;
  h.source = g;
  h.target = g;
  for (const auto& v : paths_of_length(*g, 0)) h.head.emplace(v, v);
  for (const auto& e : paths_of_length(*g, 1)) h.block.emplace(e, e[0]);
  return h;
}

EventualAutomorphism first_symbol_map(const GraphPtr& g, const std::vector<EdgeId>& perm) {
  if (perm.size() != g->edge_count()) throw PreconditionError("permutation must cover every edge");
  EventualAutomorphism h;
  h.source = g;
  h.target = g;
  h.m = 1;
  h.head_window = 1;
  for (const auto& e : paths_of_length(*g, 1)) {
    if (g->target(perm[e[0]]) != g->target(e[0])) throw PreconditionError("permutation must preserve targets");
    h.head.emplace(e, FinitePath::of(*g, {perm[e[0]]}));
    h.block.emplace(e, e[0]);
  }
  return h;
}

std::optional<std::string> validate(const EventualAutomorphism& h) {
  if (!h.source || !h.target) return "missing graph";
  if (h.block_offset < -static_cast<Int>(h.m)) return "block offset below -m";
  if (h.block_window == 0) return "block window must be positive";
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  for (const auto& w : paths_of_length(x, h.head_window)) {
    auto it = h.head.find(w);
    if (it == h.head.end()) return "head rule undefined on '" + format_path(x, w) + "'";
    if (it->second.length() != h.m) return "head value on '" + format_path(x, w) + "' has wrong length";
    if (!y.in_core(it->second.target())) return "head value on '" + format_path(x, w) + "' leaves the core";
  }
  for (const auto& w : paths_of_length(x, h.block_window)) {
    auto it = h.block.find(w);
    if (it == h.block.end()) return "block rule undefined on '" + format_path(x, w) + "'";
    if (!y.in_core(y.target(it->second))) return "block value on '" + format_path(x, w) + "' leaves the core";
  }
  auto len = static_cast<std::size_t>(
      std::max<Int>(static_cast<Int>(h.head_window),
                    static_cast<Int>(h.m) + h.block_offset + static_cast<Int>(h.block_window) + 1));
  for (const auto& w : paths_of_length(x, len))
    if (!eval_raw(h, w).composable) return "image of '" + format_path(x, w) + "' does not compose";
  return std::nullopt;
}

std::optional<FinitePath> eval_word(const EventualAutomorphism& h, const FinitePath& word) {
  if (word.length() < h.head_window) return std::nullopt;
  auto r = eval_raw(h, word);
  if (!r.composable) throw VerificationError("image of '" + format_path(*h.source, word) + "' does not compose");
  return to_path(*h.target, r);
}

std::size_t word_length_for(const EventualAutomorphism& h, std::size_t symbols) { return length_for(h, symbols); }

EvPeriodicPath apply(const EventualAutomorphism& h, const EvPeriodicPath& x) {
  const Int pre = static_cast<Int>(x.prefix().size());
  const Int cyc = static_cast<Int>(x.cycle().size());
  const Int j0 = std::max<Int>(static_cast<Int>(h.m), pre - h.block_offset);
  const Int n = std::max<Int>(static_cast<Int>(h.head_window),
                              j0 + cyc - 1 + h.block_offset + static_cast<Int>(h.block_window));
  auto out = eval_word(h, x.word(*h.source, static_cast<std::size_t>(n)));
  const auto& e = out->edges();
  std::vector<EdgeId> prefix(e.begin(), e.begin() + j0), cycle(e.begin() + j0, e.begin() + j0 + cyc);
  return EvPeriodicPath::make(*h.target, std::move(prefix), std::move(cycle));
}

IdentityCheck check_orbit_identity(const EventualAutomorphism& h, std::size_t l, std::size_t k) {
  IdentityCheck c;
  c.name = "S^" + std::to_string(l) + " h = S^" + std::to_string(k) + " h T";
  const Int m = static_cast<Int>(h.m);
  auto top = static_cast<std::size_t>(std::max<Int>({m - static_cast<Int>(l), m - static_cast<Int>(k), 0}));
  // For l = k + 1 both sides beyond top read the same window; otherwise the windows
  // differ by a shift and must be compared at every stable position.
  if (l != k + 1) top += stabilization(*h.source) + h.block_window + (l > k ? l - k : k - l);
  const std::size_t n = std::max(length_for(h, top + l + 1), length_for(h, top + k + 1) + 1);
  const Graph& x = *h.source;
  c.word_length = n;
  c.passed = true;
  for (const auto& w : paths_of_length(x, n)) {
    ++c.words;
    auto lhs = *eval_word(h, w);
    auto rhs = *eval_word(h, drop_front(x, w, 1));
    for (std::size_t i = 0; i <= top && c.passed; ++i) c.passed = lhs[i + l] == rhs[i + k];
    if (!c.passed) break;
  }
  return c;
}

IdentityCheck check_property_P(const EventualAutomorphism& h, std::size_t lag) {
  auto c = check_orbit_identity(h, lag + 1, lag);
  c.name = "property (P) with lag " + std::to_string(lag) + ": " + c.name;
  return c;
}

std::vector<EdgeId> behavior_key(const EventualAutomorphism& h, std::size_t M, std::size_t N) {
  std::vector<EdgeId> key;
  for (const auto& w : paths_of_length(*h.source, N)) {
    auto out = eval_word(h, w);
    if (!out || out->length() < M + 1) throw PreconditionError("behavior key word length too short");
    key.insert(key.end(), out->edges().begin(), out->edges().begin() + static_cast<long>(M + 1));
  }
  return key;
}

bool same_map(const EventualAutomorphism& a, const EventualAutomorphism& b) {
  if (!(*a.source == *b.source) || !(*a.target == *b.target)) return false;
  std::size_t M = std::max(a.m, b.m);
  std::size_t N = std::max(length_for(a, M + 1), length_for(b, M + 1));
  return behavior_key(a, M, N) == behavior_key(b, M, N);
}

namespace {

// Rule table keyed by words of length n, re-keyed by the window [drop_front, n - drop_back).
template <class V>
std::optional<std::map<FinitePath, V>> shrink(const Graph& g, const std::map<FinitePath, V>& table,
                                              std::size_t n, std::size_t drop_first, std::size_t drop_last) {
  std::map<FinitePath, V> out;
  for (const auto& [w, v] : table) {
    auto key = subword(g, w, drop_first, n - drop_first - drop_last);
    auto [it, fresh] = out.emplace(key, v);
    if (!fresh && !(it->second == v)) return std::nullopt;
  }
  // Keys of the smaller window must all be covered.
  for (const auto& w : paths_of_length(g, n - drop_first - drop_last))
    if (!out.count(w)) return std::nullopt;
  return out;
}

bool every_word_has_predecessor(const Graph& g, std::size_t n) {
  for (const auto& w : paths_of_length(g, n))
    if (g.in_edges(w.origin()).empty()) return false;
  return true;
}

}  // namespace

EventualAutomorphism canonicalize(const EventualAutomorphism& input) {
  EventualAutomorphism h = input;
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  for (bool changed = true; changed;) {
    changed = false;
    if (h.block_window > 1) {
      if (auto t = shrink(x, h.block, h.block_window, 0, 1)) {
        h.block = std::move(*t);
        --h.block_window;
        changed = true;
        continue;
      }
      if (every_word_has_predecessor(x, h.block_window - 1) &&
          h.block_offset + 1 > -static_cast<Int>(h.m)) {
        if (auto t = shrink(x, h.block, h.block_window, 1, 0)) {
          h.block = std::move(*t);
          --h.block_window;
          ++h.block_offset;
          changed = true;
          continue;
        }
      }
    }
    if (h.m > 0 && h.block_offset >= -static_cast<Int>(h.m - 1)) {
      // Lower m when head symbol m−1 is what the block rule would produce there.
      const auto pos = static_cast<std::size_t>(static_cast<Int>(h.m) - 1 + h.block_offset);
      const std::size_t n = std::max(h.head_window, pos + h.block_window);
      bool agrees = true;
      for (const auto& w : paths_of_length(x, n)) {
        const auto& head = h.head.at(take_front(x, w, h.head_window));
        if (head[h.m - 1] != h.block.at(subword(x, w, pos, h.block_window))) {
          agrees = false;
          break;
        }
      }
      if (agrees) {
        std::map<FinitePath, FinitePath> head;
        for (const auto& [w, p] : h.head) head.emplace(w, take_front(y, p, h.m - 1));
        h.head = std::move(head);
        --h.m;
        changed = true;
        continue;
      }
    }
    if (h.head_window > 0) {
      if (auto t = shrink(x, h.head, h.head_window, 0, 1)) {
        h.head = std::move(*t);
        --h.head_window;
        changed = true;
      }
    }
  }
  return h;
}

EventualAutomorphism compose(const EventualAutomorphism& after, const EventualAutomorphism& before,
                             std::size_t max_window) {
  if (!(*before.target == *after.source)) throw PreconditionError("maps do not compose");
  const Graph& x = *before.source;
  const Graph& y = *before.target;
  EventualAutomorphism h;
  h.source = before.source;
  h.target = after.target;
  const Int m = std::max<Int>({static_cast<Int>(after.m), static_cast<Int>(before.m) - after.block_offset, 0});
  h.m = static_cast<std::size_t>(m);
  h.block_offset = before.block_offset + after.block_offset;
  h.block_window = before.block_window + after.block_window - 1;
  if (h.block_window > max_window) throw BoundExceeded("composite block window exceeds bound");
  for (const auto& w : paths_of_length(x, h.block_window)) {
    std::vector<EdgeId> run;
    bool ok = true;
    for (std::size_t i = 0; i < after.block_window; ++i) {
      EdgeId e = before.block.at(subword(x, w, i, before.block_window));
      if (!run.empty() && y.target(run.back()) != y.origin(e)) ok = false;
      run.push_back(e);
    }
    // A run that does not compose never occurs at a block position; any core
    // edge will do there, and validate() rejects the table if that is wrong.
    if (!ok) {
      h.block.emplace(w, after.block.begin()->second);
      continue;
    }
    h.block.emplace(w, after.block.at(FinitePath::of(y, run)));
  }
  std::size_t n = std::max<std::size_t>(before.head_window, static_cast<std::size_t>(std::max<Int>(
                                                                0, m + h.block_offset + static_cast<Int>(h.block_window))));
  for (;; ++n) {
    if (n > max_window + h.m) throw BoundExceeded("composite head window exceeds bound");
    auto l1 = output_length(before, n);
    if (!l1 || *l1 < after.head_window) continue;
    auto l2 = output_length(after, *l1);
    if (l2 && *l2 >= h.m) break;
  }
  h.head_window = n;
  for (const auto& w : paths_of_length(x, n)) {
    auto mid = *eval_word(before, w);
    auto out = *eval_word(after, mid);
    h.head.emplace(w, take_front(*after.target, out, h.m));
  }
  if (auto err = validate(h)) throw VerificationError("composite presentation invalid: " + *err);
  return canonicalize(h);
}

IdentityCheck check_left_inverse(const EventualAutomorphism& k, const EventualAutomorphism& h) {
  IdentityCheck c;
  c.name = "inverse o h = id";
  const Int M = std::max<Int>({static_cast<Int>(k.m), static_cast<Int>(h.m) - k.block_offset, 0});
  const auto need = static_cast<std::size_t>(M) + 1 + stabilization(*h.source);
  std::size_t n = 0;
  for (;; ++n) {
    auto l1 = output_length(h, n);
    if (!l1) continue;
    auto l2 = output_length(k, *l1);
    if (l2 && *l2 >= need) break;
  }
  c.word_length = n;
  c.passed = *h.source == *k.target;
  const Graph& x = *h.source;
  for (const auto& w : paths_of_length(x, n)) {
    if (!c.passed) break;
    ++c.words;
    auto mid = eval_raw(h, w);
    if (!mid.composable) {
      c.passed = false;
      break;
    }
    auto back = eval_raw(k, to_path(*h.target, mid));
    if (!back.composable || back.origin != w.origin()) {
      c.passed = false;
      break;
    }
    for (std::size_t i = 0; i < need && c.passed; ++i) c.passed = back.edges[i] == w[i];
  }
  return c;
}

std::string format_automorphism(const EventualAutomorphism& h) {
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  std::ostringstream out;
  out << "m=" << h.m << " head_window=" << h.head_window << " block_offset=" << h.block_offset
      << " block_window=" << h.block_window << "\n";
  for (const auto& [w, p] : h.head)
    if (h.m > 0 || h.head_window > 0) out << "  head " << format_path(x, w) << " -> " << format_path(y, p) << "\n";
  for (const auto& [w, e] : h.block) out << "  block " << format_path(x, w) << " -> " << y.edge_name(e) << "\n";
  return out.str();
}

namespace {

std::size_t map_lookahead(const EventualAutomorphism& h) {
  return h.head_window + h.m + static_cast<std::size_t>(std::abs(h.block_offset)) + h.block_window + 1;
}

}  // namespace

GroupoidMap orbit_map_to_groupoid_hom(std::size_t l, std::size_t k, const EventualAutomorphism& h) {
  auto check = check_orbit_identity(h, l, k);
  if (!check.passed) throw VerificationError("orbit identity fails: " + check.name);
  const Int factor = static_cast<Int>(l) - static_cast<Int>(k);
  GroupoidMap map;
  map.name = "orbit(" + std::to_string(l) + "," + std::to_string(k) + ")";
  map.lookahead = map_lookahead(h);
  map.apply = [h, factor](const GroupoidElement& a) {
    auto img = make_arrow(*h.target, apply(h, a.target()), factor * a.degree(), apply(h, a.source()));
    if (!img) throw VerificationError("orbit map image is not an arrow");
    return *img;
  };
  return map;
}

GroupoidMap groupoid_map(const GroupoidAutomorphism& phi) {
  GroupoidMap map;
  map.name = phi.sign > 0 ? "Phi" : "Phi(flip)";
  map.lookahead = map_lookahead(phi.h);
  auto h = phi.h;
  const Int sign = phi.sign;
  map.apply = [h, sign](const GroupoidElement& a) {
    auto img = make_arrow(*h.target, apply(h, a.target()), sign * a.degree(), apply(h, a.source()));
    if (!img) throw VerificationError("groupoid map image is not an arrow");
    return *img;
  };
  return map;
}

GroupoidAutomorphism inverse(const GroupoidAutomorphism& phi) { return {phi.h_inv, phi.h, phi.sign}; }

GroupoidAutomorphism compose(const GroupoidAutomorphism& after, const GroupoidAutomorphism& before) {
  return {compose(after.h, before.h), compose(before.h_inv, after.h_inv), after.sign * before.sign};
}

bool finite_path_space(const Graph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_core(v) && g.core_out_edges(v).size() != 1) return false;
  return true;
}


namespace {

// One family of presentations with fixed (m, offset, block window, head window),
// indexed so that candidates can be checked without building rule tables.
struct Family {
  std::size_t m = 0, head_window = 0, block_window = 1;
  Int offset = 0;
  std::vector<FinitePath> head_words, block_words;
  std::vector<FinitePath> head_options;  // core paths of length m in the target
  std::vector<EdgeId> block_options;     // target edges ending in the core
  std::uint64_t head_count = 1, block_count = 1, total = 0;
  bool overflow = false;
  // Per validation word: head word index, then block word index per block position.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> checks;
  // Per key word: the same indices, truncated to the key length.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keys;
};

std::size_t index_of(const std::vector<FinitePath>& words, const FinitePath& w) {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  return static_cast<std::size_t>(it - words.begin());
}

bool mul_capped(std::uint64_t& acc, std::uint64_t base, std::size_t times, std::uint64_t cap) {
  for (std::size_t i = 0; i < times; ++i) {
    if (base != 0 && acc > cap / base) return false;
    acc *= base;
  }
  return acc <= cap;
}

std::pair<std::size_t, std::vector<std::size_t>> positions(const Graph& x, const Family& f, const FinitePath& w,
                                                          std::size_t out_len) {
  std::pair<std::size_t, std::vector<std::size_t>> r;
  r.first = index_of(f.head_words, take_front(x, w, f.head_window));
  for (std::size_t j = f.m; j < out_len; ++j)
    r.second.push_back(
        index_of(f.block_words, subword(x, w, static_cast<std::size_t>(static_cast<Int>(j) + f.offset), f.block_window)));
  return r;
}

Family make_family(const Graph& x, const Graph& y, std::size_t m, Int offset, std::size_t wg, std::size_t wh,
                   std::size_t key_m, std::size_t key_n, std::uint64_t cap) {
  Family f;
  f.m = m;
  f.offset = offset;
  f.block_window = wg;
  f.head_window = m == 0 ? wg : m + wh;
  f.head_words = paths_of_length(x, f.head_window);
  f.block_words = paths_of_length(x, wg);
  if (m > 0) f.head_options = paths_of_length(y, m);
  for (EdgeId e = 0; e < y.edge_count(); ++e)
    if (y.in_core(y.target(e))) f.block_options.push_back(e);
  f.overflow = !mul_capped(f.block_count, f.block_options.size(), f.block_words.size(), cap);
  if (m > 0) f.overflow = f.overflow || !mul_capped(f.head_count, f.head_options.size(), f.head_words.size(), cap);
  if (!f.overflow) {
    f.total = f.block_count;
    f.overflow = !mul_capped(f.total, f.head_count, 1, cap);
  }
  if (f.overflow) return f;
  const auto lv = static_cast<std::size_t>(
      std::max<Int>(static_cast<Int>(f.head_window), static_cast<Int>(m) + offset + static_cast<Int>(wg) + 1));
  const auto out_lv = m + static_cast<std::size_t>(
                              std::max<Int>(0, static_cast<Int>(lv) - offset - static_cast<Int>(wg) - static_cast<Int>(m) + 1));
  for (const auto& w : paths_of_length(x, lv)) f.checks.push_back(positions(x, f, w, out_lv));
  for (const auto& w : paths_of_length(x, key_n)) f.keys.push_back(positions(x, f, w, key_m + 1));
  return f;
}

// Mixed-radix digits of a candidate; the last word is least significant.
void digits(std::uint64_t value, std::size_t radix, std::vector<std::size_t>& out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<std::size_t>(value % radix);
    value /= radix;
  }
}

struct Slot {
  bool valid = false;
  std::vector<EdgeId> key;
};

void evaluate(const Graph& y, const Family& f, std::uint64_t t, Slot& slot) {
  std::vector<std::size_t> hd(f.m > 0 ? f.head_words.size() : 0), bd(f.block_words.size());
  digits(t % f.block_count, f.block_options.size(), bd);
  if (f.m > 0) digits(t / f.block_count, f.head_options.size(), hd);
  slot.valid = false;
  slot.key.clear();
  for (const auto& [head, blocks] : f.checks) {
    VertexId at = f.m > 0 ? f.head_options[hd[head]].target() : y.origin(f.block_options[bd[blocks[0]]]);
    for (std::size_t b : blocks) {
      EdgeId e = f.block_options[bd[b]];
      if (y.origin(e) != at) return;
      at = y.target(e);
    }
  }
  for (const auto& [head, blocks] : f.keys) {
    if (f.m > 0) {
      const auto& h = f.head_options[hd[head]].edges();
      slot.key.insert(slot.key.end(), h.begin(), h.end());
    }
    for (std::size_t b : blocks) slot.key.push_back(f.block_options[bd[b]]);
  }
  slot.valid = true;
}

EventualAutomorphism build(const GraphPtr& source, const GraphPtr& target, const Family& f, std::uint64_t t) {
  const Graph& y = *target;
  EventualAutomorphism h;
  h.source = source;
  h.target = target;
  h.m = f.m;
  h.head_window = f.head_window;
  h.block_offset = f.offset;
  h.block_window = f.block_window;
  std::vector<std::size_t> hd(f.m > 0 ? f.head_words.size() : 0), bd(f.block_words.size());
  digits(t % f.block_count, f.block_options.size(), bd);
  if (f.m > 0) digits(t / f.block_count, f.head_options.size(), hd);
  for (std::size_t i = 0; i < f.block_words.size(); ++i) h.block.emplace(f.block_words[i], f.block_options[bd[i]]);
  for (std::size_t i = 0; i < f.head_words.size(); ++i) {
    if (f.m > 0) {
      h.head.emplace(f.head_words[i], f.head_options[hd[i]]);
    } else {
      // m = 0: the image starts where the first block symbol does.
      const auto& w = f.head_words[i];
      h.head.emplace(w, FinitePath::at(y.origin(h.block.at(take_front(*source, w, f.block_window)))));
    }
  }
  return h;
}

constexpr std::uint64_t kChunk = 4096;

}  // namespace

CandidateSet enumerate_candidates(const GraphPtr& source, const GraphPtr& target, const SearchBounds& bounds,
                                  Execution exec) {
  const Graph& x = *source;
  const Graph& y = *target;
  CandidateSet out;
  const std::size_t key_m = bounds.mmax, key_n = bounds.mmax + std::max<std::size_t>(bounds.w, 1);
  std::map<std::vector<EdgeId>, std::size_t> seen;
  std::vector<Slot> slots(kChunk);
  for (std::size_t m = 0; m <= bounds.mmax; ++m)
    for (Int o = 0; o >= -static_cast<Int>(m); --o)
      for (std::size_t wg = 1; wg <= std::max<std::size_t>(bounds.w, 1); ++wg)
        for (std::size_t wh = 0; wh <= (m == 0 ? 0 : bounds.w); ++wh) {
          auto f = make_family(x, y, m, o, wg, wh, key_m, key_n, bounds.max_candidates_per_family);
          std::ostringstream label;
          label << "family m=" << m << " offset=" << o << " block_window=" << wg << " head_window=" << f.head_window;
          if (f.overflow) {
            out.log.push_back(label.str() + ": skipped, more than " +
                              std::to_string(bounds.max_candidates_per_family) + " candidates");
            continue;
          }
          std::size_t kept = 0;
          for (std::uint64_t base = 0; base < f.total; base += kChunk) {
            const auto n = static_cast<std::int64_t>(std::min(kChunk, f.total - base));
            if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
              for (std::int64_t i = 0; i < n; ++i) evaluate(y, f, base + static_cast<std::uint64_t>(i), slots[i]);
            } else {
              for (std::int64_t i = 0; i < n; ++i) evaluate(y, f, base + static_cast<std::uint64_t>(i), slots[i]);
            }
            // Ordered merge keeps the first presentation of each map.
            for (std::int64_t i = 0; i < n; ++i) {
              if (!slots[i].valid) continue;
              auto [it, fresh] = seen.emplace(std::move(slots[i].key), out.maps.size());
              if (!fresh) continue;
              out.maps.push_back(canonicalize(build(source, target, f, base + static_cast<std::uint64_t>(i))));
              ++kept;
            }
          }
          out.enumerated += f.total;
          out.log.push_back(label.str() + ": " + std::to_string(f.total) + " tables, " + std::to_string(kept) +
                            " new maps");
        }
  return out;
}

namespace {

// Continuations of every core word of length ≤ depth: a cheap necessary test for k∘h = id.
std::vector<EvPeriodicPath> sample_points(const Graph& g, std::size_t depth) {
  std::set<EvPeriodicPath> pts;
  for (std::size_t n = 0; n <= depth; ++n)
    for (const auto& w : paths_of_length(g, n)) pts.insert(continuation(g, w));
  return {pts.begin(), pts.end()};
}

bool inverse_on(const EventualAutomorphism& k, const EventualAutomorphism& h, const std::vector<EvPeriodicPath>& pts) {
  for (const auto& p : pts)
    if (apply(k, apply(h, p)) != p) return false;
  return true;
}

std::size_t core_vertex_count(const Graph& g) {
  std::size_t n = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) n += g.in_core(v);
  return n;
}

std::vector<IdentityCheck> certify(const EventualAutomorphism& h, const EventualAutomorphism& k) {
  std::vector<IdentityCheck> out;
  for (const auto* map : {&h, &k}) {
    IdentityCheck c;
    c.name = map == &h ? "forward presentation valid" : "inverse presentation valid";
    c.passed = !validate(*map).has_value();
    out.push_back(c);
  }
  auto ph = check_property_P(h);
  ph.name = "forward " + ph.name;
  auto pk = check_property_P(k);
  pk.name = "inverse " + pk.name;
  out.push_back(ph);
  out.push_back(pk);
  auto l1 = check_left_inverse(k, h);
  l1.name = "inverse o forward = id";
  auto l2 = check_left_inverse(h, k);
  l2.name = "forward o inverse = id";
  out.push_back(l1);
  out.push_back(l2);
  return out;
}

bool all_passed(const std::vector<IdentityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

// (h x, sign, h(T x)) must be an arrow at every point; exhaustive when X is finite.
bool degree_sign_holds(const EventualAutomorphism& h, int sign, const std::vector<EvPeriodicPath>& pts) {
  const Graph& x = *h.source;
  for (const auto& p : pts)
    if (!make_arrow(*h.target, apply(h, p), sign, apply(h, shift(x, p)))) return false;
  return true;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> inverse_pairs(const CandidateSet& forward,
                                                               const CandidateSet& backward,
                                                               const SearchBounds& bounds) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (forward.maps.empty() || backward.maps.empty()) return pairs;
  const Graph& x = *forward.maps.front().source;
  const Graph& y = *backward.maps.front().source;
  const auto pts1 = sample_points(x, bounds.mmax + bounds.w + 1);
  const auto pts2 = sample_points(y, bounds.mmax + bounds.w + 1);
  // Homeomorphisms are injective, so maps colliding on samples are dropped early.
  auto injective = [](const CandidateSet& set, const std::vector<EvPeriodicPath>& pts) {
    std::vector<bool> keep(set.maps.size());
    for (std::size_t i = 0; i < set.maps.size(); ++i) {
      std::set<EvPeriodicPath> images;
      for (const auto& p : pts) images.insert(apply(set.maps[i], p));
      keep[i] = images.size() == pts.size();
    }
    return keep;
  };
  const auto keep1 = injective(forward, pts1), keep2 = injective(backward, pts2);
  for (std::size_t i = 0; i < forward.maps.size(); ++i) {
    if (!keep1[i]) continue;
    for (std::size_t j = 0; j < backward.maps.size(); ++j) {
      if (!keep2[j]) continue;
      const auto& h = forward.maps[i];
      const auto& k = backward.maps[j];
      if (!inverse_on(k, h, pts1) || !inverse_on(h, k, pts2)) continue;
      if (!check_left_inverse(k, h).passed || !check_left_inverse(h, k).passed) continue;
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

ConjugacySearch eventual_conjugacy_search(const GraphPtr& g1, const GraphPtr& g2, const SearchBounds& bounds,
                                          bool allow_flip, Execution exec) {
  for (const auto* g : {g1.get(), g2.get()})
    if (!check_no_sinks(*g).passed) throw PreconditionError("conjugacy search requires graphs without sinks");
  ConjugacySearch result;
  auto& cert = result.certificate;
  const bool finite1 = finite_path_space(*g1), finite2 = finite_path_space(*g2);
  if (finite1 != finite2) {
    cert.prune_log.push_back(std::string("structural prune: path space of ") + (finite1 ? "first" : "second") +
                             " graph is finite, the other is infinite");
    return result;
  }
  if (finite1 && core_vertex_count(*g1) != core_vertex_count(*g2)) {
    cert.prune_log.push_back("structural prune: finite path spaces with " + std::to_string(core_vertex_count(*g1)) +
                             " and " + std::to_string(core_vertex_count(*g2)) + " points");
    return result;
  }
  // Obstructions are looked for first so the certificate records them either way.
  bool obstructed = false;
  if (allow_flip)
    for (const auto& [name, g] : {std::pair{"first", g1}, std::pair{"second", g2}}) {
      if (auto u = flip_obstruction_search(*g, std::max<std::size_t>(1, bounds.w))) {
        std::string pieces;
        for (const auto& p : u->U.paths) pieces += (pieces.empty() ? "C(" : ", C(") + format_path(*g, p) + ")";
        cert.prune_log.push_back(std::string("sign -1 pruned: flip obstruction on ") + name + " graph, U = " + pieces);
        obstructed = true;
      }
    }
  auto forward = enumerate_candidates(g1, g2, bounds, exec);
  auto backward = enumerate_candidates(g2, g1, bounds, exec);
  cert.candidates_forward = forward.maps.size();
  cert.candidates_backward = backward.maps.size();
  for (const auto& line : forward.log) cert.prune_log.push_back("forward " + line);
  for (const auto& line : backward.log) cert.prune_log.push_back("backward " + line);

  const auto pairs = inverse_pairs(forward, backward, bounds);
  for (const auto& [i, j] : pairs) {
    auto checks = certify(forward.maps[i], backward.maps[j]);
    if (!all_passed(checks)) continue;
    cert.identities = checks;
    result.found = ConjugacyResult{{forward.maps[i], backward.maps[j], 1}, cert};
    return result;
  }
  cert.prune_log.push_back("sign +1: no inverse pair among candidates");
  if (!allow_flip || obstructed) return result;
  if (!finite1) {
    cert.prune_log.push_back("sign -1 not searched: no obstruction found and the path space is infinite");
    return result;
  }
  // Finite path spaces: every inverse pair is a candidate and points can be listed.
  std::vector<EvPeriodicPath> all1;
  for (const auto& w : paths_of_length(*g1, 0)) all1.push_back(continuation(*g1, w));
  for (const auto& [i, j] : pairs) {
    const auto& h = forward.maps[i];
    const auto& k = backward.maps[j];
    if (!degree_sign_holds(h, -1, all1)) continue;
    auto checks = certify(h, k);
    IdentityCheck flip{"degree reversal on every point", 0, all1.size(), true};
    checks.push_back(flip);
    if (!all_passed(checks)) continue;
    cert.identities = checks;
    result.found = ConjugacyResult{{h, k, -1}, cert};
    return result;
  }
  cert.prune_log.push_back("sign -1: no inverse pair reverses degrees");
  return result;
}

namespace {

// Random arrow with target x: (x, n − |ν|, ν·T^n x).
GroupoidElement random_arrow_from(const Graph& g, Rng& rng, const EvPeriodicPath& x) {
  const std::size_t n = rng.below(3);
  auto tail = shift(g, x, n);
  std::vector<EdgeId> nu;
  VertexId v = tail.origin();
  for (std::size_t i = rng.below(3); i > 0; --i) {
    const auto& ins = g.in_edges(v);
    if (ins.empty()) break;
    EdgeId e = ins[rng.below(ins.size())];
    if (!g.in_core(g.origin(e))) break;
    nu.push_back(e);
    v = g.origin(e);
  }
  std::reverse(nu.begin(), nu.end());
  auto z = prepend(g, FinitePath::of(g, v, nu), tail);
  auto a = make_arrow(g, x, static_cast<Int>(n) - static_cast<Int>(nu.size()), z);
  if (!a) throw VerificationError("random_arrow_from: tails failed to equalize");
  return *a;
}

}  // namespace

std::vector<IdentityCheck> replay(const ConjugacyResult& r, std::uint64_t seed, std::size_t samples) {
  const auto& phi = r.phi;
  auto checks = certify(phi.h, phi.h_inv);
  const Graph& x = *phi.h.source;
  const Graph& y = *phi.h.target;
  Rng rng(seed);

  IdentityCheck hom{"groupoid homomorphism on sampled composable pairs", 0, 0, true};
  IdentityCheck orbit{"orbit map (m+1, m) agrees with the induced map", 0, 0, true};
  IdentityCheck degree{"degree scaled by sign", 0, 0, true};
  try {
    auto map = groupoid_map(phi);
    std::optional<GroupoidMap> orbit_map;
    if (phi.sign > 0) orbit_map = orbit_map_to_groupoid_hom(phi.h.m + 1, phi.h.m, phi.h);
    for (std::size_t i = 0; i < samples; ++i) {
      auto a = random_arrow(x, rng, 3);
      auto b = random_arrow_from(x, rng, a.source());
      auto fa = map.apply(a), fb = map.apply(b);
      ++hom.words;
      hom.passed = hom.passed && map.apply(compose(x, a, b)) == compose(y, fa, fb) &&
                   map.apply(inverse(a)) == inverse(fa) && map.apply(unit(a.source())) == unit(fa.source());
      ++degree.words;
      degree.passed = degree.passed && fa.degree() == phi.sign * a.degree();
      if (orbit_map) {
        ++orbit.words;
        orbit.passed = orbit.passed && orbit_map->apply(a) == fa;
      }
    }
  } catch (const VerificationError&) {
    hom.passed = false;
  }
  checks.push_back(hom);
  checks.push_back(degree);
  if (phi.sign > 0) checks.push_back(orbit);
  return checks;
}

}  // namespace weylgraph
