#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylgraph/cocycles.hpp"
#include "weylgraph/execution.hpp"
#include "weylgraph/pathspace.hpp"

namespace weylgraph {

// Map h: X → Y presented by a lag m, a head rule and a sliding block rule:
//   h(x)_j = head(x[0, head_window))_j                          for j < m,
//   h(x)_j = block(x[j + block_offset, j + block_offset + block_window)) for j ≥ m.
// block_offset ≥ −m, so T^m∘h is a sliding block code and property (P) with lag m
// holds by construction. head values are paths of length m; for m = 0 the empty
// path fixes the vertex h(x) starts at. Tables are keyed by core words.
struct EventualAutomorphism {
  GraphPtr source, target;
  std::size_t m = 0;
  std::size_t head_window = 0;
  std::map<FinitePath, FinitePath> head;
  std::int64_t block_offset = 0;
  std::size_t block_window = 1;
  std::map<FinitePath, EdgeId> block;
};

EventualAutomorphism identity_automorphism(const GraphPtr& g);
// m = 1: x_0 ↦ perm[x_0], the rest unchanged. perm must preserve edge targets.
EventualAutomorphism first_symbol_map(const GraphPtr& g, const std::vector<EdgeId>& perm);

// Composability of all outputs; the error names the offending word.
std::optional<std::string> validate(const EventualAutomorphism& h);
// Image prefix determined by a word: m head symbols then one block symbol per
// position that fits. nullopt when the word is shorter than the head window.
std::optional<FinitePath> eval_word(const EventualAutomorphism& h, const FinitePath& word);
EvPeriodicPath apply(const EventualAutomorphism& h, const EvPeriodicPath& x);
// Least word length whose image prefix has at least `symbols` edges.
std::size_t word_length_for(const EventualAutomorphism& h, std::size_t symbols);

struct IdentityCheck {
  std::string name;
  std::size_t word_length = 0;
  std::size_t words = 0;
  bool passed = false;
};

// S^l∘h = S^k∘h∘T, checked on every core word long enough to fix coordinates
// 0..max(m − l, m − k, 0) of both sides; beyond those both sides are the same
// sliding block code up to a shift, so agreement there propagates.
IdentityCheck check_orbit_identity(const EventualAutomorphism& h, std::size_t l, std::size_t k);
// T^{lag+1}∘h = T^{lag}∘h∘T.
IdentityCheck check_property_P(const EventualAutomorphism& h, std::size_t lag);
inline IdentityCheck check_property_P(const EventualAutomorphism& h) { return check_property_P(h, h.m); }

// Output coordinates 0..M on all core words of length N, concatenated.
std::vector<EdgeId> behavior_key(const EventualAutomorphism& h, std::size_t M, std::size_t N);
// Equality as maps X → Y.
bool same_map(const EventualAutomorphism& a, const EventualAutomorphism& b);

// Trims unused block symbols, lowers m while the head agrees with the block rule,
// and trims the head window.
EventualAutomorphism canonicalize(const EventualAutomorphism& h);
// after∘before. Throws BoundExceeded when a window would exceed max_window.
EventualAutomorphism compose(const EventualAutomorphism& after, const EventualAutomorphism& before,
                             std::size_t max_window = 12);
// k∘h = id_X, checked on words (same propagation argument as the orbit identity).
IdentityCheck check_left_inverse(const EventualAutomorphism& k, const EventualAutomorphism& h);

std::string format_automorphism(const EventualAutomorphism& h);

// α ↦ (h(y), (l − k)·deg α, h(x)) after verifying the orbit identity with (l, k).
GroupoidMap orbit_map_to_groupoid_hom(std::size_t l, std::size_t k, const EventualAutomorphism& h);

struct GroupoidAutomorphism {
  EventualAutomorphism h, h_inv;
  int sign = 1;
};

// (y,k,x) ↦ (h(y), sign·k, h(x)).
GroupoidMap groupoid_map(const GroupoidAutomorphism& phi);
GroupoidAutomorphism inverse(const GroupoidAutomorphism& phi);
GroupoidAutomorphism compose(const GroupoidAutomorphism& after, const GroupoidAutomorphism& before);

struct SearchBounds {
  std::size_t w = 1;      // block window and extra head window
  std::size_t mmax = 0;
  std::size_t max_candidates_per_family = 2'000'000;
};

// Distinct valid presentations X → Y within bounds, in rule-table order: families
// by (m, offset 0 down to −m, block window, head window), then tables in mixed
// radix with the last word least significant. Duplicates are detected by behavior.
struct CandidateSet {
  std::vector<EventualAutomorphism> maps;
  std::size_t enumerated = 0;
  std::vector<std::string> log;
};

CandidateSet enumerate_candidates(const GraphPtr& source, const GraphPtr& target, const SearchBounds& bounds,
                                  Execution exec = Execution::parallel);

// Index pairs (i, j) with backward[j]∘forward[i] = id and forward[i]∘backward[j] = id,
// in forward-major order.
std::vector<std::pair<std::size_t, std::size_t>> inverse_pairs(const CandidateSet& forward,
                                                               const CandidateSet& backward,
                                                               const SearchBounds& bounds);

struct ConjugacyCertificate {
  std::vector<IdentityCheck> identities;
  std::vector<std::string> prune_log;
  std::size_t candidates_forward = 0, candidates_backward = 0;
};

struct ConjugacyResult {
  GroupoidAutomorphism phi;
  ConjugacyCertificate certificate;
};

struct ConjugacySearch {
  std::optional<ConjugacyResult> found;
  ConjugacyCertificate certificate;
};

// Absence means none within the bounds, never non-conjugacy.
ConjugacySearch eventual_conjugacy_search(const GraphPtr& g1, const GraphPtr& g2, const SearchBounds& bounds,
                                          bool allow_flip, Execution exec = Execution::parallel);
// Re-runs every identity of a found result, including groupoid-homomorphism
// checks of the induced map on sampled composable pairs.
std::vector<IdentityCheck> replay(const ConjugacyResult& r, std::uint64_t seed = 1, std::size_t samples = 50);

// The path space is finite iff every core vertex has exactly one core out-edge.
bool finite_path_space(const Graph& g);

}  // namespace weylgraph
