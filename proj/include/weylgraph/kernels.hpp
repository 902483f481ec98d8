#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weylgraph/algebra.hpp"
#include "weylgraph/execution.hpp"

namespace weylgraph {

// Products a·b compared with the pointwise convolution at each point.
struct OracleCase {
  AlgebraElement a, b;
  std::vector<GroupoidElement> points;
};

struct OracleSweepResult {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  // Lowest-index mismatch, so serial and parallel runs report the same one.
  std::optional<std::string> first_mismatch;
};

// Random elements with coefficients in ℚ(i) and points drawn from the support
// of a·b (half) or anywhere (half), so most comparisons are non-trivial.
std::vector<OracleCase> random_oracle_cases(const GraphPtr& g, Rng& rng, std::size_t cases,
                                            std::size_t points_per_case, const RandomElementSpec& spec);

struct OracleTest {
  std::vector<GraphPtr> graphs;
  OracleSweepResult result;
};

// `triples` (a, b, γ) spread over `graphs` random graphs with at most 4 vertices and
// 6 edges, paths of length ≤ 4, coefficients in ℚ(i). Fixed by the seed.
OracleTest random_oracle_test(std::uint64_t seed, std::size_t graphs, std::size_t triples,
                              Execution exec = Execution::parallel);

OracleSweepResult oracle_sweep(const std::vector<OracleCase>& cases, Execution exec = Execution::parallel);

}  // namespace weylgraph
