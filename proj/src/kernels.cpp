#include "weylgraph/kernels.hpp"

namespace weylgraph {

std::vector<OracleCase> random_oracle_cases(const GraphPtr& g, Rng& rng, std::size_t cases,
                                            std::size_t points_per_case, const RandomElementSpec& spec) {
  std::vector<OracleCase> out;
  out.reserve(cases);
  for (std::size_t i = 0; i < cases; ++i) {
    OracleCase c{random_element(g, rng, spec), random_element(g, rng, spec), {}};
    auto product = c.a * c.b;
    std::vector<Monomial> support;
    for (const auto& [m, coef] : product.terms()) support.push_back(m);
    for (std::size_t j = 0; j < points_per_case; ++j) {
      if (!support.empty() && rng.coin()) {
        const auto& m = support[rng.below(support.size())];
        c.points.push_back(random_arrow_in(*g, rng, {m.mu, m.nu}));
      } else {
        c.points.push_back(random_arrow(*g, rng, spec.max_length + 1));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Mismatch count of one case, and a description of its first mismatch.
std::pair<std::size_t, std::optional<std::string>> run_case(const OracleCase& c) {
  auto product = c.a * c.b;
  std::pair<std::size_t, std::optional<std::string>> r{0, std::nullopt};
  for (const auto& gamma : c.points) {
    auto lhs = evaluate(product, gamma);
    auto rhs = convolve_pointwise_oracle(c.a, c.b, gamma);
    if (lhs == rhs) continue;
    if (r.first++ == 0)
      r.second = "a = " + c.a.to_string() + ", b = " + c.b.to_string() + ", at " +
                 format_arrow(c.a.graph(), gamma) + ": product " + lhs.to_string() + " vs convolution " +
                 rhs.to_string();
  }
  return r;
}

}  // namespace

OracleSweepResult oracle_sweep(const std::vector<OracleCase>& cases, Execution exec) {
  std::vector<std::pair<std::size_t, std::optional<std::string>>> results(cases.size());
  const auto n = static_cast<std::int64_t>(cases.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = run_case(cases[static_cast<std::size_t>(i)]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = run_case(cases[static_cast<std::size_t>(i)]);
  }
  OracleSweepResult out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    out.checked += cases[i].points.size();
    out.mismatches += results[i].first;
    if (!out.first_mismatch && results[i].second) out.first_mismatch = results[i].second;
  }
  return out;
}

OracleTest random_oracle_test(std::uint64_t seed, std::size_t graphs, std::size_t triples, Execution exec) {
  constexpr std::size_t kPointsPerCase = 10;
  Rng rng(seed);
  OracleTest out;
  std::vector<OracleCase> cases;
  for (std::size_t i = 0; i < graphs; ++i) {
    const std::size_t v = 1 + rng.below(4);
    const std::size_t e = v + rng.below(7 - v);
    auto g = std::make_shared<const Graph>(random_graph(rng, v, e));
    out.graphs.push_back(g);
    // The last graph takes the remainder so the total is exact.
    std::size_t share = triples / graphs + (i + 1 == graphs ? triples % graphs : 0);
    while (share > 0) {
      const std::size_t points = std::min(share, kPointsPerCase);
      auto more = random_oracle_cases(g, rng, 1, points, {4, 4, true, 3});
      cases.push_back(std::move(more.front()));
      share -= points;
    }
  }
  out.result = oracle_sweep(cases, exec);
  return out;
}

}  // namespace weylgraph
