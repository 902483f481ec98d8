// Serial reference vs OpenMP kernel timings; results must agree exactly.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "weylgraph/dynamics.hpp"
#include "weylgraph/kernels.hpp"

using namespace weylgraph;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-40s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  bool ok = true;

  {
    Rng rng(7);
    auto g = std::make_shared<const Graph>(random_graph(rng, 3, 6));
    RandomElementSpec spec;
    spec.max_length = 4;
    auto cases = random_oracle_cases(g, rng, 400, 10, spec);
    OracleSweepResult s, p;
    double ts = seconds([&] { s = oracle_sweep(cases, Execution::serial); }, 3);
    double tp = seconds([&] { p = oracle_sweep(cases, Execution::parallel); }, 3);
    bool same = s.checked == p.checked && s.mismatches == p.mismatches && s.first_mismatch == p.first_mismatch;
    ok = ok && same;
    row("oracle sweep (4000 points)", ts, tp, same);
  }

  {
    auto g = std::make_shared<const Graph>(parse_graph("vertices: v\nedge a v v\nedge b v v\n"));
    SearchBounds bounds{2, 1, 2'000'000};
    CandidateSet s, p;
    double ts = seconds([&] { s = enumerate_candidates(g, g, bounds, Execution::serial); }, 1);
    double tp = seconds([&] { p = enumerate_candidates(g, g, bounds, Execution::parallel); }, 1);
    bool same = s.maps.size() == p.maps.size() && s.log == p.log;
    for (std::size_t i = 0; same && i < s.maps.size(); ++i) same = same_map(s.maps[i], p.maps[i]);
    ok = ok && same;
    row("candidate enumeration (2-rose w=2 m=1)", ts, tp, same);
  }
  return ok ? 0 : 1;
}
