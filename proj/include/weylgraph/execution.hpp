#pragma once

namespace weylgraph {

// Kernels with an OpenMP path keep a serial reference; both give identical results.
enum class Execution { serial, parallel };

}  // namespace weylgraph
