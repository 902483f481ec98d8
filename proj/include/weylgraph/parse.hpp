#pragma once

#include <string_view>

#include "weylgraph/algebra.hpp"
#include "weylgraph/cocycles.hpp"

namespace weylgraph {

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := item ('*' item)*
// item   := 'S(' edges ')' ['^*'] | 'P(' vertex ')' | '(' expr ')' ['^*'] | scalar
// scalar := integer ['/' integer] | 'zeta(' N ')' ['^' ['-'] k]
// A bare scalar stands for that multiple of the unit. '#' starts a comment.
// Throws ParseError carrying the line; the message names the column.
AlgebraElement parse_expression(const GraphPtr& g, std::string_view text);

// One factor per line, multiplied together:
//   trivial
//   char <index>          character of Γ^ab, lifted through the labeling
//   gauge <n> <k>         z ↦ e^{2πik/n} per unit of length
//   edge <edge> <p/q>     edge cocycle, e ↦ e^{2πi p/q} (edges not listed give 1)
//   cob <edges> = <p/q>   coboundary of f with f = e^{2πi p/q} on the cylinder
//                         of the word (all words one length; others give 1)
Cocycle parse_cocycle(const EdgeLabeling& theta, std::string_view text);

}  // namespace weylgraph
