// Graphviz export for memory occurrence graphs and automata.
#pragma once

#include <string>

#include "drx/glushkov.hpp"
#include "drx/tmfa.hpp"

namespace drx {

// Occurrence nodes are emitted in mark order between src and snk, so the
// output is stable for a given regex and diffs cleanly. Edge labels carry
// the bracket word, ε when empty.
std::string to_dot(const memory_graph& g);

// States in numeric order, finals double-circled, the trap an octagon.
// Edge labels show the consumed symbol and, when the automaton has
// memories, the instruction vector after a slash ("a / od").
std::string to_dot(const tmfa& m);

}  // namespace drx
