// Occurrence graph of a regex with back-references, the determinism check
// on it, and its reading as an automaton with a rejecting trap. The graph
// has one node per marked terminal or reference occurrence plus a source
// and a sink; edge labels are marked bracket words describing the memory
// actions performed between two consecutive occurrences.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drx/refsem.hpp"
#include "drx/syntax.hpp"
#include "drx/tmfa.hpp"

namespace drx {

// Labels reuse ref_word restricted to bracket symbols (kind open/close).
// Synthesized brackets (loop compactions) carry mark 0.

// Net effect of a bracket word, one instruction per variable in the given
// order: d when the word has no bracket of that variable, o when its
// rightmost one is an open, otherwise r when an open occurs anywhere and c
// when none does. Equals the fold of single-bracket effects under compose.
// Throws std::invalid_argument on non-bracket symbols or unknown variables.
instr_vec net_action(const ref_word& w, const std::vector<std::string>& vars);

// Shortest unmarked bracket word with the same net action: [x for o, ]x
// for c, [x]x for r, nothing for d, variables in the order given.
ref_word gmin(const ref_word& w, const std::vector<std::string>& vars);

// Node ids: 0 is the source, 1..nodes.size() are the occurrences in mark
// order, nodes.size()+1 is the sink. nodes[i] is the occurrence with id
// i+1, a ref_symbol of kind terminal or var_ref.
struct graph_edge {
    int from = 0;
    ref_word label;
    int to = 0;
    auto operator<=>(const graph_edge&) const = default;
};

struct memory_graph {
    std::vector<std::string> vars;  // bound in order of first binding, then
                                    // reference-only ones
    std::vector<ref_symbol> nodes;
    std::vector<graph_edge> edges;  // sorted, duplicate-free

    int src() const { return 0; }
    int snk() const { return static_cast<int>(nodes.size()) + 1; }
};

std::string show(const memory_graph& g, const graph_edge& e);

// Two clashing edges out of one node, the reason a regex is rejected as
// not deterministic. Conditions: 1 the same terminal toward two different
// occurrences, 2 two different occurrences at least one of which is a
// reference, 3 two labels toward the same occurrence, 4 two labels toward
// the sink.
struct ndet_witness {
    int condition = 0;
    int node = 0;        // common source of the clashing edges
    std::string detail;  // both edges, rendered
};

// Structural recursion over the regex. Source and sink edges of a
// subgraph are decorated by bindings, merged by concatenation and looped
// back by plus; with bracket-labeled loop edges the plus closes the set of
// their net actions under composition (at most 4^k vectors, guarded by
// k <= 12, else resource_limit_error). Rejects asts with an empty-set
// subterm (std::invalid_argument).
memory_graph build_graph(const ast_ptr& t);

// First clash in node order, conditions tried in their numbered order at
// each node; nullopt means the graph and the regex are deterministic.
std::optional<ndet_witness> graph_determinism(const memory_graph& g);

// States are the source, the occurrences and a rejecting trap in the
// sink's slot; nodes with a sink edge become final, the memory actions of
// sink edges are dropped. An edge into a terminal occurrence consumes that
// symbol with the label's net action; an edge into a reference recalls its
// memory with the close forced, except that a label resetting the recalled
// memory makes the recall silent (there is nothing left to read).
tmfa graph_to_tmfa(const memory_graph& g);

// Builds and converts in one go, scanning every subexpression's subgraph
// and stopping at the first clash. The witness can therefore name a
// condition of an inner subexpression instead of the whole regex: an end
// clash inside a concatenation resurfaces as a next-symbol clash later,
// the verdict is the same either way.
std::variant<tmfa, ndet_witness> compile_deterministic(const ast_ptr& t);

}  // namespace drx
