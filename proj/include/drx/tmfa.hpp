// Memory automata with a trap state: model, single-step semantics, a naive
// compiler from the AST, a bounded membership oracle, the normal form, and
// the conversion between accepting-trap and rejecting-trap automata.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drx/refsem.hpp"

namespace drx {

// Memory instruction: open (clear and start recording), close (stop, keep
// content), reset (clear and close), do nothing.
enum class instr : std::uint8_t { o, c, r, d };
using instr_vec = std::vector<instr>;

char instr_char(instr i);
instr instr_from_char(char c);

// Single instruction equivalent to running x then y on the same memory.
instr compose(instr x, instr y);
instr_vec compose(const instr_vec& x, const instr_vec& y);

enum class label_kind : std::uint8_t { chr, eps, recall };

struct tlabel {
    label_kind kind = label_kind::eps;
    char ch = 0;  // chr
    int mem = 0;  // recall, 1-based memory index
    auto operator<=>(const tlabel&) const = default;
};

inline tlabel lbl_char(char c) { return {label_kind::chr, c, 0}; }
inline tlabel lbl_eps() { return {label_kind::eps, 0, 0}; }
inline tlabel lbl_recall(int mem) { return {label_kind::recall, 0, mem}; }

struct transition {
    int from = 0;
    tlabel lab;
    int to = 0;
    instr_vec actions;
    auto operator<=>(const transition&) const = default;
};

// The trap state's self-loops (one per alphabet symbol plus one silent, all
// instructions d) are implicit everywhere: never stored, never serialized.
// A recall transition always closes the recalled memory (actions[mem-1] is c).
struct tmfa {
    int states = 0;              // dense ids 0..states-1, trap included
    std::vector<char> alphabet;  // sorted, duplicate-free
    int memories = 0;
    int initial = 0;
    std::set<int> finals;  // never contains the trap; see trap_accepting
    int trap = 0;
    bool trap_accepting = false;
    std::vector<transition> transitions;

    bool is_final(int q) const { return q == trap ? trap_accepting : finals.count(q) > 0; }

    bool operator==(const tmfa&) const = default;
};

void sort_transitions(tmfa& m);
// Per-state outgoing transition indices (empty for the trap).
std::vector<std::vector<int>> outgoing(const tmfa& m);
// Throws std::runtime_error when structural invariants are violated.
void validate(const tmfa& m);

struct mem_state {
    int start = 0, end = 0;  // content = input[start, end)
    bool open = false;
    auto operator<=>(const mem_state&) const = default;
};

struct config {
    int state = 0;
    int pos = 0;
    std::vector<mem_state> mems;
    auto operator<=>(const config&) const = default;
};

config initial_config(const tmfa& m);

// Instruction effects alone (no consumption): open clears and starts at the
// current position, close freezes, reset empties and closes.
void apply_actions(std::vector<mem_state>& mems, const instr_vec& a, int pos);

std::string mem_content(const mem_state& ms, const std::string& input);

// All successor configurations of c on the given input, including the trap
// successor on a failed recall: the content mismatches the remaining input,
// or outlasts it with at least one input symbol left. The matched prefix is
// consumed either way. A recall met by exhausted input has no successor (the
// run halts and the state's own acceptance decides). Implicit trap
// self-loops are honoured.
std::set<config> step(const tmfa& m, const config& c, const std::string& input);

// Breadth-first search over configurations; throws resource_limit_error
// beyond node_cap. Reaching an accepting trap accepts immediately.
bool member_oracle(const tmfa& m, const std::string& w, std::size_t node_cap = 1000000);

// Thompson-style compiler: one memory per variable in variable_order, a
// rejecting trap, and freely many epsilon transitions. No determinism is
// attempted; pair it with member_oracle as a reference semantics.
tmfa compile_naive(const ast_ptr& t);

// All accepted words over m's alphabet with length <= max_word_len.
std::set<std::string> language(const tmfa& m, int max_word_len, std::size_t cap = 4000000);

// Normal form: instructions ride their own epsilon transitions (one non-d
// each, opens never hit an open memory, no resets), consuming and recall
// transitions carry no instructions beyond the mandated close, and no
// reachable recall is on an empty memory.
tmfa normalize(const tmfa& m);

// Language-preserving conversion from an accepting-trap automaton to a
// rejecting-trap one. Doubles the memories: each source memory is split in
// two so that a failed recall can be re-detected with rejecting semantics.
tmfa acc_to_rej(const tmfa& m);

// True when no cycle contains a recall or any non-d instruction.
bool is_memory_cycle_free(const tmfa& m);

// At most one transition per label at every state, and any state with an
// epsilon or recall transition has exactly one outgoing transition. The trap
// is exempt (its implicit loops never conflict: leaving it is impossible).
bool is_deterministic(const tmfa& m);

}  // namespace drx
