// Toolbox for deterministic automata: epsilon elimination, completion,
// complement, two matchers (a plain simulator and a preprocessed
// linear-time one), and the lookahead-l determinism analysis for automata
// whose only branching is between recalls of different memories.
#pragma once

#include "drx/tmfa.hpp"

namespace drx {

struct not_deterministic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Removes every epsilon transition of a deterministic automaton by chasing
// the (unique) silent chain from each state, composing instruction vectors
// along the way and hoisting acceptance of states passed through. A silent
// cycle leaves the state with no outgoing transitions.
tmfa remove_epsilon(const tmfa& m);

// Adds a non-accepting sink with full self-loops and gives every state
// whose transitions are plain characters the missing symbols. States with
// an epsilon or recall transition are left alone (their only move already
// covers every continuation).
tmfa complete(const tmfa& m);

// Complement of a deterministic automaton's language, by making every run
// total and toggling acceptance, including the trap's.
tmfa complement(const tmfa& m, std::size_t state_cap = 250000);

// Single-path simulation of a deterministic automaton.
bool match_direct(const tmfa& m, const std::string& w);

// One stop on the contracted recall chain of a state: apply `reach`, accept
// if exhausted and `acc`, recall memory `mem` (vector `rec_vec`, successor
// `target`) when it is non-empty, otherwise fall through to the next entry.
struct recall_entry {
    int state = 0;
    int mem = 0;  // 0-based
    instr_vec reach;
    bool acc = false;
    instr_vec rec_vec;
    int target = 0;
};

struct recall_list {
    std::vector<recall_entry> entries;
    bool loops = false;     // chain revisits a state: all-empty means stuck
    int fallthrough = -1;   // next state when every entry skips (if !loops)
    instr_vec tail_reach;   // composed vectors after the last taken entry
    bool tail_acc = false;  // accepting state passed after the last entry
};

struct match_table {
    tmfa m;  // epsilon-free, deterministic
    std::vector<std::map<char, int>> by_char;  // state -> symbol -> transition
    std::vector<recall_list> recalls;          // only for recall states
    std::vector<bool> is_recall_state;
};

match_table preprocess(const tmfa& m);

// O(memories * |w|) matcher over the preprocessed table.
bool match_fast(const match_table& t, const std::string& w);

// Lookahead determinism: runs may only branch at states whose transitions
// all recall distinct memories, and on every input the first min(l, ...)
// symbols of the recalled contents decide the branch. l = 0 coincides with
// is_deterministic.
bool is_l_deterministic(const tmfa& m, int ell, std::size_t config_cap = 250000);

// Rewrites an l-deterministic automaton into an equivalent deterministic
// one by keeping the first l symbols of every memory in the state and
// re-reading them symbol by symbol at recalls. Throws not_deterministic_error
// when the input is not l-deterministic.
tmfa l_determinize(const tmfa& m, int ell, std::size_t state_cap = 250000);

}  // namespace drx
