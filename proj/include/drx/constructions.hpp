// Constructions layered on the core: deterministic regexes for arbitrary
// unary regular languages, the reduction from word equations to regex
// intersection, and a brute-force bounded intersection search.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drx/syntax.hpp"
#include "drx/tmfa.hpp"

namespace drx {

// DFA over {a} in lollipop form: chain positions 0..chain (a^i halts at
// position i), then a cycle of length cycle entered at the chain's last
// state. Cycle position 0 is that same state, so naming it in accept_cycle
// or naming position chain in accept_chain means the same thing.
struct unary_dfa {
    int chain = 0;
    int cycle = 1;
    std::set<int> accept_chain;  // subset of [0, chain]
    std::set<int> accept_cycle;  // subset of [0, cycle)
};

// Throws std::invalid_argument when the shape or a position is off, or when
// nothing accepts (an empty language has no trimmed lollipop).
void validate(const unary_dfa& d);

bool unary_member(const unary_dfa& d, int len);

// Deterministic regex with the same language. The cycle is simulated by
// rotating a single 'a' through a ring of variables, one rotation per
// accepting state passed; when every cycle state accepts the loop is plain
// a* instead. The result passes compile_deterministic.
ast_ptr unary_dfa_to_drx(const unary_dfa& d);

struct eq_item {
    bool is_var = false;
    char ch = 0;      // terminal, when is_var is false
    std::string var;  // variable name, when is_var is true
};
using eq_side = std::vector<eq_item>;

struct word_equation {
    eq_side lhs;
    eq_side rhs;
};

// Text form "lhs = rhs". An uppercase letter plus any following digits
// names a variable; lowercase letters are terminals; spaces are ignored.
// Both sides must be nonempty. Throws parse_error.
word_equation parse_equation(const std::string& text);

// Two deterministic, vstar-free regexes whose languages intersect exactly
// when the equation has a solution. Witnesses look like
// s(x1)%s(x2)%...%s(xk)%s(lhs) for a solving substitution s; the terminal
// alphabet is the set of terminals that occur in the equation.
std::pair<ast_ptr, ast_ptr> word_equation_to_drx(const word_equation& eq);

// Shortest word accepted by every automaton, at most max_len long, trying
// candidates over the shared alphabet in length order and lexicographic
// within a length. Throws resource_limit_error after cap candidates and
// std::invalid_argument when ms is empty.
std::optional<std::string> bounded_intersection(const std::vector<tmfa>& ms,
                                                int max_len,
                                                std::size_t cap = 2000000);

}  // namespace drx
