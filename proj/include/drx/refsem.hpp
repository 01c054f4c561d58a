// Ref-words: the symbolic words a regex with back-references generates
// before references are resolved, plus their dereferencing and bounded
// enumeration of both ref-words and the actual language.
#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "drx/syntax.hpp"

namespace drx {

enum class ref_kind {
    terminal,  // plain alphabet symbol
    var_ref,   // occurrence of '&x'
    open,      // '[x', start of x's binding
    close,     // ']x', end of x's binding
};

struct ref_symbol {
    ref_kind kind;
    char symbol = 0;   // terminal
    std::string var;   // var_ref/open/close
    int mark = 0;      // position index when marked, 0 otherwise
    auto operator<=>(const ref_symbol&) const = default;
};

using ref_word = std::vector<ref_symbol>;

std::string show(const ref_symbol& s);
std::string show(const ref_word& w);

// A proper regular expression over ref symbols: same node shapes as
// regex_ast minus reference/binding, terminals carry a ref_symbol.
struct ref_regex;
using ref_regex_ptr = std::shared_ptr<const ref_regex>;
struct ref_regex {
    node_kind kind = node_kind::epsilon;  // empty/epsilon/terminal/concat/disjunction/plus
    ref_symbol sym;                       // terminal payload
    ref_regex_ptr left, right;
};

// Rewrites bindings into bracket pairs and references into var_ref symbols.
// With marked=true each symbol occurrence gets a unique mark, numbered 1..n
// left to right across the printed form (brackets included).
ref_regex_ptr to_ref_regex(const ast_ptr& t, bool marked);

// Resolves references: each var_ref takes the value of the nearest complete
// bracket pair for its variable to the left (recursively resolved); unbound
// references give the empty word. Brackets disappear.
std::string dereference(const ref_word& r);

// All ref-words of length <= max_len generated by the regex. Length counts
// every symbol, brackets included. Symbols are unmarked.
std::set<ref_word> enumerate_ref_words(const ast_ptr& t, int max_len,
                                       std::size_t cap = 1u << 22);

// All words of the regex's language up to max_word_len, by bounded search
// over automaton configurations (ref-word enumeration cannot bound this:
// arbitrarily long ref-words can dereference to short words).
std::set<std::string> enumerate_language(const ast_ptr& t, int max_word_len,
                                         std::size_t cap = 1u << 22);

}  // namespace drx
