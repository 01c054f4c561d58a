// Regexes with back-references: AST, parser, printer, structural queries.
#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace drx {

enum class node_kind {
    empty,        // unmatchable regex, spelled '#', only legal as the whole regex
    epsilon,      // '()'
    terminal,     // single alphabet symbol
    reference,    // '&name'
    concat,       // juxtaposition, binary
    disjunction,  // '|', binary
    plus,         // one or more repetitions
    binding,      // '{name: body}'
};

struct regex_ast;
using ast_ptr = std::shared_ptr<const regex_ast>;

// Immutable tree. concat and disjunction are binary; the parser builds
// right-leaning chains for "abc" and "a|b|c". 'x*' is sugar for '(()|x+)'
// and is desugared during parsing; the printer reintroduces it.
struct regex_ast {
    node_kind kind;
    char symbol = 0;    // terminal
    std::string var;    // reference, binding
    ast_ptr left;       // concat/disjunction left child, plus/binding body
    ast_ptr right;      // concat/disjunction right child
};

ast_ptr mk_empty();
ast_ptr mk_epsilon();
ast_ptr mk_terminal(char c);
ast_ptr mk_reference(const std::string& name);
ast_ptr mk_concat(ast_ptr l, ast_ptr r);
ast_ptr mk_disjunction(ast_ptr l, ast_ptr r);
ast_ptr mk_plus(ast_ptr body);
ast_ptr mk_star(ast_ptr body);
ast_ptr mk_binding(const std::string& name, ast_ptr body);

struct parse_error : std::runtime_error {
    std::size_t pos;
    parse_error(const std::string& msg, std::size_t at);
};

// Raised by bounded searches when a configured cap is exceeded.
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ast_ptr parse(const std::string& text);

// Round-trip guarantee: parse(print(t)) is structurally equal to t.
std::string print(const ast_ptr& t);

bool ast_equal(const ast_ptr& a, const ast_ptr& b);

std::set<std::string> variables(const ast_ptr& t);

// True when no variable binding sits under a plus (or desugared star).
bool is_vstar_free(const ast_ptr& t);

// Distinct terminal symbols, sorted: the regex's inferred alphabet.
std::vector<char> terminals(const ast_ptr& t);

// Every variable in fixed global order: bound ones by first binding
// occurrence (left to right), then reference-only ones by first reference.
std::vector<std::string> variable_order(const ast_ptr& t);

inline bool is_reserved(char c) {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == '|' ||
           c == '+' || c == '*' || c == '&' || c == '\\' || c == ':' || c == '#';
}

inline bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

}  // namespace drx
