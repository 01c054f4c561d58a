#include "drx/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace drx {

namespace {

ast_ptr node(node_kind k) {
    auto n = std::make_shared<regex_ast>();
    n->kind = k;
    return n;
}

}  // namespace

ast_ptr mk_empty() { return node(node_kind::empty); }

ast_ptr mk_epsilon() { return node(node_kind::epsilon); }

ast_ptr mk_terminal(char c) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::terminal;
    n->symbol = c;
    return n;
}

ast_ptr mk_reference(const std::string& name) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::reference;
    n->var = name;
    return n;
}

ast_ptr mk_concat(ast_ptr l, ast_ptr r) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::concat;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

ast_ptr mk_disjunction(ast_ptr l, ast_ptr r) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::disjunction;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

ast_ptr mk_plus(ast_ptr body) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::plus;
    n->left = std::move(body);
    return n;
}

ast_ptr mk_star(ast_ptr body) {
    return mk_disjunction(mk_epsilon(), mk_plus(std::move(body)));
}

ast_ptr mk_binding(const std::string& name, ast_ptr body) {
    auto n = std::make_shared<regex_ast>();
    n->kind = node_kind::binding;
    n->var = name;
    n->left = std::move(body);
    return n;
}

parse_error::parse_error(const std::string& msg, std::size_t at)
    : std::runtime_error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}

namespace {

bool contains_var(const ast_ptr& t, const std::string& name) {
    if (!t) return false;
    if ((t->kind == node_kind::binding || t->kind == node_kind::reference) && t->var == name)
        return true;
    return contains_var(t->left, name) || contains_var(t->right, name);
}

struct parser {
    const std::string& s;
    std::size_t pos = 0;
    std::vector<std::size_t> empty_positions;

    explicit parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    // Character after whitespace, or '\0' at end of input.
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool at_atom_start() {
        char c = peek();
        if (c == '\0') return false;
        if (c == '(' || c == '{' || c == '&' || c == '\\' || c == '#') return true;
        return !is_reserved(c);
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = pos;
        if (pos >= s.size() || is_name_char(s[pos]) == false ||
            (s[pos] >= '0' && s[pos] <= '9'))
            throw parse_error("expected variable name", pos);
        while (pos < s.size() && is_name_char(s[pos])) ++pos;
        return s.substr(start, pos - start);
    }

    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw parse_error(std::string("expected '") + c + "'", pos);
        ++pos;
    }

    ast_ptr parse_alt() {
        std::vector<ast_ptr> parts;
        parts.push_back(parse_cat());
        while (peek() == '|') {
            ++pos;
            parts.push_back(parse_cat());
        }
        ast_ptr out = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;)
            out = mk_disjunction(parts[i], out);
        return out;
    }

    ast_ptr parse_cat() {
        std::vector<ast_ptr> parts;
        parts.push_back(parse_rep());
        while (at_atom_start()) parts.push_back(parse_rep());
        ast_ptr out = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;)
            out = mk_concat(parts[i], out);
        return out;
    }

    ast_ptr parse_rep() {
        ast_ptr out = parse_atom();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos;
                out = mk_plus(out);
            } else if (c == '*') {
                ++pos;
                out = mk_star(out);
            } else {
                break;
            }
        }
        return out;
    }

    ast_ptr parse_atom() {
        skip_ws();
        if (pos >= s.size()) throw parse_error("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            if (peek() == ')') {
                ++pos;
                return mk_epsilon();
            }
            ast_ptr inner = parse_alt();
            expect(')');
            return inner;
        }
        if (c == '{') {
            std::size_t open_at = pos;
            ++pos;
            std::string name = parse_name();
            expect(':');
            ast_ptr body = parse_alt();
            expect('}');
            if (contains_var(body, name))
                throw parse_error("variable '" + name + "' bound or referenced inside its own binding",
                                  open_at);
            return mk_binding(name, body);
        }
        if (c == '&') {
            ++pos;
            return mk_reference(parse_name());
        }
        if (c == '#') {
            empty_positions.push_back(pos);
            ++pos;
            return mk_empty();
        }
        if (c == '\\') {
            ++pos;
            if (pos >= s.size())
                throw parse_error("dangling escape at end of input", pos);
            return mk_terminal(s[pos++]);
        }
        if (is_reserved(c))
            throw parse_error(std::string("unexpected '") + c + "'", pos);
        ++pos;
        return mk_terminal(c);
    }
};

void check_empty_is_root(const ast_ptr& t, bool root, std::size_t err_pos) {
    if (!t) return;
    if (t->kind == node_kind::empty && !root)
        throw parse_error("'#' is only allowed as the entire regex", err_pos);
    check_empty_is_root(t->left, false, err_pos);
    check_empty_is_root(t->right, false, err_pos);
}

}  // namespace

ast_ptr parse(const std::string& text) {
    parser p(text);
    if (p.peek() == '\0') throw parse_error("empty input", 0);
    ast_ptr out = p.parse_alt();
    p.skip_ws();
    if (p.pos != text.size())
        throw parse_error("trailing input", p.pos);
    std::size_t err_pos = p.empty_positions.empty() ? 0 : p.empty_positions.front();
    check_empty_is_root(out, true, err_pos);
    return out;
}

namespace {

bool is_star_sugar(const ast_ptr& t) {
    return t->kind == node_kind::disjunction && t->left->kind == node_kind::epsilon &&
           t->right->kind == node_kind::plus;
}

struct printed {
    std::string text;
    bool ends_with_name = false;
};

printed print_node(const ast_ptr& t);

// Piece usable where the grammar wants a single repeatable unit.
printed print_rep_operand(const ast_ptr& t) {
    if (t->kind == node_kind::concat || (t->kind == node_kind::disjunction && !is_star_sugar(t))) {
        return {"(" + print_node(t).text + ")", false};
    }
    return print_node(t);
}

std::string join_cat(const printed& a, const printed& b) {
    if (a.ends_with_name && !b.text.empty() && is_name_char(b.text[0]))
        return a.text + " " + b.text;
    return a.text + b.text;
}

printed print_node(const ast_ptr& t) {
    switch (t->kind) {
        case node_kind::empty:
            return {"#", false};
        case node_kind::epsilon:
            return {"()", false};
        case node_kind::terminal:
            if (is_reserved(t->symbol) || std::isspace(static_cast<unsigned char>(t->symbol)))
                return {std::string("\\") + t->symbol, false};
            // Only a trailing reference name can swallow a following name
            // character, so plain terminals never need the separating space.
            return {std::string(1, t->symbol), false};
        case node_kind::reference:
            return {"&" + t->var, true};
        case node_kind::binding:
            return {"{" + t->var + ":" + print_node(t->left).text + "}", false};
        case node_kind::plus: {
            printed body = print_rep_operand(t->left);
            return {body.text + "+", false};
        }
        case node_kind::disjunction: {
            if (is_star_sugar(t)) {
                printed body = print_rep_operand(t->right->left);
                return {body.text + "*", false};
            }
            printed l = t->left->kind == node_kind::disjunction && !is_star_sugar(t->left)
                            ? printed{"(" + print_node(t->left).text + ")", false}
                            : print_node(t->left);
            printed r = print_node(t->right);
            return {l.text + "|" + r.text, r.ends_with_name};
        }
        case node_kind::concat: {
            // The parser right-associates juxtaposition, so a concat as the
            // right child reparses identically without parentheses; a concat
            // on the left would not.
            auto wrap = [](const ast_ptr& n, bool left) -> printed {
                if ((left && n->kind == node_kind::concat) ||
                    (n->kind == node_kind::disjunction && !is_star_sugar(n)))
                    return {"(" + print_node(n).text + ")", false};
                return print_node(n);
            };
            printed l = wrap(t->left, true);
            printed r = wrap(t->right, false);
            std::string text = join_cat(l, r);
            return {text, r.ends_with_name};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::string print(const ast_ptr& t) { return print_node(t).text; }

bool ast_equal(const ast_ptr& a, const ast_ptr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->symbol != b->symbol || a->var != b->var) return false;
    return ast_equal(a->left, b->left) && ast_equal(a->right, b->right);
}

namespace {

void walk_vars(const ast_ptr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == node_kind::binding || t->kind == node_kind::reference) out.insert(t->var);
    walk_vars(t->left, out);
    walk_vars(t->right, out);
}

bool binding_under_plus(const ast_ptr& t, bool under) {
    if (!t) return false;
    if (t->kind == node_kind::binding && under) return true;
    bool next = under || t->kind == node_kind::plus;
    return binding_under_plus(t->left, next) || binding_under_plus(t->right, next);
}

}  // namespace

std::set<std::string> variables(const ast_ptr& t) {
    std::set<std::string> out;
    walk_vars(t, out);
    return out;
}

bool is_vstar_free(const ast_ptr& t) { return !binding_under_plus(t, false); }

std::vector<char> terminals(const ast_ptr& t) {
    std::set<char> seen;
    std::vector<const regex_ast*> stack{t.get()};
    while (!stack.empty()) {
        const regex_ast* n = stack.back();
        stack.pop_back();
        if (!n) continue;
        if (n->kind == node_kind::terminal) seen.insert(n->symbol);
        stack.push_back(n->left.get());
        stack.push_back(n->right.get());
    }
    return std::vector<char>(seen.begin(), seen.end());
}

namespace {

void walk_order(const ast_ptr& t, std::vector<std::string>& bound,
                std::vector<std::string>& referenced) {
    if (!t) return;
    if (t->kind == node_kind::binding) {
        if (std::find(bound.begin(), bound.end(), t->var) == bound.end())
            bound.push_back(t->var);
    } else if (t->kind == node_kind::reference) {
        if (std::find(referenced.begin(), referenced.end(), t->var) == referenced.end())
            referenced.push_back(t->var);
    }
    walk_order(t->left, bound, referenced);
    walk_order(t->right, bound, referenced);
}

}  // namespace

std::vector<std::string> variable_order(const ast_ptr& t) {
    std::vector<std::string> bound, referenced;
    walk_order(t, bound, referenced);
    for (const auto& name : referenced)
        if (std::find(bound.begin(), bound.end(), name) == bound.end()) bound.push_back(name);
    return bound;
}

}  // namespace drx
