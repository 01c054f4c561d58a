#include "drx/refsem.hpp"

#include <deque>
#include <map>

namespace drx {

std::string show(const ref_symbol& s) {
    std::string out;
    switch (s.kind) {
        case ref_kind::terminal:
            out = std::string(1, s.symbol);
            break;
        case ref_kind::var_ref:
            out = s.var;
            break;
        case ref_kind::open:
            out = "[" + s.var;
            break;
        case ref_kind::close:
            out = "]" + s.var;
            break;
    }
    if (s.mark != 0) out += "(" + std::to_string(s.mark) + ")";
    return out;
}

std::string show(const ref_word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += "·";
        out += show(w[i]);
    }
    return out;
}

namespace {

ref_regex_ptr rnode(node_kind k, ref_regex_ptr l = nullptr, ref_regex_ptr r = nullptr) {
    auto n = std::make_shared<ref_regex>();
    n->kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

ref_regex_ptr rterm(ref_symbol s) {
    auto n = std::make_shared<ref_regex>();
    n->kind = node_kind::terminal;
    n->sym = std::move(s);
    return n;
}

struct marker {
    bool marked;
    int next = 1;
    int take() { return marked ? next++ : 0; }
};

ref_regex_ptr convert(const ast_ptr& t, marker& m) {
    switch (t->kind) {
        case node_kind::empty:
            return rnode(node_kind::empty);
        case node_kind::epsilon:
            return rnode(node_kind::epsilon);
        case node_kind::terminal:
            return rterm({ref_kind::terminal, t->symbol, "", m.take()});
        case node_kind::reference:
            return rterm({ref_kind::var_ref, 0, t->var, m.take()});
        case node_kind::concat: {
            auto l = convert(t->left, m);
            auto r = convert(t->right, m);
            return rnode(node_kind::concat, std::move(l), std::move(r));
        }
        case node_kind::disjunction: {
            auto l = convert(t->left, m);
            auto r = convert(t->right, m);
            return rnode(node_kind::disjunction, std::move(l), std::move(r));
        }
        case node_kind::plus:
            return rnode(node_kind::plus, convert(t->left, m));
        case node_kind::binding: {
            auto open = rterm({ref_kind::open, 0, t->var, m.take()});
            auto body = convert(t->left, m);
            auto close = rterm({ref_kind::close, 0, t->var, m.take()});
            return rnode(node_kind::concat, std::move(open),
                         rnode(node_kind::concat, std::move(body), std::move(close)));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

ref_regex_ptr to_ref_regex(const ast_ptr& t, bool marked) {
    marker m{marked};
    return convert(t, m);
}

std::string dereference(const ref_word& r) {
    std::map<std::string, std::string> env;
    // Stack of open bindings, innermost last; each buffer collects the
    // resolved content of its binding.
    std::vector<std::pair<std::string, std::string>> open_stack;
    std::string out;
    auto append = [&](const std::string& piece) {
        if (open_stack.empty())
            out += piece;
        else
            open_stack.back().second += piece;
    };
    for (const auto& s : r) {
        switch (s.kind) {
            case ref_kind::terminal:
                append(std::string(1, s.symbol));
                break;
            case ref_kind::var_ref: {
                auto it = env.find(s.var);
                append(it == env.end() ? std::string() : it->second);
                break;
            }
            case ref_kind::open:
                open_stack.emplace_back(s.var, "");
                break;
            case ref_kind::close: {
                auto [name, content] = std::move(open_stack.back());
                open_stack.pop_back();
                append(content);
                env[name] = std::move(content);
                break;
            }
        }
    }
    return out;
}

namespace {

// Thompson construction over ref symbols.
struct rnfa {
    int states = 0;
    int start = 0, accept = 0;
    // edge: (from, symbol or nullopt for epsilon, to)
    std::vector<std::tuple<int, int, ref_symbol>> sym_edges;  // from, to, sym
    std::vector<std::pair<int, int>> eps_edges;

    int fresh() { return states++; }
};

struct frag {
    int start, accept;
};

frag build(rnfa& a, const ref_regex_ptr& t) {
    frag f{a.fresh(), a.fresh()};
    switch (t->kind) {
        case node_kind::empty:
            break;  // no edge: accept unreachable
        case node_kind::epsilon:
            a.eps_edges.emplace_back(f.start, f.accept);
            break;
        case node_kind::terminal:
            a.sym_edges.emplace_back(f.start, f.accept, t->sym);
            break;
        case node_kind::concat: {
            frag l = build(a, t->left);
            frag r = build(a, t->right);
            a.eps_edges.emplace_back(f.start, l.start);
            a.eps_edges.emplace_back(l.accept, r.start);
            a.eps_edges.emplace_back(r.accept, f.accept);
            break;
        }
        case node_kind::disjunction: {
            frag l = build(a, t->left);
            frag r = build(a, t->right);
            a.eps_edges.emplace_back(f.start, l.start);
            a.eps_edges.emplace_back(f.start, r.start);
            a.eps_edges.emplace_back(l.accept, f.accept);
            a.eps_edges.emplace_back(r.accept, f.accept);
            break;
        }
        case node_kind::plus: {
            frag b = build(a, t->left);
            a.eps_edges.emplace_back(f.start, b.start);
            a.eps_edges.emplace_back(b.accept, f.accept);
            a.eps_edges.emplace_back(b.accept, b.start);
            break;
        }
        default:
            throw std::logic_error("ref_regex may not contain references or bindings");
    }
    return f;
}

}  // namespace

std::set<ref_word> enumerate_ref_words(const ast_ptr& t, int max_len, std::size_t cap) {
    ref_regex_ptr rr = to_ref_regex(t, false);
    rnfa a;
    frag f = build(a, rr);

    std::vector<std::vector<int>> eps(a.states);
    for (auto [from, to] : a.eps_edges) eps[from].push_back(to);
    std::vector<std::vector<std::pair<int, ref_symbol>>> sym(a.states);
    for (auto& [from, to, s] : a.sym_edges) sym[from].emplace_back(to, s);

    std::set<ref_word> out;
    std::set<std::pair<int, ref_word>> visited;
    std::deque<std::pair<int, ref_word>> queue;
    queue.emplace_back(f.start, ref_word{});
    visited.insert(queue.front());
    while (!queue.empty()) {
        auto [q, w] = std::move(queue.front());
        queue.pop_front();
        if (q == f.accept) out.insert(w);
        for (int to : eps[q]) {
            if (visited.emplace(to, w).second) queue.emplace_back(to, w);
        }
        if (static_cast<int>(w.size()) == max_len) continue;
        for (const auto& [to, s] : sym[q]) {
            ref_word next = w;
            next.push_back(s);
            if (visited.emplace(to, next).second) queue.emplace_back(to, std::move(next));
        }
        if (visited.size() > cap)
            throw resource_limit_error("ref-word enumeration exceeded its node cap");
    }
    return out;
}

}  // namespace drx
