// Occurrence graph construction. The walk assigns marks in print order
// (brackets included) and numbers occurrence nodes globally, so subgraphs
// are plain edge sets over final node ids plus a sink placeholder that is
// resolved once all nodes exist.
#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "drx/glushkov.hpp"

namespace drx {

namespace {

int var_index(const std::vector<std::string>& vars, const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown variable " + name);
}

ref_word word_of(const instr_vec& v, const std::vector<std::string>& vars) {
    ref_word out;
    for (std::size_t x = 0; x < v.size(); ++x) {
        ref_symbol open{ref_kind::open, 0, vars[x], 0};
        ref_symbol close{ref_kind::close, 0, vars[x], 0};
        switch (v[x]) {
            case instr::o: out.push_back(open); break;
            case instr::c: out.push_back(close); break;
            case instr::r:
                out.push_back(open);
                out.push_back(close);
                break;
            case instr::d: break;
        }
    }
    return out;
}

}  // namespace

instr_vec net_action(const ref_word& w, const std::vector<std::string>& vars) {
    instr_vec v(vars.size(), instr::d);
    for (const ref_symbol& s : w) {
        if (s.kind != ref_kind::open && s.kind != ref_kind::close)
            throw std::invalid_argument("net action of a non-bracket symbol");
        instr& x = v[var_index(vars, s.var)];
        x = compose(x, s.kind == ref_kind::open ? instr::o : instr::c);
    }
    return v;
}

ref_word gmin(const ref_word& w, const std::vector<std::string>& vars) {
    return word_of(net_action(w, vars), vars);
}

namespace {

// Sink placeholder inside subgraphs; the real sink id depends on the final
// node count.
constexpr int sub_snk = -1;

std::string node_name(const std::vector<ref_symbol>& nodes, int id) {
    if (id == 0) return "src";
    if (id >= 1 && id <= static_cast<int>(nodes.size())) return show(nodes[id - 1]);
    return "snk";
}

std::string edge_str(const std::vector<ref_symbol>& nodes, const graph_edge& e) {
    std::string lab = e.label.empty() ? "ε" : show(e.label);
    return "(" + node_name(nodes, e.from) + ", " + lab + ", " +
           node_name(nodes, e.to) + ")";
}

// First clash in node order, conditions tried in numbered order at each
// node. Works on finished graphs and on subgraphs with the placeholder
// sink alike; edges are expected to be duplicate-free.
std::optional<ndet_witness> scan(std::vector<graph_edge> es,
                                 const std::vector<ref_symbol>& nodes) {
    int n = static_cast<int>(nodes.size());
    auto is_snk = [n](int id) { return id < 1 || id > n; };
    std::sort(es.begin(), es.end(), [&](const graph_edge& a, const graph_edge& b) {
        auto key = [&](const graph_edge& e) {
            return std::pair(e.from, is_snk(e.to) ? n + 1 : e.to);
        };
        if (key(a) != key(b)) return key(a) < key(b);
        return a.label < b.label;
    });
    auto clash = [&](int cond, const graph_edge& a, const graph_edge& b) {
        return ndet_witness{cond, a.from,
                            edge_str(nodes, a) + " and " + edge_str(nodes, b)};
    };
    std::size_t lo = 0;
    while (lo < es.size()) {
        std::size_t hi = lo;
        while (hi < es.size() && es[hi].from == es[lo].from) ++hi;
        for (int cond = 1; cond <= 4; ++cond)
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < hi; ++j) {
                    const graph_edge& a = es[i];
                    const graph_edge& b = es[j];
                    bool sa = is_snk(a.to), sb = is_snk(b.to);
                    if (sa || sb) {
                        if (cond == 4 && sa && sb && a.label != b.label)
                            return clash(4, a, b);
                        continue;
                    }
                    const ref_symbol& ta = nodes[a.to - 1];
                    const ref_symbol& tb = nodes[b.to - 1];
                    switch (cond) {
                        case 1:
                            if (a.to != b.to && ta.kind == ref_kind::terminal &&
                                tb.kind == ref_kind::terminal && ta.symbol == tb.symbol)
                                return clash(1, a, b);
                            break;
                        case 2:
                            if (a.to != b.to && (ta.kind == ref_kind::var_ref ||
                                                 tb.kind == ref_kind::var_ref))
                                return clash(2, a, b);
                            break;
                        case 3:
                            if (a.to == b.to && a.label != b.label)
                                return clash(3, a, b);
                            break;
                        default:
                            break;
                    }
                }
        lo = hi;
    }
    return std::nullopt;
}

struct found_witness {
    ndet_witness w;
};

using edge_set = std::set<graph_edge>;

graph_edge join(const graph_edge& out_e, const ref_word& mid, const graph_edge& in_e) {
    graph_edge e{out_e.from, out_e.label, in_e.to};
    e.label.insert(e.label.end(), mid.begin(), mid.end());
    e.label.insert(e.label.end(), in_e.label.begin(), in_e.label.end());
    return e;
}

struct builder {
    std::vector<std::string> vars;
    std::vector<ref_symbol> nodes;
    int next_mark = 1;
    bool check = false;

    // Clash scan after every combining rule; leaves cannot clash. Aborting
    // at the innermost offending subexpression keeps later rules from
    // inflating the edge set any further.
    edge_set checked(edge_set es) {
        if (check)
            if (auto w = scan({es.begin(), es.end()}, nodes)) throw found_witness{*w};
        return es;
    }

    edge_set walk(const ast_ptr& t) {
        switch (t->kind) {
            case node_kind::empty:
                throw std::invalid_argument("occurrence graph of an empty-set regex");
            case node_kind::epsilon:
                return {{0, {}, sub_snk}};
            case node_kind::terminal: {
                nodes.push_back({ref_kind::terminal, t->symbol, "", next_mark++});
                int id = static_cast<int>(nodes.size());
                return {{0, {}, id}, {id, {}, sub_snk}};
            }
            case node_kind::reference: {
                nodes.push_back({ref_kind::var_ref, 0, t->var, next_mark++});
                int id = static_cast<int>(nodes.size());
                return {{0, {}, id}, {id, {}, sub_snk}};
            }
            case node_kind::binding: {
                ref_symbol open{ref_kind::open, 0, t->var, next_mark++};
                edge_set inner = walk(t->left);
                ref_symbol close{ref_kind::close, 0, t->var, next_mark++};
                edge_set out;
                for (graph_edge e : inner) {
                    if (e.from == 0) e.label.insert(e.label.begin(), open);
                    if (e.to == sub_snk) e.label.push_back(close);
                    out.insert(std::move(e));
                }
                return checked(std::move(out));
            }
            case node_kind::disjunction: {
                edge_set out = walk(t->left);
                edge_set right = walk(t->right);
                out.insert(right.begin(), right.end());
                return checked(std::move(out));
            }
            case node_kind::concat: {
                edge_set b = walk(t->left);
                edge_set c = walk(t->right);
                edge_set out;
                for (const graph_edge& e : b)
                    if (e.to != sub_snk) out.insert(e);
                for (const graph_edge& e : c)
                    if (e.from != 0) out.insert(e);
                for (const graph_edge& eo : b)
                    if (eo.to == sub_snk)
                        for (const graph_edge& ei : c)
                            if (ei.from == 0) out.insert(join(eo, {}, ei));
                return checked(std::move(out));
            }
            case node_kind::plus:
                return checked(loop(walk(t->left)));
        }
        throw std::logic_error("unhandled ast node");
    }

    // Kleene plus. Loop-back edges splice a compacted bracket word for
    // every net action reachable by chaining source-to-sink labels. With
    // only silent source-to-sink edges the closure is the identity alone
    // and this degenerates to plain loop-backs.
    edge_set loop(const edge_set& b) {
        std::set<instr_vec> base;
        for (const graph_edge& e : b)
            if (e.from == 0 && e.to == sub_snk && !e.label.empty())
                base.insert(net_action(e.label, vars));
        std::set<int> touched;
        for (const instr_vec& v : base)
            for (std::size_t x = 0; x < v.size(); ++x)
                if (v[x] != instr::d) touched.insert(static_cast<int>(x));
        if (touched.size() > 12)
            throw resource_limit_error("plus loop closure over more than 12 memories");

        std::set<instr_vec> hats;
        hats.insert(instr_vec(vars.size(), instr::d));
        std::vector<instr_vec> work(hats.begin(), hats.end());
        while (!work.empty()) {
            instr_vec v = std::move(work.back());
            work.pop_back();
            for (const instr_vec& s : base) {
                instr_vec next = compose(v, s);
                if (hats.insert(next).second) work.push_back(std::move(next));
            }
        }

        edge_set out = b;
        for (const instr_vec& v : hats) {
            ref_word hat = word_of(v, vars);
            for (const graph_edge& ei : b) {
                if (ei.from != 0) continue;
                graph_edge e{0, hat, ei.to};
                e.label.insert(e.label.end(), ei.label.begin(), ei.label.end());
                out.insert(std::move(e));
            }
            for (const graph_edge& eo : b) {
                if (eo.to != sub_snk) continue;
                graph_edge e = eo;
                e.label.insert(e.label.end(), hat.begin(), hat.end());
                out.insert(std::move(e));
            }
            for (const graph_edge& eo : b)
                if (eo.to == sub_snk)
                    for (const graph_edge& ei : b)
                        if (ei.from == 0) out.insert(join(eo, hat, ei));
        }
        return out;
    }

    memory_graph run(const ast_ptr& t) {
        vars = variable_order(t);
        edge_set es = walk(t);
        memory_graph g;
        g.vars = std::move(vars);
        g.nodes = std::move(nodes);
        int snk = static_cast<int>(g.nodes.size()) + 1;
        for (graph_edge e : es) {
            if (e.to == sub_snk) e.to = snk;
            g.edges.push_back(std::move(e));
        }
        std::sort(g.edges.begin(), g.edges.end());
        return g;
    }
};

}  // namespace

std::string show(const memory_graph& g, const graph_edge& e) {
    return edge_str(g.nodes, e);
}

memory_graph build_graph(const ast_ptr& t) {
    builder b;
    return b.run(t);
}

std::optional<ndet_witness> graph_determinism(const memory_graph& g) {
    return scan(g.edges, g.nodes);
}

tmfa graph_to_tmfa(const memory_graph& g) {
    tmfa m;
    int n = static_cast<int>(g.nodes.size());
    m.states = n + 2;
    m.initial = 0;
    m.trap = n + 1;
    m.memories = static_cast<int>(g.vars.size());
    std::set<char> alpha;
    for (const ref_symbol& nd : g.nodes)
        if (nd.kind == ref_kind::terminal) alpha.insert(nd.symbol);
    m.alphabet.assign(alpha.begin(), alpha.end());

    for (const graph_edge& e : g.edges) {
        if (e.to == g.snk()) {
            // Sink edges only mark acceptance; their memory actions have
            // no symbols left to affect and are dropped.
            m.finals.insert(e.from);
            continue;
        }
        const ref_symbol& target = g.nodes[e.to - 1];
        instr_vec acts = net_action(e.label, g.vars);
        if (target.kind == ref_kind::terminal) {
            m.transitions.push_back({e.from, lbl_char(target.symbol), e.to, std::move(acts)});
            continue;
        }
        int x = var_index(g.vars, target.var);
        if (acts[x] == instr::o)
            throw std::logic_error("recall of a memory its own edge leaves open");
        if (acts[x] == instr::r) {
            // The label rebinds the recalled memory to the empty word, so
            // the recall has nothing to read and the edge goes silent.
            m.transitions.push_back({e.from, lbl_eps(), e.to, std::move(acts)});
        } else {
            acts[x] = instr::c;
            m.transitions.push_back({e.from, lbl_recall(x + 1), e.to, std::move(acts)});
        }
    }
    sort_transitions(m);
    m.transitions.erase(std::unique(m.transitions.begin(), m.transitions.end()),
                        m.transitions.end());
    validate(m);
    return m;
}

std::variant<tmfa, ndet_witness> compile_deterministic(const ast_ptr& t) {
    builder b;
    b.check = true;
    try {
        return graph_to_tmfa(b.run(t));
    } catch (const found_witness& f) {
        return f.w;
    }
}

}  // namespace drx
