#include "drx/tmfa.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace drx {

char instr_char(instr i) {
    switch (i) {
        case instr::o: return 'o';
        case instr::c: return 'c';
        case instr::r: return 'r';
        case instr::d: return 'd';
    }
    throw std::logic_error("unreachable");
}

instr instr_from_char(char c) {
    switch (c) {
        case 'o': return instr::o;
        case 'c': return instr::c;
        case 'r': return instr::r;
        case 'd': return instr::d;
    }
    throw std::runtime_error(std::string("bad instruction character '") + c + "'");
}

instr compose(instr x, instr y) {
    if (y == instr::d) return x;
    // Closing after an open or reset freezes an empty memory, which is what
    // reset does in one step. Otherwise the later instruction wins.
    if (y == instr::c && (x == instr::o || x == instr::r)) return instr::r;
    return y;
}

instr_vec compose(const instr_vec& x, const instr_vec& y) {
    instr_vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = compose(x[i], y[i]);
    return out;
}

void sort_transitions(tmfa& m) { std::sort(m.transitions.begin(), m.transitions.end()); }

std::vector<std::vector<int>> outgoing(const tmfa& m) {
    std::vector<std::vector<int>> out(m.states);
    for (std::size_t i = 0; i < m.transitions.size(); ++i)
        out[m.transitions[i].from].push_back(static_cast<int>(i));
    return out;
}

void validate(const tmfa& m) {
    auto fail = [](const std::string& msg) { throw std::runtime_error("invalid automaton: " + msg); };
    if (m.states < 1) fail("no states");
    if (m.trap < 0 || m.trap >= m.states) fail("trap out of range");
    if (m.initial < 0 || m.initial >= m.states) fail("initial state out of range");
    if (!std::is_sorted(m.alphabet.begin(), m.alphabet.end()) ||
        std::adjacent_find(m.alphabet.begin(), m.alphabet.end()) != m.alphabet.end())
        fail("alphabet not sorted and duplicate-free");
    for (int q : m.finals) {
        if (q < 0 || q >= m.states) fail("final state out of range");
        if (q == m.trap) fail("trap listed in finals; use trap_accepting");
    }
    for (const auto& t : m.transitions) {
        if (t.from < 0 || t.from >= m.states || t.to < 0 || t.to >= m.states)
            fail("transition endpoint out of range");
        if (t.from == m.trap) fail("explicit transition out of the trap");
        if (static_cast<int>(t.actions.size()) != m.memories)
            fail("instruction vector length mismatch");
        if (t.lab.kind == label_kind::chr &&
            !std::binary_search(m.alphabet.begin(), m.alphabet.end(), t.lab.ch))
            fail("transition symbol outside the alphabet");
        if (t.lab.kind == label_kind::recall) {
            if (t.lab.mem < 1 || t.lab.mem > m.memories) fail("recalled memory out of range");
            if (t.actions[t.lab.mem - 1] != instr::c) fail("recall must close the recalled memory");
        }
    }
}

config initial_config(const tmfa& m) {
    config c;
    c.state = m.initial;
    c.pos = 0;
    c.mems.assign(m.memories, mem_state{});
    return c;
}

void apply_actions(std::vector<mem_state>& mems, const instr_vec& a, int pos) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        switch (a[i]) {
            case instr::o:
                mems[i] = {pos, pos, true};
                break;
            case instr::c:
                mems[i].open = false;
                break;
            case instr::r:
                mems[i] = {0, 0, false};
                break;
            case instr::d:
                break;
        }
    }
}

std::string mem_content(const mem_state& ms, const std::string& input) {
    return input.substr(ms.start, ms.end - ms.start);
}

namespace {

void consume_to(std::vector<mem_state>& mems, int newpos) {
    for (auto& ms : mems)
        if (ms.open) ms.end = newpos;
}

}  // namespace

std::set<config> step(const tmfa& m, const config& c, const std::string& input) {
    std::set<config> out;
    int len = static_cast<int>(input.size());
    if (c.state == m.trap) {
        out.insert(c);  // silent self-loop
        if (c.pos < len &&
            std::binary_search(m.alphabet.begin(), m.alphabet.end(), input[c.pos])) {
            config succ = c;
            consume_to(succ.mems, c.pos + 1);
            succ.pos = c.pos + 1;
            out.insert(std::move(succ));
        }
        return out;
    }
    for (const auto& t : m.transitions) {
        if (t.from != c.state) continue;
        std::vector<mem_state> mems = c.mems;
        apply_actions(mems, t.actions, c.pos);
        switch (t.lab.kind) {
            case label_kind::eps:
                out.insert(config{t.to, c.pos, std::move(mems)});
                break;
            case label_kind::chr:
                if (c.pos < len && input[c.pos] == t.lab.ch) {
                    consume_to(mems, c.pos + 1);
                    out.insert(config{t.to, c.pos + 1, std::move(mems)});
                }
                break;
            case label_kind::recall: {
                const mem_state& ms = mems[t.lab.mem - 1];
                int ulen = ms.end - ms.start;
                int remaining = len - c.pos;
                int common = 0;
                while (common < std::min(ulen, remaining) &&
                       input[ms.start + common] == input[c.pos + common])
                    ++common;
                if (common == ulen) {
                    consume_to(mems, c.pos + ulen);
                    out.insert(config{t.to, c.pos + ulen, std::move(mems)});
                } else if (remaining > 0) {
                    // Failed recall: a symbol disagrees with the content, or
                    // the input runs out strictly inside it. The matched
                    // prefix is consumed and the run continues in the trap,
                    // memories as they were before the transition. With no
                    // input left at all, the recall is merely pending, not
                    // failed: the run halts here and the verdict is this
                    // state's own acceptance.
                    out.insert(config{m.trap, c.pos + common, c.mems});
                }
                break;
            }
        }
    }
    return out;
}

bool member_oracle(const tmfa& m, const std::string& w, std::size_t node_cap) {
    for (char a : w)
        if (!std::binary_search(m.alphabet.begin(), m.alphabet.end(), a)) return false;
    int len = static_cast<int>(w.size());
    config start = initial_config(m);
    if (start.state == m.trap) return m.trap_accepting;
    std::set<config> visited{start};
    std::deque<config> queue{start};
    while (!queue.empty()) {
        config c = std::move(queue.front());
        queue.pop_front();
        if (c.pos == len && m.is_final(c.state)) return true;
        for (auto& succ : step(m, c, w)) {
            if (succ.state == m.trap) {
                // The trap is inescapable and consumes anything, so the
                // verdict of this branch only depends on the flag.
                if (m.trap_accepting) return true;
                continue;
            }
            if (visited.insert(succ).second) {
                queue.push_back(succ);
                if (visited.size() > node_cap)
                    throw resource_limit_error("membership search exceeded its node cap");
            }
        }
    }
    return false;
}

namespace {

struct naive_builder {
    tmfa& m;
    const std::map<std::string, int>& mem_index;  // 1-based

    int fresh() { return m.states++; }

    instr_vec zero() const { return instr_vec(m.memories, instr::d); }

    void edge(int from, tlabel lab, int to, instr_vec actions) {
        m.transitions.push_back({from, lab, to, std::move(actions)});
    }

    // Returns (start, accept) of the fragment for t.
    std::pair<int, int> build(const ref_regex_ptr& t) {
        int start = fresh(), accept = fresh();
        switch (t->kind) {
            case node_kind::empty:
                break;
            case node_kind::epsilon:
                edge(start, lbl_eps(), accept, zero());
                break;
            case node_kind::terminal: {
                const ref_symbol& s = t->sym;
                if (s.kind == ref_kind::terminal) {
                    edge(start, lbl_char(s.symbol), accept, zero());
                } else if (s.kind == ref_kind::var_ref) {
                    int mem = mem_index.at(s.var);
                    instr_vec a = zero();
                    a[mem - 1] = instr::c;
                    edge(start, lbl_recall(mem), accept, std::move(a));
                } else {
                    int mem = mem_index.at(s.var);
                    instr_vec a = zero();
                    a[mem - 1] = s.kind == ref_kind::open ? instr::o : instr::c;
                    edge(start, lbl_eps(), accept, std::move(a));
                }
                break;
            }
            case node_kind::concat: {
                auto l = build(t->left);
                auto r = build(t->right);
                edge(start, lbl_eps(), l.first, zero());
                edge(l.second, lbl_eps(), r.first, zero());
                edge(r.second, lbl_eps(), accept, zero());
                break;
            }
            case node_kind::disjunction: {
                auto l = build(t->left);
                auto r = build(t->right);
                edge(start, lbl_eps(), l.first, zero());
                edge(start, lbl_eps(), r.first, zero());
                edge(l.second, lbl_eps(), accept, zero());
                edge(r.second, lbl_eps(), accept, zero());
                break;
            }
            case node_kind::plus: {
                auto b = build(t->left);
                edge(start, lbl_eps(), b.first, zero());
                edge(b.second, lbl_eps(), accept, zero());
                edge(b.second, lbl_eps(), b.first, zero());
                break;
            }
            default:
                throw std::logic_error("unexpected node in ref_regex");
        }
        return {start, accept};
    }
};

}  // namespace

tmfa compile_naive(const ast_ptr& t) {
    std::vector<std::string> order = variable_order(t);
    std::map<std::string, int> mem_index;
    for (std::size_t i = 0; i < order.size(); ++i) mem_index[order[i]] = static_cast<int>(i) + 1;

    tmfa m;
    m.memories = static_cast<int>(order.size());
    m.alphabet = terminals(t);
    naive_builder b{m, mem_index};
    auto [start, accept] = b.build(to_ref_regex(t, false));
    m.initial = start;
    m.finals = {accept};
    m.trap = b.fresh();
    m.trap_accepting = false;
    sort_transitions(m);
    return m;
}

namespace {

struct gen_item {
    config cfg;
    std::string word;
    auto operator<=>(const gen_item&) const = default;
};

void add_extensions(std::set<std::string>& out, const std::string& base,
                    const std::vector<char>& alphabet, int max_word_len, std::size_t cap) {
    if (static_cast<int>(base.size()) > max_word_len) return;
    out.insert(base);
    if (out.size() > cap) throw resource_limit_error("language enumeration exceeded its cap");
    if (static_cast<int>(base.size()) == max_word_len) return;
    for (char a : alphabet) add_extensions(out, base + a, alphabet, max_word_len, cap);
}

}  // namespace

std::set<std::string> language(const tmfa& m, int max_word_len, std::size_t cap) {
    std::set<std::string> out;
    auto outs = outgoing(m);

    gen_item start{initial_config(m), ""};
    if (start.cfg.state == m.trap) {
        if (m.trap_accepting) add_extensions(out, "", m.alphabet, max_word_len, cap);
        return out;
    }
    std::set<gen_item> visited{start};
    std::deque<gen_item> queue{start};
    auto guard = [&] {
        if (visited.size() > cap || out.size() > cap)
            throw resource_limit_error("language enumeration exceeded its cap");
    };
    while (!queue.empty()) {
        gen_item it = std::move(queue.front());
        queue.pop_front();
        const config& c = it.cfg;
        if (m.is_final(c.state)) out.insert(it.word), guard();
        for (int ti : outs[c.state]) {
            const transition& t = m.transitions[ti];
            std::vector<mem_state> mems = c.mems;
            apply_actions(mems, t.actions, c.pos);
            auto push = [&](std::string word, std::vector<mem_state> ms) {
                int newpos = static_cast<int>(word.size());
                consume_to(ms, newpos);
                if (t.to == m.trap) {
                    if (m.trap_accepting) add_extensions(out, word, m.alphabet, max_word_len, cap);
                    return;
                }
                gen_item succ{config{t.to, newpos, std::move(ms)}, std::move(word)};
                if (visited.insert(succ).second) queue.push_back(std::move(succ)), guard();
            };
            switch (t.lab.kind) {
                case label_kind::eps:
                    push(it.word, std::move(mems));
                    break;
                case label_kind::chr:
                    if (static_cast<int>(it.word.size()) < max_word_len)
                        push(it.word + t.lab.ch, std::move(mems));
                    break;
                case label_kind::recall: {
                    const mem_state& ms = mems[t.lab.mem - 1];
                    std::string u = it.word.substr(ms.start, ms.end - ms.start);
                    // A failed recall consumes the longest content prefix the
                    // rest of the input can match, so with an accepting trap
                    // every word that diverges inside u, or ends strictly
                    // inside it, is accepted. A word ending right here keeps
                    // this state's own verdict (handled above).
                    if (m.trap_accepting) {
                        for (std::size_t p = 0; p < u.size(); ++p) {
                            if (static_cast<int>(it.word.size() + p) > max_word_len) break;
                            if (p > 0) out.insert(it.word + u.substr(0, p)), guard();
                            if (static_cast<int>(it.word.size() + p) + 1 > max_word_len) break;
                            for (char a : m.alphabet) {
                                if (a == u[p]) continue;
                                add_extensions(out, it.word + u.substr(0, p) + a, m.alphabet,
                                               max_word_len, cap);
                            }
                        }
                    }
                    if (static_cast<int>(it.word.size() + u.size()) <= max_word_len)
                        push(it.word + u, std::move(mems));
                    break;
                }
            }
        }
    }
    return out;
}

std::set<std::string> enumerate_language(const ast_ptr& t, int max_word_len, std::size_t cap) {
    return language(compile_naive(t), max_word_len, cap);
}

bool is_memory_cycle_free(const tmfa& m) {
    // Iterative Tarjan over the explicit transition graph (the trap's
    // implicit loops carry no instructions and no recalls).
    std::vector<std::vector<int>> adj(m.states);
    for (const auto& t : m.transitions) adj[t.from].push_back(t.to);

    std::vector<int> index(m.states, -1), low(m.states, 0), comp(m.states, -1);
    std::vector<int> stack;
    std::vector<bool> on_stack(m.states, false);
    int next_index = 0, next_comp = 0;

    struct frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < m.states; ++root) {
        if (index[root] != -1) continue;
        std::vector<frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child < adj[v].size()) {
                int w = adj[v][child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                    } while (w != v);
                    ++next_comp;
                }
                call.pop_back();
                if (!call.empty()) {
                    int parent = call.back().v;
                    low[parent] = std::min(low[parent], low[v]);
                }
            }
        }
    }

    for (const auto& t : m.transitions) {
        bool heavy = t.lab.kind == label_kind::recall ||
                     std::any_of(t.actions.begin(), t.actions.end(),
                                 [](instr i) { return i != instr::d; });
        if (heavy && comp[t.from] == comp[t.to]) return false;
    }
    return true;
}

bool is_deterministic(const tmfa& m) {
    auto outs = outgoing(m);
    for (int q = 0; q < m.states; ++q) {
        if (q == m.trap) continue;
        std::set<transition> uniq;
        for (int ti : outs[q]) uniq.insert(m.transitions[ti]);
        std::set<tlabel> labels;
        bool blocking = false;  // epsilon or recall present
        for (const auto& t : uniq) {
            if (!labels.insert(t.lab).second) return false;
            if (t.lab.kind != label_kind::chr) blocking = true;
        }
        if (blocking && uniq.size() > 1) return false;
    }
    return true;
}

}  // namespace drx
