#include "drx/dtmfa.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace drx {

namespace {

// Compact to the states reachable from the initial one; the trap is always
// kept. Ids are renumbered in increasing old-id order.
tmfa compact(const tmfa& m) {
    std::vector<char> keep(m.states, 0);
    keep[m.initial] = keep[m.trap] = 1;
    auto outs = outgoing(m);
    std::deque<int> work{m.initial};
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int ti : outs[q]) {
            int to = m.transitions[ti].to;
            if (!keep[to]) {
                keep[to] = 1;
                work.push_back(to);
            }
        }
    }
    std::vector<int> remap(m.states, -1);
    int next = 0;
    for (int q = 0; q < m.states; ++q)
        if (keep[q]) remap[q] = next++;

    tmfa out;
    out.states = next;
    out.alphabet = m.alphabet;
    out.memories = m.memories;
    out.initial = remap[m.initial];
    out.trap = remap[m.trap];
    out.trap_accepting = m.trap_accepting;
    for (int q : m.finals)
        if (remap[q] != -1) out.finals.insert(remap[q]);
    for (const auto& t : m.transitions)
        if (remap[t.from] != -1)
            out.transitions.push_back({remap[t.from], t.lab, remap[t.to], t.actions});
    sort_transitions(out);
    return out;
}

}  // namespace

tmfa remove_epsilon(const tmfa& m) {
    validate(m);
    if (!is_deterministic(m))
        throw not_deterministic_error("epsilon removal requires a deterministic automaton");

    auto outs = outgoing(m);
    auto eps_of = [&](int q) -> const transition* {
        if (q == m.trap) return nullptr;
        for (int ti : outs[q])
            if (m.transitions[ti].lab.kind == label_kind::eps) return &m.transitions[ti];
        return nullptr;
    };

    tmfa out;
    out.states = m.states;
    out.alphabet = m.alphabet;
    out.memories = m.memories;
    out.initial = m.initial;
    out.trap = m.trap;
    out.trap_accepting = m.trap_accepting;
    out.finals = m.finals;

    for (int p = 0; p < m.states; ++p) {
        if (p == m.trap) continue;
        if (!eps_of(p)) {
            for (int ti : outs[p]) out.transitions.push_back(m.transitions[ti]);
            continue;
        }
        // Deterministic, so the silent transition is p's only one: chase the
        // chain, composing vectors and collecting acceptance. A recall whose
        // composed vector clears its own memory reads provably empty content
        // and is just as silent, so the chase passes through it too.
        instr_vec carried(m.memories, instr::d);
        bool acc = m.finals.count(p) > 0;
        std::set<int> seen{p};
        int cur = p;
        bool stuck = false, into_trap = false;
        for (;;) {
            const auto& ts = outs[cur];
            if (ts.size() != 1) break;
            const transition& e = m.transitions[ts[0]];
            if (e.lab.kind == label_kind::chr) break;
            instr_vec composed = compose(carried, e.actions);
            if (e.lab.kind == label_kind::recall &&
                composed[e.lab.mem - 1] != instr::r)
                break;
            carried = std::move(composed);
            cur = e.to;
            if (cur == m.trap) {
                into_trap = true;
                acc = acc || m.trap_accepting;
                break;
            }
            acc = acc || m.finals.count(cur) > 0;
            if (!seen.insert(cur).second) {
                stuck = true;
                break;
            }
        }
        if (acc) out.finals.insert(p);
        if (stuck) continue;  // a silent cycle consumes nothing and goes nowhere
        if (into_trap) {
            for (char a : m.alphabet)
                out.transitions.push_back({p, lbl_char(a), m.trap, carried});
            continue;
        }
        for (int ti : outs[cur]) {
            const transition& t = m.transitions[ti];
            out.transitions.push_back({p, t.lab, t.to, compose(carried, t.actions)});
        }
    }
    return compact(out);
}

tmfa complete(const tmfa& m) {
    validate(m);
    tmfa out = m;
    int sink = out.states++;
    instr_vec zero(m.memories, instr::d);
    for (char a : out.alphabet) out.transitions.push_back({sink, lbl_char(a), sink, zero});

    auto outs = outgoing(m);
    for (int q = 0; q < m.states; ++q) {
        if (q == m.trap) continue;
        std::set<char> present;
        bool blocked = false;
        for (int ti : outs[q]) {
            const transition& t = m.transitions[ti];
            if (t.lab.kind == label_kind::chr)
                present.insert(t.lab.ch);
            else
                blocked = true;  // its single move already covers every input
        }
        if (blocked) continue;
        for (char a : out.alphabet)
            if (!present.count(a)) out.transitions.push_back({q, lbl_char(a), sink, zero});
    }
    sort_transitions(out);
    return out;
}

namespace {

struct mabs {
    bool open = false;
    bool empty = true;
    auto operator<=>(const mabs&) const = default;
};
using absvec = std::vector<mabs>;

// Product with the per-memory (open, empty) abstraction, rewriting recalls
// of provably empty memories into silent transitions (same vector). After
// this, every recall consumes at least one symbol.
tmfa expand_emptiness(const tmfa& m, std::size_t cap) {
    auto outs = outgoing(m);
    tmfa out;
    out.alphabet = m.alphabet;
    out.memories = m.memories;
    out.trap_accepting = m.trap_accepting;

    std::map<std::pair<int, absvec>, int> ids;
    std::deque<std::pair<int, absvec>> work;
    constexpr int trap_placeholder = -1;
    auto id_of = [&](int q, const absvec& a) {
        auto [it, fresh] = ids.try_emplace({q, a}, 0);
        if (fresh) {
            it->second = out.states++;
            if (out.states > static_cast<int>(cap))
                throw resource_limit_error("emptiness expansion exceeded its state cap");
            if (m.finals.count(q)) out.finals.insert(it->second);
            work.emplace_back(q, a);
        }
        return it->second;
    };
    out.initial = id_of(m.initial, absvec(m.memories));

    while (!work.empty()) {
        auto [q, abs] = std::move(work.front());
        work.pop_front();
        int from = ids.at({q, abs});
        for (int ti : outs[q]) {
            const transition& t = m.transitions[ti];
            absvec cur = abs;
            for (int i = 0; i < m.memories; ++i) {
                switch (t.actions[i]) {
                    case instr::o: cur[i] = {true, true}; break;
                    case instr::c: cur[i].open = false; break;
                    case instr::r: cur[i] = {false, true}; break;
                    case instr::d: break;
                }
            }
            tlabel lab = t.lab;
            bool consumes = lab.kind == label_kind::chr;
            if (lab.kind == label_kind::recall) {
                if (cur[lab.mem - 1].empty)
                    lab = lbl_eps();
                else
                    consumes = true;
            }
            if (consumes)
                for (auto& a : cur)
                    if (a.open) a.empty = false;
            int to = t.to == m.trap ? trap_placeholder : id_of(t.to, cur);
            out.transitions.push_back({from, lab, to, t.actions});
        }
    }
    out.trap = out.states++;
    for (auto& t : out.transitions)
        if (t.to == trap_placeholder) t.to = out.trap;
    sort_transitions(out);
    return out;
}

}  // namespace

tmfa complement(const tmfa& m, std::size_t state_cap) {
    if (!is_deterministic(m))
        throw not_deterministic_error("complement requires a deterministic automaton");
    if (m.initial == m.trap) {
        // The language is everything or nothing; flip between the two.
        tmfa out;
        out.states = 2;
        out.alphabet = m.alphabet;
        out.memories = m.memories;
        out.initial = 0;
        out.trap = 1;
        out.trap_accepting = !m.trap_accepting;
        if (out.trap_accepting) out.finals.insert(0);
        instr_vec zero(m.memories, instr::d);
        for (char a : m.alphabet) out.transitions.push_back({0, lbl_char(a), 1, zero});
        validate(out);
        return out;
    }
    // Make every run total before toggling: complete the transition
    // structure, turn silently-consuming recalls of empty memories into real
    // silent steps, contract them away, and complete once more (silent
    // cycles lose their outgoing moves in the contraction).
    tmfa work = complete(m);
    work = expand_emptiness(work, state_cap);
    work = remove_epsilon(work);
    work = complete(work);

    std::set<int> flipped;
    for (int q = 0; q < work.states; ++q)
        if (q != work.trap && !work.finals.count(q)) flipped.insert(q);
    work.finals = std::move(flipped);
    work.trap_accepting = !work.trap_accepting;
    validate(work);
    return work;
}

bool match_direct(const tmfa& m, const std::string& w) {
    if (!is_deterministic(m))
        throw not_deterministic_error("direct matching requires a deterministic automaton");
    for (char a : w)
        if (!std::binary_search(m.alphabet.begin(), m.alphabet.end(), a)) return false;

    config c = initial_config(m);
    std::set<config> silent_seen;
    int len = static_cast<int>(w.size());
    for (;;) {
        if (c.state == m.trap) return m.trap_accepting;
        if (c.pos == len && m.is_final(c.state)) return true;
        auto succ = step(m, c, w);
        if (succ.empty()) return false;
        config next = *succ.begin();
        if (next.pos > c.pos) {
            silent_seen.clear();
        } else if (!silent_seen.insert(next).second) {
            return false;  // silent cycle: every state on it was already checked
        }
        c = std::move(next);
    }
}

}  // namespace drx
