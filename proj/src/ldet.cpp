#include "drx/dtmfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace drx {

namespace {

struct state_shape {
    std::vector<int> uniq;     // transition indices with exact duplicates removed
    std::vector<int> recalls;  // the subset carrying recall labels
    bool multi = false;
};

// Classify every state. Returns false if some state is nondeterministic in a
// way no amount of lookahead can fix: a duplicated label, a silent move next
// to anything else, or recalls mixed with input moves. States whose only
// conflict is several recalls over distinct memories are flagged `multi`.
bool classify(const tmfa& m, std::vector<state_shape>& shapes) {
    auto outs = outgoing(m);
    shapes.assign(m.states, {});
    bool ok = true;
    for (int q = 0; q < m.states; ++q) {
        if (q == m.trap) continue;
        state_shape& sh = shapes[q];
        std::set<std::tuple<tlabel, int, instr_vec>> exact;
        std::set<tlabel> labels;
        int chr = 0, eps = 0, rec = 0;
        for (int ti : outs[q]) {
            const transition& t = m.transitions[ti];
            if (!exact.insert({t.lab, t.to, t.actions}).second) continue;
            if (!labels.insert(t.lab).second) ok = false;
            sh.uniq.push_back(ti);
            switch (t.lab.kind) {
                case label_kind::chr: ++chr; break;
                case label_kind::eps: ++eps; break;
                case label_kind::recall:
                    ++rec;
                    sh.recalls.push_back(ti);
                    break;
            }
        }
        if (eps > 0 && sh.uniq.size() > 1) ok = false;
        if (rec > 0 && (chr > 0 || eps > 0)) ok = false;
        sh.multi = rec > 1;
    }
    return ok;
}

// What a run can know about a memory without looking at the input: the first
// symbols of its content up to the lookahead bound, whether the content goes
// on past them, and whether a write is in progress.
struct amem {
    std::string pre;
    bool longer = false;
    bool open = false;
    auto operator<=>(const amem&) const = default;
};
using avec = std::vector<amem>;

void apply_abs(avec& a, const instr_vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        switch (v[i]) {
            case instr::o: a[i] = {"", false, true}; break;
            case instr::c: a[i].open = false; break;
            case instr::r: a[i] = {"", false, false}; break;
            case instr::d: break;
        }
    }
}

// Append a consumed factor, known as (s, s_longer), to every open memory.
void append_known(avec& a, const std::string& s, bool s_longer, int ell) {
    for (amem& x : a) {
        if (!x.open) continue;
        if (!s_longer) {
            x.pre += s;
            if (static_cast<int>(x.pre.size()) > ell) {
                x.pre.resize(ell);
                x.longer = true;
            }
        } else {
            // s carries ell known symbols and goes on past them
            int need = ell - static_cast<int>(x.pre.size());
            x.pre += s.substr(0, need);
            x.longer = true;
        }
    }
}

}  // namespace

bool is_l_deterministic(const tmfa& m, int ell, std::size_t config_cap) {
    validate(m);
    if (ell <= 0) return is_deterministic(m);
    std::vector<state_shape> shapes;
    if (!classify(m, shapes)) return false;
    bool any_multi = false;
    for (const state_shape& sh : shapes) any_multi = any_multi || sh.multi;
    if (!any_multi) return true;

    // Exact reachability over (state, per-memory knowledge). Two recalls at
    // the same state clash when their contents agree on the first
    // min(ell, |u|, |v|) symbols; the lookahead cannot tell them apart then.
    std::set<std::pair<int, avec>> seen;
    std::deque<std::pair<int, avec>> work;
    auto push = [&](int q, const avec& a) {
        if (q == m.trap) return;
        if (seen.emplace(q, a).second) {
            if (seen.size() > config_cap)
                throw resource_limit_error("lookahead analysis exceeded its configuration cap");
            work.emplace_back(q, a);
        }
    };
    push(m.initial, avec(m.memories));
    while (!work.empty()) {
        auto [q, a] = std::move(work.front());
        work.pop_front();
        const state_shape& sh = shapes[q];
        if (sh.multi) {
            for (std::size_t i = 0; i < sh.recalls.size(); ++i) {
                for (std::size_t j = i + 1; j < sh.recalls.size(); ++j) {
                    const amem& u = a[m.transitions[sh.recalls[i]].lab.mem - 1];
                    const amem& v = a[m.transitions[sh.recalls[j]].lab.mem - 1];
                    int lu = u.longer ? ell : static_cast<int>(u.pre.size());
                    int lv = v.longer ? ell : static_cast<int>(v.pre.size());
                    int t = std::min({ell, lu, lv});
                    if (u.pre.compare(0, t, v.pre, 0, t) == 0) return false;
                }
            }
        }
        for (int ti : sh.uniq) {
            const transition& t = m.transitions[ti];
            avec cur = a;
            apply_abs(cur, t.actions);
            switch (t.lab.kind) {
                case label_kind::eps:
                    push(t.to, cur);
                    break;
                case label_kind::chr:
                    append_known(cur, std::string(1, t.lab.ch), false, ell);
                    push(t.to, cur);
                    break;
                case label_kind::recall: {
                    const amem content = cur[t.lab.mem - 1];
                    if (content.longer || !content.pre.empty())
                        append_known(cur, content.pre, content.longer, ell);
                    push(t.to, cur);
                    break;
                }
            }
        }
    }
    return true;
}

namespace {

// Build-time view of one memory: `sm` holds the first symbols of the current
// content epoch (at most ell of them), kept in the construction state rather
// than in the run-time memory. Once the epoch outgrows sm, `act` is set and
// the run-time memory captures everything past the prefix.
struct lmem {
    std::string sm;
    bool open = false;
    bool act = false;
    auto operator<=>(const lmem&) const = default;
};
using lvec = std::vector<lmem>;

struct okey {
    int tag;                 // 0 plain, 1 replay of one branch, 2 branching walk
    int a;                   // plain: source state; replay: transition; walk: source state
    int b;                   // replay/walk: symbols consumed so far
    std::vector<int> alive;  // walk: recall transitions still viable
    lvec s;                  // snapshot at the source state
    auto operator<=>(const okey&) const = default;
};

struct ldet_builder {
    const tmfa& m;
    int ell;
    std::size_t cap;
    std::vector<state_shape> shapes;
    tmfa out;
    std::map<okey, int> ids;
    std::deque<okey> work;
    instr_vec zero;

    ldet_builder(const tmfa& src, int lookahead, std::size_t state_cap)
        : m(src), ell(lookahead), cap(state_cap) {
        classify(m, shapes);
        zero.assign(m.memories, instr::d);
        out.alphabet = m.alphabet;
        out.memories = m.memories;
        out.trap_accepting = m.trap_accepting;
        out.states = 1;
        out.trap = 0;
    }

    int id_of(const okey& k) {
        auto [it, fresh] = ids.try_emplace(k, 0);
        if (fresh) {
            it->second = out.states++;
            if (out.states > static_cast<int>(cap))
                throw resource_limit_error("lookahead determinization exceeded its state cap");
            if (k.tag == 0 && m.finals.count(k.a)) out.finals.insert(it->second);
            work.push_back(k);
        }
        return it->second;
    }

    int plain_id(int q, const lvec& s) {
        if (q == m.trap) return out.trap;
        return id_of({0, q, 0, {}, s});
    }

    // Apply a transition vector at build time. Only instructions that touch
    // run-time state are emitted into `em`: closing a memory the run-time
    // side is tracking. Opening or resetting only rewrites the prefix view;
    // stale run-time content is never read while `act` is off.
    lvec translate(const lvec& s, const instr_vec& v, instr_vec& em) {
        lvec r = s;
        for (int i = 0; i < m.memories; ++i) {
            switch (v[i]) {
                case instr::c:
                    if (r[i].open) {
                        if (r[i].act) em[i] = instr::c;
                        r[i].open = false;
                    }
                    break;
                case instr::o: r[i] = {"", true, false}; break;
                case instr::r: r[i] = {"", false, false}; break;
                case instr::d: break;
            }
        }
        return r;
    }

    // Consume one known symbol: memories whose prefix just filled up hand
    // over to the run-time side (the emitted open captures from the next
    // symbol on, which is exactly what the prefix no longer covers).
    void consume_known(lvec& s, char a, instr_vec& em) {
        for (int i = 0; i < m.memories; ++i) {
            if (s[i].open && !s[i].act && static_cast<int>(s[i].sm.size()) == ell) {
                em[i] = instr::o;
                s[i].act = true;
            }
        }
        for (int i = 0; i < m.memories; ++i) {
            if (s[i].open && static_cast<int>(s[i].sm.size()) < ell) s[i].sm += a;
        }
    }

    // Consume a factor of unknown content (a run-time recall). By then every
    // open memory's prefix is full: the recalled content sits behind a full
    // prefix replay of at least ell symbols.
    void consume_unknown(lvec& s, instr_vec& em) {
        for (int i = 0; i < m.memories; ++i) {
            if (!s[i].open || s[i].act) continue;
            if (static_cast<int>(s[i].sm.size()) != ell)
                throw std::logic_error("internal: partially tracked memory at a content recall");
            em[i] = instr::o;
            s[i].act = true;
        }
    }

    struct branch_view {
        lvec s1;        // snapshot after the recall's vector
        instr_vec em0;  // run-time instructions that vector emits
        std::string sm;
        bool virgin;
        int mem, to;
    };

    branch_view view(const lvec& s0, int ti) {
        const transition& t = m.transitions[ti];
        branch_view b;
        b.em0.assign(m.memories, instr::d);
        b.s1 = translate(s0, t.actions, b.em0);
        const lmem& x = b.s1[t.lab.mem - 1];
        b.sm = x.sm;
        b.virgin = !x.act;
        b.mem = t.lab.mem;
        b.to = t.to;
        return b;
    }

    lvec evolve(const lvec& s0, int ti, int p) {
        branch_view b = view(s0, ti);
        instr_vec scratch(m.memories, instr::d);
        lvec s = std::move(b.s1);
        for (int j = 0; j < p; ++j) consume_known(s, b.sm[j], scratch);
        return s;
    }

    // Emit the transition that advances recall branch `ti` past position `p`
    // of its prefix. `extra` carries instructions that must ride along; only
    // the first step of a branch has any (they were emitted by its vector).
    void advance(int from, const lvec& s0, int ti, int p, const instr_vec& extra) {
        branch_view b = view(s0, ti);
        lvec s = evolve(s0, ti, p);
        int len = static_cast<int>(b.sm.size());
        if (p == len) {
            if (b.virgin) {
                // the prefix was the whole content; nothing left to check
                out.transitions.push_back({from, lbl_eps(), plain_id(b.to, s), extra});
            } else {
                instr_vec em = extra;
                consume_unknown(s, em);
                if (em[b.mem - 1] == instr::d) em[b.mem - 1] = instr::c;
                out.transitions.push_back({from, lbl_recall(b.mem), plain_id(b.to, s), em});
            }
            return;
        }
        char sym = b.sm[p];
        instr_vec em = extra;
        consume_known(s, sym, em);
        int target = (p + 1 == len && b.virgin) ? plain_id(b.to, s) : id_of({1, ti, p + 1, {}, s0});
        out.transitions.push_back({from, lbl_char(sym), target, em});
    }

    // One step of resolving recall branches by reading input. With an
    // accepting trap, any symbol some branch mismatches settles the whole
    // run (that branch fails into the trap, which absorbs everything);
    // otherwise mismatching branches drop out and the survivors go on.
    // Ending the input mid-walk means every branch is strictly inside its
    // content, so the source fails all of them and the state inherits the
    // trap verdict. At depth zero nothing is consumed yet: the recalls are
    // merely pending and the source state's own acceptance stands.
    void process_multi(int from, int q, const lvec& s, const std::vector<int>& alive, int depth) {
        if (depth > 0 && m.trap_accepting) out.finals.insert(from);
        std::map<char, std::vector<int>> groups;
        for (int ti : alive) {
            branch_view b = view(s, ti);
            if (static_cast<int>(b.sm.size()) <= depth)
                throw std::logic_error("internal: branch ran out of content during lookahead walk");
            groups[b.sm[depth]].push_back(ti);
        }
        bool divergent = groups.size() > 1;
        for (char a : m.alphabet) {
            auto it = groups.find(a);
            bool some_mismatch = it == groups.end() || divergent;
            if (some_mismatch && m.trap_accepting) {
                out.transitions.push_back({from, lbl_char(a), out.trap, zero});
                continue;
            }
            if (it == groups.end()) continue;
            const std::vector<int>& g = it->second;
            if (g.size() == 1) {
                branch_view b = view(s, g[0]);
                advance(from, s, g[0], depth, depth == 0 ? b.em0 : zero);
                continue;
            }
            // the surviving branches share this step, so whatever it emits
            // must look the same from every one of them
            instr_vec shared;
            bool first = true;
            for (int ti : g) {
                branch_view b = view(s, ti);
                instr_vec em = depth == 0 ? b.em0 : zero;
                lvec h = evolve(s, ti, depth);
                consume_known(h, a, em);
                if (first) {
                    shared = em;
                    first = false;
                } else if (em != shared) {
                    throw std::runtime_error(
                        "lookahead walk would need branch-specific memory actions; not supported");
                }
            }
            out.transitions.push_back({from, lbl_char(a), id_of({2, q, depth + 1, g, s}), shared});
        }
    }

    void process_plain(int from, int q, const lvec& s) {
        const state_shape& sh = shapes[q];
        if (sh.multi) {
            process_multi(from, q, s, sh.recalls, 0);
            return;
        }
        if (!sh.recalls.empty()) {
            int ti = sh.recalls[0];
            branch_view b = view(s, ti);
            advance(from, s, ti, 0, b.em0);
            if (!b.sm.empty() && m.trap_accepting) {
                // Tracked nonempty content: a diverging first symbol makes
                // the source recall fail into the accepting trap. Input
                // ending right here leaves the recall pending instead, so
                // acceptance stays with the source state.
                for (char a : m.alphabet)
                    if (a != b.sm[0]) out.transitions.push_back({from, lbl_char(a), out.trap, zero});
            }
            return;
        }
        for (int ti : sh.uniq) {
            const transition& t = m.transitions[ti];
            instr_vec em(m.memories, instr::d);
            lvec s1 = translate(s, t.actions, em);
            if (t.lab.kind == label_kind::eps) {
                out.transitions.push_back({from, lbl_eps(), plain_id(t.to, s1), em});
            } else {
                consume_known(s1, t.lab.ch, em);
                out.transitions.push_back({from, t.lab, plain_id(t.to, s1), em});
            }
        }
    }

    void process_chain(int from, int ti, int p, const lvec& s0) {
        advance(from, s0, ti, p, zero);
        branch_view b = view(s0, ti);
        if (m.trap_accepting) {
            // The source sits at the recall with p of its content symbols
            // still unread, so ending the input here is a mid-content
            // failure and the trap verdict applies. A diverging symbol
            // inside the replayed prefix fails the same way; past the
            // prefix the emitted recall speaks for itself.
            out.finals.insert(from);
            if (p < static_cast<int>(b.sm.size()))
                for (char a : m.alphabet)
                    if (a != b.sm[p]) out.transitions.push_back({from, lbl_char(a), out.trap, zero});
        }
    }
};

}  // namespace

tmfa l_determinize(const tmfa& m, int ell, std::size_t state_cap) {
    validate(m);
    if (!is_l_deterministic(m, ell, state_cap))
        throw not_deterministic_error("the automaton is not deterministic at this lookahead");
    if (ell <= 0 || is_deterministic(m)) return m;

    ldet_builder b(m, ell, state_cap);
    b.out.initial = b.plain_id(m.initial, lvec(m.memories));
    while (!b.work.empty()) {
        okey k = std::move(b.work.front());
        b.work.pop_front();
        int from = b.ids.at(k);
        if (k.tag == 0)
            b.process_plain(from, k.a, k.s);
        else if (k.tag == 1)
            b.process_chain(from, k.a, k.b, k.s);
        else
            b.process_multi(from, k.a, k.s, k.alive, k.b);
    }
    sort_transitions(b.out);
    validate(b.out);
    return b.out;
}

}  // namespace drx
