// Conversion of an accepting-trap automaton into a rejecting-trap one with
// the same language. Each source memory i is split into a pair: part one
// holds a guessed prefix of the content, part two the rest, with the first
// symbol of part two tracked in the state. A failing recall in the source is
// re-enacted as: recall part one, then either witness one diverging symbol
// and accept everything after it, or accept right away when the input ends
// there. The latter is only sound when part one is nonempty: the source
// fails exactly when the recall has eaten part of its content before the
// input ran out, whereas with nothing consumed the recall is just pending
// and the source state's own acceptance decides. So the tracked first
// symbols carry an extra bit recording whether part one is empty.
#include <deque>
#include <functional>
#include <map>
#include <tuple>

#include "drx/tmfa.hpp"

namespace drx {

namespace {

struct mabs {
    bool open = false;
    bool empty = true;
};

// Per-state memory statuses of a normalized automaton (unique by
// construction: normalize keys its states on exactly this abstraction).
std::vector<std::vector<mabs>> memory_statuses(const tmfa& n) {
    std::vector<std::vector<mabs>> status(n.states);
    std::vector<bool> seen(n.states, false);
    auto outs = outgoing(n);
    std::deque<int> work{n.initial};
    status[n.initial].assign(n.memories, mabs{});
    seen[n.initial] = true;
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int ti : outs[q]) {
            const transition& t = n.transitions[ti];
            if (t.to == n.trap) continue;
            std::vector<mabs> next = status[q];
            for (int i = 0; i < n.memories; ++i) {
                switch (t.actions[i]) {
                    case instr::o: next[i] = {true, true}; break;
                    case instr::c: next[i].open = false; break;
                    case instr::r: next[i] = {false, true}; break;
                    case instr::d: break;
                }
            }
            bool consumes = t.lab.kind == label_kind::chr ||
                            (t.lab.kind == label_kind::recall && !next[t.lab.mem - 1].empty);
            if (consumes)
                for (auto& a : next)
                    if (a.open) a.empty = false;
            if (!seen[t.to]) {
                seen[t.to] = true;
                status[t.to] = next;
                work.push_back(t.to);
            }
        }
    }
    return status;
}

// State key: tag 0 = plain (source state, first-symbol vector), tag 1 =
// between the two halves of a split recall (source transition, vector),
// tag 2 = expecting a diverging symbol (part-one-empty flag, the matching
// symbol), tag 3 = the absorbing accepting state. Vector entries are -1
// while a memory's split is not yet guessed, afterwards the first symbol of
// part two shifted left once with the part-one-empty flag in the low bit.
using key = std::tuple<int, int, int, std::vector<int>>;

}  // namespace

tmfa acc_to_rej(const tmfa& m) {
    tmfa n = normalize(m);
    if (!n.trap_accepting) return n;
    if (n.initial == n.trap) {
        // Trivial: the source accepts everything.
        tmfa out;
        out.states = 2;
        out.alphabet = n.alphabet;
        out.memories = n.memories;
        out.initial = 0;
        out.finals = {0};
        out.trap = 1;
        for (char a : out.alphabet)
            out.transitions.push_back({0, lbl_char(a), 0, instr_vec(n.memories, instr::d)});
        return out;
    }

    auto statuses = memory_statuses(n);
    auto outs = outgoing(n);
    const int k = n.memories;

    tmfa out;
    out.alphabet = n.alphabet;
    out.memories = 2 * k;

    std::map<key, int> ids;
    std::deque<key> work;
    auto zero = [&] { return instr_vec(2 * k, instr::d); };

    std::function<int(const key&)> state = [&](const key& kk) -> int {
        auto [pos, fresh] = ids.try_emplace(kk, 0);
        if (!fresh) return pos->second;
        int id = out.states++;
        pos->second = id;
        if (out.states > 400000)
            throw resource_limit_error("trap conversion exceeded its state cap");
        auto [tag, a, b, xvec] = kk;
        if (tag == 0) {
            if (n.finals.count(a)) out.finals.insert(id);
            work.push_back(kk);
        } else if (tag == 1) {
            work.push_back(kk);
        } else if (tag == 2) {
            // One diverging symbol leads to acceptance of everything. The
            // input ending here is a source failure too, but only when the
            // recall got through a nonempty part one first.
            if (a == 0) out.finals.insert(id);
            int qt = state(key{3, 0, 0, {}});
            for (char s : out.alphabet)
                if (s != static_cast<char>(b))
                    out.transitions.push_back({id, lbl_char(s), qt, zero()});
        } else {
            out.finals.insert(id);
            for (char s : out.alphabet) out.transitions.push_back({id, lbl_char(s), id, zero()});
        }
        return pos->second;
    };

    auto qt_state = [&] { return state(key{3, 0, 0, {}}); };

    out.initial = state(key{0, n.initial, 0, std::vector<int>(k, -1)});

    while (!work.empty()) {
        key kk = std::move(work.front());
        work.pop_front();
        int from = ids.at(kk);
        auto& [tag, kq, kb, xvec] = kk;
        (void)kb;

        if (tag == 1) {
            // After consuming the first half of memory b's content: guess
            // which still-growing memories split here, then consume the
            // second half. Its first appended symbol is x_b.
            const transition& t = n.transitions[kq];
            int bi = t.lab.mem - 1;
            int target = t.to;
            std::vector<int> growing;
            for (int j = 0; j < k; ++j)
                if (j != bi && statuses[t.from][j].open && xvec[j] == -1) growing.push_back(j);
            for (int mask = 0; mask < (1 << growing.size()); ++mask) {
                instr_vec v = zero();
                v[k + bi] = instr::c;
                std::vector<int> x2 = xvec;
                for (std::size_t gi = 0; gi < growing.size(); ++gi) {
                    if (!(mask & (1 << gi))) continue;
                    int j = growing[gi];
                    v[j] = instr::c;
                    v[k + j] = instr::o;
                    // j's part one ends with b's part one appended, so it is
                    // empty only if both were.
                    x2[j] = statuses[t.from][j].empty ? xvec[bi] : (xvec[bi] & ~1);
                }
                int to = target == n.trap ? qt_state() : state(key{0, target, 0, x2});
                out.transitions.push_back({from, lbl_recall(k + bi + 1), to, std::move(v)});
            }
            continue;
        }

        for (int ti : outs[kq]) {
            const transition& t = n.transitions[ti];
            switch (t.lab.kind) {
                case label_kind::eps: {
                    int mem = -1;
                    instr ins = instr::d;
                    for (int i = 0; i < k; ++i)
                        if (t.actions[i] != instr::d) {
                            mem = i;
                            ins = t.actions[i];
                        }
                    instr_vec v = zero();
                    std::vector<int> x2 = xvec;
                    if (mem >= 0 && ins == instr::o) {
                        v[mem] = instr::o;
                        x2[mem] = -1;
                    } else if (mem >= 0 && ins == instr::c) {
                        v[mem] = instr::c;
                        v[k + mem] = instr::c;
                    } else if (mem >= 0) {
                        throw std::logic_error("reset after normalization");
                    }
                    int to = t.to == n.trap ? qt_state() : state(key{0, t.to, 0, x2});
                    out.transitions.push_back({from, lbl_eps(), to, std::move(v)});
                    break;
                }
                case label_kind::chr: {
                    std::vector<int> growing;
                    for (int j = 0; j < k; ++j)
                        if (statuses[kq][j].open && xvec[j] == -1) growing.push_back(j);
                    for (int mask = 0; mask < (1 << growing.size()); ++mask) {
                        instr_vec v = zero();
                        std::vector<int> x2 = xvec;
                        for (std::size_t gi = 0; gi < growing.size(); ++gi) {
                            if (!(mask & (1 << gi))) continue;
                            int j = growing[gi];
                            v[j] = instr::c;
                            v[k + j] = instr::o;
                            x2[j] = (static_cast<unsigned char>(t.lab.ch) << 1) |
                                    (statuses[kq][j].empty ? 1 : 0);
                        }
                        int to = t.to == n.trap ? qt_state() : state(key{0, t.to, 0, x2});
                        out.transitions.push_back({from, lbl_char(t.lab.ch), to, std::move(v)});
                    }
                    break;
                }
                case label_kind::recall: {
                    int bi = t.lab.mem - 1;
                    instr_vec v = zero();
                    v[bi] = instr::c;
                    v[k + bi] = instr::c;
                    if (xvec[bi] == -1) {
                        // Whole content in part one; failures are covered by
                        // runs that guessed an earlier split.
                        int to = t.to == n.trap ? qt_state() : state(key{0, t.to, 0, xvec});
                        out.transitions.push_back({from, lbl_recall(bi + 1), to, std::move(v)});
                    } else {
                        int mid = state(key{1, ti, 0, xvec});
                        out.transitions.push_back({from, lbl_recall(bi + 1), mid, v});
                        int fa = state(key{2, xvec[bi] & 1, xvec[bi] >> 1, {}});
                        out.transitions.push_back({from, lbl_recall(bi + 1), fa, std::move(v)});
                    }
                    break;
                }
            }
        }
    }

    out.trap = out.states++;
    out.trap_accepting = false;
    sort_transitions(out);
    validate(out);
    return out;
}

}  // namespace drx
