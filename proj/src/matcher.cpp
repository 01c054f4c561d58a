#include "drx/dtmfa.hpp"

#include <algorithm>
#include <set>

namespace drx {

match_table preprocess(const tmfa& m) {
    match_table t;
    t.m = remove_epsilon(m);
    const tmfa& n = t.m;

    t.by_char.resize(n.states);
    t.is_recall_state.assign(n.states, false);
    std::vector<int> recall_ti(n.states, -1);
    for (int ti = 0; ti < static_cast<int>(n.transitions.size()); ++ti) {
        const transition& e = n.transitions[ti];
        if (e.lab.kind == label_kind::chr) {
            t.by_char[e.from][e.lab.ch] = ti;
        } else if (e.lab.kind == label_kind::recall) {
            t.is_recall_state[e.from] = true;
            recall_ti[e.from] = ti;
        }
    }

    // Contract each maximal run of recall states into one list. At run time
    // an entry whose memory is empty consumes nothing, so its vector just
    // rides along to the next entry; a memory can only be empty the second
    // time it shows up, hence the dedup.
    t.recalls.resize(n.states);
    instr_vec identity(n.memories, instr::d);
    for (int q = 0; q < n.states; ++q) {
        if (!t.is_recall_state[q]) continue;
        recall_list& rl = t.recalls[q];
        instr_vec pending = identity;
        bool pending_acc = false;
        std::set<int> seen_mems;
        std::set<int> seen_states;
        int cur = q;
        for (;;) {
            if (!seen_states.insert(cur).second) {
                rl.loops = true;
                break;
            }
            if (!t.is_recall_state[cur]) {
                rl.fallthrough = cur;
                break;
            }
            const transition& e = n.transitions[recall_ti[cur]];
            if (seen_mems.count(e.lab.mem)) {
                pending = compose(pending, e.actions);
                pending_acc = pending_acc || n.is_final(e.to);
            } else {
                rl.entries.push_back({cur, e.lab.mem, pending, pending_acc, e.actions, e.to});
                seen_mems.insert(e.lab.mem);
                pending = e.actions;
                pending_acc = n.is_final(e.to);
            }
            cur = e.to;
            if (cur == n.trap) {
                rl.fallthrough = cur;
                break;
            }
        }
        rl.tail_reach = std::move(pending);
        rl.tail_acc = pending_acc;
    }
    return t;
}

namespace {

struct rt_mem {
    int start = 0;
    int end = 0;
    bool open = false;
};

// An open memory's content runs to the current position, so consuming a
// symbol never touches these records; only closing pins the end.
inline void apply_rt(std::vector<rt_mem>& mems, const instr_vec& v, int pos) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        switch (v[i]) {
            case instr::o: mems[i] = {pos, pos, true}; break;
            case instr::c:
                if (mems[i].open) {
                    mems[i].end = pos;
                    mems[i].open = false;
                }
                break;
            case instr::r: mems[i] = {0, 0, false}; break;
            case instr::d: break;
        }
    }
}

}  // namespace

bool match_fast(const match_table& t, const std::string& w) {
    const tmfa& m = t.m;
    for (char a : w)
        if (!std::binary_search(m.alphabet.begin(), m.alphabet.end(), a)) return false;

    const int n = static_cast<int>(w.size());
    int q = m.initial;
    int pos = 0;
    std::vector<rt_mem> mems(m.memories);
    auto span = [&](int i) -> std::pair<int, int> {
        const rt_mem& r = mems[i];
        return {r.start, (r.open ? pos : r.end) - r.start};
    };

    for (;;) {
        if (q == m.trap) return m.trap_accepting;
        if (pos == n && m.is_final(q)) return true;
        if (t.is_recall_state[q]) {
            const recall_list& rl = t.recalls[q];
            int jump = -1;
            for (const recall_entry& e : rl.entries) {
                apply_rt(mems, e.reach, pos);
                if (pos == n && e.acc) return true;
                auto [start, len] = span(e.mem - 1);
                if (len == 0) continue;
                // No input left: the recall is pending, not failed, and the
                // acceptance checks above already settled this state.
                if (pos == n) return false;
                apply_rt(mems, e.rec_vec, pos);
                if (w.compare(pos, len, w, start, len) == 0) {
                    pos += len;
                    jump = e.target;
                    break;
                }
                // Mismatch, or the input ran out strictly inside the content:
                // the recall fails either way and the trap absorbs the rest.
                return m.trap_accepting;
            }
            if (jump != -1) {
                q = jump;
                continue;
            }
            apply_rt(mems, rl.tail_reach, pos);
            if (pos == n && rl.tail_acc) return true;
            if (rl.loops) return false;
            q = rl.fallthrough;
            continue;
        }
        if (pos == n) return false;
        auto it = t.by_char[q].find(w[pos]);
        if (it == t.by_char[q].end()) return false;
        const transition& e = m.transitions[it->second];
        apply_rt(mems, e.actions, pos);
        ++pos;
        q = e.to;
    }
}

}  // namespace drx
