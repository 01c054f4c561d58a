// Normal form: every non-d instruction rides its own epsilon transition (in
// particular no resets and no opens of open memories survive), consuming and
// recall transitions carry nothing beyond the mandated close, and recalls of
// memories that are empty on every run through them become silent.
#include <deque>
#include <map>

#include "drx/tmfa.hpp"

namespace drx {

namespace {

struct mabs {
    bool open = false;
    bool empty = true;
    auto operator<=>(const mabs&) const = default;
};
using absvec = std::vector<mabs>;

}  // namespace

tmfa normalize(const tmfa& m) {
    validate(m);
    if (m.initial == m.trap) {
        tmfa out;
        out.states = 1;
        out.alphabet = m.alphabet;
        out.memories = m.memories;
        out.initial = 0;
        out.trap = 0;
        out.trap_accepting = m.trap_accepting;
        return out;
    }

    tmfa out;
    out.alphabet = m.alphabet;
    out.memories = m.memories;
    out.trap_accepting = m.trap_accepting;

    auto outs = outgoing(m);
    std::map<std::pair<int, absvec>, int> ids;
    std::deque<std::pair<int, absvec>> work;
    constexpr int trap_placeholder = -1;

    auto id_of = [&](int q, const absvec& a) {
        auto [it, fresh] = ids.try_emplace({q, a}, 0);
        if (fresh) {
            it->second = out.states++;
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

            // One epsilon transition per non-d instruction, in memory order.
            std::vector<std::pair<int, instr>> singles;
            for (int i = 0; i < m.memories; ++i) {
                switch (t.actions[i]) {
                    case instr::d:
                        break;
                    case instr::c:
                        singles.emplace_back(i, instr::c);
                        cur[i].open = false;
                        break;
                    case instr::o:
                        if (cur[i].open) singles.emplace_back(i, instr::c);
                        singles.emplace_back(i, instr::o);
                        cur[i] = {true, true};
                        break;
                    case instr::r:
                        if (cur[i].open) singles.emplace_back(i, instr::c);
                        if (!cur[i].empty) {
                            singles.emplace_back(i, instr::o);
                            singles.emplace_back(i, instr::c);
                        }
                        cur[i] = {false, true};
                        break;
                }
            }

            // Effect of the consumption on the emptiness abstraction, and
            // the shape of the final (consuming) transition.
            tlabel core = t.lab;
            instr_vec core_vec(m.memories, instr::d);
            if (t.lab.kind == label_kind::chr) {
                for (auto& a2 : cur)
                    if (a2.open) a2.empty = false;
            } else if (t.lab.kind == label_kind::recall) {
                if (cur[t.lab.mem - 1].empty) {
                    core = lbl_eps();  // recalling nothing consumes nothing
                } else {
                    core_vec[t.lab.mem - 1] = instr::c;
                    for (auto& a2 : cur)
                        if (a2.open) a2.empty = false;
                }
            }

            int target = t.to == m.trap ? trap_placeholder : id_of(t.to, cur);
            int at = from;
            for (auto [mem, ins] : singles) {
                int next = out.states++;
                instr_vec v(m.memories, instr::d);
                v[mem] = ins;
                out.transitions.push_back({at, lbl_eps(), next, std::move(v)});
                at = next;
            }
            out.transitions.push_back({at, core, target, std::move(core_vec)});
        }
    }

    out.trap = out.states++;
    for (auto& t : out.transitions)
        if (t.to == trap_placeholder) t.to = out.trap;
    sort_transitions(out);
    validate(out);
    return out;
}

}  // namespace drx
