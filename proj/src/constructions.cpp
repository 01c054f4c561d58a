#include "drx/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace drx {

namespace {

// Right-nested concatenation, the shape the parser produces.
ast_ptr rcat(std::vector<ast_ptr> parts) {
    ast_ptr out = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        out = mk_concat(std::move(parts[i]), std::move(out));
    return out;
}

void push_a(std::vector<ast_ptr>& parts, int n) {
    for (int i = 0; i < n; ++i) parts.push_back(mk_terminal('a'));
}

std::string ring_var(int i) { return "x" + std::to_string(i); }

}  // namespace

void validate(const unary_dfa& d) {
    if (d.chain < 0 || d.cycle < 1)
        throw std::invalid_argument("unary_dfa: chain must be >= 0 and cycle >= 1");
    for (int i : d.accept_chain)
        if (i < 0 || i > d.chain)
            throw std::invalid_argument("unary_dfa: chain accept position out of range");
    for (int j : d.accept_cycle)
        if (j < 0 || j >= d.cycle)
            throw std::invalid_argument("unary_dfa: cycle accept position out of range");
    if (d.accept_chain.empty() && d.accept_cycle.empty())
        throw std::invalid_argument("unary_dfa: no accepting state");
}

bool unary_member(const unary_dfa& d, int len) {
    if (len <= d.chain)
        return d.accept_chain.count(len) > 0 ||
               (len == d.chain && d.accept_cycle.count(0) > 0);
    int j = (len - d.chain) % d.cycle;
    return d.accept_cycle.count(j) > 0 || (j == 0 && d.accept_chain.count(d.chain) > 0);
}

ast_ptr unary_dfa_to_drx(const unary_dfa& d) {
    validate(d);
    bool has_eps = unary_member(d, 0);
    int m = d.chain;
    int n = d.cycle;

    // Cycle acceptance as offsets from the chain end; the chain end itself
    // is offset 0. Chain acceptance at positions >= 1 (position 0 is the
    // empty word, reattached at the very end).
    std::set<int> cyc = d.accept_cycle;
    if (d.accept_chain.count(m)) cyc.insert(0);
    std::set<int> stops;
    for (int i : d.accept_chain)
        if (i >= 1) stops.insert(i);

    ast_ptr tail;  // consumes the chain's last gap, then loops
    if (!cyc.empty()) {
        // Roll the cycle into the chain until the chain ends on an accepting
        // state. An all-cycle DFA still needs one chain step to seed the
        // variable ring, hence the forced start at 1.
        int t = (m == 0) ? 1 : 0;
        while (!cyc.count(t % n)) ++t;
        if (t > 0) {
            m += t;
            std::set<int> rot;
            for (int j : cyc) rot.insert(((j - t) % n + n) % n);
            cyc.swap(rot);
        }
        stops.insert(m);

        // Gaps between consecutive accepting states around the cycle; the
        // last one closes the loop back to the chain end.
        std::vector<int> b;
        int prev = 0;
        for (int j : cyc)
            if (j >= 1) {
                b.push_back(j - prev);
                prev = j;
            }
        b.push_back(n - prev);

        int before_last = stops.size() >= 2 ? *std::next(stops.rbegin()) : 0;
        if (static_cast<int>(b.size()) == n) {
            // every cycle state accepts, so past the last stop anything goes
            std::vector<ast_ptr> parts;
            push_a(parts, m - before_last);
            parts.push_back(mk_star(mk_terminal('a')));
            tail = rcat(std::move(parts));
        } else {
            // the ring emits an extra 'a' on wraparound, so the first gap
            // must leave room for it
            while (b[0] == 1) {
                stops.insert(++m);
                std::rotate(b.begin(), b.begin() + 1, b.end());
            }
            before_last = stops.size() >= 2 ? *std::next(stops.rbegin()) : 0;
            int ell = static_cast<int>(b.size());
            std::vector<ast_ptr> body;
            body.push_back(mk_binding(ring_var(0), mk_reference(ring_var(ell))));
            for (int i = ell; i >= 1; --i)
                body.push_back(mk_binding(ring_var(i), mk_reference(ring_var(i - 1))));
            for (int i = 1; i <= ell; ++i) {
                int reps = b[i - 1] - (i == 1 ? 2 : 1);
                for (int r = 0; r < reps; ++r) body.push_back(mk_reference(ring_var(i)));
            }
            ast_ptr loop = mk_plus(rcat(std::move(body)));

            std::vector<ast_ptr> parts;
            parts.push_back(mk_binding(ring_var(ell), mk_terminal('a')));
            push_a(parts, m - before_last - 1);
            parts.push_back(mk_disjunction(mk_epsilon(), std::move(loop)));
            tail = rcat(std::move(parts));
        }
    }

    std::vector<int> s(stops.begin(), stops.end());
    int i = static_cast<int>(s.size()) - 1;
    ast_ptr core;
    if (tail) {
        core = std::move(tail);
        --i;  // the tail already consumed the gap up to the last stop
    }
    for (; i >= 0; --i) {
        int gap = s[i] - (i ? s[i - 1] : 0);
        std::vector<ast_ptr> parts;
        push_a(parts, gap);
        if (core) parts.push_back(mk_disjunction(mk_epsilon(), std::move(core)));
        core = rcat(std::move(parts));
    }

    if (!core) return mk_epsilon();
    return has_eps ? mk_disjunction(std::move(core), mk_epsilon()) : core;
}

word_equation parse_equation(const std::string& text) {
    word_equation eq;
    eq_side* side = &eq.lhs;
    bool split = false;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '=') {
            if (split) throw parse_error("second '=' in equation", i);
            split = true;
            side = &eq.rhs;
            ++i;
        } else if (c >= 'A' && c <= 'Z') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            side->push_back({true, 0, text.substr(i, j - i)});
            i = j;
        } else if (c >= 'a' && c <= 'z') {
            side->push_back({false, c, ""});
            ++i;
        } else {
            throw parse_error("expected terminal, variable, or '='", i);
        }
    }
    if (!split) throw parse_error("equation has no '='", text.size());
    if (eq.lhs.empty() || eq.rhs.empty())
        throw parse_error("equation side is empty", text.size());
    return eq;
}

std::pair<ast_ptr, ast_ptr> word_equation_to_drx(const word_equation& eq) {
    std::vector<std::string> vars;
    std::set<char> sigma;
    for (const eq_side* side : {&eq.lhs, &eq.rhs})
        for (const eq_item& it : *side) {
            if (!it.is_var)
                sigma.insert(it.ch);
            else if (std::find(vars.begin(), vars.end(), it.var) == vars.end())
                vars.push_back(it.var);
        }

    auto sigma_star = [&]() -> ast_ptr {
        if (sigma.empty()) return mk_epsilon();
        std::vector<char> cs(sigma.begin(), sigma.end());
        ast_ptr alt = mk_terminal(cs.back());
        for (std::size_t i = cs.size() - 1; i-- > 0;)
            alt = mk_disjunction(mk_terminal(cs[i]), std::move(alt));
        return mk_star(std::move(alt));
    };

    auto build = [&](const eq_side& side) {
        std::vector<ast_ptr> parts;
        for (const std::string& v : vars) {
            parts.push_back(mk_binding(v, sigma_star()));
            parts.push_back(mk_terminal('%'));
        }
        for (const eq_item& it : side)
            parts.push_back(it.is_var ? mk_reference(it.var) : mk_terminal(it.ch));
        return rcat(std::move(parts));
    };
    return {build(eq.lhs), build(eq.rhs)};
}

std::optional<std::string> bounded_intersection(const std::vector<tmfa>& ms,
                                                int max_len, std::size_t cap) {
    if (ms.empty()) throw std::invalid_argument("bounded_intersection: no automata");
    std::set<char> common(ms[0].alphabet.begin(), ms[0].alphabet.end());
    for (std::size_t i = 1; i < ms.size(); ++i) {
        std::set<char> next;
        for (char c : ms[i].alphabet)
            if (common.count(c)) next.insert(c);
        common.swap(next);
    }
    std::vector<char> sig(common.begin(), common.end());

    std::size_t tried = 0;
    for (int len = 0; len <= max_len; ++len) {
        if (len > 0 && sig.empty()) break;
        std::vector<int> idx(static_cast<std::size_t>(len), 0);
        for (;;) {
            if (++tried > cap)
                throw resource_limit_error("bounded_intersection: candidate cap exceeded");
            std::string w;
            w.reserve(idx.size());
            for (int k : idx) w.push_back(sig[static_cast<std::size_t>(k)]);
            bool all = true;
            for (const tmfa& m : ms)
                if (!member_oracle(m, w)) {
                    all = false;
                    break;
                }
            if (all) return w;
            int p = len - 1;
            while (p >= 0 && idx[static_cast<std::size_t>(p)] + 1 == static_cast<int>(sig.size()))
                idx[static_cast<std::size_t>(p--)] = 0;
            if (p < 0) break;
            ++idx[static_cast<std::size_t>(p)];
        }
    }
    return std::nullopt;
}

}  // namespace drx
