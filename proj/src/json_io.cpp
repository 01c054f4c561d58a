#include "drx/json_io.hpp"

#include <stdexcept>

namespace drx {

using nlohmann::json;

json to_json(const tmfa& m) {
    tmfa s = m;
    sort_transitions(s);

    json j;
    j["states"] = s.states;
    j["alphabet"] = json::array();
    for (char c : s.alphabet) j["alphabet"].push_back(std::string(1, c));
    j["memories"] = s.memories;
    j["initial"] = s.initial;
    j["finals"] = s.finals;
    j["trap"] = {{"id", s.trap}, {"accepting", s.trap_accepting}};
    j["transitions"] = json::array();
    for (const transition& t : s.transitions) {
        json lab;
        switch (t.lab.kind) {
            case label_kind::chr:
                lab = {{"kind", "char"}, {"value", std::string(1, t.lab.ch)}};
                break;
            case label_kind::eps:
                lab = {{"kind", "eps"}};
                break;
            case label_kind::recall:
                lab = {{"kind", "recall"}, {"value", t.lab.mem}};
                break;
        }
        json acts = json::array();
        for (instr a : t.actions) acts.push_back(std::string(1, instr_char(a)));
        j["transitions"].push_back(
            {{"from", t.from}, {"label", lab}, {"to", t.to}, {"actions", acts}});
    }
    return j;
}

namespace {

char one_char(const json& j, const char* what) {
    std::string s = j.get<std::string>();
    if (s.size() != 1) throw std::runtime_error(std::string(what) + " must be one character");
    return s[0];
}

}  // namespace

tmfa tmfa_from_json(const json& j) {
    tmfa m;
    m.states = j.at("states").get<int>();
    for (const json& c : j.at("alphabet")) m.alphabet.push_back(one_char(c, "alphabet entry"));
    m.memories = j.at("memories").get<int>();
    m.initial = j.at("initial").get<int>();
    for (const json& f : j.at("finals")) m.finals.insert(f.get<int>());
    m.trap = j.at("trap").at("id").get<int>();
    m.trap_accepting = j.at("trap").at("accepting").get<bool>();
    for (const json& t : j.at("transitions")) {
        transition tr;
        tr.from = t.at("from").get<int>();
        tr.to = t.at("to").get<int>();
        const json& lab = t.at("label");
        std::string kind = lab.at("kind").get<std::string>();
        if (kind == "char") {
            tr.lab = lbl_char(one_char(lab.at("value"), "char label value"));
        } else if (kind == "eps") {
            tr.lab = lbl_eps();
        } else if (kind == "recall") {
            tr.lab = lbl_recall(lab.at("value").get<int>());
        } else {
            throw std::runtime_error("unknown label kind '" + kind + "'");
        }
        for (const json& a : t.at("actions"))
            tr.actions.push_back(instr_from_char(one_char(a, "action")));
        m.transitions.push_back(std::move(tr));
    }
    sort_transitions(m);
    validate(m);
    return m;
}

json to_json(const unary_dfa& d) {
    return {{"chain", d.chain},
            {"cycle", d.cycle},
            {"accept_chain", d.accept_chain},
            {"accept_cycle", d.accept_cycle}};
}

unary_dfa unary_dfa_from_json(const json& j) {
    unary_dfa d;
    d.chain = j.at("chain").get<int>();
    d.cycle = j.at("cycle").get<int>();
    for (const json& i : j.at("accept_chain")) d.accept_chain.insert(i.get<int>());
    for (const json& i : j.at("accept_cycle")) d.accept_cycle.insert(i.get<int>());
    validate(d);
    return d;
}

}  // namespace drx
