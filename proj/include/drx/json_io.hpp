// JSON serialization for automata and unary DFAs.
//
// Automaton schema: {"states": N, "alphabet": ["a", ...], "memories": k,
// "initial": id, "finals": [ids], "trap": {"id": id, "accepting": bool},
// "transitions": [{"from": id, "label": {"kind": "char"|"eps"|"recall",
// "value": one-char string or memory index}, "to": id,
// "actions": ["o"|"c"|"r"|"d", k entries]}]}. Epsilon labels carry no
// "value". The trap's implicit self-loops are never written. Both
// directions keep transitions sorted, so serialization is canonical and
// load(store(m)) == m for any valid m.
#pragma once

#include <json.hpp>

#include "drx/constructions.hpp"
#include "drx/tmfa.hpp"

namespace drx {

nlohmann::json to_json(const tmfa& m);
// Throws nlohmann::json::exception on shape errors and std::runtime_error
// when the decoded automaton fails validation.
tmfa tmfa_from_json(const nlohmann::json& j);

// {"chain": m, "cycle": n, "accept_chain": [...], "accept_cycle": [...]}
nlohmann::json to_json(const unary_dfa& d);
unary_dfa unary_dfa_from_json(const nlohmann::json& j);

}  // namespace drx
