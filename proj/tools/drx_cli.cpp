// Command line front end. Subcommands cover determinism checking,
// compilation to a memory automaton, matching, complement, bounded language
// enumeration and intersection, the unary-DFA and word-equation
// constructions, graph export, and the relaxed determinism check.
//
// Exit codes: 0 success (accepted, deterministic, witness found), 1 negative
// outcome (rejected, not deterministic, no witness), 2 usage or input error,
// 3 resource cap hit.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "drx/constructions.hpp"
#include "drx/dot.hpp"
#include "drx/dtmfa.hpp"
#include "drx/glushkov.hpp"
#include "drx/json_io.hpp"

namespace {

using namespace drx;

std::string label_text(const tmfa& m, const transition& t) {
    std::string out;
    switch (t.lab.kind) {
        case label_kind::chr: out = std::string(1, t.lab.ch); break;
        case label_kind::eps: out = "eps"; break;
        case label_kind::recall: out = "&" + std::to_string(t.lab.mem); break;
    }
    if (m.memories > 0) {
        out += " / ";
        for (instr a : t.actions) out += instr_char(a);
    }
    return out;
}

void emit_automaton(const tmfa& m, const std::string& format) {
    if (format == "json") {
        std::cout << to_json(m).dump(2) << "\n";
    } else if (format == "dot") {
        std::cout << to_dot(m);
    } else {
        std::cout << "states=" << m.states << " memories=" << m.memories << " alphabet=";
        for (char c : m.alphabet) std::cout << c;
        std::cout << " initial=" << m.initial << " finals=";
        bool first = true;
        for (int f : m.finals) {
            if (!first) std::cout << ",";
            std::cout << f;
            first = false;
        }
        std::cout << " trap=" << m.trap << (m.trap_accepting ? "(accepting)" : "(rejecting)")
                  << "\n";
        for (const transition& t : m.transitions)
            std::cout << "  " << t.from << " --" << label_text(m, t) << "--> " << t.to << "\n";
    }
}

int report_witness(const ndet_witness& w) {
    std::cout << "not deterministic condition=" << w.condition << " node=" << w.node << "\n";
    std::cout << "  " << w.detail << "\n";
    return 1;
}

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic regexes with back-references"};
    app.require_subcommand(1);

    std::string rx, equation, dfa_path;
    std::vector<std::string> rxs;
    std::string engine = "fast", format = "json", alphabet;
    int max_len = 8, ell = 1;
    std::size_t cap_states = 250000, cap_configs = 1u << 22;
    bool determinize = false;

    CLI::App* check = app.add_subcommand("check", "report whether a regex is deterministic");
    check->add_option("regex", rx)->required();

    CLI::App* compile = app.add_subcommand("compile", "compile a deterministic regex");
    compile->add_option("regex", rx)->required();
    compile->add_option("--format", format, "json, dot, or text")
        ->check(CLI::IsMember({"json", "dot", "text"}));

    CLI::App* match = app.add_subcommand("match", "match words read one per line from stdin");
    match->add_option("regex", rx)->required();
    match->add_option("--engine", engine, "direct, fast, or oracle")
        ->check(CLI::IsMember({"direct", "fast", "oracle"}));

    CLI::App* compl_cmd = app.add_subcommand("complement", "complement of a deterministic regex");
    compl_cmd->add_option("regex", rx)->required();
    compl_cmd->add_option("--alphabet", alphabet, "extra alphabet symbols to complement over");
    compl_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "text"}));
    compl_cmd->add_option("--cap-states", cap_states);

    CLI::App* enum_cmd = app.add_subcommand("enum", "list the language up to a length bound");
    enum_cmd->add_option("regex", rx)->required();
    enum_cmd->add_option("--max-len", max_len)->check(CLI::NonNegativeNumber);
    enum_cmd->add_option("--cap-configs", cap_configs);

    CLI::App* intersect =
        app.add_subcommand("intersect", "shortest word shared by all regexes, if any");
    intersect->add_option("regexes", rxs)->required();
    intersect->add_option("--max-len", max_len)->check(CLI::NonNegativeNumber);
    intersect->add_option("--cap-configs", cap_configs);

    CLI::App* unary = app.add_subcommand("unary", "deterministic regex for a unary DFA");
    unary->add_option("dfa", dfa_path, "JSON file in lollipop form, or - for stdin")->required();

    CLI::App* wordeq =
        app.add_subcommand("wordeq", "reduce a word equation to two deterministic regexes");
    wordeq->add_option("equation", equation, "form: lhs = rhs, variables uppercase")->required();

    CLI::App* dot_cmd = app.add_subcommand("dot", "occurrence graph of a regex in DOT form");
    dot_cmd->add_option("regex", rx)->required();

    CLI::App* ldet = app.add_subcommand("ldet", "determinism up to a shared recall prefix");
    ldet->add_option("regex", rx)->required();
    ldet->add_option("--ell", ell)->check(CLI::NonNegativeNumber);
    ldet->add_flag("--determinize", determinize, "emit an equivalent deterministic automaton");
    ldet->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "text"}));
    ldet->add_option("--cap-states", cap_states);
    ldet->add_option("--cap-configs", cap_configs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) {
            auto r = compile_deterministic(parse(rx));
            if (auto* w = std::get_if<ndet_witness>(&r)) return report_witness(*w);
            std::cout << "deterministic\n";
            return 0;
        }

        if (compile->parsed()) {
            auto r = compile_deterministic(parse(rx));
            if (auto* w = std::get_if<ndet_witness>(&r)) return report_witness(*w);
            emit_automaton(std::get<tmfa>(r), format);
            return 0;
        }

        if (match->parsed()) {
            ast_ptr t = parse(rx);
            tmfa m;
            if (engine == "oracle") {
                m = compile_naive(t);
            } else {
                auto r = compile_deterministic(t);
                if (auto* w = std::get_if<ndet_witness>(&r)) return report_witness(*w);
                m = std::get<tmfa>(std::move(r));
            }
            std::optional<match_table> table;
            if (engine == "fast") table = preprocess(m);
            bool all = true;
            std::string line;
            while (std::getline(std::cin, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                bool ok = engine == "oracle"  ? member_oracle(m, line)
                          : engine == "fast"  ? match_fast(*table, line)
                                              : match_direct(m, line);
                std::cout << (ok ? "ACCEPT" : "REJECT") << "\n";
                all = all && ok;
            }
            return all ? 0 : 1;
        }

        if (compl_cmd->parsed()) {
            auto r = compile_deterministic(parse(rx));
            if (auto* w = std::get_if<ndet_witness>(&r)) return report_witness(*w);
            tmfa m = std::get<tmfa>(std::move(r));
            if (!alphabet.empty()) {
                std::set<char> sig(m.alphabet.begin(), m.alphabet.end());
                sig.insert(alphabet.begin(), alphabet.end());
                m.alphabet.assign(sig.begin(), sig.end());
            }
            emit_automaton(complement(m, cap_states), format);
            return 0;
        }

        if (enum_cmd->parsed()) {
            std::set<std::string> words = enumerate_language(parse(rx), max_len, cap_configs);
            std::vector<std::string> by_len(words.begin(), words.end());
            std::stable_sort(by_len.begin(), by_len.end(),
                             [](const std::string& a, const std::string& b) {
                                 return a.size() < b.size();
                             });
            for (const std::string& w : by_len) std::cout << w << "\n";
            return 0;
        }

        if (intersect->parsed()) {
            std::vector<tmfa> ms;
            for (const std::string& s : rxs) ms.push_back(compile_naive(parse(s)));
            auto w = bounded_intersection(ms, max_len, cap_configs);
            if (w) {
                std::cout << *w << "\n";
                return 0;
            }
            std::cout << "EMPTY<=" << max_len << "\n";
            return 1;
        }

        if (unary->parsed()) {
            unary_dfa d = unary_dfa_from_json(nlohmann::json::parse(read_all(dfa_path)));
            std::cout << print(unary_dfa_to_drx(d)) << "\n";
            return 0;
        }

        if (wordeq->parsed()) {
            auto [al, ar] = word_equation_to_drx(parse_equation(equation));
            std::cout << print(al) << "\n" << print(ar) << "\n";
            return 0;
        }

        if (dot_cmd->parsed()) {
            std::cout << to_dot(build_graph(parse(rx)));
            return 0;
        }

        if (ldet->parsed()) {
            tmfa m = graph_to_tmfa(build_graph(parse(rx)));
            bool ok = is_l_deterministic(m, ell, cap_configs);
            std::cout << (ok ? "" : "not ") << "deterministic up to ell=" << ell << "\n";
            if (determinize) emit_automaton(l_determinize(m, ell, cap_states), format);
            return ok ? 0 : 1;
        }
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
