#include "drx/dot.hpp"

#include <sstream>

namespace drx {

namespace {

// DOT double-quoted strings escape quotes and backslashes only.
std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_dot(const memory_graph& g) {
    std::ostringstream out;
    out << "digraph occurrences {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  n0 [label=\"src\" shape=box];\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        out << "  n" << i + 1 << " [label=" << quoted(show(g.nodes[i])) << "];\n";
    out << "  n" << g.snk() << " [label=\"snk\" shape=box];\n";
    for (const auto& e : g.edges) {
        std::string lbl = e.label.empty() ? "ε" : show(e.label);
        out << "  n" << e.from << " -> n" << e.to << " [label=" << quoted(lbl)
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const tmfa& m) {
    std::ostringstream out;
    out << "digraph tmfa {\n";
    out << "  rankdir=LR;\n";
    out << "  start [shape=point];\n";
    for (int q = 0; q < m.states; ++q) {
        out << "  q" << q << " [shape="
            << (q == m.trap ? "octagon" : m.is_final(q) ? "doublecircle" : "circle");
        if (q == m.trap && m.trap_accepting) out << " peripheries=2";
        out << "];\n";
    }
    out << "  start -> q" << m.initial << ";\n";
    for (const auto& t : m.transitions) {
        std::string lbl;
        switch (t.lab.kind) {
            case label_kind::chr: lbl = std::string(1, t.lab.ch); break;
            case label_kind::eps: lbl = "ε"; break;
            case label_kind::recall: lbl = "&" + std::to_string(t.lab.mem); break;
        }
        if (m.memories > 0) {
            lbl += " / ";
            for (instr a : t.actions) lbl += instr_char(a);
        }
        out << "  q" << t.from << " -> q" << t.to << " [label=" << quoted(lbl)
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace drx
