#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "drx/dtmfa.hpp"

using namespace drx;

namespace {

instr_vec vec(std::initializer_list<char> cs) {
    instr_vec out;
    for (char c : cs) out.push_back(instr_from_char(c));
    return out;
}

// a^i b^j c (a^i | b^j) with i, j >= 1: at the fork both recalls are viable
// until the next input symbol arrives.
tmfa fork_after_c(bool trap_accepting) {
    tmfa m;
    m.states = 6;
    m.alphabet = {'a', 'b', 'c'};
    m.memories = 2;
    m.initial = 0;
    m.finals = {4};
    m.trap = 5;
    m.trap_accepting = trap_accepting;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'o', 'd'})});
    m.transitions.push_back({1, lbl_char('a'), 1, vec({'d', 'd'})});
    m.transitions.push_back({1, lbl_char('b'), 2, vec({'c', 'o'})});
    m.transitions.push_back({2, lbl_char('b'), 2, vec({'d', 'd'})});
    m.transitions.push_back({2, lbl_char('c'), 3, vec({'d', 'c'})});
    m.transitions.push_back({3, lbl_recall(1), 4, vec({'c', 'd'})});
    m.transitions.push_back({3, lbl_recall(2), 4, vec({'d', 'c'})});
    sort_transitions(m);
    return m;
}

// a^i d a b^j d (a^i | a b^j) with i >= 2, j >= 1: both contents start with
// a, so one symbol of lookahead is not enough but two are.
tmfa shared_first_symbol() {
    tmfa m;
    m.states = 9;
    m.alphabet = {'a', 'b', 'd'};
    m.memories = 2;
    m.initial = 0;
    m.finals = {7};
    m.trap = 8;
    m.trap_accepting = false;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'o', 'd'})});
    m.transitions.push_back({1, lbl_char('a'), 2, vec({'d', 'd'})});
    m.transitions.push_back({2, lbl_char('a'), 2, vec({'d', 'd'})});
    m.transitions.push_back({2, lbl_char('d'), 3, vec({'c', 'd'})});
    m.transitions.push_back({3, lbl_char('a'), 4, vec({'d', 'o'})});
    m.transitions.push_back({4, lbl_char('b'), 5, vec({'d', 'd'})});
    m.transitions.push_back({5, lbl_char('b'), 5, vec({'d', 'd'})});
    m.transitions.push_back({5, lbl_char('d'), 6, vec({'d', 'c'})});
    m.transitions.push_back({6, lbl_recall(1), 7, vec({'c', 'd'})});
    m.transitions.push_back({6, lbl_recall(2), 7, vec({'d', 'c'})});
    sort_transitions(m);
    return m;
}

// a b d (a|b) &z where z spans everything from the d on: the memory picked
// up under the fork keeps recording through the resolving symbol.
tmfa recording_across_fork() {
    tmfa m;
    m.states = 7;
    m.alphabet = {'a', 'b', 'd'};
    m.memories = 3;
    m.initial = 0;
    m.finals = {5};
    m.trap = 6;
    m.trap_accepting = false;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'o', 'd', 'd'})});
    m.transitions.push_back({1, lbl_char('b'), 2, vec({'c', 'o', 'd'})});
    m.transitions.push_back({2, lbl_char('d'), 3, vec({'d', 'c', 'o'})});
    m.transitions.push_back({3, lbl_recall(1), 4, vec({'c', 'd', 'd'})});
    m.transitions.push_back({3, lbl_recall(2), 4, vec({'d', 'c', 'd'})});
    m.transitions.push_back({4, lbl_recall(3), 5, vec({'d', 'd', 'c'})});
    sort_transitions(m);
    return m;
}

// Same state reachable with distinguishable and with identical contents.
tmfa sometimes_confusable() {
    tmfa m;
    m.states = 6;
    m.alphabet = {'a', 'b', 'd'};
    m.memories = 2;
    m.initial = 0;
    m.finals = {4};
    m.trap = 5;
    m.trap_accepting = false;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'o', 'd'})});
    m.transitions.push_back({1, lbl_char('b'), 2, vec({'c', 'o'})});
    m.transitions.push_back({1, lbl_char('a'), 2, vec({'c', 'o'})});
    m.transitions.push_back({2, lbl_char('d'), 3, vec({'d', 'c'})});
    m.transitions.push_back({3, lbl_recall(1), 4, vec({'c', 'd'})});
    m.transitions.push_back({3, lbl_recall(2), 4, vec({'d', 'c'})});
    sort_transitions(m);
    return m;
}

std::set<std::string> lang(const tmfa& m, int n) { return language(m, n); }

}  // namespace

TEST_CASE("zero lookahead coincides with plain determinism") {
    std::vector<tmfa> machines = {
        fork_after_c(false),
        fork_after_c(true),
        shared_first_symbol(),
        compile_naive(parse("{x:(a|b)*}c&x")),
        compile_naive(parse("({x:&y}{y:&x a})*")),
    };
    for (const tmfa& m : machines) CHECK(is_l_deterministic(m, 0) == is_deterministic(m));
}

TEST_CASE("one symbol of lookahead resolves the fork") {
    tmfa m = fork_after_c(false);
    CHECK_FALSE(is_deterministic(m));
    CHECK_FALSE(is_l_deterministic(m, 0));
    CHECK(is_l_deterministic(m, 1));
    CHECK(is_l_deterministic(m, 3));

    tmfa d = l_determinize(m, 1);
    CHECK(is_deterministic(d));
    CHECK(lang(d, 9) == lang(m, 9));
}

TEST_CASE("lookahead determinization with an accepting trap") {
    tmfa m = fork_after_c(true);
    CHECK(is_l_deterministic(m, 1));
    tmfa d = l_determinize(m, 1);
    CHECK(is_deterministic(d));
    CHECK(lang(d, 8) == lang(m, 8));
}

TEST_CASE("two symbols of lookahead when contents share their first one") {
    tmfa m = shared_first_symbol();
    CHECK_FALSE(is_l_deterministic(m, 1));
    CHECK(is_l_deterministic(m, 2));
    CHECK(is_l_deterministic(m, 4));

    tmfa d = l_determinize(m, 2);
    CHECK(is_deterministic(d));
    CHECK(lang(d, 11) == lang(m, 11));

    tmfa d4 = l_determinize(m, 4);
    CHECK(is_deterministic(d4));
    CHECK(lang(d4, 11) == lang(m, 11));
}

TEST_CASE("memories recording across the fork survive determinization") {
    tmfa m = recording_across_fork();
    CHECK(is_l_deterministic(m, 1));
    tmfa d = l_determinize(m, 1);
    CHECK(is_deterministic(d));
    CHECK(lang(d, 8) == lang(m, 8));
    CHECK(lang(m, 8) == std::set<std::string>{"abdada", "abdbdb"});
}

TEST_CASE("violations found only along some runs still count") {
    tmfa m = sometimes_confusable();
    // via b the contents are a / b, via a they are a / a
    CHECK_FALSE(is_l_deterministic(m, 1));
    CHECK_FALSE(is_l_deterministic(m, 2));
    CHECK_THROWS_AS(l_determinize(m, 1), not_deterministic_error);
}

TEST_CASE("deterministic input passes through unchanged") {
    tmfa m;
    m.states = 3;
    m.alphabet = {'a'};
    m.memories = 1;
    m.initial = 0;
    m.finals = {1};
    m.trap = 2;
    m.trap_accepting = false;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'o'})});
    m.transitions.push_back({1, lbl_recall(1), 1, vec({'c'})});
    sort_transitions(m);
    for (int ell : {0, 1, 2, 7}) {
        CHECK(is_l_deterministic(m, ell));
        tmfa d = l_determinize(m, ell);
        CHECK(lang(d, 8) == lang(m, 8));
    }
}

TEST_CASE("branch-specific actions inside a shared walk are reported") {
    // contents ab / ac force a two-symbol walk, and the first branch also
    // has to close a live recording while the second must not
    tmfa m;
    m.states = 10;
    m.alphabet = {'a', 'b', 'c', 'd'};
    m.memories = 3;
    m.initial = 0;
    m.finals = {9};
    m.trap = 8;
    m.trap_accepting = false;
    m.transitions.push_back({0, lbl_char('a'), 1, vec({'d', 'd', 'o'})});
    m.transitions.push_back({1, lbl_char('a'), 2, vec({'d', 'd', 'd'})});
    m.transitions.push_back({2, lbl_char('a'), 3, vec({'d', 'd', 'd'})});
    m.transitions.push_back({3, lbl_char('a'), 4, vec({'o', 'd', 'd'})});
    m.transitions.push_back({4, lbl_char('b'), 5, vec({'d', 'd', 'd'})});
    m.transitions.push_back({5, lbl_char('a'), 6, vec({'c', 'o', 'd'})});
    m.transitions.push_back({6, lbl_char('c'), 7, vec({'d', 'd', 'd'})});
    m.transitions.push_back({7, lbl_char('d'), 9, vec({'d', 'c', 'd'})});
    m.transitions.push_back({9, lbl_recall(1), 9, vec({'c', 'd', 'c'})});
    m.transitions.push_back({9, lbl_recall(2), 9, vec({'d', 'c', 'd'})});
    sort_transitions(m);
    CHECK(is_l_deterministic(m, 2));
    CHECK_THROWS_AS(l_determinize(m, 2), std::runtime_error);
}
