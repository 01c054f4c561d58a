#include <doctest.h>

#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "drx/constructions.hpp"
#include "drx/glushkov.hpp"

using namespace drx;

namespace {

tmfa det_compile(const ast_ptr& t) {
    auto r = compile_deterministic(t);
    REQUIRE(std::holds_alternative<tmfa>(r));
    return std::get<tmfa>(r);
}

std::string a_word(int n) { return std::string(static_cast<std::size_t>(n), 'a'); }

}  // namespace

TEST_CASE("unary dfa membership") {
    // chain of length 2, cycle of length 3 accepting one step before the close
    unary_dfa d{2, 3, {1}, {2}};
    std::set<int> want = {1, 4, 7, 10, 13};
    for (int i = 0; i <= 14; ++i) CHECK(unary_member(d, i) == (want.count(i) > 0));

    // the chain end and cycle position 0 are the same state, either spelling
    unary_dfa via_chain{2, 3, {2}, {}};
    unary_dfa via_cycle{2, 3, {}, {0}};
    for (int i = 0; i <= 20; ++i)
        CHECK(unary_member(via_chain, i) == unary_member(via_cycle, i));
    CHECK(ast_equal(unary_dfa_to_drx(via_chain), unary_dfa_to_drx(via_cycle)));
}

TEST_CASE("unary dfa validation") {
    CHECK_THROWS_AS(validate(unary_dfa{-1, 1, {0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(unary_dfa{0, 0, {0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(unary_dfa{2, 2, {3}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(unary_dfa{2, 2, {}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(unary_dfa{2, 2, {}, {}}), std::invalid_argument);
    CHECK_NOTHROW(validate(unary_dfa{0, 1, {}, {0}}));
    CHECK_THROWS_AS(unary_dfa_to_drx(unary_dfa{2, 2, {}, {}}), std::invalid_argument);
}

TEST_CASE("unary regex fixtures") {
    // a^(4i+1): one accepting chain state, silent cycle of length four
    unary_dfa mod4{1, 4, {1}, {}};
    ast_ptr rx = unary_dfa_to_drx(mod4);
    CHECK(print(rx) == "{x1:a}({x0:&x1}{x1:&x0}&x1&x1)*");
    tmfa m = det_compile(rx);
    std::set<std::string> got = language(m, 40);
    CHECK(got == language(compile_naive(parse("a(aaaa)*")), 40));

    // every cycle state accepting: the loop degenerates to a*
    ast_ptr tail = unary_dfa_to_drx(unary_dfa{2, 1, {2}, {}});
    CHECK(print(tail) == "aaa*");
    tmfa mt = det_compile(tail);
    for (int i = 0; i <= 12; ++i) CHECK(member_oracle(mt, a_word(i)) == (i >= 2));

    // cycle never accepts: finite language, chain only
    ast_ptr fin = unary_dfa_to_drx(unary_dfa{4, 2, {1, 3}, {}});
    CHECK(print(fin) == "a(()|aa)");
    CHECK(language(det_compile(fin), 10) == std::set<std::string>{"a", "aaa"});

    // the empty word rides along as a top-level alternative
    ast_ptr star = unary_dfa_to_drx(unary_dfa{0, 1, {}, {0}});
    CHECK(print(star) == "aa*|()");
    tmfa ms = det_compile(star);
    for (int i = 0; i <= 8; ++i) CHECK(member_oracle(ms, a_word(i)));

    CHECK(print(unary_dfa_to_drx(unary_dfa{1, 1, {0}, {}})) == "()");

    // first cycle gap 1 forces unrolling until a gap of at least 2 leads
    unary_dfa shift{2, 4, {1}, {1, 2}};
    ast_ptr rx2 = unary_dfa_to_drx(shift);
    tmfa m2 = det_compile(rx2);
    for (int i = 0; i <= 40; ++i) CHECK(member_oracle(m2, a_word(i)) == unary_member(shift, i));
}

TEST_CASE("unary construction matches random lollipops") {
    std::mt19937 rng(991231);
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    int done = 0;
    while (done < 150) {
        unary_dfa d;
        d.chain = pick(0, 4);
        d.cycle = pick(1, 5);
        for (int i = 0; i <= d.chain; ++i)
            if (pick(0, 2) == 0) d.accept_chain.insert(i);
        for (int j = 0; j < d.cycle; ++j)
            if (pick(0, 2) == 0) d.accept_cycle.insert(j);
        if (d.accept_chain.empty() && d.accept_cycle.empty()) continue;
        ++done;

        CAPTURE(d.chain);
        CAPTURE(d.cycle);
        ast_ptr rx = unary_dfa_to_drx(d);
        CAPTURE(print(rx));
        tmfa m = det_compile(rx);
        for (int i = 0; i <= 40; ++i)
            CHECK(member_oracle(m, a_word(i)) == unary_member(d, i));
    }
}

TEST_CASE("word equation parsing") {
    word_equation eq = parse_equation("Xa = aX");
    REQUIRE(eq.lhs.size() == 2);
    REQUIRE(eq.rhs.size() == 2);
    CHECK(eq.lhs[0].is_var);
    CHECK(eq.lhs[0].var == "X");
    CHECK_FALSE(eq.lhs[1].is_var);
    CHECK(eq.lhs[1].ch == 'a');
    CHECK_FALSE(eq.rhs[0].is_var);
    CHECK(eq.rhs[0].var.empty());
    CHECK(eq.rhs[1].var == "X");

    // digits extend a variable name, a lowercase letter ends it
    word_equation eq2 = parse_equation("X12ab=Y");
    REQUIRE(eq2.lhs.size() == 3);
    CHECK(eq2.lhs[0].var == "X12");
    CHECK(eq2.lhs[1].ch == 'a');
    CHECK(eq2.rhs[0].var == "Y");

    CHECK_THROWS_AS(parse_equation("ab"), parse_error);
    CHECK_THROWS_AS(parse_equation("= a"), parse_error);
    CHECK_THROWS_AS(parse_equation("a ="), parse_error);
    CHECK_THROWS_AS(parse_equation("a = b = c"), parse_error);
    CHECK_THROWS_AS(parse_equation("a% = a"), parse_error);
    CHECK_THROWS_AS(parse_equation("1a = a"), parse_error);
}

TEST_CASE("word equation reduction") {
    auto [al, ar] = word_equation_to_drx(parse_equation("Xa = aX"));
    CHECK(print(al) == "{X:a*}%&X a");
    CHECK(print(ar) == "{X:a*}%a&X");
    CHECK(is_vstar_free(al));
    CHECK(is_vstar_free(ar));
    tmfa ml = det_compile(al);
    tmfa mr = det_compile(ar);
    CHECK(bounded_intersection({ml, mr}, 4) == std::optional<std::string>("%a"));

    // unsolvable ground equation: no variables, no separators
    auto [gl, gr] = word_equation_to_drx(parse_equation("a = b"));
    CHECK(print(gl) == "a");
    CHECK(print(gr) == "b");
    for (int bound = 0; bound <= 6; ++bound)
        CHECK(!bounded_intersection({det_compile(gl), det_compile(gr)}, bound));

    // trivially solvable, empty terminal alphabet
    auto [xl, xr] = word_equation_to_drx(parse_equation("X = X"));
    CHECK(print(xl) == "{X:()}%&X");
    CHECK(bounded_intersection({det_compile(xl), det_compile(xr)}, 3) ==
          std::optional<std::string>("%"));

    // two variables; over a unary alphabet xya = yxa is always solvable
    auto [cl, cr] = word_equation_to_drx(parse_equation("XYa = YXa"));
    CHECK(print(cl) == "{X:a*}%{Y:a*}%&X&Y a");
    CHECK(print(cr) == "{X:a*}%{Y:a*}%&Y&X a");
    tmfa mcl = det_compile(cl);
    tmfa mcr = det_compile(cr);
    CHECK(is_vstar_free(cl));
    CHECK(bounded_intersection({mcl, mcr}, 4) == std::optional<std::string>("%%a"));
}

TEST_CASE("bounded intersection") {
    tmfa wcw = det_compile(parse("{x:(a|b)*}c&x"));
    tmfa any = det_compile(parse("(a|b|c)*"));
    CHECK(bounded_intersection({wcw, any}, 5) == std::optional<std::string>("c"));

    tmfa ja = compile_naive(parse("a"));
    tmfa jb = compile_naive(parse("b"));
    CHECK(!bounded_intersection({ja, jb}, 3));

    // candidates come in length order, ties lexicographic
    tmfa ab = compile_naive(parse("a|b"));
    tmfa ba = compile_naive(parse("b|a"));
    CHECK(bounded_intersection({ab, ba}, 2) == std::optional<std::string>("a"));

    tmfa as = compile_naive(parse("a+b"));
    tmfa bs = compile_naive(parse("b+a"));
    CHECK_THROWS_AS(bounded_intersection({as, bs}, 10, 100), resource_limit_error);
    CHECK_THROWS_AS(bounded_intersection({}, 3), std::invalid_argument);
}
