#include <catch2/catch_amalgamated.hpp>
#include <mominv/mominv.hpp>

using namespace mominv;

static Rational q(long long n, long long d) { return Rational(n, d); }

static Rational mass(const StateDist& d) {
    Rational m;
    for (const auto& [s, p] : d) m = m + p;
    return m;
}

TEST_CASE("binomial counting measure by hand") {
    ValidatedProgram vp = load_program(corpus_entry("binomial").source);
    ExactEnumerator en(vp, {{"p", q(1, 2)}});
    REQUIRE(en.current().size() == 1); // point mass at 0
    en.advance();
    en.advance();
    const StateDist& d = en.current();
    REQUIRE(d.size() == 3);
    CHECK(d.at({Rational(0)}) == q(1, 4));
    CHECK(d.at({Rational(1)}) == q(1, 2));
    CHECK(d.at({Rational(2)}) == q(1, 4));
    CHECK(en.moment({1}) == Rational(1));
    CHECK(en.moment({2}) == q(3, 2));
    CHECK(en.step_index() == 2);
}

TEST_CASE("probability mass is conserved") {
    for (const auto& name : {"coupon", "random_walk_2d", "product_dep_var", "multipath_demo"}) {
        ValidatedProgram vp = load_program(corpus_entry(name).source);
        ExactEnumerator en(vp, corpus_entry(name).default_bindings);
        for (int i = 0; i < 6; ++i) {
            en.advance();
            INFO(name << " at n = " << en.step_index());
            CHECK(mass(en.current()) == Rational(1));
        }
    }
}

TEST_CASE("sequential updates see fresh earlier values") {
    // y copies x after x moved, so y == x on every path
    ValidatedProgram vp = load_program("x := 0\ny := 0\n"
                                       "while true:\n"
                                       "    x := x + 1 [1/2] x\n"
                                       "    y := x\n");
    ExactEnumerator en(vp, {});
    for (int i = 0; i < 4; ++i) en.advance();
    for (const auto& [state, p] : en.current()) CHECK(state[0] == state[1]);
}

TEST_CASE("initialization draws branch the start distribution") {
    ValidatedProgram vp = load_program("x := d(0:1/3, 3:2/3)\n"
                                       "y := x + b(1/2)\n"
                                       "while true:\n"
                                       "    x := x\n"
                                       "    y := y\n");
    ExactEnumerator en(vp, {});
    const StateDist& d = en.current();
    REQUIRE(d.size() == 4);
    CHECK(d.at({Rational(0), Rational(0)}) == q(1, 6));
    CHECK(d.at({Rational(0), Rational(1)}) == q(1, 6));
    CHECK(d.at({Rational(3), Rational(3)}) == q(1, 3));
    CHECK(d.at({Rational(3), Rational(4)}) == q(1, 3));
}

TEST_CASE("zero-probability branches are pruned") {
    ValidatedProgram vp = load_program("x := 0\nwhile true:\n    x := x + 1 [1] x - 1\n");
    ExactEnumerator en(vp, {});
    en.advance();
    en.advance();
    REQUIRE(en.current().size() == 1);
    CHECK(en.current().begin()->first[0] == Rational(2));
}

TEST_CASE("parametrized probabilities are bound and range-checked") {
    ValidatedProgram vp = load_program(corpus_entry("binomial").source);
    ExactEnumerator good(vp, {{"p", q(1, 3)}});
    good.advance();
    CHECK(good.moment({1}) == q(1, 3));
    ExactEnumerator bad(vp, {{"p", q(7, 2)}});
    CHECK_THROWS_AS(bad.advance(), ModelError);
}

TEST_CASE("continuous draws cannot be enumerated") {
    ValidatedProgram vp = load_program(corpus_entry("random_walk_1d_cts").source);
    ExactEnumerator en(vp, {});
    CHECK_THROWS_AS(en.advance(), InfiniteSupport);
}

TEST_CASE("the state cap aborts runaway supports") {
    // support doubles every step: 2^n points
    ValidatedProgram vp = load_program("x := 0\nm := 1\n"
                                       "while true:\n"
                                       "    m := 3*m\n"
                                       "    x := x + m [1/2] x\n");
    EnumerateOptions opts;
    opts.state_cap = 10;
    ExactEnumerator en(vp, {}, opts);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) en.advance();
        }(),
        StateExplosion);
}

TEST_CASE("enumerated moments match the solved closed forms") {
    // the coupling that the whole checker rests on, spot-checked directly
    for (const auto& name : {"coupon", "square", "sum_rnd_series"}) {
        const CorpusEntry& e = corpus_entry(name);
        ValidatedProgram vp = load_program(e.source);
        AnalysisOptions opts;
        opts.k = 2;
        InvariantReport rep = analyze(vp, opts, e.name);
        ExactEnumerator en(vp, e.default_bindings);
        for (unsigned n = 0; n <= 6; ++n) {
            for (const auto& [m, form] : rep.forms) {
                INFO(e.name << ": E[" << mono_name(vp, m) << "] at n = " << n);
                CHECK(en.moment(m) == form.eval((long long)n, e.default_bindings));
            }
            en.advance();
        }
    }
}
