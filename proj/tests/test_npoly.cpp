#include <catch2/catch_amalgamated.hpp>
#include <mominv/cfinite.hpp>

using namespace mominv;

static NPoly npoly(std::vector<long long> ascending) {
    std::vector<RatFunc> cs;
    for (long long c : ascending) cs.emplace_back(c);
    return NPoly::from_coeffs(std::move(cs));
}

TEST_CASE("npoly basics") {
    NPoly p = npoly({1, 0, 3}); // 3n^2 + 1
    CHECK(p.degree() == 2);
    CHECK(p.str() == "3*n^2 + 1");
    CHECK(NPoly().is_zero());
    CHECK(NPoly().degree() == -1);
    CHECK(npoly({0, 1}).str() == "n");
    CHECK((p + npoly({-1, 0, -3})).is_zero());
    CHECK((npoly({0, 1}) * npoly({0, 1})).str() == "n^2");
    CHECK(p.eval_sym(Rational(2)) == RatFunc(13));
    CHECK(p.eval(Rational(2), {}) == Rational(13));
}

TEST_CASE("npoly shift in n") {
    NPoly p = npoly({0, 0, 1}); // n^2
    CHECK(p.shifted_n(1).str() == "n^2 + 2*n + 1");
    CHECK(p.shifted_n(-1).str() == "n^2 - 2*n + 1");
    NPoly q = npoly({5, -2, 0, 1}); // n^3 - 2n + 5
    // shifting forth and back is the identity
    CHECK(q.shifted_n(3).shifted_n(-3) == q);
    // pointwise agreement with direct evaluation
    for (long long n = 0; n <= 6; ++n)
        CHECK(q.shifted_n(2).eval(Rational(n), {}) == q.eval(Rational(n + 2), {}));
}

TEST_CASE("closed forms canonicalize") {
    // equal bases merge
    CFinite a({{RatFunc(Rational(1, 2)), npoly({1})}, {RatFunc(Rational(1, 2)), npoly({2})}}, 0, {});
    REQUIRE(a.terms().size() == 1);
    CHECK(a.terms()[0].poly.str() == "3");
    // zero polynomials disappear
    CFinite z({{RatFunc(2), NPoly()}}, 0, {});
    CHECK(z.is_zero());
    // base-1 term sorts first
    CFinite s({{RatFunc(2), npoly({1})}, {RatFunc(1), npoly({0, 1})}}, 0, {});
    CHECK(s.terms()[0].base.is_one());
}

TEST_CASE("prefix shrinks when the term sum already matches") {
    // prefix value 0 at n=0 equals the term sum 0 of poly n: validity drops to 0
    CFinite f({{RatFunc(1), npoly({0, 1})}}, 1, {RatFunc(0)});
    CHECK(f.validity_start() == 0);
    // genuine prefix stays
    CFinite g({{RatFunc(1), npoly({0, 1})}}, 1, {RatFunc(7)});
    CHECK(g.validity_start() == 1);
    CHECK(g.value_at(0) == RatFunc(7));
    CHECK(g.value_at(3) == RatFunc(3));
}

TEST_CASE("closed form evaluation") {
    // 1 - (1/2)^n
    CFinite f = CFinite::constant(RatFunc(1)) +
                CFinite::geometric(RatFunc(Rational(1, 2)), npoly({-1}));
    CHECK(f.eval(0, {}) == Rational(0));
    CHECK(f.eval(3, {}) == Rational(7, 8));
    CHECK(f.eval(10, {}) == Rational(1023, 1024));
}

TEST_CASE("closed form arithmetic keeps prefixes consistent") {
    CFinite g({{RatFunc(1), npoly({0, 1})}}, 1, {RatFunc(7)}); // 7, then n
    CFinite h = CFinite::constant(RatFunc(1));
    CFinite sum = g + h;
    CHECK(sum.validity_start() == 1);
    CHECK(sum.eval(0, {}) == Rational(8));
    CHECK(sum.eval(4, {}) == Rational(5));
    CFinite prod = g * g;
    CHECK(prod.eval(0, {}) == Rational(49));
    CHECK(prod.eval(5, {}) == Rational(25));
    CFinite diff = g - g;
    for (long long n = 0; n < 4; ++n) CHECK(diff.eval(n, {}) == Rational(0));
}

TEST_CASE("closed form shift") {
    // f(n) = n*2^n shifted by 2: (n+2)*2^(n+2) = 4*(n+2)*2^n
    CFinite f = CFinite::geometric(RatFunc(2), npoly({0, 1}));
    CFinite sh = f.shifted(2);
    for (long long n = 0; n <= 5; ++n) CHECK(sh.eval(n, {}) == f.eval(n + 2, {}));
}

TEST_CASE("closed form rendering") {
    CHECK(CFinite::constant(RatFunc(Rational(3, 4))).str() == "3/4");
    CHECK(CFinite().str() == "0");
    CFinite geo = CFinite::constant(RatFunc(1)) +
                  CFinite::geometric(RatFunc(Rational(1, 2)), npoly({-1}));
    CHECK(geo.str() == "1 - (1/2)^n");
    CFinite mix = CFinite::polynomial(npoly({0, 0, 1})) +
                  CFinite::geometric(RatFunc(3), npoly({2}));
    CHECK(mix.str() == "n^2 + 2*3^n");
    CFinite pol = CFinite::geometric(RatFunc(2), npoly({1, 1}));
    CHECK(pol.str() == "(n + 1)*2^n");
}

TEST_CASE("closed form equivalence is structural up to base equality") {
    CFinite a = CFinite::geometric(RatFunc(Rational(1, 2)), npoly({1}));
    // same base written as a ratio of polynomials in a parameter
    RatFunc half = RatFunc::symbol("q") / (RatFunc::symbol("q") * RatFunc(2));
    CFinite b = CFinite::geometric(half, npoly({1}));
    CHECK(equivalent(a, b));
    CHECK_FALSE(equivalent(a, CFinite::geometric(RatFunc(Rational(1, 3)), npoly({1}))));
    CHECK_FALSE(equivalent(a, a + CFinite::constant(RatFunc(1))));
}

TEST_CASE("symbolic denominators are reported as side conditions") {
    RatFunc r = RatFunc(1) / (RatFunc::symbol("p") - RatFunc(1));
    CFinite f = CFinite::constant(r);
    std::set<std::string> dens;
    f.collect_denominators(dens);
    REQUIRE(dens.size() == 1);
    CHECK(*dens.begin() == "p - 1");
}
