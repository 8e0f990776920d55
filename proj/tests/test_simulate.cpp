#include <catch2/catch_amalgamated.hpp>
#include <mominv/mominv.hpp>

using namespace mominv;

static SimResult run_sim(const std::string& name, const SimOptions& opts) {
    const CorpusEntry& e = corpus_entry(name);
    ValidatedProgram vp = load_program(e.source);
    std::vector<EMonomial> targets;
    for (size_t v = 0; v < vp.vars.size(); ++v) {
        targets.push_back(unit_monomial(vp, v));
        targets.push_back(unit_monomial(vp, v, 2));
    }
    return simulate(vp, e.default_bindings, targets, opts);
}

TEST_CASE("estimates land inside wide error bands") {
    SimOptions opts;
    opts.runs = 40'000;
    opts.checkpoints = {1, 10, 25};
    SimResult res = run_sim("binomial", opts);
    ValidatedProgram vp = load_program(corpus_entry("binomial").source);
    AnalysisOptions aopts;
    aopts.k = 2;
    InvariantReport rep = analyze(vp, aopts);
    for (size_t ci = 0; ci < res.checkpoints.size(); ++ci)
        for (size_t t = 0; t < res.targets.size(); ++t) {
            double expect = raw_form(rep.forms, res.targets[t])
                                .eval(res.checkpoints[ci], {{"p", Rational(1, 2)}})
                                .to_double();
            const SimCell& c = res.cells[ci][t];
            INFO("E[" << mono_name(vp, res.targets[t]) << "] at n = " << res.checkpoints[ci]);
            CHECK(std::abs(c.mean - expect) <= 6.0 * c.stderr_ + 1e-9);
        }
}

TEST_CASE("results are bit-identical across thread counts") {
    SimOptions one;
    one.runs = 8'000;
    one.checkpoints = {1, 7, 20};
    one.threads = 1;
    SimOptions four = one;
    four.threads = 4;
    for (const auto& name : {"random_walk_1d_cts", "stuttering_a", "coupon"}) {
        INFO(name);
        SimResult a = run_sim(name, one);
        SimResult b = run_sim(name, four);
        REQUIRE(a.cells.size() == b.cells.size());
        for (size_t ci = 0; ci < a.cells.size(); ++ci)
            for (size_t t = 0; t < a.cells[ci].size(); ++t) {
                CHECK(a.cells[ci][t].mean == b.cells[ci][t].mean);
                CHECK(a.cells[ci][t].stderr_ == b.cells[ci][t].stderr_);
            }
    }
}

TEST_CASE("the seed changes the stream, rerunning does not") {
    SimOptions opts;
    opts.runs = 4'000;
    opts.checkpoints = {10};
    SimResult a = run_sim("random_walk_2d", opts);
    SimResult b = run_sim("random_walk_2d", opts);
    CHECK(a.cells[0][1].mean == b.cells[0][1].mean);
    opts.seed = 0xfeedf00dull;
    SimResult c = run_sim("random_walk_2d", opts);
    CHECK(a.cells[0][1].mean != c.cells[0][1].mean); // the estimate moves with the seed
}

TEST_CASE("checkpoint zero reports the initial distribution") {
    SimOptions opts;
    opts.runs = 2'000;
    opts.checkpoints = {0, 3};
    SimResult res = run_sim("stuttering_a", opts); // x(0) = -1, y(0) = 1, s(0) = 0
    ValidatedProgram vp = load_program(corpus_entry("stuttering_a").source);
    auto cell = [&](size_t ci, const std::string& var, unsigned e) {
        EMonomial m = unit_monomial(vp, vp.index_of(var), e);
        for (size_t t = 0; t < res.targets.size(); ++t)
            if (res.targets[t] == m) return res.cells[ci][t];
        throw std::runtime_error("target not found");
    };
    CHECK(cell(0, "x", 1).mean == -1.0);
    CHECK(cell(0, "x", 1).stderr_ == 0.0);
    CHECK(cell(0, "y", 2).mean == 1.0);
    CHECK(cell(0, "s", 1).mean == 0.0);
}

TEST_CASE("checkpoints are sorted and deduplicated") {
    SimOptions opts;
    opts.runs = 1'000;
    opts.checkpoints = {5, 1, 5, 2};
    SimResult res = run_sim("binomial", opts);
    CHECK(res.checkpoints == std::vector<long long>{1, 2, 5});
    SimOptions bad = opts;
    bad.checkpoints = {-1, 3};
    CHECK_THROWS_AS(run_sim("binomial", bad), Error);
}

TEST_CASE("degenerate and invalid numeric parameters") {
    ValidatedProgram vp = load_program(corpus_entry("binomial").source);
    SimOptions opts;
    opts.runs = 500;
    opts.checkpoints = {4};
    // p = 1 drains all randomness: every run ends at x = 4
    SimResult res = simulate(vp, {{"p", Rational(1)}}, {unit_monomial(vp, 0)}, opts);
    CHECK(res.cells[0][0].mean == 4.0);
    CHECK(res.cells[0][0].stderr_ == 0.0);
    CHECK_THROWS_AS(simulate(vp, {{"p", Rational(2)}}, {unit_monomial(vp, 0)}, opts), ModelError);

    ValidatedProgram gauss = load_program("x := 0\nwhile true:\n    x := x + g(0, v)\n");
    CHECK_THROWS_AS(simulate(gauss, {{"v", Rational(-1)}}, {unit_monomial(gauss, 0)}, opts),
                    InvalidSupport);
}
