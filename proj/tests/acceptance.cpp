// End-to-end acceptance gate. Each numbered criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any of them fails.
//
//   1. the documented benchmark moments are reproduced symbolically, and the
//      whole benchmark run stays under a minute
//   2. the two programs whose documented rows disagreed with independent
//      derivation are settled against oracles (exact enumeration, sampling)
//   3. on every finite-support corpus program the closed forms match exact
//      enumeration for all n <= 8, as rational numbers
//   4. on the continuous-draw programs every solved moment sits inside a
//      4-standard-error band of a 10^5-run simulation at n in {1, 5, 10, 25}
//   5. the monomial closure never exceeds its degree-product size bound and
//      every recurrence descends strictly in the sigma order
//   6. property suites: recurrence residuals under random parameter bindings,
//      randomized first-order solving vs direct unrolling, distribution
//      sampling vs exact raw moments, central moment 2 == variance, and a
//      mutation check that corrupted forms are actually rejected

#include <mominv/mominv.hpp>

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

using namespace mominv;

namespace {

RatFunc rf(long long n, long long d = 1) { return RatFunc(Rational(n, d)); }

CFinite poly_form(std::vector<RatFunc> coeffs) {
    return CFinite::polynomial(NPoly::from_coeffs(std::move(coeffs)));
}

CFinite prefixed_poly(std::vector<RatFunc> coeffs, std::vector<RatFunc> prefix) {
    unsigned v = unsigned(prefix.size());
    return CFinite({{RatFunc(1), NPoly::from_coeffs(std::move(coeffs))}}, v, std::move(prefix));
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

InvariantReport analyzed(const std::string& name, unsigned k, bool extras = false) {
    ValidatedProgram vp = load_program(corpus_entry(name).source);
    AnalysisOptions opts;
    opts.k = k;
    if (extras) {
        opts.variance = true;
        if (name == "stuttering_a") opts.covariances = {{"x", "y"}};
    }
    return analyze(vp, opts, name);
}

// --- criterion 1 -----------------------------------------------------------

Outcome criterion_benchmarks() {
    auto t0 = std::chrono::steady_clock::now();
    size_t total = 0, bad = 0;
    std::ostringstream mism;

    auto expect_form = [&](const CFinite& got, const CFinite& want, const std::string& label) {
        ++total;
        if (!equivalent(got, want)) {
            ++bad;
            mism << "  " << label << ": got " << got.str() << ", want " << want.str() << "\n";
        }
    };
    auto raw = [](const InvariantReport& rep, const std::string& var, unsigned j) {
        return raw_form(rep.forms, unit_monomial(rep.vp, rep.vp.index_of(var), j));
    };

    {
        InvariantReport rep = analyzed("coupon", 2);
        CFinite hit = poly_form({rf(1)}) + CFinite::geometric(rf(1, 2), NPoly(rf(-1)));
        expect_form(raw(rep, "c", 1), hit, "coupon E[c]");
        expect_form(raw(rep, "c", 2), hit, "coupon E[c^2]");
    }
    {
        InvariantReport rep = analyzed("random_walk_1d_cts", 3);
        expect_form(raw(rep, "x", 1), poly_form({rf(0), rf(1, 5)}), "random_walk_1d_cts E[x]");
        expect_form(raw(rep, "x", 2), poly_form({rf(0), rf(22, 75), rf(1, 25)}),
                    "random_walk_1d_cts E[x^2]");
        expect_form(raw(rep, "x", 3), poly_form({rf(0), rf(-21, 250), rf(22, 125), rf(1, 125)}),
                    "random_walk_1d_cts E[x^3]");
    }
    {
        InvariantReport rep = analyzed("sum_rnd_series", 3);
        expect_form(raw(rep, "x", 1), poly_form({rf(0), rf(1, 4), rf(1, 4)}), "sum_rnd_series E[x]");
        expect_form(raw(rep, "x", 2), poly_form({rf(0), rf(1, 24), rf(3, 16), rf(5, 24), rf(1, 16)}),
                    "sum_rnd_series E[x^2]");
        expect_form(raw(rep, "x", 3),
                    poly_form({rf(0), rf(0), rf(1, 32), rf(9, 64), rf(13, 64), rf(7, 64), rf(1, 64)}),
                    "sum_rnd_series E[x^3]");
    }
    {
        InvariantReport rep = analyzed("product_dep_var", 3);
        expect_form(raw(rep, "p", 1), poly_form({rf(0), rf(-1, 4), rf(1, 4)}), "product_dep_var E[p]");
        expect_form(raw(rep, "p", 2),
                    poly_form({rf(0), rf(-1, 8), rf(3, 16), rf(-1, 8), rf(1, 16)}),
                    "product_dep_var E[p^2]");
        expect_form(raw(rep, "p", 3),
                    poly_form({rf(0), rf(-1, 4), rf(15, 32), rf(-21, 64), rf(9, 64), rf(-3, 64),
                               rf(1, 64)}),
                    "product_dep_var E[p^3]");
    }
    {
        InvariantReport rep = analyzed("random_walk_2d", 3);
        expect_form(raw(rep, "x", 1), CFinite(), "random_walk_2d E[x]");
        expect_form(raw(rep, "x", 2), poly_form({rf(0), rf(1, 2)}), "random_walk_2d E[x^2]");
        expect_form(raw(rep, "x", 3), CFinite(), "random_walk_2d E[x^3]");
    }
    {
        InvariantReport rep = analyzed("binomial", 3);
        RatFunc p = RatFunc::symbol("p");
        expect_form(raw(rep, "x", 1), poly_form({rf(0), p}), "binomial E[x]");
        expect_form(raw(rep, "x", 2), poly_form({rf(0), p - p * p, p * p}), "binomial E[x^2]");
        expect_form(raw(rep, "x", 3),
                    poly_form({rf(0), rf(2) * p.pow(3) - rf(3) * p * p + p,
                               rf(3) * p * p - rf(3) * p.pow(3), p.pow(3)}),
                    "binomial E[x^3]");
    }
    {
        InvariantReport rep = analyzed("square", 3);
        expect_form(raw(rep, "y", 1), prefixed_poly({rf(0), rf(1), rf(1)}, {rf(1)}), "square E[y]");
        expect_form(raw(rep, "y", 2),
                    prefixed_poly({rf(0), rf(-2), rf(3), rf(6), rf(1)}, {rf(1)}), "square E[y^2]");
        expect_form(raw(rep, "y", 3),
                    prefixed_poly({rf(0), rf(16), rf(-30), rf(-15), rf(45), rf(15), rf(1)}, {rf(1)}),
                    "square E[y^3]");
    }
    {
        InvariantReport rep = analyzed("stuttering_p", 1);
        RatFunc p = RatFunc::symbol("p");
        expect_form(raw(rep, "s", 1), poly_form({rf(0), rf(3) * p}), "stuttering_p E[s]");
    }
    {
        InvariantReport rep = analyzed("stuttering_a", 2, true);
        RatFunc d2 = RatFunc::symbol("d") * RatFunc::symbol("d");
        RatFunc disp = rf(5, 4) * d2 + rf(27, 16); // (20d^2 + 27)/16
        expect_form(raw(rep, "s", 1), poly_form({rf(0), rf(9, 4)}), "stuttering_a E[s]");
        expect_form(raw(rep, "s", 2), poly_form({rf(0), disp, rf(81, 16)}), "stuttering_a E[s^2]");
        expect_form(variance(rep.forms, rep.vp, rep.vp.index_of("s")), poly_form({rf(0), disp}),
                    "stuttering_a Var(s)");
        expect_form(raw(rep, "x", 1), poly_form({rf(-1), rf(3, 4)}), "stuttering_a E[x]");
        expect_form(raw(rep, "y", 1), poly_form({rf(1), rf(3, 2)}), "stuttering_a E[y]");
        expect_form(raw(rep, "x", 2),
                    poly_form({rf(1), rf(1, 4) * d2 - rf(21, 16), rf(9, 16)}), "stuttering_a E[x^2]");
        EMonomial xy(rep.vp.vars.size(), 0);
        xy[rep.vp.index_of("x")] = 1;
        xy[rep.vp.index_of("y")] = 1;
        expect_form(raw_form(rep.forms, xy), poly_form({rf(-1), rf(-3, 8), rf(9, 8)}),
                    "stuttering_a E[xy]");
    }

    // the full benchmark set again, timed: every program, third moments plus
    // variances, as the bench subcommand runs them
    for (const auto& e : corpus()) analyzed(e.name, 3, true);

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << (total - bad) << "/" << total << " documented forms reproduced, " << secs << "s";
    if (secs >= 60.0) d << " (over the 60s budget)";
    if (bad) d << "\n" << mism.str();
    return {bad == 0 && secs < 60.0, d.str()};
}

// --- criterion 2 -----------------------------------------------------------

Outcome criterion_disputed_rows() {
    std::ostringstream d;
    bool pass = true;

    {
        // four-sided collector: the documented rows are unreliable at every
        // order, so all moments up to order 3 are settled by enumeration
        InvariantReport rep = analyzed("coupon4", 3);
        CheckOptions opts;
        opts.enum_n_max = 8;
        CheckReport r = check_exact(rep.vp, rep.forms, {}, opts);
        pass = pass && r.pass;
        d << "coupon4 exact " << r.items.size() << " comparisons";
        if (!r.pass) d << " (FAILED)";
    }
    for (Rational p : {Rational(1, 4), Rational(1, 2)}) {
        // stuttering_p second and third moments of s
        InvariantReport rep = analyzed("stuttering_p", 3);
        CheckOptions opts;
        opts.runs = 100'000;
        opts.z_max = 4.0;
        CheckReport r = check_simulated(rep.vp, rep.forms, {{"p", p}}, opts);
        pass = pass && r.pass;
        d << "; stuttering_p p=" << p.str() << " simulated " << r.items.size() << " comparisons";
        if (!r.pass) d << " (FAILED)";
    }
    return {pass, d.str()};
}

// --- criterion 3 -----------------------------------------------------------

Outcome criterion_exact_oracle() {
    size_t programs = 0, comparisons = 0;
    bool pass = true;
    std::ostringstream bad;
    for (const auto& e : corpus()) {
        ValidatedProgram vp = load_program(e.source);
        if (!has_finite_support(vp)) continue;
        InvariantReport rep = analyzed(e.name, 3);
        CheckOptions opts;
        opts.enum_n_max = 8;
        CheckReport r = check_exact(rep.vp, rep.forms, e.default_bindings, opts);
        ++programs;
        comparisons += r.items.size();
        if (!r.pass) {
            pass = false;
            bad << "  " << e.name << ":\n" << check_summary(r) << "\n";
        }
    }
    std::ostringstream d;
    d << programs << " finite-support programs, " << comparisons
      << " rational comparisons at n <= 8";
    if (!pass) d << "\n" << bad.str();
    return {pass, d.str()};
}

// --- criterion 4 -----------------------------------------------------------

Outcome criterion_simulation_bands() {
    bool pass = true;
    std::ostringstream d;
    bool first = true;
    for (const auto& name : {"random_walk_1d_cts", "stuttering_a", "stuttering_p"}) {
        InvariantReport rep = analyzed(name, 3);
        CheckOptions opts;
        opts.runs = 100'000;
        opts.z_max = 4.0;
        opts.checkpoints = {1, 5, 10, 25};
        CheckReport r =
            check_simulated(rep.vp, rep.forms, corpus_entry(name).default_bindings, opts);
        pass = pass && r.pass;
        d << (first ? "" : "; ") << name << " " << r.items.size() << " bands";
        if (!r.pass) d << " (FAILED)";
        first = false;
    }
    return {pass, d.str()};
}

// --- criterion 5 -----------------------------------------------------------

Outcome criterion_closure_bound() {
    bool pass = true;
    std::ostringstream d, bad;
    size_t programs = 0;
    for (const auto& e : corpus()) {
        ValidatedProgram vp = load_program(e.source);
        std::vector<EMonomial> targets;
        for (size_t v = 0; v < vp.vars.size(); ++v)
            for (unsigned j = 1; j <= 3; ++j) targets.push_back(unit_monomial(vp, v, j));
        try {
            RecurrenceSystem sys = build_system(vp, targets);
            unsigned long long bound = degree_product_bound(vp, 3);
            SigmaLess lt;
            bool descend = true;
            for (const auto& row : sys.rows)
                for (const auto& [N, c] : row.lin) descend = descend && lt(N, row.target);
            if (sys.processed > bound || !descend) {
                pass = false;
                bad << "  " << e.name << ": processed " << sys.processed << ", bound " << bound
                    << (descend ? "" : ", descent violated") << "\n";
            }
        } catch (const OrderingViolation& ex) {
            pass = false;
            bad << "  " << e.name << ": " << ex.what() << "\n";
        }
        ++programs;
    }
    d << programs << " programs at order 3 within the degree-product bound";
    if (!pass) d << "\n" << bad.str();
    return {pass, d.str()};
}

// --- criterion 6 -----------------------------------------------------------

bool residuals_hold(std::ostringstream& bad) {
    std::mt19937_64 rng(0xACCE91ull);
    auto rnd = [&] { return Rational(1 + (long long)(rng() % 6), 7); };
    bool ok = true;
    for (const auto& e : corpus()) {
        InvariantReport rep = analyzed(e.name, 3);
        for (int trial = 0; trial < 3; ++trial) {
            Bindings b;
            for (const auto& p : rep.vp.params) b[p] = rnd();
            for (const auto& row : rep.system.rows) {
                const CFinite& x = rep.forms.at(row.target);
                if (!(x.eval(0, b) == row.init.eval(b))) ok = false;
                for (long long n = 0; n <= 15; ++n) {
                    Rational rhs = row.self_coeff.eval(b) * x.eval(n, b) + row.constant.eval(b);
                    for (const auto& [N, c] : row.lin)
                        rhs = rhs + c.eval(b) * rep.forms.at(N).eval(n, b);
                    if (!(x.eval(n + 1, b) == rhs)) {
                        ok = false;
                        bad << "  residual: " << e.name << " " << recurrence_str(rep.vp, row)
                            << " at n=" << n << "\n";
                    }
                }
            }
        }
    }
    return ok;
}

bool random_first_order_holds(std::ostringstream& bad) {
    std::mt19937_64 rng(0xACCE92ull);
    auto pick = [&](int lo, int hi) {
        return lo + (long long)(rng() % (unsigned long long)(hi - lo + 1));
    };
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        RatFunc c = rf(pick(-4, 4), pick(1, 3));
        std::vector<CTerm> terms;
        for (long long t = 0, nt = pick(1, 3); t < nt; ++t) {
            std::vector<RatFunc> coeffs;
            for (long long j = 0, dg = pick(0, 2); j <= dg; ++j)
                coeffs.push_back(rf(pick(-5, 5), pick(1, 2)));
            terms.push_back({rf(pick(1, 5), pick(1, 2)), NPoly::from_coeffs(std::move(coeffs))});
        }
        CFinite gamma(std::move(terms), 0, {});
        RatFunc x0 = rf(pick(-3, 3));
        CFinite x = solve_first_order(c, gamma, x0);
        RatFunc truth = x0;
        for (unsigned n = 0; n <= 15; ++n) {
            if (!(x.value_at(n) == truth)) {
                ok = false;
                bad << "  first-order trial " << trial << " diverges at n=" << n << "\n";
                break;
            }
            truth = c * truth + gamma.value_at(n);
        }
    }
    return ok;
}

bool sampling_matches_moments(std::ostringstream& bad) {
    std::vector<std::pair<std::string, DistSpec>> dists;
    dists.emplace_back("u(0,1)", Uniform{rf(0), rf(1)});
    dists.emplace_back("u(-1,2)", Uniform{rf(-1), rf(2)});
    dists.emplace_back("g(0,1)", Normal{rf(0), rf(1)});
    dists.emplace_back("g(2,3)", Normal{rf(2), rf(3)});
    dists.emplace_back("b(1/3)", BernoulliDist{rf(1, 3)});
    DiscreteFinite fin;
    fin.outcomes = {{rf(0), rf(1, 2)}, {rf(3), rf(1, 4)}, {rf(-2), rf(1, 4)}};
    dists.emplace_back("d(0,3,-2)", fin);

    bool ok = true;
    Rng rng(0xACCE93ull);
    const long long N = 200'000;
    for (const auto& [label, spec] : dists) {
        std::vector<double> draws((size_t)N);
        for (auto& v : draws) v = sample(spec, {}, rng);
        for (unsigned k = 1; k <= 4; ++k) {
            double s = 0, s2 = 0;
            for (double v : draws) {
                double vk = std::pow(v, (double)k);
                s += vk;
                s2 += vk * vk;
            }
            double mean = s / double(N);
            double se = std::sqrt(std::max(0.0, s2 / double(N) - mean * mean) / double(N));
            double exact = raw_moment(spec, k).eval({}).to_double();
            if (std::abs(mean - exact) > 5.0 * se + 1e-9) {
                ok = false;
                bad << "  sampling: " << label << " moment " << k << " off: " << mean << " vs "
                    << exact << " (se " << se << ")\n";
            }
        }
    }
    return ok;
}

bool central_equals_variance(std::ostringstream& bad) {
    bool ok = true;
    for (const auto& e : corpus()) {
        InvariantReport rep = analyzed(e.name, 2);
        for (size_t i = 0; i < rep.vp.vars.size(); ++i)
            if (!equivalent(central_moment(rep.forms, rep.vp, i, 2),
                            variance(rep.forms, rep.vp, i))) {
                ok = false;
                bad << "  central/variance disagree: " << e.name << " " << rep.vp.vars[i] << "\n";
            }
    }
    return ok;
}

bool mutations_are_caught(std::ostringstream& bad) {
    InvariantReport rep = analyzed("coupon", 2);
    CheckOptions opts;
    opts.enum_n_max = 6;
    if (!check_exact(rep.vp, rep.forms, {}, opts).pass) {
        bad << "  mutation: pristine forms were rejected\n";
        return false;
    }
    EMonomial c = unit_monomial(rep.vp, rep.vp.index_of("c"));
    bool ok = true;

    ClosedFormSet drift = rep.forms;
    drift.at(c) = drift.at(c) + poly_form({rf(0), rf(1, 1000)});
    if (check_exact(rep.vp, drift, {}, opts).pass) {
        ok = false;
        bad << "  mutation: polynomial drift went unnoticed\n";
    }
    ClosedFormSet wrong_base = rep.forms;
    wrong_base.at(c) = poly_form({rf(1)}) + CFinite::geometric(rf(1, 3), NPoly(rf(-1)));
    if (check_exact(rep.vp, wrong_base, {}, opts).pass) {
        ok = false;
        bad << "  mutation: wrong decay base went unnoticed\n";
    }
    return ok;
}

Outcome criterion_properties() {
    std::ostringstream bad;
    bool residual = residuals_hold(bad);
    bool first_order = random_first_order_holds(bad);
    bool sampling = sampling_matches_moments(bad);
    bool central = central_equals_variance(bad);
    bool mutation = mutations_are_caught(bad);
    std::ostringstream d;
    auto tag = [](bool b) { return b ? "ok" : "FAILED"; };
    d << "residuals " << tag(residual) << ", first-order " << tag(first_order) << ", sampling "
      << tag(sampling) << ", central-vs-variance " << tag(central) << ", mutation "
      << tag(mutation);
    bool pass = residual && first_order && sampling && central && mutation;
    if (!pass) d << "\n" << bad.str();
    return {pass, d.str()};
}

} // namespace

int main() {
    struct Criterion {
        const char* title;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"benchmark closed forms reproduced symbolically", criterion_benchmarks},
        {"disputed benchmark rows settled against oracles", criterion_disputed_rows},
        {"finite-support programs match exact enumeration", criterion_exact_oracle},
        {"continuous programs inside simulation error bands", criterion_simulation_bands},
        {"monomial closure bounded and strictly descending", criterion_closure_bound},
        {"property suites hold", criterion_properties},
    };

    int failures = 0;
    int idx = 0;
    for (const auto& c : criteria) {
        ++idx;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << idx << ". " << c.title << " ("
                  << o.detail << ")\n";
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures ? 1 : 0;
}
