#pragma once

#include <cmath>
#include <json.hpp>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "simulate.hpp"
#include "solver.hpp"

namespace mominv {

struct CheckOptions {
    enum class Method { Auto, Exact, Simulation };
    Method method = Method::Auto; // Auto: exact when every draw has finite support
    long long enum_n_max = 8;
    size_t state_cap = 1'000'000;
    long long runs = 100'000;
    uint64_t seed = 0x5eed0001u;
    std::vector<long long> checkpoints{1, 2, 5, 10, 25, 50};
    long long n_max = 50;
    double z_max = 4.0;      // simulation: allowed deviation in standard errors
    double abs_floor = 1e-9; // simulation: slack when the standard error is ~0
    unsigned threads = 0;
};

struct CheckItem {
    std::string quantity;
    long long n = 0;
    double expected = 0, observed = 0, tolerance = 0;
    bool pass = true;
};

struct CheckReport {
    std::string method; // "enumeration" or "simulation"
    bool pass = true;
    long long runs = 0; // simulation only
    std::vector<CheckItem> items;
};

inline bool has_finite_support(const ValidatedProgram& vp) { return !vp.has_continuous_draw(); }

// Exact route: the state distribution is enumerated and every solved moment
// must match the closed form as a rational number, with zero tolerance.
inline CheckReport check_exact(const ValidatedProgram& vp, const ClosedFormSet& forms,
                               const Bindings& bind, const CheckOptions& opts = {}) {
    CheckReport rep;
    rep.method = "enumeration";
    ExactEnumerator en(vp, bind, {opts.state_cap});
    for (long long n = 0;; ++n) {
        for (const auto& [mono, form] : forms) {
            Rational expect = form.eval(n, bind);
            Rational got = en.moment(mono);
            CheckItem it;
            it.quantity = "E[" + mono_name(vp, mono) + "]";
            it.n = n;
            it.expected = expect.to_double();
            it.observed = got.to_double();
            it.tolerance = 0;
            it.pass = expect == got;
            rep.pass = rep.pass && it.pass;
            rep.items.push_back(std::move(it));
        }
        if (n == opts.enum_n_max) break;
        en.advance();
    }
    return rep;
}

// Sampling route: the empirical mean must land within z_max standard errors
// of the closed form at every checkpoint.
inline CheckReport check_simulated(const ValidatedProgram& vp, const ClosedFormSet& forms,
                                   const Bindings& bind, const CheckOptions& opts = {}) {
    CheckReport rep;
    rep.method = "simulation";
    rep.runs = opts.runs;
    std::vector<EMonomial> targets;
    for (const auto& [mono, form] : forms) targets.push_back(mono);
    SimOptions so;
    so.runs = opts.runs;
    so.seed = opts.seed;
    so.threads = opts.threads;
    so.checkpoints.clear();
    for (long long n : opts.checkpoints)
        if (n <= opts.n_max) so.checkpoints.push_back(n);
    SimResult sr = simulate(vp, bind, targets, so);
    for (size_t ci = 0; ci < sr.checkpoints.size(); ++ci) {
        long long n = sr.checkpoints[ci];
        for (size_t t = 0; t < targets.size(); ++t) {
            const SimCell& cell = sr.cells[ci][t];
            CheckItem it;
            it.quantity = "E[" + mono_name(vp, targets[t]) + "]";
            it.n = n;
            it.expected = forms.at(targets[t]).eval(n, bind).to_double();
            it.observed = cell.mean;
            it.tolerance = opts.z_max * cell.stderr_ + opts.abs_floor;
            it.pass = std::abs(it.observed - it.expected) <= it.tolerance;
            rep.pass = rep.pass && it.pass;
            rep.items.push_back(std::move(it));
        }
    }
    return rep;
}

inline CheckReport check_invariants(const ValidatedProgram& vp, const ClosedFormSet& forms,
                                    const Bindings& bind, const CheckOptions& opts = {}) {
    bool exact = opts.method == CheckOptions::Method::Exact ||
                 (opts.method == CheckOptions::Method::Auto && has_finite_support(vp));
    return exact ? check_exact(vp, forms, bind, opts) : check_simulated(vp, forms, bind, opts);
}

inline nlohmann::json check_to_json(const CheckReport& rep) {
    nlohmann::json j;
    j["method"] = rep.method;
    j["pass"] = rep.pass;
    if (rep.method == "simulation") j["runs"] = rep.runs;
    j["items"] = nlohmann::json::array();
    for (const auto& it : rep.items) {
        nlohmann::json ji;
        ji["quantity"] = it.quantity;
        ji["n"] = it.n;
        ji["expected"] = it.expected;
        ji["observed"] = it.observed;
        ji["tolerance"] = it.tolerance;
        ji["pass"] = it.pass;
        j["items"].push_back(std::move(ji));
    }
    return j;
}

inline std::string check_summary(const CheckReport& rep) {
    std::ostringstream out;
    size_t failed = 0;
    for (const auto& it : rep.items)
        if (!it.pass) ++failed;
    out << rep.method << ": " << rep.items.size() - failed << "/" << rep.items.size()
        << " comparisons passed";
    if (failed) {
        out << "\n";
        for (const auto& it : rep.items)
            if (!it.pass)
                out << "  MISMATCH " << it.quantity << " at n=" << it.n << ": closed form "
                    << it.expected << ", oracle " << it.observed << " (tolerance " << it.tolerance
                    << ")\n";
    }
    return out.str();
}

} // namespace mominv
