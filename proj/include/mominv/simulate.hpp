#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "engine.hpp"

namespace mominv {

struct SimOptions {
    long long runs = 100'000;
    uint64_t seed = 0x5eed0001u;
    std::vector<long long> checkpoints{1, 2, 5, 10, 25, 50};
    unsigned threads = 0; // 0 = hardware default, still capped by MOMENT_INVAR_THREADS
};

struct SimCell {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct SimResult {
    std::vector<long long> checkpoints;
    std::vector<EMonomial> targets;
    std::vector<std::vector<SimCell>> cells; // [checkpoint][target]
    long long runs = 0;
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline double powi(double base, unsigned e) {
    double acc = 1.0;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

struct CompiledDist {
    enum class K { Uniform, Normal, Bernoulli, Discrete } k = K::Uniform;
    double a = 0, b = 0; // uniform lo/hi, normal mean/sd, bernoulli p in a
    std::vector<std::pair<double, double>> cum; // discrete: (cumulative prob, value)

    double sample(Rng& rng) const {
        switch (k) {
        case K::Uniform: return a + (b - a) * rng.unit();
        case K::Normal: return a + b * rng.normal();
        case K::Bernoulli: return rng.unit() < a ? 1.0 : 0.0;
        case K::Discrete: {
            double r = rng.unit();
            for (const auto& [cp, v] : cum)
                if (r < cp) return v;
            return cum.back().second;
        }
        }
        return 0.0;
    }
};

inline CompiledDist compile_dist(const DistSpec& d, const Bindings& bind) {
    CompiledDist out;
    if (auto* u = std::get_if<Uniform>(&d)) {
        out.k = CompiledDist::K::Uniform;
        out.a = u->a.eval(bind).to_double();
        out.b = u->b.eval(bind).to_double();
    } else if (auto* g = std::get_if<Normal>(&d)) {
        Rational var = g->variance.eval(bind);
        if (var.sign() < 0) throw InvalidSupport("normal variance " + var.str() + " is negative");
        out.k = CompiledDist::K::Normal;
        out.a = g->mean.eval(bind).to_double();
        out.b = std::sqrt(var.to_double());
    } else if (auto* be = std::get_if<BernoulliDist>(&d)) {
        Rational p = be->p.eval(bind);
        if (p.sign() < 0 || p > Rational(1))
            throw InvalidSupport("bernoulli parameter " + p.str() + " is outside [0, 1]");
        out.k = CompiledDist::K::Bernoulli;
        out.a = p.to_double();
    } else {
        const auto& fs = std::get<DiscreteFinite>(d);
        out.k = CompiledDist::K::Discrete;
        Rational total;
        double acc = 0;
        for (const auto& [ve, pe] : fs.outcomes) {
            Rational p = pe.eval(bind);
            if (p.sign() < 0) throw InvalidSupport("negative outcome probability " + p.str());
            total = total + p;
            acc += p.to_double();
            out.cum.emplace_back(acc, ve.eval(bind).to_double());
        }
        if (!(total == Rational(1)))
            throw InvalidSupport("outcome probabilities sum to " + total.str() + ", not 1");
        out.cum.back().first = 1.0; // guard against rounding in the running sum
    }
    return out;
}

struct NumTerm {
    double coeff = 0;
    std::vector<std::pair<int, unsigned>> vars;  // variable slot, exponent
    std::vector<std::pair<int, unsigned>> draws; // draw id, exponent
};

struct NumPoly {
    std::vector<NumTerm> terms;
    std::vector<int> draw_ids; // distinct, ascending: the sampling order

    double eval(const std::vector<double>& working, const std::vector<double>& draw_vals) const {
        double acc = 0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (auto [slot, e] : t.vars) v *= powi(working[size_t(slot)], e);
            for (auto [id, e] : t.draws) v *= powi(draw_vals[size_t(id)], e);
            acc += v;
        }
        return acc;
    }
};

inline NumPoly compile_poly(const EnginePoly& p, const Bindings& bind) {
    NumPoly out;
    std::set<int> ids;
    p.for_each([&](const EngineMono& m, const RatFunc& c) {
        NumTerm t;
        t.coeff = c.eval(bind).to_double();
        for (const auto& [atom, e] : m) {
            if (atom.kind == Atom::Kind::Draw) {
                t.draws.emplace_back(atom.id, e);
                ids.insert(atom.id);
            } else {
                t.vars.emplace_back(atom.id, e);
            }
        }
        out.terms.push_back(std::move(t));
    });
    out.draw_ids.assign(ids.begin(), ids.end());
    return out;
}

struct NumUpdate {
    size_t var = 0;
    bool probabilistic = false;
    double p = 1.0;
    NumPoly rhs_true, rhs_false;
};

struct NumericProgram {
    size_t nvars = 0;
    std::vector<std::pair<size_t, NumPoly>> inits;
    std::vector<NumUpdate> updates;
    std::vector<CompiledDist> dists; // indexed by draw id

    NumericProgram(const ValidatedProgram& vp, const Bindings& bind) {
        nvars = vp.vars.size();
        int max_id = -1;
        for (const auto& [id, spec] : vp.draws) max_id = std::max(max_id, id);
        dists.resize(size_t(max_id + 1));
        for (const auto& [id, spec] : vp.draws) dists[size_t(id)] = compile_dist(spec, bind);
        for (const auto& init : vp.inits)
            inits.emplace_back(init.var, compile_poly(init.value, bind));
        for (const auto& u : vp.updates) {
            NumUpdate nu;
            nu.var = vp.index_of(u.var);
            nu.probabilistic = u.probabilistic;
            if (u.probabilistic) {
                Rational p = u.prob.eval(bind);
                if (p.sign() < 0 || p > Rational(1))
                    throw ModelError(ModelError::Kind::ProbabilityOutOfRange,
                                     "branch probability " + p.str() + " is outside [0, 1]");
                nu.p = p.to_double();
            }
            nu.rhs_true = compile_poly(u.rhs_true, bind);
            nu.rhs_false = compile_poly(u.rhs_false, bind);
            updates.push_back(std::move(nu));
        }
    }

    void run_init(std::vector<double>& working, std::vector<double>& draw_vals, Rng& rng) const {
        std::fill(working.begin(), working.end(), 0.0);
        for (const auto& [var, poly] : inits) {
            for (int id : poly.draw_ids) draw_vals[size_t(id)] = dists[size_t(id)].sample(rng);
            working[var] = poly.eval(working, draw_vals);
        }
    }

    // One loop iteration; coin first, then the chosen branch's draws in id order.
    void run_step(std::vector<double>& working, std::vector<double>& draw_vals, Rng& rng) const {
        for (const auto& u : updates) {
            const NumPoly* rhs = &u.rhs_true;
            if (u.probabilistic && !(rng.unit() < u.p)) rhs = &u.rhs_false;
            for (int id : rhs->draw_ids) draw_vals[size_t(id)] = dists[size_t(id)].sample(rng);
            working[u.var] = rhs->eval(working, draw_vals);
        }
    }
};

inline unsigned pick_threads(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MOMENT_INVAR_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && unsigned(cap) < n) n = unsigned(cap);
    }
    return n;
}

} // namespace detail

// Estimates E[target] at each checkpoint. The result is bit-identical for a
// given (seed, runs) no matter how many threads execute: every run has its own
// counter-derived RNG stream and partial sums are merged in fixed chunk order.
inline SimResult simulate(const ValidatedProgram& vp, const Bindings& bind,
                          const std::vector<EMonomial>& targets, const SimOptions& opts = {}) {
    SimResult res;
    res.checkpoints = opts.checkpoints;
    std::sort(res.checkpoints.begin(), res.checkpoints.end());
    res.checkpoints.erase(std::unique(res.checkpoints.begin(), res.checkpoints.end()),
                          res.checkpoints.end());
    res.targets = targets;
    res.runs = opts.runs;
    if (res.checkpoints.empty() || targets.empty() || opts.runs <= 0) return res;
    if (res.checkpoints.front() < 0) throw Error("checkpoints must be nonnegative");

    detail::NumericProgram prog(vp, bind);
    const long long max_n = res.checkpoints.back();
    const size_t C = res.checkpoints.size(), T = targets.size();

    constexpr long long chunk_runs = 1024;
    const long long nchunks = (opts.runs + chunk_runs - 1) / chunk_runs;
    std::vector<std::vector<double>> chunk_sum((size_t)nchunks), chunk_sumsq((size_t)nchunks);

    auto worker = [&](std::atomic<long long>& next) {
        std::vector<double> working(prog.nvars), draw_vals(prog.dists.size());
        for (;;) {
            long long c = next.fetch_add(1);
            if (c >= nchunks) break;
            std::vector<double> sum(C * T, 0.0), sumsq(C * T, 0.0);
            long long lo = c * chunk_runs, hi = std::min(opts.runs, lo + chunk_runs);
            for (long long r = lo; r < hi; ++r) {
                Rng rng(detail::splitmix64(opts.seed + uint64_t(r) * 0x9E3779B97F4A7C15ull));
                prog.run_init(working, draw_vals, rng);
                size_t ci = 0;
                auto record = [&](long long n) {
                    while (ci < C && res.checkpoints[ci] == n) {
                        for (size_t t = 0; t < T; ++t) {
                            double v = 1.0;
                            const EMonomial& m = targets[t];
                            for (size_t i = 0; i < m.size(); ++i)
                                if (m[i]) v *= detail::powi(working[i], m[i]);
                            sum[ci * T + t] += v;
                            sumsq[ci * T + t] += v * v;
                        }
                        ++ci;
                    }
                };
                record(0);
                for (long long n = 1; n <= max_n; ++n) {
                    prog.run_step(working, draw_vals, rng);
                    record(n);
                }
            }
            chunk_sum[size_t(c)] = std::move(sum);
            chunk_sumsq[size_t(c)] = std::move(sumsq);
        }
    };

    unsigned nthreads = detail::pick_threads(opts.threads);
    std::atomic<long long> next{0};
    if (nthreads <= 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back([&] { worker(next); });
        for (auto& th : pool) th.join();
    }

    std::vector<double> sum(C * T, 0.0), sumsq(C * T, 0.0);
    for (long long c = 0; c < nchunks; ++c)
        for (size_t i = 0; i < C * T; ++i) {
            sum[i] += chunk_sum[size_t(c)][i];
            sumsq[i] += chunk_sumsq[size_t(c)][i];
        }

    const double R = double(opts.runs);
    res.cells.assign(C, std::vector<SimCell>(T));
    for (size_t ci = 0; ci < C; ++ci)
        for (size_t t = 0; t < T; ++t) {
            double mean = sum[ci * T + t] / R;
            double var = std::max(0.0, sumsq[ci * T + t] / R - mean * mean);
            res.cells[ci][t] = {mean, std::sqrt(var / R)};
        }
    return res;
}

} // namespace mominv
