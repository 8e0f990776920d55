#pragma once

#include <map>
#include <set>
#include <vector>

#include "engine.hpp"

namespace mominv {

// Exact pushforward of the loop: map from variable valuation to probability.
using StateDist = std::map<std::vector<Rational>, Rational>;

struct EnumerateOptions {
    size_t state_cap = 1'000'000;
};

namespace detail {

inline std::vector<int> draw_ids_of(const EnginePoly& p) {
    std::set<int> ids;
    p.for_each([&](const EngineMono& m, const RatFunc&) {
        for (const auto& [atom, e] : m)
            if (atom.kind == Atom::Kind::Draw) ids.insert(atom.id);
    });
    return {ids.begin(), ids.end()};
}

inline Rational eval_engine_poly(const EnginePoly& p, const std::vector<Rational>& working,
                                 const std::map<int, Rational>& draw_vals, const Bindings& b) {
    Rational acc;
    p.for_each([&](const EngineMono& m, const RatFunc& c) {
        Rational term = c.eval(b);
        for (const auto& [atom, e] : m) {
            const Rational& v = atom.kind == Atom::Kind::Draw ? draw_vals.at(atom.id)
                                                              : working[size_t(atom.id)];
            term = term * v.pow(e);
        }
        acc = acc + term;
    });
    return acc;
}

// Enumerate every joint realization of the draws in `p` and hand (value, prob) to sink.
template <typename Sink>
void expand_draws(const ValidatedProgram& vp, const EnginePoly& p,
                  const std::vector<Rational>& working, const Bindings& b, Sink&& sink) {
    std::vector<int> ids = draw_ids_of(p);
    std::vector<std::vector<std::pair<Rational, Rational>>> outcome_sets;
    outcome_sets.reserve(ids.size());
    for (int id : ids) outcome_sets.push_back(exact_outcomes(vp.dist_of(id), b));
    std::map<int, Rational> draw_vals;
    auto rec = [&](auto&& self, size_t depth, const Rational& prob) -> void {
        if (depth == ids.size()) {
            sink(eval_engine_poly(p, working, draw_vals, b), prob);
            return;
        }
        for (const auto& [value, q] : outcome_sets[depth]) {
            draw_vals[ids[depth]] = value;
            self(self, depth + 1, prob * q);
        }
    };
    rec(rec, 0, Rational(1));
}

} // namespace detail

class ExactEnumerator {
public:
    ExactEnumerator(const ValidatedProgram& vp, const Bindings& b, EnumerateOptions opts = {})
        : vp_(vp), bind_(b), opts_(opts) {
        std::vector<Rational> zero(vp.vars.size());
        StateDist cur{{zero, Rational(1)}};
        // Run the initialization block; each init may branch on its own draws.
        for (const auto& init : vp_.inits) {
            StateDist next;
            for (const auto& [state, prob] : cur) {
                detail::expand_draws(vp_, init.value, state, bind_,
                                     [&](const Rational& v, const Rational& q) {
                                         std::vector<Rational> s = state;
                                         s[init.var] = v;
                                         next[std::move(s)] += prob * q;
                                     });
            }
            cur = std::move(next);
            check_cap(cur);
        }
        dist_ = std::move(cur);
    }

    const StateDist& current() const { return dist_; }
    long long step_index() const { return n_; }

    // One loop iteration: sequential in-place update, so references to variables
    // assigned earlier in the body see their fresh values.
    void advance() {
        StateDist next;
        for (const auto& [state, prob] : dist_) run_updates(state, prob, 0, next);
        dist_ = std::move(next);
        check_cap(dist_);
        ++n_;
    }

    Rational moment(const EMonomial& m) const {
        Rational acc;
        for (const auto& [state, prob] : dist_) {
            Rational v = prob;
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i]) v = v * state[i].pow(m[i]);
            acc = acc + v;
        }
        return acc;
    }

private:
    void run_updates(const std::vector<Rational>& working, const Rational& prob, size_t idx,
                     StateDist& out) const {
        if (prob.is_zero()) return;
        if (idx == vp_.updates.size()) {
            out[working] += prob;
            return;
        }
        const auto& u = vp_.updates[idx]; // updates[idx] assigns vars[idx]
        auto take = [&](const EnginePoly& rhs, const Rational& q) {
            if (q.is_zero()) return;
            detail::expand_draws(vp_, rhs, working, bind_,
                                 [&](const Rational& v, const Rational& r) {
                                     std::vector<Rational> s = working;
                                     s[idx] = v;
                                     run_updates(s, prob * q * r, idx + 1, out);
                                 });
        };
        if (u.probabilistic) {
            Rational p = u.prob.eval(bind_);
            if (p.sign() < 0 || p > Rational(1))
                throw ModelError(ModelError::Kind::ProbabilityOutOfRange,
                                 "branch probability " + p.str() + " is outside [0, 1]");
            take(u.rhs_true, p);
            take(u.rhs_false, Rational(1) - p);
        } else {
            take(u.rhs_true, Rational(1));
        }
    }

    void check_cap(const StateDist& d) const {
        if (d.size() > opts_.state_cap)
            throw StateExplosion("state distribution exceeded " +
                                 std::to_string(opts_.state_cap) + " support points");
    }

    ValidatedProgram vp_;
    Bindings bind_;
    EnumerateOptions opts_;
    StateDist dist_;
    long long n_ = 0;
};

} // namespace mominv
