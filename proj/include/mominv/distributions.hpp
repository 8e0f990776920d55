#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "ratfunc.hpp"

namespace mominv {

struct Uniform {
    RatFunc a, b; // continuous uniform on [a, b]
};
struct Normal {
    RatFunc mean, variance;
};
struct BernoulliDist {
    RatFunc p; // value 1 with probability p, else 0
};
struct DiscreteFinite {
    std::vector<std::pair<RatFunc, RatFunc>> outcomes; // (value, probability)
};

using DistSpec = std::variant<Uniform, Normal, BernoulliDist, DiscreteFinite>;

// k-th raw moment E[D^k] as an exact rational function of the parameters.
inline RatFunc raw_moment(const DistSpec& d, unsigned k) {
    if (k == 0) return RatFunc(1);
    if (auto* u = std::get_if<Uniform>(&d)) {
        // (b^(k+1) - a^(k+1)) / ((k+1)(b - a)), written division-free so the
        // degenerate a == b case needs no special handling:
        // sum_{i=0..k} a^i b^(k-i) / (k+1)
        RatFunc s = 0;
        for (unsigned i = 0; i <= k; ++i) s += u->a.pow(i) * u->b.pow(k - i);
        return s * RatFunc(Rational(1, k + 1));
    }
    if (auto* g = std::get_if<Normal>(&d)) {
        // m_k = mean*m_(k-1) + (k-1)*variance*m_(k-2)
        RatFunc m0 = 1, m1 = g->mean;
        for (unsigned i = 2; i <= k; ++i) {
            RatFunc m2 = g->mean * m1 + RatFunc(Rational(i - 1)) * g->variance * m0;
            m0 = m1;
            m1 = m2;
        }
        return m1;
    }
    if (auto* b = std::get_if<BernoulliDist>(&d)) return b->p;
    auto& df = std::get<DiscreteFinite>(d);
    RatFunc s = 0;
    for (auto& [v, p] : df.outcomes) s += p * v.pow(k);
    return s;
}

inline bool finite_support(const DistSpec& d) {
    return !std::holds_alternative<Uniform>(d) && !std::holds_alternative<Normal>(d);
}

// Exact outcome list (value, probability) at given parameter bindings.
// Throws InfiniteSupport for continuous distributions and InvalidSupport for
// out-of-range probabilities (Bernoulli outside [0,1], discrete probabilities
// negative or not summing to 1).
inline std::vector<std::pair<Rational, Rational>> exact_outcomes(const DistSpec& d, const Bindings& bind) {
    if (!finite_support(d)) throw InfiniteSupport("continuous distribution has no finite outcome list");
    std::vector<std::pair<Rational, Rational>> out;
    if (auto* b = std::get_if<BernoulliDist>(&d)) {
        Rational p = b->p.eval(bind);
        if (p < Rational(0) || p > Rational(1))
            throw InvalidSupport("bernoulli probability " + p.str() + " outside [0,1]");
        if (!p.is_zero()) out.emplace_back(1, p);
        if (!(p == Rational(1))) out.emplace_back(0, Rational(1) - p);
        return out;
    }
    auto& df = std::get<DiscreteFinite>(d);
    Rational total = 0;
    for (auto& [v, p] : df.outcomes) {
        Rational pv = p.eval(bind);
        if (pv < Rational(0)) throw InvalidSupport("negative discrete probability " + pv.str());
        total += pv;
        if (!pv.is_zero()) out.emplace_back(v.eval(bind), pv);
    }
    if (!(total == Rational(1)))
        throw InvalidSupport("discrete probabilities sum to " + total.str() + ", not 1");
    return out;
}

// Deterministic sampling stream. unit() has 53 random bits; normal() is
// Box-Muller with the partner value cached.
struct Rng {
    explicit Rng(std::uint64_t seed) : g(seed) {}

    double unit() { return double(g() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = unit(), u2 = unit();
        while (u1 == 0.0) u1 = unit();
        double r = std::sqrt(-2.0 * std::log(u1)), t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::mt19937_64 g;

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// One double-precision sample at the given bindings.
inline double sample(const DistSpec& d, const Bindings& bind, Rng& rng) {
    if (auto* u = std::get_if<Uniform>(&d)) {
        double a = u->a.eval(bind).to_double(), b = u->b.eval(bind).to_double();
        if (a > b) throw InvalidSupport("uniform with empty support: a > b");
        return a + (b - a) * rng.unit();
    }
    if (auto* g = std::get_if<Normal>(&d)) {
        double var = g->variance.eval(bind).to_double();
        if (var < 0) throw InvalidSupport("normal with negative variance");
        return g->mean.eval(bind).to_double() + std::sqrt(var) * rng.normal();
    }
    if (auto* b = std::get_if<BernoulliDist>(&d)) {
        Rational p = b->p.eval(bind);
        if (p < Rational(0) || p > Rational(1))
            throw InvalidSupport("bernoulli probability " + p.str() + " outside [0,1]");
        return rng.unit() < p.to_double() ? 1.0 : 0.0;
    }
    auto outs = exact_outcomes(d, bind);
    double u = rng.unit(), acc = 0.0;
    for (auto& [v, p] : outs) {
        acc += p.to_double();
        if (u < acc) return v.to_double();
    }
    return outs.back().first.to_double();
}

} // namespace mominv
