#pragma once

#include "cfinite.hpp"
#include "engine.hpp"

namespace mominv {
namespace detail {

inline Rational binomial(unsigned n, unsigned r) {
    Rational b = 1;
    for (unsigned i = 0; i < r; ++i) b = b * Rational(n - i) / Rational(i + 1);
    return b;
}

// Particular solution R(n)*theta^n of x(n+1) = c*x(n) + Q(n)*theta^n in the
// non-resonant case theta != c: matching coefficients of
// theta*R(n+1) - c*R(n) = Q(n) descending gives deg R = deg Q, each step
// dividing by (theta - c).
inline NPoly particular_nonresonant(const RatFunc& c, const RatFunc& theta, const NPoly& q) {
    int d = q.degree();
    std::vector<RatFunc> r(size_t(d) + 1, RatFunc(0));
    for (int t = d; t >= 0; --t) {
        RatFunc acc = q.coeff(size_t(t));
        for (int j = t + 1; j <= d; ++j)
            acc -= theta * r[size_t(j)] * RatFunc(binomial(unsigned(j), unsigned(t)));
        r[size_t(t)] = acc / (theta - c);
    }
    return NPoly::from_coeffs(std::move(r));
}

// Resonant case theta == c: R gains one degree and loses its constant term;
// matching c*(R(n+1) - R(n)) = Q(n) descending determines r_(t+1) at power t.
inline NPoly particular_resonant(const RatFunc& c, const NPoly& q) {
    int d = q.degree();
    std::vector<RatFunc> r(size_t(d) + 2, RatFunc(0));
    for (int t = d; t >= 0; --t) {
        RatFunc acc = q.coeff(size_t(t));
        for (int j = t + 2; j <= d + 1; ++j)
            acc -= c * r[size_t(j)] * RatFunc(binomial(unsigned(j), unsigned(t)));
        r[size_t(t) + 1] = acc / (c * RatFunc(Rational(t + 1)));
    }
    return NPoly::from_coeffs(std::move(r));
}

} // namespace detail

// Closed form of x(n+1) = c*x(n) + gamma(n) with x(0) = x0. The inhomogeneous
// part gamma is itself an exponential polynomial; its recurrence only holds
// from gamma's validity start g0 on, so the constant of the homogeneous part
// is fixed at n = g0 after unrolling x up to there through gamma's stored
// prefix values.
inline CFinite solve_first_order(const RatFunc& c, const CFinite& gamma, const RatFunc& x0) {
    if (c.is_zero()) {
        // x(n) = gamma(n - 1) for n >= g0 + 1; earlier values unrolled
        unsigned v = gamma.validity_start() + 1;
        std::vector<RatFunc> prefix{x0};
        for (unsigned i = 1; i < v; ++i) prefix.push_back(gamma.value_at(i - 1));
        std::vector<CTerm> terms;
        for (auto& t : gamma.terms())
            terms.push_back({t.base, t.poly.shifted_n(-1).scaled(t.base.pow(-1))});
        return CFinite(std::move(terms), v, std::move(prefix));
    }

    unsigned g0 = gamma.validity_start();
    std::vector<CTerm> terms;
    for (auto& t : gamma.terms()) {
        NPoly R = (t.base == c) ? detail::particular_resonant(c, t.poly)
                                : detail::particular_nonresonant(c, t.base, t.poly);
        terms.push_back({t.base, R});
    }

    std::vector<RatFunc> prefix;
    RatFunc xg = x0;
    for (unsigned i = 0; i < g0; ++i) {
        prefix.push_back(xg);
        xg = c * xg + gamma.value_at(i);
    }
    RatFunc part = 0;
    for (auto& t : terms) part += t.poly.eval_sym(g0) * t.base.pow(g0);
    terms.push_back({c, NPoly((xg - part) / c.pow(g0))});
    return CFinite(std::move(terms), g0, std::move(prefix));
}

using ClosedFormSet = std::map<EMonomial, CFinite, SigmaLess>;

// Solves the rows in ascending sigma order; every dependency of a row
// strictly precedes it, so its closed form is already available.
inline ClosedFormSet solve_system(const RecurrenceSystem& sys) {
    ClosedFormSet out;
    for (auto& row : sys.rows) {
        CFinite gamma = CFinite::constant(row.constant);
        for (auto& [N, coef] : row.lin) gamma = gamma + out.at(N).scaled(coef);
        out.emplace(row.target, solve_first_order(row.self_coeff, gamma, row.init));
    }
    return out;
}

} // namespace mominv
