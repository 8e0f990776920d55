#pragma once

#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "validate.hpp"

namespace mominv {

// Exponent vector over the program variables, indexed by update order.
using EMonomial = std::vector<unsigned>;

// Well-founded order on E-monomials: compare exponents starting from the
// last-assigned variable. Every recurrence produced by the expectation pass
// descends strictly in this order, which is what makes the whole system
// finite and acyclic.
struct SigmaLess {
    bool operator()(const EMonomial& a, const EMonomial& b) const {
        size_t m = std::max(a.size(), b.size());
        for (size_t i = m; i-- > 0;) {
            unsigned x = i < a.size() ? a[i] : 0;
            unsigned y = i < b.size() ? b[i] : 0;
            if (x != y) return x < y;
        }
        return false;
    }
};

inline unsigned total_degree(const EMonomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

inline EMonomial unit_monomial(const ValidatedProgram& vp, size_t var, unsigned e = 1) {
    EMonomial m(vp.vars.size(), 0);
    m[var] = e;
    return m;
}

// "x", "x^2", "x*y"; "1" for the empty monomial.
inline std::string mono_name(const ValidatedProgram& vp, const EMonomial& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += vp.vars[i];
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

// E[M(n+1)] = self_coeff * E[M(n)] + sum lin[N] * E[N(n)] + constant,
// E[M(0)] = init.
struct MomentRecurrence {
    EMonomial target;
    RatFunc self_coeff;
    std::vector<std::pair<EMonomial, RatFunc>> lin; // sigma-ascending, strictly below target
    RatFunc constant;
    RatFunc init;
};

// Expresses E[M(n+1)] over step-n expectations. Starting from M taken at
// step n+1, the latest-assigned step-(n+1) variable is substituted first, so
// by the time a variable's update is expanded every term carries that
// variable's full collected exponent; the per-term branch collapse
// v^e -> p*u1^e + (1-p)*u2^e is then sound because the remaining factors of
// the term are independent of that variable's branch coin. Draw occurrences
// are collapsed last via their raw moments.
inline MomentRecurrence step_expectation(const ValidatedProgram& vp, const EMonomial& M) {
    if (M.size() != vp.vars.size()) throw Error("monomial arity does not match the program");
    EngineMono start;
    for (size_t i = 0; i < M.size(); ++i)
        if (M[i] > 0) start.emplace_back(Atom{Atom::Kind::Next, int(i)}, M[i]);
    EnginePoly cur;
    cur.add_term(start, RatFunc(1));

    Atom a{Atom::Kind::Cur, 0};
    while (cur.max_atom_of(Atom::Kind::Next, a)) {
        const ValidatedUpdate& u = vp.updates[size_t(a.id)];
        EnginePoly next;
        for (auto& [m, coef] : cur.terms()) {
            unsigned e = mono_exponent(m, a);
            if (e == 0) {
                next.add_term(m, coef);
                continue;
            }
            EnginePoly repl = u.rhs_true.pow(e);
            if (u.probabilistic)
                repl = repl.scaled(u.prob) + u.rhs_false.pow(e).scaled(RatFunc(1) - u.prob);
            EnginePoly rest;
            rest.add_term(mono_without(m, a), coef);
            next += rest * repl;
        }
        cur = std::move(next);
    }

    MomentRecurrence r;
    r.target = M;
    r.self_coeff = 0;
    r.constant = 0;
    std::map<EMonomial, RatFunc, SigmaLess> lin;
    for (auto& [m, coef] : cur.terms()) {
        RatFunc c = coef;
        EMonomial N(vp.vars.size(), 0);
        bool state = false;
        for (auto& [at, e] : m) {
            if (at.kind == Atom::Kind::Draw) {
                c *= raw_moment(vp.dist_of(at.id), e);
            } else if (at.kind == Atom::Kind::Cur) {
                N[size_t(at.id)] = e;
                state = true;
            } else {
                throw Error("internal: unsubstituted step-(n+1) reference");
            }
        }
        if (!state)
            r.constant += c;
        else if (N == M)
            r.self_coeff += c;
        else
            lin[N] += c;
    }
    for (auto& [N, c] : lin)
        if (!c.is_zero()) r.lin.emplace_back(N, c);
    return r;
}

// E[M(0)]: the monomial over initialization values, resolved by substituting
// initializations latest-first (so shared references to an earlier variable,
// and with it its single draw realization, collect their full power before
// the draw is collapsed).
inline RatFunc initial_expectation(const ValidatedProgram& vp, const EMonomial& M) {
    if (M.size() != vp.vars.size()) throw Error("monomial arity does not match the program");
    EngineMono start;
    for (size_t i = 0; i < M.size(); ++i)
        if (M[i] > 0) start.emplace_back(Atom{Atom::Kind::Cur, int(i)}, M[i]);
    EnginePoly cur;
    cur.add_term(start, RatFunc(1));

    for (auto it = vp.inits.rbegin(); it != vp.inits.rend(); ++it) {
        Atom a{Atom::Kind::Cur, int(it->var)};
        EnginePoly next;
        for (auto& [m, coef] : cur.terms()) {
            unsigned e = mono_exponent(m, a);
            if (e == 0) {
                next.add_term(m, coef);
                continue;
            }
            EnginePoly rest;
            rest.add_term(mono_without(m, a), coef);
            next += rest * it->value.pow(e);
        }
        cur = std::move(next);
    }

    RatFunc out = 0;
    for (auto& [m, coef] : cur.terms()) {
        RatFunc c = coef;
        for (auto& [at, e] : m) {
            if (at.kind != Atom::Kind::Draw)
                throw Error("internal: initial expectation left an unresolved variable");
            c *= raw_moment(vp.dist_of(at.id), e);
        }
        out += c;
    }
    return out;
}

namespace detail {

inline unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a)
        return std::numeric_limits<unsigned long long>::max();
    return a * b;
}

} // namespace detail

// k^m * prod_{i} d_i^(i-1): product of the per-variable exponent ceilings
// k * prod_{j>i} d_j. Tight only for large k; see exponent_range_bound for
// the count actually guaranteed.
inline unsigned long long degree_product_bound(const ValidatedProgram& vp, unsigned k) {
    unsigned long long b = 1;
    unsigned long long tail = 1;
    for (size_t i = vp.vars.size(); i-- > 0;) {
        b = detail::sat_mul(b, detail::sat_mul(k, tail));
        tail = detail::sat_mul(tail, vp.updates[i].growth_degree);
    }
    return b;
}

// prod_{i} (k * prod_{j>i} d_j + 1): the number of admissible exponent
// vectors, since variable i never exceeds exponent k * prod_{j>i} d_j. This
// is the hard cap on how many monomials the closure can ever process.
inline unsigned long long exponent_range_bound(const ValidatedProgram& vp, unsigned k) {
    unsigned long long b = 1;
    unsigned long long tail = 1;
    for (size_t i = vp.vars.size(); i-- > 0;) {
        unsigned long long range = detail::sat_mul(k, tail);
        if (range == std::numeric_limits<unsigned long long>::max()) return range;
        b = detail::sat_mul(b, range + 1);
        tail = detail::sat_mul(tail, vp.updates[i].growth_degree);
    }
    return b;
}

struct RecurrenceSystem {
    std::vector<MomentRecurrence> rows; // sigma-ascending
    size_t processed = 0;
    unsigned long long guard = 0; // exponent_range_bound at build time
};

// Transitive closure of step_expectation over the needed monomials. The
// pending set is kept sigma-ordered and always popped at its minimum, making
// processing order (and with it every downstream artifact) deterministic.
inline RecurrenceSystem build_system(const ValidatedProgram& vp, const std::vector<EMonomial>& targets) {
    unsigned k = 1;
    for (auto& t : targets) k = std::max(k, total_degree(t));
    RecurrenceSystem sys;
    sys.guard = exponent_range_bound(vp, k);

    std::set<EMonomial, SigmaLess> pending, seen;
    for (auto& t : targets) {
        if (t.size() != vp.vars.size()) throw Error("target monomial arity does not match the program");
        if (total_degree(t) == 0) throw Error("target monomial must have positive degree");
        if (seen.insert(t).second) pending.insert(t);
    }

    std::map<EMonomial, MomentRecurrence, SigmaLess> rows;
    while (!pending.empty()) {
        EMonomial M = *pending.begin();
        pending.erase(pending.begin());
        if (++sys.processed > sys.guard)
            throw BoundExceeded("monomial closure exceeded its size bound of " +
                                std::to_string(sys.guard) + "; this is a bug");
        MomentRecurrence rec = step_expectation(vp, M);
        for (auto& [N, c] : rec.lin)
            if (!SigmaLess{}(N, M))
                throw OrderingViolation("recurrence for " + mono_name(vp, M) +
                                        " depends on " + mono_name(vp, N) +
                                        ", which does not precede it; this is a bug");
        rec.init = initial_expectation(vp, M);
        for (auto& [N, c] : rec.lin)
            if (seen.insert(N).second) pending.insert(N);
        rows.emplace(M, std::move(rec));
    }
    for (auto& [M, rec] : rows) sys.rows.push_back(std::move(rec));
    return sys;
}

// Debug rendering: "E[x^2][n+1] = 1*E[x^2][n] + 3/2*E[x][n] + 1/4*d^2 + 3/4".
inline std::string recurrence_str(const ValidatedProgram& vp, const MomentRecurrence& r) {
    std::string s = "E[" + mono_name(vp, r.target) + "][n+1] =";
    bool any = false;
    auto add = [&](const RatFunc& c, const std::string& what) {
        if (c.is_zero()) return;
        s += any ? " + " : " ";
        any = true;
        s += what.empty() ? c.str() : c.factor_str() + "*" + what;
    };
    add(r.self_coeff, "E[" + mono_name(vp, r.target) + "][n]");
    for (auto& [N, c] : r.lin) add(c, "E[" + mono_name(vp, N) + "][n]");
    add(r.constant, "");
    if (!any) s += " 0";
    return s;
}

} // namespace mominv
