#pragma once

#include <string>
#include <vector>

#include "solver.hpp"

namespace mominv {

enum class MomentKind { Raw, Central, Variance, Covariance };

struct MomentEntry {
    std::string variable;
    std::string with; // covariance partner, empty otherwise
    unsigned order = 1;
    MomentKind kind = MomentKind::Raw;
    CFinite form;
    std::vector<std::string> side_conditions; // denominators that must stay nonzero
};

struct AnalysisOptions {
    unsigned k = 2;
    bool central = false;
    bool variance = false;
    std::vector<std::pair<std::string, std::string>> covariances;
};

struct InvariantReport {
    std::string program;
    ValidatedProgram vp;
    std::vector<std::string> params;
    AnalysisOptions options;
    RecurrenceSystem system;
    ClosedFormSet forms; // every solved E-variable, including intermediates
    std::vector<MomentEntry> moments;
};

inline CFinite raw_form(const ClosedFormSet& forms, const EMonomial& m) {
    auto it = forms.find(m);
    if (it == forms.end()) throw Error("no closed form for the requested monomial");
    return it->second;
}

// j-th central moment via the binomial expansion of E[(X - mu)^j].
inline CFinite central_moment(const ClosedFormSet& forms, const ValidatedProgram& vp, size_t var,
                              unsigned j) {
    if (j == 0) return CFinite::constant(RatFunc(1));
    CFinite mu = raw_form(forms, unit_monomial(vp, var));
    CFinite acc;
    CFinite neg_mu_pow = CFinite::constant(RatFunc(1)); // (-mu)^(j-t)
    // t descending so the power accumulates one factor per step
    std::vector<CFinite> raws;
    for (unsigned t = 0; t <= j; ++t)
        raws.push_back(t == 0 ? CFinite::constant(RatFunc(1))
                              : raw_form(forms, unit_monomial(vp, var, t)));
    for (unsigned t = j + 1; t-- > 0;) {
        acc = acc + raws[t].scaled(detail::binomial(j, t)) * neg_mu_pow;
        neg_mu_pow = neg_mu_pow * mu.scaled(-1);
    }
    return acc;
}

// Var(X) = E[X^2] - E[X]^2, deliberately not routed through central_moment.
inline CFinite variance(const ClosedFormSet& forms, const ValidatedProgram& vp, size_t var) {
    CFinite mu = raw_form(forms, unit_monomial(vp, var));
    return raw_form(forms, unit_monomial(vp, var, 2)) - mu * mu;
}

// Cov(X, Y) = E[XY] - E[X]E[Y].
inline CFinite covariance(const ClosedFormSet& forms, const ValidatedProgram& vp, size_t x, size_t y) {
    EMonomial m(vp.vars.size(), 0);
    m[x] += 1;
    m[y] += 1;
    return raw_form(forms, m) -
           raw_form(forms, unit_monomial(vp, x)) * raw_form(forms, unit_monomial(vp, y));
}

// Numeric skewness at a concrete step and parameter binding.
inline double skewness_at(const ClosedFormSet& forms, const ValidatedProgram& vp, size_t var,
                          long long n, const Bindings& b) {
    Rational m1 = raw_form(forms, unit_monomial(vp, var)).eval(n, b);
    Rational m2 = raw_form(forms, unit_monomial(vp, var, 2)).eval(n, b);
    Rational m3 = raw_form(forms, unit_monomial(vp, var, 3)).eval(n, b);
    Rational var2 = m2 - m1 * m1;
    Rational mu3 = m3 - Rational(3) * m1 * m2 + Rational(2) * m1.pow(3);
    if (var2.sign() <= 0) throw Error("skewness undefined: variance is not positive");
    return mu3.to_double() / std::pow(var2.to_double(), 1.5);
}

inline std::vector<std::string> side_conditions_of(const CFinite& f) {
    std::set<std::string> dens;
    f.collect_denominators(dens);
    return {dens.begin(), dens.end()};
}

inline InvariantReport analyze(const ValidatedProgram& vp, const AnalysisOptions& opts,
                               const std::string& program_name = "") {
    if (opts.k < 1) throw Error("moment order must be at least 1");
    if ((opts.central || opts.variance) && opts.k < 2)
        throw Error("central moments and variances need moment order at least 2");

    std::vector<EMonomial> targets;
    for (size_t i = 0; i < vp.vars.size(); ++i)
        for (unsigned j = 1; j <= opts.k; ++j) targets.push_back(unit_monomial(vp, i, j));
    for (auto& [xn, yn] : opts.covariances) {
        EMonomial m(vp.vars.size(), 0);
        m[vp.index_of(xn)] += 1;
        m[vp.index_of(yn)] += 1;
        targets.push_back(m);
    }

    InvariantReport rep;
    rep.program = program_name;
    rep.vp = vp;
    rep.params = vp.params;
    rep.options = opts;
    rep.system = build_system(vp, targets);
    rep.forms = solve_system(rep.system);

    auto push = [&](std::string var, std::string with, unsigned order, MomentKind kind,
                    CFinite form) {
        MomentEntry e;
        e.variable = std::move(var);
        e.with = std::move(with);
        e.order = order;
        e.kind = kind;
        e.side_conditions = side_conditions_of(form);
        e.form = std::move(form);
        rep.moments.push_back(std::move(e));
    };

    for (size_t i = 0; i < vp.vars.size(); ++i) {
        for (unsigned j = 1; j <= opts.k; ++j)
            push(vp.vars[i], "", j, MomentKind::Raw, raw_form(rep.forms, unit_monomial(vp, i, j)));
        if (opts.central)
            for (unsigned j = 2; j <= opts.k; ++j)
                push(vp.vars[i], "", j, MomentKind::Central, central_moment(rep.forms, vp, i, j));
        if (opts.variance)
            push(vp.vars[i], "", 2, MomentKind::Variance, variance(rep.forms, vp, i));
    }
    for (auto& [xn, yn] : opts.covariances)
        push(xn, yn, 2, MomentKind::Covariance,
             covariance(rep.forms, vp, vp.index_of(xn), vp.index_of(yn)));
    return rep;
}

} // namespace mominv
