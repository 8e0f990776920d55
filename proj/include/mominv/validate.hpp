#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ast.hpp"
#include "distributions.hpp"
#include "engine_poly.hpp"

namespace mominv {

// One loop-body update in engine form. References to the variable itself
// appear as Cur atoms (step n), references to earlier-assigned variables as
// Next atoms (step n+1), draw occurrences as Draw atoms.
struct ValidatedUpdate {
    std::string var;
    bool probabilistic = false;
    RatFunc prob;               // probability of rhs_true; 1 when deterministic
    EnginePoly rhs_true, rhs_false;
    bool iteration_local = false;
    unsigned growth_degree = 1; // degree of the non-self part in stateful variables
};

struct ValidatedInit {
    size_t var; // index into vars
    EnginePoly value; // Cur atoms reference earlier-initialized variables
};

struct ValidatedProgram {
    std::vector<std::string> vars; // update order
    std::map<std::string, size_t> var_index;
    std::vector<std::string> params; // alphabetical
    std::vector<ValidatedUpdate> updates; // aligned with vars
    std::vector<ValidatedInit> inits; // initialization order
    std::map<int, DistSpec> draws; // occurrence id -> distribution

    size_t index_of(const std::string& v) const {
        auto it = var_index.find(v);
        if (it == var_index.end()) throw Error("unknown program variable '" + v + "'");
        return it->second;
    }

    const DistSpec& dist_of(int id) const {
        auto it = draws.find(id);
        if (it == draws.end()) throw Error("unknown draw occurrence");
        return it->second;
    }

    bool has_continuous_draw() const {
        for (auto& [id, d] : draws)
            if (!finite_support(d)) return true;
        return false;
    }
};

namespace detail {

// Parameter-only conversion, used for branch probabilities and distribution
// arguments. Program variables that are assigned later still surface as
// ForwardReference so that reference errors take precedence.
inline RatFunc expr_to_ratfunc(const Expr& e, const std::set<std::string>& vars,
                               const std::map<std::string, size_t>& var_index, long self,
                               const std::string& what) {
    using Op = Expr::Op;
    switch (e.op) {
        case Op::Lit: return RatFunc(e.lit);
        case Op::Ident:
            if (vars.count(e.name)) {
                auto it = var_index.find(e.name);
                if (self >= 0 && it != var_index.end() && long(it->second) > self)
                    throw ModelError(ModelError::Kind::ForwardReference,
                                     "variable '" + e.name + "' is assigned later in the body");
                throw ModelError(ModelError::Kind::VariableInDistribution,
                                 "program variable '" + e.name + "' in " + what);
            }
            return RatFunc::symbol(e.name);
        case Op::Add:
            return expr_to_ratfunc(*e.a, vars, var_index, self, what) +
                   expr_to_ratfunc(*e.b, vars, var_index, self, what);
        case Op::Sub:
            return expr_to_ratfunc(*e.a, vars, var_index, self, what) -
                   expr_to_ratfunc(*e.b, vars, var_index, self, what);
        case Op::Mul:
            return expr_to_ratfunc(*e.a, vars, var_index, self, what) *
                   expr_to_ratfunc(*e.b, vars, var_index, self, what);
        case Op::Div:
            return expr_to_ratfunc(*e.a, vars, var_index, self, what) /
                   expr_to_ratfunc(*e.b, vars, var_index, self, what);
        case Op::Neg: return -expr_to_ratfunc(*e.a, vars, var_index, self, what);
        case Op::Pow: return expr_to_ratfunc(*e.a, vars, var_index, self, what).pow(e.exp);
        case Op::Draw:
            throw ModelError(ModelError::Kind::VariableInDistribution, "draw in " + what);
    }
    throw Error("unreachable expression kind");
}

struct PolyCtx {
    const std::set<std::string>* vars;
    const std::map<std::string, size_t>* var_index;
    long self; // body context: index of the variable being updated; -1 in inits
    const std::set<size_t>* init_avail; // init context: already-initialized variables
    std::map<int, DistSpec>* draws;
};

inline DistSpec compile_draw(const Expr& e, const PolyCtx& c) {
    auto conv = [&](const Expr& x) {
        return expr_to_ratfunc(x, *c.vars, *c.var_index, c.self, "a distribution argument");
    };
    switch (e.draw_kind) {
        case DrawKind::Uniform: return Uniform{conv(*e.args[0]), conv(*e.args[1])};
        case DrawKind::Normal: return Normal{conv(*e.args[0]), conv(*e.args[1])};
        case DrawKind::Bernoulli: return BernoulliDist{conv(*e.args[0])};
        case DrawKind::Discrete: {
            DiscreteFinite d;
            for (auto& [v, p] : e.outcomes) d.outcomes.emplace_back(conv(*v), conv(*p));
            return d;
        }
    }
    throw Error("unreachable draw kind");
}

inline EnginePoly expr_to_poly(const Expr& e, const PolyCtx& c) {
    using Op = Expr::Op;
    switch (e.op) {
        case Op::Lit: return EnginePoly(RatFunc(e.lit));
        case Op::Ident: {
            if (!c.vars->count(e.name)) return EnginePoly(RatFunc::symbol(e.name));
            size_t idx = c.var_index->at(e.name);
            if (c.init_avail) {
                if (!c.init_avail->count(idx))
                    throw ModelError(ModelError::Kind::ForwardReference,
                                     "variable '" + e.name +
                                         "' is used in an initialization before having a value");
                return EnginePoly::atom({Atom::Kind::Cur, int(idx)});
            }
            if (long(idx) == c.self) return EnginePoly::atom({Atom::Kind::Cur, int(idx)});
            if (long(idx) < c.self) return EnginePoly::atom({Atom::Kind::Next, int(idx)});
            throw ModelError(ModelError::Kind::ForwardReference,
                             "variable '" + e.name + "' is assigned later in the body");
        }
        case Op::Add: return expr_to_poly(*e.a, c) + expr_to_poly(*e.b, c);
        case Op::Sub: return expr_to_poly(*e.a, c) - expr_to_poly(*e.b, c);
        case Op::Mul: return expr_to_poly(*e.a, c) * expr_to_poly(*e.b, c);
        case Op::Div: {
            // parser guarantees the divisor folds to a nonzero rational
            RatFunc d = expr_to_ratfunc(*e.b, *c.vars, *c.var_index, c.self, "a divisor");
            return expr_to_poly(*e.a, c).scaled(RatFunc(1) / d);
        }
        case Op::Neg: return -expr_to_poly(*e.a, c);
        case Op::Pow: return expr_to_poly(*e.a, c).pow(e.exp);
        case Op::Draw: {
            c.draws->emplace(e.draw_id, compile_draw(e, c));
            return EnginePoly::atom({Atom::Kind::Draw, e.draw_id});
        }
    }
    throw Error("unreachable expression kind");
}

inline bool poly_references_state(const EnginePoly& p) {
    return p.contains_kind(Atom::Kind::Cur) || p.contains_kind(Atom::Kind::Next);
}

} // namespace detail

// Shape checks and conversion to engine form. The program must be branch-free
// (run desugar_multipath first).
inline ValidatedProgram validate(const Program& prog) {
    if (prog.has_multipath())
        throw Error("program still contains if-blocks; desugar before validating");

    std::vector<const AssignStmt*> assigns;
    for (auto& s : prog.body) assigns.push_back(&std::get<AssignStmt>(s));

    std::set<std::string> body_vars;
    for (auto* a : assigns)
        if (!body_vars.insert(a->var).second)
            throw ModelError(ModelError::Kind::DuplicateAssignment,
                             "variable '" + a->var + "' is assigned more than once in the body");
    std::set<std::string> inited;
    for (auto& i : prog.inits)
        if (!inited.insert(i.var).second)
            throw ModelError(ModelError::Kind::DuplicateInit,
                             "variable '" + i.var + "' is initialized more than once");
    for (auto* a : assigns)
        if (!inited.count(a->var))
            throw ModelError(ModelError::Kind::Uninitialized,
                             "variable '" + a->var + "' is never initialized");

    ValidatedProgram vp;
    // init-only variables keep their value: identity updates, prepended in
    // initialization order
    std::vector<AssignStmt> synthetic;
    for (auto& i : prog.inits)
        if (!body_vars.count(i.var)) {
            AssignStmt a;
            a.var = i.var;
            a.rhs1 = make_ident(i.var);
            a.line = i.line;
            synthetic.push_back(std::move(a));
        }
    std::vector<const AssignStmt*> order;
    for (auto& a : synthetic) order.push_back(&a);
    for (auto* a : assigns) order.push_back(a);

    for (auto* a : order) {
        vp.var_index[a->var] = vp.vars.size();
        vp.vars.push_back(a->var);
    }
    std::set<std::string> var_set(vp.vars.begin(), vp.vars.end());
    for (auto& p : prog.param_names()) vp.params.push_back(p);

    // initializations, in order
    std::set<size_t> avail;
    for (auto& i : prog.inits) {
        detail::PolyCtx c{&var_set, &vp.var_index, -1, &avail, &vp.draws};
        ValidatedInit vi{vp.var_index.at(i.var), detail::expr_to_poly(*i.rhs, c)};
        vp.inits.push_back(std::move(vi));
        avail.insert(vp.var_index.at(i.var));
    }

    // updates, in order
    for (size_t idx = 0; idx < order.size(); ++idx) {
        const AssignStmt& a = *order[idx];
        detail::PolyCtx c{&var_set, &vp.var_index, long(idx), nullptr, &vp.draws};
        ValidatedUpdate u;
        u.var = a.var;
        u.probabilistic = a.probabilistic();
        u.rhs_true = detail::expr_to_poly(*a.rhs1, c);
        u.rhs_false = u.probabilistic ? detail::expr_to_poly(*a.rhs2, c) : u.rhs_true;

        Atom self{Atom::Kind::Cur, int(idx)};
        for (const EnginePoly* rhs : {&u.rhs_true, &u.rhs_false}) {
            rhs->for_each([&](const EngineMono& m, const RatFunc&) {
                if (mono_exponent(m, self) > 1)
                    throw ModelError(ModelError::Kind::NonlinearSelf,
                                     "update of '" + a.var + "' is nonlinear in '" + a.var + "'");
            });
        }

        u.iteration_local = !detail::poly_references_state(u.rhs_true) &&
                            !detail::poly_references_state(u.rhs_false);

        // the coefficient of the self term may carry coins and draws of the
        // current iteration but no stateful variable
        unsigned growth = 1;
        for (const EnginePoly* rhs : {&u.rhs_true, &u.rhs_false}) {
            rhs->for_each([&](const EngineMono& m, const RatFunc&) {
                bool has_self = mono_exponent(m, self) > 0;
                unsigned deg = 0;
                for (auto& [at, e] : m) {
                    if (at.kind != Atom::Kind::Next) continue;
                    bool local = vp.updates[size_t(at.id)].iteration_local;
                    if (has_self && !local)
                        throw ModelError(ModelError::Kind::StatefulSelfCoefficient,
                                         "the coefficient of '" + a.var + "' in its own update "
                                         "references stateful variable '" + vp.vars[size_t(at.id)] + "'");
                    if (!local) deg += e;
                }
                if (!has_self) growth = std::max(growth, deg);
            });
        }
        u.growth_degree = growth;

        if (u.probabilistic) {
            u.prob = detail::expr_to_ratfunc(*a.prob, var_set, vp.var_index, long(idx),
                                             "a branch probability");
            if (u.prob.is_constant()) {
                Rational p = u.prob.constant_value();
                if (p < Rational(0) || p > Rational(1))
                    throw ModelError(ModelError::Kind::ProbabilityOutOfRange,
                                     "branch probability " + p.str() + " of '" + a.var +
                                         "' lies outside [0,1]");
            }
        } else {
            u.prob = RatFunc(1);
        }
        vp.updates.push_back(std::move(u));
    }
    return vp;
}

} // namespace mominv
