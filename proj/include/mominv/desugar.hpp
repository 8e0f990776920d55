#pragma once

#include <set>
#include <string>

#include "ast.hpp"
#include "errors.hpp"

namespace mominv {
namespace detail {

inline std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    std::string cand = base;
    for (int k = 2; used.count(cand); ++k) cand = base + std::to_string(k);
    used.insert(cand);
    return cand;
}

inline bool literal_01(const ExprPtr& e) {
    return e && e->op == Expr::Op::Lit && (e->lit == Rational(0) || e->lit == Rational(1));
}

// A condition variable must carry no state and take only values 0/1: its
// assignment may reference nothing and both branch values must be literal
// 0 or 1.
inline bool is_indicator_assign(const AssignStmt& a) {
    if (a.probabilistic()) return literal_01(a.rhs1) && literal_01(a.rhs2);
    return literal_01(a.rhs1);
}

// t*(then_value) + (1 - t)*(else_value)
inline ExprPtr mix_by(const std::string& t, ExprPtr then_part, ExprPtr else_part) {
    ExprPtr sel = make_ident(t);
    ExprPtr inv = make_bin(Expr::Op::Sub, make_lit(1), make_ident(t));
    return make_bin(Expr::Op::Add, make_bin(Expr::Op::Mul, sel, std::move(then_part)),
                    make_bin(Expr::Op::Mul, inv, std::move(else_part)));
}

} // namespace detail

// Rewrites every if-block into straight-line probabilistic assignments:
// the condition becomes a 0/1 selector t, each branch assignment collapses
// into its own 0/1 coin, and every updated variable x gets the single update
//   x := t*(u1*f + v1*(1 - f)) + (1 - t)*(u2*g + v2*(1 - g))
// with deterministic branches absorbing f or g and variables missing from a
// branch defaulting to the identity update there.
inline void desugar_multipath(Program& prog) {
    if (!prog.has_multipath()) return;
    std::set<std::string> used = prog.variable_names();
    for (auto& p : prog.param_names()) used.insert(p);

    std::vector<std::string> fresh;
    auto fresh_coin = [&](const std::string& base) {
        std::string name = detail::fresh_name(base, used);
        fresh.push_back(name);
        return name;
    };

    std::vector<BodyStmt> out;
    for (auto& stmt : prog.body) {
        if (auto* plain = std::get_if<AssignStmt>(&stmt)) {
            out.emplace_back(*plain);
            continue;
        }
        auto& blk = std::get<IfBlock>(stmt);

        std::string t;
        if (blk.cond.is_flip) {
            t = fresh_coin("t");
            AssignStmt ta;
            ta.var = t;
            ta.rhs1 = make_lit(1);
            ta.prob = blk.cond.prob;
            ta.rhs2 = make_lit(0);
            ta.line = blk.cond.line;
            out.emplace_back(std::move(ta));
        } else {
            t = blk.cond.name;
            const AssignStmt* def = nullptr;
            for (auto& s : out)
                if (auto* a = std::get_if<AssignStmt>(&s); a && a->var == t) def = a;
            if (!def)
                throw UnsupportedCondition("condition variable '" + t +
                                           "' is not assigned before the if-block");
            if (!detail::is_indicator_assign(*def))
                throw UnsupportedCondition("condition variable '" + t +
                                           "' is not a 0/1-valued coin (both branch values must "
                                           "be literal 0 or 1 with no variable references)");
        }

        // Updated variables, then-branch order first, else-only after.
        std::vector<std::string> updated;
        auto note = [&](const std::string& v) {
            for (auto& u : updated)
                if (u == v) return;
            updated.push_back(v);
        };
        for (auto& a : blk.then_body) note(a.var);
        for (auto& a : blk.else_body) note(a.var);

        auto find_in = [](const std::vector<AssignStmt>& body, const std::string& v) -> const AssignStmt* {
            for (auto& a : body)
                if (a.var == v) return &a;
            return nullptr;
        };

        for (auto& x : updated) {
            const AssignStmt* ta = find_in(blk.then_body, x);
            const AssignStmt* ea = find_in(blk.else_body, x);

            auto branch_part = [&](const AssignStmt* a, const char* coin_base) -> ExprPtr {
                if (!a) return make_ident(x); // untouched in this branch
                if (!a->probabilistic()) return a->rhs1;
                std::string coin = fresh_coin(coin_base);
                AssignStmt ca;
                ca.var = coin;
                ca.rhs1 = make_lit(1);
                ca.prob = a->prob;
                ca.rhs2 = make_lit(0);
                ca.line = a->line;
                out.emplace_back(std::move(ca));
                ExprPtr pick = make_bin(Expr::Op::Mul, a->rhs1, make_ident(coin));
                ExprPtr other = make_bin(
                    Expr::Op::Mul, a->rhs2,
                    make_bin(Expr::Op::Sub, make_lit(1), make_ident(coin)));
                return make_bin(Expr::Op::Add, std::move(pick), std::move(other));
            };

            ExprPtr then_part = branch_part(ta, "f");
            ExprPtr else_part = branch_part(ea, "g");
            AssignStmt merged;
            merged.var = x;
            merged.rhs1 = detail::mix_by(t, std::move(then_part), std::move(else_part));
            merged.line = ta ? ta->line : ea->line;
            out.emplace_back(std::move(merged));
        }
    }
    prog.body = std::move(out);
    // every introduced coin needs a (value-irrelevant) initialization
    for (auto& name : fresh) {
        InitStmt init;
        init.var = name;
        init.rhs = make_lit(0);
        prog.inits.push_back(std::move(init));
    }
}

} // namespace mominv
