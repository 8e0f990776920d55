#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rational.hpp"

namespace mominv {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class DrawKind { Uniform, Normal, Bernoulli, Discrete };

// Expression tree exactly as written in the source; no normalization happens
// at parse time so sources can be reproduced verbatim.
struct Expr {
    enum class Op { Lit, Ident, Add, Sub, Mul, Div, Pow, Neg, Draw };
    Op op = Op::Lit;

    Rational lit;      // Lit
    std::string name;  // Ident name, or draw spelling ("u", "rand", ...)
    ExprPtr a, b;      // binary operands; a alone for Neg and Pow
    unsigned exp = 0;  // Pow exponent

    DrawKind draw_kind = DrawKind::Uniform;
    int draw_id = -1;  // unique per syntactic occurrence
    std::vector<ExprPtr> args;
    std::vector<std::pair<ExprPtr, ExprPtr>> outcomes; // (value, prob) for d(...)
};

inline ExprPtr make_lit(const Rational& v) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Lit;
    e->lit = v;
    return e;
}
inline ExprPtr make_ident(const std::string& name) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Ident;
    e->name = name;
    return e;
}
inline ExprPtr make_bin(Expr::Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}
inline ExprPtr make_neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Neg;
    e->a = std::move(a);
    return e;
}
inline ExprPtr make_pow(ExprPtr a, unsigned exp) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Pow;
    e->a = std::move(a);
    e->exp = exp;
    return e;
}

struct InitStmt {
    std::string var;
    ExprPtr rhs;
    int line = 0;
};

// x := rhs1            (deterministic; prob and rhs2 are null)
// x := rhs1 [prob] rhs2
struct AssignStmt {
    std::string var;
    ExprPtr rhs1;
    ExprPtr prob;
    ExprPtr rhs2;
    int line = 0;
    bool probabilistic() const { return prob != nullptr; }
};

struct CondAst {
    bool is_flip = false;
    ExprPtr prob;      // flip(prob)
    std::string name;  // plain identifier condition
    int line = 0;
};

struct IfBlock {
    CondAst cond;
    std::vector<AssignStmt> then_body;
    std::vector<AssignStmt> else_body;
    bool has_else = false;
    int line = 0;
};

using BodyStmt = std::variant<AssignStmt, IfBlock>;

struct Program {
    std::vector<InitStmt> inits;
    std::vector<BodyStmt> body;
    int next_draw_id = 0;

    bool has_multipath() const {
        for (auto& s : body)
            if (std::holds_alternative<IfBlock>(s)) return true;
        return false;
    }

    // Variables are the identifiers that get assigned (inits or body).
    std::set<std::string> variable_names() const {
        std::set<std::string> v;
        for (auto& i : inits) v.insert(i.var);
        for (auto& s : body) {
            if (auto* a = std::get_if<AssignStmt>(&s)) {
                v.insert(a->var);
            } else {
                auto& b = std::get<IfBlock>(s);
                for (auto& x : b.then_body) v.insert(x.var);
                for (auto& x : b.else_body) v.insert(x.var);
            }
        }
        return v;
    }

    std::set<std::string> param_names() const;
};

// Rendering. parse(render(p)) reproduces p for canonical-style sources:
// binary + and - spaced, * / ^ tight, ", " between draw arguments.

namespace detail {

inline int expr_prec(const Expr& e) {
    switch (e.op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div: return 2;
        case Expr::Op::Neg: return 3;
        case Expr::Op::Pow: return 4;
        case Expr::Op::Lit: return e.lit.sign() < 0 ? 3 : 5;
        default: return 5;
    }
}

inline std::string draw_name(DrawKind k, const std::string& spelling) {
    if (!spelling.empty()) return spelling;
    switch (k) {
        case DrawKind::Uniform: return "u";
        case DrawKind::Normal: return "g";
        case DrawKind::Bernoulli: return "b";
        default: return "d";
    }
}

} // namespace detail

inline std::string render_expr(const Expr& e, int min_prec = 1) {
    using Op = Expr::Op;
    std::string s;
    switch (e.op) {
        case Op::Lit: s = e.lit.str(); break;
        case Op::Ident: s = e.name; break;
        case Op::Add: s = render_expr(*e.a, 1) + " + " + render_expr(*e.b, 2); break;
        case Op::Sub: s = render_expr(*e.a, 1) + " - " + render_expr(*e.b, 2); break;
        case Op::Mul: s = render_expr(*e.a, 2) + "*" + render_expr(*e.b, 3); break;
        case Op::Div: s = render_expr(*e.a, 2) + "/" + render_expr(*e.b, 3); break;
        case Op::Neg: s = "-" + render_expr(*e.a, 4); break;
        case Op::Pow: s = render_expr(*e.a, 5) + "^" + std::to_string(e.exp); break;
        case Op::Draw: {
            s = detail::draw_name(e.draw_kind, e.name) + "(";
            if (e.draw_kind == DrawKind::Discrete) {
                for (size_t i = 0; i < e.outcomes.size(); ++i) {
                    if (i) s += ", ";
                    s += render_expr(*e.outcomes[i].first, 1) + ":" + render_expr(*e.outcomes[i].second, 1);
                }
            } else {
                for (size_t i = 0; i < e.args.size(); ++i) {
                    if (i) s += ", ";
                    s += render_expr(*e.args[i], 1);
                }
            }
            s += ")";
            break;
        }
    }
    if (detail::expr_prec(e) < min_prec) return "(" + s + ")";
    return s;
}

inline std::string render_assign(const AssignStmt& a) {
    std::string s = a.var + " := " + render_expr(*a.rhs1);
    if (a.probabilistic()) s += " [" + render_expr(*a.prob) + "] " + render_expr(*a.rhs2);
    return s;
}

inline std::string render_program(const Program& p) {
    std::string out;
    for (auto& i : p.inits) out += i.var + " := " + render_expr(*i.rhs) + "\n";
    out += "while true:\n";
    for (auto& s : p.body) {
        if (auto* a = std::get_if<AssignStmt>(&s)) {
            out += "    " + render_assign(*a) + "\n";
            continue;
        }
        auto& b = std::get<IfBlock>(s);
        if (b.cond.is_flip)
            out += "    if flip(" + render_expr(*b.cond.prob) + "):\n";
        else
            out += "    if " + b.cond.name + ":\n";
        for (auto& x : b.then_body) out += "        " + render_assign(x) + "\n";
        if (b.has_else) {
            out += "    else:\n";
            for (auto& x : b.else_body) out += "        " + render_assign(x) + "\n";
        }
    }
    return out;
}

namespace detail {

inline void collect_idents(const Expr& e, std::set<std::string>& out) {
    if (e.op == Expr::Op::Ident) out.insert(e.name);
    if (e.a) collect_idents(*e.a, out);
    if (e.b) collect_idents(*e.b, out);
    for (auto& a : e.args) collect_idents(*a, out);
    for (auto& [v, p] : e.outcomes) {
        collect_idents(*v, out);
        collect_idents(*p, out);
    }
}

} // namespace detail

inline std::set<std::string> Program::param_names() const {
    std::set<std::string> idents;
    auto walk_assign = [&](const AssignStmt& a) {
        detail::collect_idents(*a.rhs1, idents);
        if (a.prob) detail::collect_idents(*a.prob, idents);
        if (a.rhs2) detail::collect_idents(*a.rhs2, idents);
    };
    for (auto& i : inits) detail::collect_idents(*i.rhs, idents);
    for (auto& s : body) {
        if (auto* a = std::get_if<AssignStmt>(&s)) {
            walk_assign(*a);
        } else {
            auto& b = std::get<IfBlock>(s);
            if (b.cond.is_flip) detail::collect_idents(*b.cond.prob, idents);
            else idents.insert(b.cond.name);
            for (auto& x : b.then_body) walk_assign(x);
            for (auto& x : b.else_body) walk_assign(x);
        }
    }
    for (auto& v : variable_names()) idents.erase(v);
    return idents;
}

} // namespace mominv
