#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "ast.hpp"
#include "errors.hpp"

namespace mominv {
namespace detail {

struct Tok {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind;
    std::string text;
    int col; // 1-based
};

struct SrcLine {
    int no;
    int level;
    std::vector<Tok> toks;
};

inline bool is_ident_start(char c) { return std::isalpha(unsigned(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(unsigned(c)) || c == '_'; }

class LineParser {
public:
    LineParser(const SrcLine& line, int* draw_counter) : l_(line), draws_(draw_counter) {}

    const Tok& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < l_.toks.size() ? l_.toks[i] : l_.toks.back(); // back() is End
    }
    const Tok& next() {
        const Tok& t = peek();
        if (t.kind != Tok::Kind::End) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Tok::Kind::End; }

    [[noreturn]] void fail(const std::string& msg, const Tok& t) const {
        throw ParseError(l_.no, t.col, msg);
    }

    bool accept_sym(const std::string& s) {
        if (peek().kind == Tok::Kind::Sym && peek().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_sym(const std::string& s) {
        if (!accept_sym(s)) fail("expected '" + s + "'", peek());
    }

    std::string expect_ident(const char* what) {
        const Tok& t = peek();
        if (t.kind != Tok::Kind::Ident) fail(std::string("expected ") + what, t);
        if (t.text == "n") fail("identifier 'n' is reserved for the loop counter", t);
        next();
        return t.text;
    }

    // expr := term (('+'|'-') term)*
    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (peek().kind == Tok::Kind::Sym && (peek().text == "+" || peek().text == "-")) {
            bool plus = next().text == "+";
            e = make_bin(plus ? Expr::Op::Add : Expr::Op::Sub, e, parse_term());
        }
        return e;
    }

private:
    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (peek().kind == Tok::Kind::Sym && (peek().text == "*" || peek().text == "/")) {
            const Tok& op = next();
            ExprPtr rhs = parse_factor();
            if (op.text == "/") {
                Rational v;
                if (!const_fold(*rhs, v))
                    fail("division is only supported by nonzero rational constants", op);
                if (v.is_zero()) fail("division by zero", op);
                e = make_bin(Expr::Op::Div, e, rhs);
            } else {
                e = make_bin(Expr::Op::Mul, e, rhs);
            }
        }
        return e;
    }

    ExprPtr parse_factor() {
        if (peek().kind == Tok::Kind::Sym && peek().text == "-") {
            next();
            return make_neg(parse_factor());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (peek().kind == Tok::Kind::Sym && peek().text == "^") {
            next();
            const Tok& t = peek();
            if (t.kind != Tok::Kind::Int) fail("exponent must be a natural number", t);
            next();
            return make_pow(base, unsigned(std::stoul(t.text)));
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Tok& t = peek();
        if (t.kind == Tok::Kind::Int) {
            next();
            return make_lit(Rational::parse(t.text));
        }
        if (t.kind == Tok::Kind::Ident) {
            if (peek(1).kind == Tok::Kind::Sym && peek(1).text == "(") {
                DrawKind k;
                if (draw_kind_of(t.text, k)) return parse_draw(k);
            }
            if (t.text == "n") fail("identifier 'n' is reserved for the loop counter", t);
            next();
            return make_ident(t.text);
        }
        if (t.kind == Tok::Kind::Sym && t.text == "(") {
            next();
            ExprPtr e = parse_expr();
            expect_sym(")");
            return e;
        }
        fail("expected expression", t);
    }

    static bool draw_kind_of(const std::string& s, DrawKind& out) {
        if (s == "u" || s == "rand") out = DrawKind::Uniform;
        else if (s == "g" || s == "gauss") out = DrawKind::Normal;
        else if (s == "b" || s == "bern") out = DrawKind::Bernoulli;
        else if (s == "d") out = DrawKind::Discrete;
        else return false;
        return true;
    }

    ExprPtr parse_draw(DrawKind k) {
        auto e = std::make_shared<Expr>();
        e->op = Expr::Op::Draw;
        e->draw_kind = k;
        e->name = next().text; // spelling
        e->draw_id = (*draws_)++;
        expect_sym("(");
        if (k == DrawKind::Discrete) {
            do {
                ExprPtr v = parse_expr();
                expect_sym(":");
                ExprPtr p = parse_expr();
                e->outcomes.emplace_back(std::move(v), std::move(p));
            } while (accept_sym(","));
        } else {
            e->args.push_back(parse_expr());
            if (k != DrawKind::Bernoulli) {
                expect_sym(",");
                e->args.push_back(parse_expr());
            }
        }
        expect_sym(")");
        return e;
    }

    static bool const_fold(const Expr& e, Rational& out) {
        Rational a, b;
        switch (e.op) {
            case Expr::Op::Lit: out = e.lit; return true;
            case Expr::Op::Neg:
                if (!const_fold(*e.a, a)) return false;
                out = -a;
                return true;
            case Expr::Op::Add:
            case Expr::Op::Sub:
            case Expr::Op::Mul:
            case Expr::Op::Div:
                if (!const_fold(*e.a, a) || !const_fold(*e.b, b)) return false;
                switch (e.op) {
                    case Expr::Op::Add: out = a + b; break;
                    case Expr::Op::Sub: out = a - b; break;
                    case Expr::Op::Mul: out = a * b; break;
                    default:
                        if (b.is_zero()) return false;
                        out = a / b;
                }
                return true;
            case Expr::Op::Pow:
                if (!const_fold(*e.a, a)) return false;
                out = a.pow(e.exp);
                return true;
            default: return false;
        }
    }

    const SrcLine& l_;
    int* draws_;
    size_t pos_ = 0;
};

inline std::vector<SrcLine> split_lines(const std::string& src) {
    std::vector<SrcLine> out;
    int lineno = 0;
    size_t start = 0;
    char indent_style = 0; // ' ' or '\t' once seen
    while (start <= src.size()) {
        size_t end = src.find('\n', start);
        std::string raw = src.substr(start, end == std::string::npos ? std::string::npos : end - start);
        ++lineno;
        size_t i = 0;
        bool saw_space = false, saw_tab = false;
        while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
            (raw[i] == ' ' ? saw_space : saw_tab) = true;
            ++i;
        }
        size_t content = raw.find('#');
        std::string body = raw.substr(i, content == std::string::npos ? std::string::npos : content - i);
        bool blank = body.find_first_not_of(" \t") == std::string::npos;
        if (!blank) {
            if (saw_space && saw_tab)
                throw ParseError(lineno, 1, "mixed tabs and spaces in indentation");
            int level = 0;
            if (i > 0) {
                char style = saw_tab ? '\t' : ' ';
                if (indent_style == 0) indent_style = style;
                if (style != indent_style)
                    throw ParseError(lineno, 1, "inconsistent indentation style (tabs vs spaces)");
                if (style == ' ') {
                    if (i % 4 != 0)
                        throw ParseError(lineno, 1, "indentation must be a multiple of 4 spaces");
                    level = int(i / 4);
                } else {
                    level = int(i);
                }
            }
            SrcLine line{lineno, level, {}};
            // tokenize
            size_t p = 0;
            while (p < body.size()) {
                char c = body[p];
                if (c == ' ' || c == '\t') {
                    ++p;
                    continue;
                }
                int col = int(i + p + 1);
                if (is_ident_start(c)) {
                    size_t q = p;
                    while (q < body.size() && is_ident_char(body[q])) ++q;
                    line.toks.push_back({Tok::Kind::Ident, body.substr(p, q - p), col});
                    p = q;
                } else if (std::isdigit(unsigned(c))) {
                    size_t q = p;
                    while (q < body.size() && std::isdigit(unsigned(body[q]))) ++q;
                    line.toks.push_back({Tok::Kind::Int, body.substr(p, q - p), col});
                    p = q;
                } else if (c == ':' && p + 1 < body.size() && body[p + 1] == '=') {
                    line.toks.push_back({Tok::Kind::Sym, ":=", col});
                    p += 2;
                } else if (std::string("+-*/^()[],:;").find(c) != std::string::npos) {
                    line.toks.push_back({Tok::Kind::Sym, std::string(1, c), col});
                    ++p;
                } else {
                    throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
                }
            }
            line.toks.push_back({Tok::Kind::End, "", int(i + body.size() + 1)});
            out.push_back(std::move(line));
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

inline bool is_while_line(const SrcLine& l) {
    return l.toks.size() == 4 && l.toks[0].kind == Tok::Kind::Ident && l.toks[0].text == "while" &&
           l.toks[1].kind == Tok::Kind::Ident && l.toks[1].text == "true" &&
           l.toks[2].kind == Tok::Kind::Sym && l.toks[2].text == ":";
}

inline bool starts_with_ident(const SrcLine& l, const char* kw) {
    return !l.toks.empty() && l.toks[0].kind == Tok::Kind::Ident && l.toks[0].text == kw;
}

// One or more ';'-separated assignments on a single line.
inline std::vector<AssignStmt> parse_assign_line(const SrcLine& l, int* draw_counter, bool allow_branch) {
    std::vector<AssignStmt> out;
    LineParser p(l, draw_counter);
    do {
        AssignStmt a;
        a.line = l.no;
        a.var = p.expect_ident("a variable name");
        p.expect_sym(":=");
        a.rhs1 = p.parse_expr();
        if (p.accept_sym("[")) {
            if (!allow_branch) p.fail("probabilistic branch is not allowed here", p.peek());
            a.prob = p.parse_expr();
            p.expect_sym("]");
            a.rhs2 = p.parse_expr();
        }
        out.push_back(std::move(a));
    } while (p.accept_sym(";"));
    if (!p.at_end()) p.fail("unexpected trailing tokens", p.peek());
    return out;
}

} // namespace detail

inline Program parse_program(const std::string& src) {
    auto lines = detail::split_lines(src);
    Program prog;
    size_t i = 0;

    // initialization section
    while (i < lines.size() && !detail::is_while_line(lines[i])) {
        auto& l = lines[i];
        if (l.level != 0) throw ParseError(l.no, 1, "initialization lines must not be indented");
        if (detail::starts_with_ident(l, "while"))
            throw ParseError(l.no, l.toks[0].col, "malformed loop header, expected 'while true:'");
        for (auto& a : detail::parse_assign_line(l, &prog.next_draw_id, false))
            prog.inits.push_back({a.var, a.rhs1, a.line});
        ++i;
    }
    if (i == lines.size()) {
        int last = lines.empty() ? 1 : lines.back().no;
        throw ParseError(last, 1, "missing 'while true:' loop header");
    }
    if (lines[i].level != 0)
        throw ParseError(lines[i].no, 1, "loop header must not be indented");
    ++i;

    // loop body
    while (i < lines.size()) {
        auto& l = lines[i];
        if (l.level != 1)
            throw ParseError(l.no, 1, "loop body lines must be indented one level");
        if (detail::starts_with_ident(l, "if")) {
            IfBlock blk;
            blk.line = l.no;
            detail::LineParser p(l, &prog.next_draw_id);
            p.next(); // 'if'
            if (p.peek().kind == detail::Tok::Kind::Ident && p.peek().text == "flip" &&
                p.peek(1).kind == detail::Tok::Kind::Sym && p.peek(1).text == "(") {
                p.next();
                p.expect_sym("(");
                blk.cond.is_flip = true;
                blk.cond.prob = p.parse_expr();
                p.expect_sym(")");
            } else {
                blk.cond.name = p.expect_ident("a condition");
            }
            blk.cond.line = l.no;
            p.expect_sym(":");
            if (!p.at_end()) p.fail("unexpected trailing tokens", p.peek());
            ++i;
            while (i < lines.size() && lines[i].level == 2) {
                for (auto& a : detail::parse_assign_line(lines[i], &prog.next_draw_id, true))
                    blk.then_body.push_back(std::move(a));
                ++i;
            }
            if (blk.then_body.empty())
                throw ParseError(l.no, 1, "empty 'if' branch");
            if (i < lines.size() && lines[i].level == 1 && detail::starts_with_ident(lines[i], "else")) {
                auto& el = lines[i];
                detail::LineParser q(el, &prog.next_draw_id);
                q.next(); // 'else'
                q.expect_sym(":");
                if (!q.at_end()) q.fail("unexpected trailing tokens", q.peek());
                blk.has_else = true;
                ++i;
                size_t before = i;
                while (i < lines.size() && lines[i].level == 2) {
                    for (auto& a : detail::parse_assign_line(lines[i], &prog.next_draw_id, true))
                        blk.else_body.push_back(std::move(a));
                    ++i;
                }
                if (i == before) throw ParseError(el.no, 1, "empty 'else' branch");
            }
            prog.body.emplace_back(std::move(blk));
        } else {
            for (auto& a : detail::parse_assign_line(l, &prog.next_draw_id, true))
                prog.body.emplace_back(std::move(a));
            ++i;
        }
    }
    if (prog.body.empty()) {
        int last = lines.empty() ? 1 : lines.back().no;
        throw ParseError(last, 1, "loop body is empty");
    }
    return prog;
}

} // namespace mominv
