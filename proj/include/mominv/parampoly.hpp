#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace mominv {

// Power product of parameters, e.g. d^2*p. Factors are kept sorted by
// parameter name; the alphabetical order doubles as the fixed total order
// that makes every rendering deterministic.
class ParamMono {
public:
    ParamMono() = default;

    static ParamMono var(const std::string& name, unsigned e = 1) {
        ParamMono m;
        if (e > 0) m.f_.emplace_back(name, e);
        return m;
    }

    bool empty() const { return f_.empty(); }

    unsigned degree() const {
        unsigned d = 0;
        for (auto& [_, e] : f_) d += e;
        return d;
    }

    unsigned exponent(const std::string& name) const {
        for (auto& [s, e] : f_)
            if (s == name) return e;
        return 0;
    }

    const std::vector<std::pair<std::string, unsigned>>& factors() const { return f_; }

    ParamMono operator*(const ParamMono& o) const {
        ParamMono r;
        merge(*this, o, [&](const std::string& s, unsigned a, unsigned b) {
            if (a + b > 0) r.f_.emplace_back(s, a + b);
        });
        return r;
    }

    ParamMono pow(unsigned e) const {
        ParamMono r;
        if (e == 0) return r;
        for (auto& [s, x] : f_) r.f_.emplace_back(s, x * e);
        return r;
    }

    bool divides(const ParamMono& o) const {
        for (auto& [s, e] : f_)
            if (o.exponent(s) < e) return false;
        return true;
    }

    // pre: o.divides(*this)
    ParamMono divided_by(const ParamMono& o) const {
        ParamMono r;
        merge(*this, o, [&](const std::string& s, unsigned a, unsigned b) {
            if (a > b) r.f_.emplace_back(s, a - b);
        });
        return r;
    }

    static ParamMono gcd(const ParamMono& a, const ParamMono& b) {
        ParamMono r;
        for (auto& [s, e] : a.f_) {
            unsigned x = std::min(e, b.exponent(s));
            if (x > 0) r.f_.emplace_back(s, x);
        }
        return r;
    }

    friend bool operator==(const ParamMono& a, const ParamMono& b) { return a.f_ == b.f_; }

    // Lexicographic comparison with parameters in alphabetical order and
    // missing parameters read as exponent 0. Returns <0, 0 or >0.
    static int lex_cmp(const ParamMono& a, const ParamMono& b) {
        int r = 0;
        merge(a, b, [&](const std::string&, unsigned x, unsigned y) {
            if (r == 0 && x != y) r = x < y ? -1 : 1;
        });
        return r;
    }

    // "p", "d^2", "d^2*p"; "" for the unit monomial.
    std::string str() const {
        std::string s;
        for (auto& [name, e] : f_) {
            if (!s.empty()) s += "*";
            s += name;
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s;
    }

private:
    template <class F>
    static void merge(const ParamMono& a, const ParamMono& b, F&& visit) {
        size_t i = 0, j = 0;
        while (i < a.f_.size() || j < b.f_.size()) {
            if (j == b.f_.size() || (i < a.f_.size() && a.f_[i].first < b.f_[j].first)) {
                visit(a.f_[i].first, a.f_[i].second, 0u);
                ++i;
            } else if (i == a.f_.size() || b.f_[j].first < a.f_[i].first) {
                visit(b.f_[j].first, 0u, b.f_[j].second);
                ++j;
            } else {
                visit(a.f_[i].first, a.f_[i].second, b.f_[j].second);
                ++i, ++j;
            }
        }
    }

    std::vector<std::pair<std::string, unsigned>> f_; // sorted by name, exponents > 0
};

// Graded lexicographic, highest first. Used as the map comparator so that
// iterating a polynomial's terms yields the canonical rendering order.
struct MonoOrder {
    bool operator()(const ParamMono& a, const ParamMono& b) const {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da > db;
        return ParamMono::lex_cmp(a, b) > 0;
    }
};

using Bindings = std::map<std::string, Rational>;

// Polynomial in the analysis parameters with exact rational coefficients.
// Zero coefficients are never stored, so structural equality on the term map
// is semantic equality.
class ParamPoly {
public:
    ParamPoly() = default;
    ParamPoly(long long c) { add_term(ParamMono(), Rational(c)); } // NOLINT: implicit by design
    ParamPoly(const Rational& c) { add_term(ParamMono(), c); }     // NOLINT: implicit by design

    static ParamPoly symbol(const std::string& name) {
        ParamPoly p;
        p.add_term(ParamMono::var(name), 1);
        return p;
    }

    void add_term(const ParamMono& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
    Rational constant_value() const { return t_.empty() ? Rational(0) : t_.begin()->second; }
    size_t term_count() const { return t_.size(); }
    const std::map<ParamMono, Rational, MonoOrder>& terms() const { return t_; }

    unsigned degree() const { return t_.empty() ? 0 : t_.begin()->first.degree(); }

    // First coefficient in graded-lex order.
    Rational lead_coeff() const { return t_.empty() ? Rational(0) : t_.begin()->second; }

    ParamPoly operator-() const {
        ParamPoly r;
        for (auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    ParamPoly& operator+=(const ParamPoly& o) {
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    ParamPoly& operator-=(const ParamPoly& o) {
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        ParamPoly r;
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.t_ == b.t_; }

    ParamPoly scaled(const Rational& c) const {
        ParamPoly r;
        if (c.is_zero()) return r;
        for (auto& [m, x] : t_) r.t_.emplace(m, x * c);
        return r;
    }

    ParamPoly pow(unsigned e) const {
        ParamPoly acc = 1, base = *this;
        for (; e > 0; e >>= 1, base = base * base)
            if (e & 1) acc = acc * base;
        return acc;
    }

    Rational eval(const Bindings& b) const {
        Rational acc = 0;
        for (auto& [m, c] : t_) {
            Rational v = c;
            for (auto& [name, e] : m.factors()) {
                auto it = b.find(name);
                if (it == b.end()) throw Error("unbound parameter '" + name + "'");
                v *= it->second.pow(e);
            }
            acc += v;
        }
        return acc;
    }

    void collect_variables(std::set<std::string>& out) const {
        for (auto& [m, _] : t_)
            for (auto& [name, e] : m.factors()) out.insert(name);
    }

    bool has_variables() const {
        return !t_.empty() && !(t_.size() == 1 && t_.begin()->first.empty());
    }

    // Rational content: the poly divided by it has coprime integer
    // coefficients. Zero for the zero polynomial.
    Rational content() const {
        if (t_.empty()) return 0;
        BigInt l = 1;
        for (auto& [m, c] : t_) l = boost::multiprecision::lcm(l, c.den());
        BigInt g = 0;
        for (auto& [m, c] : t_) g = boost::multiprecision::gcd(g, BigInt(c.num() * (l / c.den())));
        return Rational(g, l);
    }

    // Common monomial factor of all terms.
    ParamMono mono_gcd() const {
        if (t_.empty()) return ParamMono();
        auto it = t_.begin();
        ParamMono g = it->first;
        for (++it; it != t_.end() && !g.empty(); ++it) g = ParamMono::gcd(g, it->first);
        return g;
    }

    ParamPoly divided_by_mono(const ParamMono& m) const {
        ParamPoly r;
        for (auto& [mo, c] : t_) r.t_.emplace(mo.divided_by(m), c);
        return r;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (auto& [m, c] : t_) {
            Rational a = c.abs();
            if (s.empty()) {
                if (c.sign() < 0) s += "-";
            } else {
                s += c.sign() < 0 ? " - " : " + ";
            }
            if (m.empty())
                s += a.str();
            else if (a == Rational(1))
                s += m.str();
            else
                s += a.str() + "*" + m.str();
        }
        return s;
    }

private:
    std::map<ParamMono, Rational, MonoOrder> t_;
};

// Univariate helpers used for best-effort fraction reduction.

inline bool univariate_in(const ParamPoly& p, std::string& name_out) {
    std::set<std::string> vars;
    p.collect_variables(vars);
    if (vars.size() != 1) return false;
    name_out = *vars.begin();
    return true;
}

inline std::vector<Rational> dense_coeffs(const ParamPoly& p, const std::string& name) {
    std::vector<Rational> c(p.degree() + 1, Rational(0));
    for (auto& [m, x] : p.terms()) c[m.exponent(name)] = x;
    return c;
}

inline ParamPoly from_dense(const std::vector<Rational>& c, const std::string& name) {
    ParamPoly p;
    for (size_t i = 0; i < c.size(); ++i) p.add_term(ParamMono::var(name, unsigned(i)), c[i]);
    return p;
}

// Remainder of dense univariate division, in place.
inline void dense_rem(std::vector<Rational>& a, const std::vector<Rational>& b) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
}

// Monic gcd of two univariate polynomials over Q (constants give gcd 1).
inline ParamPoly univariate_gcd(const ParamPoly& a, const ParamPoly& b, const std::string& name) {
    std::vector<Rational> x = dense_coeffs(a, name), y = dense_coeffs(b, name);
    while (!x.empty() && x.back().is_zero()) x.pop_back();
    while (!y.empty() && y.back().is_zero()) y.pop_back();
    while (!y.empty()) {
        dense_rem(x, y);
        std::swap(x, y);
    }
    if (x.empty()) return ParamPoly(0);
    Rational lead = x.back();
    for (auto& c : x) c /= lead;
    return from_dense(x, name);
}

} // namespace mominv
