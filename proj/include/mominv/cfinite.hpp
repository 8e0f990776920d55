#pragma once

#include <string>
#include <vector>

#include "npoly.hpp"

namespace mominv {

// One exponential-polynomial summand poly(n) * base^n.
struct CTerm {
    RatFunc base;
    NPoly poly;
};

// Exponential polynomial sum_i P_i(n) * theta_i^n, valid from validity_start
// on, with explicitly stored values for the steps before that. Construction
// canonicalizes: equal bases (cross-multiplication test) are merged, zero
// summands dropped, terms ordered with base 1 first and then by base string,
// and validity_start is lowered while the stored value at the last prefix
// position already coincides with the term sum there.
class CFinite {
public:
    CFinite() = default;

    CFinite(std::vector<CTerm> terms, unsigned validity_start, std::vector<RatFunc> prefix) {
        if (prefix.size() != validity_start)
            throw Error("closed form prefix length does not match validity start");
        for (auto& t : terms) add_merged(std::move(t));
        std::erase_if(t_, [](const CTerm& t) { return t.poly.is_zero(); });
        std::sort(t_.begin(), t_.end(), [](const CTerm& a, const CTerm& b) {
            bool a1 = a.base.is_one(), b1 = b.base.is_one();
            if (a1 != b1) return a1;
            return a.base.str() < b.base.str();
        });
        v_ = validity_start;
        p_ = std::move(prefix);
        while (v_ > 0 && p_.back() == term_sum_at(v_ - 1)) {
            p_.pop_back();
            --v_;
        }
    }

    static CFinite constant(const RatFunc& c) { return CFinite({{RatFunc(1), NPoly(c)}}, 0, {}); }
    static CFinite polynomial(const NPoly& p) { return CFinite({{RatFunc(1), p}}, 0, {}); }
    static CFinite geometric(const RatFunc& base, const NPoly& poly) {
        return CFinite({{base, poly}}, 0, {});
    }

    const std::vector<CTerm>& terms() const { return t_; }
    unsigned validity_start() const { return v_; }
    const std::vector<RatFunc>& prefix() const { return p_; }

    bool is_zero() const { return t_.empty() && v_ == 0; }

    // Exact symbolic value at step n (prefix value below validity_start).
    RatFunc value_at(long long n) const {
        if (n < 0) throw Error("closed form evaluated at negative step");
        if (n < (long long)v_) return p_[size_t(n)];
        return term_sum_at(n);
    }

    Rational eval(long long n, const Bindings& b) const { return value_at(n).eval(b); }

    friend CFinite operator+(const CFinite& a, const CFinite& b) {
        std::vector<CTerm> ts = a.t_;
        ts.insert(ts.end(), b.t_.begin(), b.t_.end());
        unsigned v = std::max(a.v_, b.v_);
        std::vector<RatFunc> pre;
        for (unsigned i = 0; i < v; ++i) pre.push_back(a.value_at(i) + b.value_at(i));
        return CFinite(std::move(ts), v, std::move(pre));
    }

    friend CFinite operator-(const CFinite& a, const CFinite& b) { return a + b.scaled(-1); }

    friend CFinite operator*(const CFinite& a, const CFinite& b) {
        std::vector<CTerm> ts;
        for (auto& x : a.t_)
            for (auto& y : b.t_) ts.push_back({x.base * y.base, x.poly * y.poly});
        unsigned v = std::max(a.v_, b.v_);
        std::vector<RatFunc> pre;
        for (unsigned i = 0; i < v; ++i) pre.push_back(a.value_at(i) * b.value_at(i));
        return CFinite(std::move(ts), v, std::move(pre));
    }

    CFinite scaled(const RatFunc& c) const {
        std::vector<CTerm> ts;
        for (auto& t : t_) ts.push_back({t.base, t.poly.scaled(c)});
        std::vector<RatFunc> pre;
        for (auto& x : p_) pre.push_back(x * c);
        return CFinite(std::move(ts), v_, std::move(pre));
    }

    // y(n) = x(n + s) for s >= 0.
    CFinite shifted(unsigned s) const {
        std::vector<CTerm> ts;
        for (auto& t : t_) ts.push_back({t.base, t.poly.shifted_n(s).scaled(t.base.pow(s))});
        unsigned v = v_ > s ? v_ - s : 0;
        std::vector<RatFunc> pre;
        for (unsigned i = 0; i < v; ++i) pre.push_back(value_at(i + s));
        return CFinite(std::move(ts), v, std::move(pre));
    }

    void collect_variables(std::set<std::string>& out) const {
        for (auto& t : t_) {
            t.base.collect_variables(out);
            t.poly.collect_variables(out);
        }
        for (auto& x : p_) x.collect_variables(out);
    }

    // Collect non-constant coefficient denominators (side conditions).
    void collect_denominators(std::set<std::string>& out) const {
        auto grab = [&](const RatFunc& r) {
            if (r.den().has_variables()) out.insert(r.den().str());
        };
        for (auto& t : t_) {
            grab(t.base);
            for (auto& c : t.poly.coeffs()) grab(c);
        }
        for (auto& x : p_) grab(x);
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (auto& t : t_) {
            if (t.base.is_one()) {
                // leading position by construction; renders its own sign
                s += t.poly.str();
                continue;
            }
            bool neg = t.poly.coeffs().back().render_sign() < 0;
            NPoly mag = neg ? -t.poly : t.poly;
            if (s.empty())
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            std::string bs = base_str(t.base);
            if (mag.is_one())
                s += bs;
            else if (mag.degree() == 0)
                s += mag.coeff(0).factor_str() + "*" + bs;
            else if (mag.coeffs().size() - poly_zero_count(mag) == 1)
                s += single_term_str(mag) + "*" + bs;
            else
                s += "(" + mag.str() + ")*" + bs;
        }
        return s;
    }

private:
    static size_t poly_zero_count(const NPoly& p) {
        size_t z = 0;
        for (auto& c : p.coeffs())
            if (c.is_zero()) ++z;
        return z;
    }

    // Render a poly known to have exactly one nonzero coefficient.
    static std::string single_term_str(const NPoly& p) {
        for (size_t j = p.coeffs().size(); j-- > 0;) {
            const RatFunc& c = p.coeff(j);
            if (c.is_zero()) continue;
            if (j == 0) return c.factor_str();
            std::string npart = j == 1 ? "n" : "n^" + std::to_string(j);
            if (c.is_one()) return npart;
            return c.factor_str() + "*" + npart;
        }
        return "0";
    }

    static std::string base_str(const RatFunc& b) {
        std::string s = b.str();
        bool bare = !s.empty() && s.find_first_of("+-*/^ ") == std::string::npos;
        return (bare ? s : "(" + s + ")") + "^n";
    }

    void add_merged(CTerm&& t) {
        for (auto& u : t_)
            if (u.base == t.base) {
                u.poly = u.poly + t.poly;
                return;
            }
        t_.push_back(std::move(t));
    }

    RatFunc term_sum_at(long long n) const {
        RatFunc acc = 0;
        for (auto& t : t_) acc += t.poly.eval_sym(n) * t.base.pow(n);
        return acc;
    }

    std::vector<CTerm> t_;
    unsigned v_ = 0;
    std::vector<RatFunc> p_;
};

// Semantic equality: same canonical term decomposition, same validity start,
// same stored prefix values. Distinct bases are linearly independent over
// polynomial coefficients, so equal functions have equal decompositions.
inline bool equivalent(const CFinite& a, const CFinite& b) {
    if (a.validity_start() != b.validity_start()) return false;
    for (unsigned i = 0; i < a.validity_start(); ++i)
        if (!(a.prefix()[i] == b.prefix()[i])) return false;
    if (a.terms().size() != b.terms().size()) return false;
    std::vector<bool> used(b.terms().size(), false);
    for (auto& x : a.terms()) {
        bool found = false;
        for (size_t j = 0; j < b.terms().size(); ++j) {
            if (used[j] || !(b.terms()[j].base == x.base)) continue;
            if (!(b.terms()[j].poly == x.poly)) return false;
            used[j] = true;
            found = true;
            break;
        }
        if (!found) return false;
    }
    return true;
}

} // namespace mominv
