#pragma once

#include <string>

#include "parampoly.hpp"

namespace mominv {

namespace detail {

// Exact dense univariate quotient; remainder is known to vanish.
inline ParamPoly univariate_div_exact(const ParamPoly& a, const ParamPoly& g, const std::string& name) {
    std::vector<Rational> x = dense_coeffs(a, name), y = dense_coeffs(g, name), q;
    while (!x.empty() && x.back().is_zero()) x.pop_back();
    while (!y.empty() && y.back().is_zero()) y.pop_back();
    if (x.size() < y.size()) return ParamPoly(0);
    q.assign(x.size() - y.size() + 1, Rational(0));
    while (x.size() >= y.size() && !x.empty()) {
        Rational c = x.back() / y.back();
        size_t off = x.size() - y.size();
        q[off] = c;
        for (size_t i = 0; i < y.size(); ++i) x[off + i] -= c * y[i];
        while (!x.empty() && x.back().is_zero()) x.pop_back();
    }
    return from_dense(q, name);
}

} // namespace detail

// Quotient of two parameter polynomials. Kept in a best-effort normal form:
// common monomial factors cancelled, a shared univariate gcd divided out, and
// the denominator made monic (so a constant denominator is always exactly 1).
// Equality is decided by cross-multiplication and is exact regardless of how
// far normalization got.
class RatFunc {
public:
    RatFunc() : num_(0), den_(1) {}
    RatFunc(long long c) : num_(c), den_(1) {}                   // NOLINT: implicit by design
    RatFunc(const Rational& c) : num_(c), den_(1) {}             // NOLINT: implicit by design
    RatFunc(const ParamPoly& p) : num_(p), den_(1) {}            // NOLINT: implicit by design
    RatFunc(const ParamPoly& num, const ParamPoly& den) : num_(num), den_(den) {
        if (den_.is_zero()) throw DenominatorZero("rational function with zero denominator");
        normalize();
    }

    static RatFunc symbol(const std::string& name) { return RatFunc(ParamPoly::symbol(name)); }

    const ParamPoly& num() const { return num_; }
    const ParamPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == ParamPoly(1) && den_ == ParamPoly(1); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RatFunc operator-() const { return RatFunc(-num_, den_, 0); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + -b; }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw DenominatorZero("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    // a/b == c/d iff a*d - c*b == 0; exact for any representation.
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }

    RatFunc pow(long long e) const {
        if (e < 0) {
            if (is_zero()) throw DenominatorZero("negative power of zero rational function");
            return RatFunc(den_, num_).pow(-e);
        }
        RatFunc acc = 1, base = *this;
        for (; e > 0; e >>= 1, base = base * base)
            if (e & 1) acc = acc * base;
        return acc;
    }

    Rational eval(const Bindings& b) const {
        Rational d = den_.eval(b);
        if (d.is_zero())
            throw DenominatorZero("denominator " + den_.str() + " vanishes at the given bindings");
        return num_.eval(b) / d;
    }

    void collect_variables(std::set<std::string>& out) const {
        num_.collect_variables(out);
        den_.collect_variables(out);
    }

    // Sign of the leading numerator coefficient; used only for rendering.
    int render_sign() const { return num_.lead_coeff().sign(); }

    std::string str() const {
        if (den_ == ParamPoly(1)) return num_.str();
        return wrap(num_) + "/" + wrap(den_);
    }

    // Rendering as a factor in a product: parenthesized when the bare string
    // would bind wrong next to '*'.
    std::string factor_str() const {
        if (den_ == ParamPoly(1) && num_.term_count() > 1) return "(" + num_.str() + ")";
        return str();
    }

private:
    RatFunc(const ParamPoly& num, const ParamPoly& den, int) : num_(num), den_(den) {}

    static std::string wrap(const ParamPoly& p) {
        if (p.term_count() > 1) return "(" + p.str() + ")";
        return p.str();
    }

    void normalize() {
        if (num_.is_zero()) {
            den_ = 1;
            return;
        }
        ParamMono mg = ParamMono::gcd(num_.mono_gcd(), den_.mono_gcd());
        if (!mg.empty()) {
            num_ = num_.divided_by_mono(mg);
            den_ = den_.divided_by_mono(mg);
        }
        std::set<std::string> vars;
        num_.collect_variables(vars);
        den_.collect_variables(vars);
        if (vars.size() == 1 && den_.has_variables() && num_.has_variables()) {
            const std::string& v = *vars.begin();
            ParamPoly g = univariate_gcd(num_, den_, v);
            if (g.degree() > 0) {
                num_ = detail::univariate_div_exact(num_, g, v);
                den_ = detail::univariate_div_exact(den_, g, v);
            }
        }
        Rational lc = den_.lead_coeff();
        if (!(lc == Rational(1))) {
            Rational inv = Rational(1) / lc;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    ParamPoly num_, den_;
};

} // namespace mominv
