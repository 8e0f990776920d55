#pragma once

#include <vector>

#include "ratfunc.hpp"

namespace mominv {

// Polynomial in the loop counter n with rational-function coefficients.
// Coefficients are stored ascending by power and trailing zeros are trimmed,
// so degree() is honest and equality is coefficient-wise.
class NPoly {
public:
    NPoly() = default;
    NPoly(const RatFunc& c) { c_.push_back(c); trim(); } // NOLINT: implicit by design
    NPoly(long long c) : NPoly(RatFunc(c)) {}            // NOLINT: implicit by design

    static NPoly n() { return from_coeffs({RatFunc(0), RatFunc(1)}); }

    static NPoly from_coeffs(std::vector<RatFunc> ascending) {
        NPoly p;
        p.c_ = std::move(ascending);
        p.trim();
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; } // -1 for the zero polynomial
    RatFunc coeff(size_t j) const { return j < c_.size() ? c_[j] : RatFunc(0); }
    const std::vector<RatFunc>& coeffs() const { return c_; }

    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

    NPoly operator-() const {
        NPoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend NPoly operator+(const NPoly& a, const NPoly& b) {
        NPoly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), RatFunc(0));
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
        r.trim();
        return r;
    }
    friend NPoly operator-(const NPoly& a, const NPoly& b) { return a + -b; }
    friend NPoly operator*(const NPoly& a, const NPoly& b) {
        if (a.is_zero() || b.is_zero()) return NPoly();
        NPoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, RatFunc(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend bool operator==(const NPoly& a, const NPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

    NPoly scaled(const RatFunc& c) const {
        if (c.is_zero()) return NPoly();
        NPoly r = *this;
        for (auto& x : r.c_) x = x * c;
        return r;
    }

    // Composition n -> n + s (s may be negative), via binomial expansion.
    NPoly shifted_n(long long s) const {
        if (s == 0 || is_zero()) return *this;
        NPoly r;
        r.c_.assign(c_.size(), RatFunc(0));
        Rational sr(s);
        for (size_t j = 0; j < c_.size(); ++j) {
            // c_j * (n + s)^j spread over powers 0..j
            Rational binom = 1, spow = 1;
            for (size_t i = j + 1; i-- > 0;) {
                r.c_[i] += c_[j] * RatFunc(binom * spow);
                if (i > 0) {
                    binom = binom * Rational((long long)i) / Rational((long long)(j - i + 1));
                    spow *= sr;
                }
            }
        }
        r.trim();
        return r;
    }

    RatFunc eval_sym(const Rational& n) const {
        RatFunc acc = 0, npow = 1;
        for (size_t j = 0; j < c_.size(); ++j) {
            acc += c_[j] * npow;
            npow = npow * RatFunc(n);
        }
        return acc;
    }

    Rational eval(const Rational& n, const Bindings& b) const {
        Rational acc = 0, npow = 1;
        for (size_t j = 0; j < c_.size(); ++j) {
            acc += c_[j].eval(b) * npow;
            npow *= n;
        }
        return acc;
    }

    void collect_variables(std::set<std::string>& out) const {
        for (auto& c : c_) c.collect_variables(out);
    }

    // Descending powers, zero coefficients omitted: "n^2 + 3/4*n", "p^2*n^2".
    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t j = c_.size(); j-- > 0;) {
            const RatFunc& c = c_[j];
            if (c.is_zero()) continue;
            bool neg = c.render_sign() < 0;
            RatFunc mag = neg ? -c : c;
            if (s.empty())
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            std::string npart = j == 0 ? "" : (j == 1 ? "n" : "n^" + std::to_string(j));
            if (j == 0)
                s += mag.str();
            else if (mag.is_one())
                s += npart;
            else
                s += mag.factor_str() + "*" + npart;
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<RatFunc> c_;
};

} // namespace mominv
