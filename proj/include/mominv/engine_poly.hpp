#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "ratfunc.hpp"

namespace mominv {

// One multiplicative building block of an update polynomial:
//   Cur(i)   value of variable i at step n (only self-references produce it)
//   Next(i)  value of variable i at step n+1 (references to earlier-assigned
//            variables under the sequential update semantics)
//   Draw(id) one syntactic draw occurrence (fresh realization each step)
struct Atom {
    enum class Kind : std::uint8_t { Cur, Next, Draw };
    Kind kind;
    int id;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Sorted (atom, exponent) pairs, exponents > 0.
using EngineMono = std::vector<std::pair<Atom, unsigned>>;

inline EngineMono mono_mul(const EngineMono& a, const EngineMono& b) {
    EngineMono r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
            r.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first)
            r.push_back(b[j++]);
        else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    return r;
}

inline unsigned mono_exponent(const EngineMono& m, const Atom& a) {
    for (auto& [at, e] : m)
        if (at == a) return e;
    return 0;
}

inline EngineMono mono_without(const EngineMono& m, const Atom& a) {
    EngineMono r;
    for (auto& [at, e] : m)
        if (!(at == a)) r.emplace_back(at, e);
    return r;
}

// Polynomial over atoms with rational-function coefficients. The canonical
// term map makes powers of the same atom within a term collect automatically,
// which the expectation pass relies on: a branch coin or draw is collapsed
// only once per term, with its full exponent.
class EnginePoly {
public:
    EnginePoly() = default;
    EnginePoly(const RatFunc& c) { add_term({}, c); } // NOLINT: implicit by design
    EnginePoly(long long c) { add_term({}, RatFunc(c)); }          // NOLINT

    static EnginePoly atom(const Atom& a, unsigned e = 1) {
        EnginePoly p;
        p.add_term({{a, e}}, RatFunc(1));
        return p;
    }

    void add_term(const EngineMono& m, const RatFunc& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    const std::map<EngineMono, RatFunc>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
    RatFunc constant_value() const {
        return t_.empty() ? RatFunc(0) : t_.begin()->second;
    }

    EnginePoly operator-() const {
        EnginePoly r;
        for (auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    EnginePoly& operator+=(const EnginePoly& o) {
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    EnginePoly& operator-=(const EnginePoly& o) {
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend EnginePoly operator+(EnginePoly a, const EnginePoly& b) { return a += b; }
    friend EnginePoly operator-(EnginePoly a, const EnginePoly& b) { return a -= b; }
    friend EnginePoly operator*(const EnginePoly& a, const EnginePoly& b) {
        EnginePoly r;
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }

    EnginePoly scaled(const RatFunc& c) const {
        EnginePoly r;
        if (c.is_zero()) return r;
        for (auto& [m, x] : t_) r.t_.emplace(m, x * c);
        return r;
    }

    EnginePoly pow(unsigned e) const {
        EnginePoly acc = 1, base = *this;
        for (; e > 0; e >>= 1, base = base * base)
            if (e & 1) acc = acc * base;
        return acc;
    }

    // Largest atom of the given kind present in any term, if any.
    bool max_atom_of(Atom::Kind kind, Atom& out) const {
        bool found = false;
        for (auto& [m, c] : t_)
            for (auto& [a, e] : m)
                if (a.kind == kind && (!found || out < a)) {
                    out = a;
                    found = true;
                }
        return found;
    }

    bool contains_kind(Atom::Kind kind) const {
        for (auto& [m, c] : t_)
            for (auto& [a, e] : m)
                if (a.kind == kind) return true;
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (auto& [m, c] : t_) f(m, c);
    }

    friend bool operator==(const EnginePoly& a, const EnginePoly& b) { return a.t_ == b.t_; }

private:
    std::map<EngineMono, RatFunc> t_;
};

} // namespace mominv
