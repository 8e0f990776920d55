#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace mominv {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Stored reduced with positive denominator (both
// guaranteed by the backing boost type).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {} // NOLINT: implicit by design, mirrors int literals
    Rational(const BigInt& n) : v_(n) {}
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw DenominatorZero("rational with zero denominator");
        // the backing type insists on a positive denominator
        if (den < 0)
            v_ = boost::multiprecision::cpp_rational(-num, -den);
        else
            v_ = boost::multiprecision::cpp_rational(num, den);
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DenominatorZero("division of rationals by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational pow(long long e) const {
        if (e < 0) {
            if (is_zero()) throw DenominatorZero("negative power of zero");
            return Rational(den(), num()).pow(-e);
        }
        Rational base = *this, acc = 1;
        for (; e > 0; e >>= 1, base *= base)
            if (e & 1) acc *= base;
        return acc;
    }

    Rational abs() const { return v_ < 0 ? Rational(-v_) : *this; }

    double to_double() const { return v_.convert_to<double>(); }

    // "a" or "a/b", minus sign in front.
    std::string str() const {
        std::string s = num().str();
        if (den() != 1) s += "/" + den().str();
        return s;
    }

    // Accepts "a" and "a/b" with optional leading minus.
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(s));
            return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
        } catch (const Error&) {
            throw; // a zero denominator is not a syntax problem
        } catch (const std::runtime_error&) {
            throw Error("cannot parse rational '" + s + "'");
        }
    }

private:
    explicit Rational(const boost::multiprecision::cpp_rational& v) : v_(v) {}
    boost::multiprecision::cpp_rational v_;
};

} // namespace mominv
