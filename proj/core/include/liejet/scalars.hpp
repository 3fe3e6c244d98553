#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "liejet/exceptions.hpp"

namespace liejet {

// Exact coefficient field: arbitrary-precision rationals, always canonical p/q.
using Rational = mpq_class;

inline std::string double_to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

// Uniform interface the jet templates program against. R must be a commutative
// ring with exact equality; division shows up only through from_ratio.
template <class R>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_long(long n) { return Rational(n); }
    static Rational from_ratio(long num, long den) {
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static Rational abs(const Rational& x) { return ::abs(x); }
    static double to_double(const Rational& x) { return x.get_d(); }
    static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_long(long n) { return static_cast<double>(n); }
    static double from_ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }
    static bool is_zero(double x) { return x == 0.0; }
    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static std::string str(double x) { return double_to_string(x); }
};

// Dense polynomial in one formal parameter t over R. Used as a coefficient
// ring for Moser-path objects, so it satisfies the same traits interface.
template <class R>
class TPoly {
  public:
    TPoly() = default;
    explicit TPoly(R c) : c_{std::move(c)} { trim(); }

    static TPoly t(int power = 1) {
        TPoly p;
        p.c_.assign(power + 1, ScalarTraits<R>::zero());
        p.c_[power] = ScalarTraits<R>::one();
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const std::vector<R>& coeffs() const { return c_; }

    R coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return ScalarTraits<R>::zero();
        return c_[k];
    }

    bool is_zero() const { return c_.empty(); }

    TPoly& operator+=(const TPoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ScalarTraits<R>::zero());
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    TPoly& operator-=(const TPoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ScalarTraits<R>::zero());
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
    friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
    friend TPoly operator-(const TPoly& a) {
        TPoly r = a;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend TPoly operator*(const TPoly& a, const TPoly& b) {
        TPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, ScalarTraits<R>::zero());
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

    // termwise t^k -> t^(k+1)/(k+1); the definite integral from 0 to t
    TPoly integrate() const {
        TPoly r;
        if (is_zero()) return r;
        r.c_.assign(c_.size() + 1, ScalarTraits<R>::zero());
        for (size_t i = 0; i < c_.size(); ++i)
            r.c_[i + 1] = c_[i] * ScalarTraits<R>::from_ratio(1, static_cast<long>(i) + 1);
        r.trim();
        return r;
    }

    R eval_one() const {
        R s = ScalarTraits<R>::zero();
        for (const auto& c : c_) s += c;
        return s;
    }

    R eval(const R& t) const {
        R s = ScalarTraits<R>::zero();
        for (size_t i = c_.size(); i-- > 0;) s = s * t + c_[i];
        return s;
    }

  private:
    void trim() {
        while (!c_.empty() && ScalarTraits<R>::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<R> c_; // c_[k] multiplies t^k; invariant: no trailing zeros
};

template <class R>
struct ScalarTraits<TPoly<R>> {
    static constexpr bool exact = ScalarTraits<R>::exact;
    static TPoly<R> zero() { return TPoly<R>(); }
    static TPoly<R> one() { return TPoly<R>(ScalarTraits<R>::one()); }
    static TPoly<R> from_long(long n) { return TPoly<R>(ScalarTraits<R>::from_long(n)); }
    static TPoly<R> from_ratio(long num, long den) { return TPoly<R>(ScalarTraits<R>::from_ratio(num, den)); }
    static bool is_zero(const TPoly<R>& x) { return x.is_zero(); }
    static double to_double(const TPoly<R>& x) { return ScalarTraits<R>::to_double(x.eval_one()); }
    static std::string str(const TPoly<R>& x) {
        if (x.is_zero()) return "0";
        std::string s;
        for (int k = 0; k <= x.degree(); ++k) {
            if (ScalarTraits<R>::is_zero(x.coeff(k))) continue;
            if (!s.empty()) s += " + ";
            s += ScalarTraits<R>::str(x.coeff(k));
            if (k > 0) s += "*t^" + std::to_string(k);
        }
        return s;
    }
};

// "p/q", "p", or (float field only) a decimal literal
template <class R>
R parse_scalar(const std::string& s);

template <>
inline Rational parse_scalar<Rational>(const std::string& s) {
    if (s.empty()) throw ParseError("empty numeric literal");
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw ParseError("bad rational literal: " + s);
    }
    try {
        Rational r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + s);
    }
}

template <>
inline double parse_scalar<double>(const std::string& s) {
    size_t pos = 0;
    double v = 0;
    try {
        if (s.find('/') != std::string::npos) {
            size_t slash = s.find('/');
            double num = std::stod(s.substr(0, slash));
            double den = std::stod(s.substr(slash + 1), &pos);
            if (den == 0.0) throw ParseError("division by zero in literal: " + s);
            return num / den;
        }
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad numeric literal: " + s);
    }
    if (pos != s.size() && s.find('/') == std::string::npos)
        throw ParseError("bad numeric literal: " + s);
    return v;
}

} // namespace liejet
