#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace fairdiv {

/// Exact rational number, canonically reduced with a positive denominator.
/// Every quantity the solvers touch (values, weights, prices, spendings)
/// lives in this type; there is no floating point on any solver path.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(n) {}
    Rational(long num, long den);

    /// Parses "5", "-3" or "7/2". Throws Errc::parse_error on anything else.
    static Rational parse(const std::string& s);

    std::string str() const;

    bool is_zero() const { return sgn(v_) == 0; }
    bool positive() const { return sgn(v_) > 0; }
    int sign() const { return sgn(v_); }

    std::string num_str() const { return v_.get_num().get_str(); }
    std::string den_str() const { return v_.get_den().get_str(); }

    /// Smallest integer >= value. Throws if it does not fit a long.
    long ceil_long() const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class v_;
};

} // namespace fairdiv
