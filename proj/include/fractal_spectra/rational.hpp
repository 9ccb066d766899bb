#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fractal_spectra {

/// Raised when a caller violates an operation's preconditions.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a request exceeds the configured memory/dimension budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency assertion fails.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Arbitrary-precision rational number (value semantics, always canonical).
///
/// Thin wrapper over GMP's mpq_class that hides expression templates and
/// fixes the textual format used by the CSV/JSON exporters.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw input_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
        if (den == 0) throw input_error("Rational: zero denominator");
        v_.canonicalize();
    }

    /// Exact conversion: every finite double is a dyadic rational.
    static Rational from_double(double x) {
        Rational r;
        r.v_ = mpq_class(x);
        return r;
    }

    /// Parses "p", "-p" or "p/q".
    static Rational parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw input_error("Rational: cannot parse '" + s + "'");
        q.canonicalize();
        return Rational(q);
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    double to_double() const { return v_.get_d(); }
    std::string str() const { return v_.get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw input_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// Integer power; negative exponents invert.
    Rational pow(long e) const {
        if (e < 0) {
            if (is_zero()) throw input_error("Rational: 0 to a negative power");
            return (Rational(1) / *this).pow(-e);
        }
        Rational base = *this, acc(1);
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

  private:
    mpq_class v_;
};

}  // namespace fractal_spectra
