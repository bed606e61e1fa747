#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace qhom {

// Thrown for violated preconditions and malformed mathematical input.
// `Kind` maps onto the CLI exit-code contract: Domain -> 1, Parse -> 2.
struct Error {
    enum class Kind { Domain, Parse };
    Kind kind;
    std::string message;
};

[[noreturn]] void fail_domain(const std::string& message);
[[noreturn]] void fail_parse(const std::string& message);

// Exact rational number over arbitrary-precision integers.
// Always canonical: lowest terms, denominator > 0, zero is 0/1.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den);

    // Accepts "p/q" or the integer shorthand "n". A sign is allowed on the
    // numerator only: "-3/7" parses, "3/-7" is rejected.
    static Rational parse(const std::string& s);

    std::string str() const;

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    long to_long() const;  // requires an integer value that fits

    Rational abs() const;
    Rational inverse() const;  // requires nonzero

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);  // requires nonzero divisor

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

  private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace qhom
