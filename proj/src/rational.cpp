#include "rational.hpp"

#include <cctype>
#include <ostream>

namespace qhom {

void fail_domain(const std::string& message) {
    throw Error{Error::Kind::Domain, message};
}

void fail_parse(const std::string& message) {
    throw Error{Error::Kind::Parse, message};
}

Rational::Rational(long num, long den) {
    if (den == 0) fail_domain("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
    // Grammar: -?digits(/digits)? with a positive denominator.
    auto bad = [&]() { fail_parse("malformed rational '" + s + "'"); };
    std::size_t i = 0;
    if (i < s.size() && s[i] == '-') ++i;
    std::size_t num_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == num_begin) bad();
    std::string num = s.substr(0, i);
    std::string den = "1";
    if (i < s.size()) {
        if (s[i] != '/') bad();
        ++i;
        std::size_t den_begin = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == den_begin || i != s.size()) bad();
        den = s.substr(den_begin);
    }
    Rational r;
    r.v_ = mpq_class(mpz_class(num), mpz_class(den));
    if (r.v_.get_den() == 0) fail_parse("rational with zero denominator '" + s + "'");
    r.v_.canonicalize();
    return r;
}

std::string Rational::str() const {
    return v_.get_str();
}

long Rational::to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p())
        fail_domain("rational " + str() + " is not a small integer");
    return v_.get_num().get_si();
}

Rational Rational::abs() const {
    Rational r = *this;
    r.v_ = ::abs(r.v_);
    return r;
}

Rational Rational::inverse() const {
    if (is_zero()) fail_domain("inverse of zero");
    Rational r;
    r.v_ = 1 / v_;
    return r;
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.v_ = -r.v_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) fail_domain("division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace qhom
