#include "filterint/rational.hpp"

#include <algorithm>
#include <ostream>

namespace filterint {

namespace {

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

mpz_class parse_integer(std::string_view text, bool allow_sign) {
    std::string_view digits = text;
    bool negative = false;
    if (allow_sign && !digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!is_digits(digits)) {
        throw RationalError("malformed rational: \"" + std::string(text) + "\"");
    }
    mpz_class value(std::string(digits), 10);
    return negative ? mpz_class(-value) : value;
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(static_cast<long>(value)) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
        throw RationalError("zero denominator");
    }
    value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
    if (value_.get_den() == 0) {
        throw RationalError("zero denominator");
    }
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(mpq_class(parse_integer(text, true)));
    }
    mpz_class num = parse_integer(text.substr(0, slash), true);
    mpz_class den = parse_integer(text.substr(slash + 1), false);
    if (den == 0) {
        throw RationalError("zero denominator in \"" + std::string(text) + "\"");
    }
    return Rational(mpq_class(num, den));
}

std::string Rational::str() const {
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& rhs) {
    value_ += rhs.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
    value_ -= rhs.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
    value_ *= rhs.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) {
        throw RationalError("division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

Rational Rational::operator-() const {
    return Rational(mpq_class(-value_));
}

Rational abs(const Rational& value) {
    return value.sign() < 0 ? -value : value;
}

Rational min(const Rational& a, const Rational& b) {
    return b < a ? b : a;
}

Rational max(const Rational& a, const Rational& b) {
    return a < b ? b : a;
}

Rational pow(const Rational& base, unsigned exponent) {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
    return Rational(mpq_class(num, den));
}

mpz_class ceil(const Rational& value) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), value.raw().get_num_mpz_t(), value.raw().get_den_mpz_t());
    return out;
}

mpz_class floor(const Rational& value) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), value.raw().get_num_mpz_t(), value.raw().get_den_mpz_t());
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) {
    return os << value.str();
}

}  // namespace filterint

std::size_t std::hash<filterint::Rational>::operator()(const filterint::Rational& value) const noexcept {
    const std::size_t h1 = mpz_get_ui(value.raw().get_num_mpz_t());
    const std::size_t h2 = mpz_get_ui(value.raw().get_den_mpz_t());
    return h1 * 0x9e3779b97f4a7c15ULL ^ (h2 + (h1 << 6) + (h1 >> 2));
}
