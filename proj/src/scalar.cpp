#include "relctrl/scalar.hpp"

#include "relctrl/errors.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace relctrl {

namespace {

std::atomic<ArithmeticMode> g_mode{ArithmeticMode::Rational};

bool looks_like_rational(const std::string& text) {
    // "n", "-n", "n/m" or "-n/m" (a denominator may also carry a sign)
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) { ++i; ++digits; }
    if (digits == 0) return false;
    if (i == text.size()) return true;
    if (text[i] != '/') return false;
    ++i;
    if (i < text.size() && text[i] == '-') ++i;
    digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) { ++i; ++digits; }
    return digits > 0 && i == text.size();
}

} // namespace

ArithmeticMode arithmetic_mode() { return g_mode.load(std::memory_order_relaxed); }

void set_arithmetic_mode(ArithmeticMode mode) { g_mode.store(mode, std::memory_order_relaxed); }

Scalar::Scalar() {
    if (arithmetic_mode() == ArithmeticMode::Rational) {
        value_ = mpq_class(0);
    } else {
        value_ = 0.0;
    }
}

Scalar::Scalar(long value) {
    if (arithmetic_mode() == ArithmeticMode::Rational) {
        value_ = mpq_class(static_cast<signed long>(value));
    } else {
        value_ = static_cast<double>(value);
    }
}

Scalar Scalar::rational(long numerator, long denominator) {
    if (denominator == 0) throw Error("rational with zero denominator");
    if (arithmetic_mode() == ArithmeticMode::Float) {
        return Scalar(static_cast<double>(numerator) / static_cast<double>(denominator));
    }
    mpq_class q{mpz_class(numerator), mpz_class(denominator)};
    q.canonicalize();
    return Scalar(std::move(q));
}

Scalar Scalar::from_mpq(mpq_class value) {
    if (arithmetic_mode() == ArithmeticMode::Float) return Scalar(value.get_d());
    value.canonicalize();
    return Scalar(std::move(value));
}

Scalar Scalar::from_mpz(const mpz_class& value) {
    if (arithmetic_mode() == ArithmeticMode::Float) return Scalar(value.get_d());
    return Scalar(mpq_class(value));
}

Scalar Scalar::from_double(double value) { return Scalar(value); }

Scalar Scalar::parse(const std::string& text) {
    if (text.empty()) throw SpecParseError("empty numeric literal");
    if (looks_like_rational(text)) {
        const std::size_t slash = text.find('/');
        try {
            mpz_class num(slash == std::string::npos ? text : text.substr(0, slash));
            mpz_class den(slash == std::string::npos ? std::string("1") : text.substr(slash + 1));
            if (den == 0) throw SpecParseError("zero denominator: " + text);
            mpq_class q(num, den);
            q.canonicalize();
            return from_mpq(std::move(q));
        } catch (const std::invalid_argument&) {
            throw SpecParseError("bad rational literal: " + text);
        }
    }
    if (arithmetic_mode() == ArithmeticMode::Float) {
        double d = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
        if (ec == std::errc() && ptr == text.data() + text.size()) return Scalar(d);
    }
    throw SpecParseError("bad numeric literal: " + text);
}

bool Scalar::is_zero() const {
    if (is_rational()) return sgn(std::get<mpq_class>(value_)) == 0;
    return std::get<double>(value_) == 0.0;
}

bool Scalar::is_negative() const {
    if (is_rational()) return sgn(std::get<mpq_class>(value_)) < 0;
    return std::get<double>(value_) < 0.0;
}

bool Scalar::is_integer() const {
    if (is_rational()) return std::get<mpq_class>(value_).get_den() == 1;
    double d = std::get<double>(value_);
    return std::isfinite(d) && d == std::floor(d);
}

namespace {

// Binary ops stay exact when both sides are rational, otherwise fall to double.
template <typename RatOp, typename DblOp>
Scalar combine(const Scalar& a, const Scalar& b, RatOp rat, DblOp dbl) {
    if (a.is_rational() && b.is_rational()) {
        return Scalar::from_mpq(rat(a.rational_value(), b.rational_value()));
    }
    return Scalar::from_double(dbl(a.to_double(), b.to_double()));
}

} // namespace

Scalar Scalar::operator-() const {
    if (is_rational()) return from_mpq(mpq_class(-std::get<mpq_class>(value_)));
    return Scalar(-std::get<double>(value_));
}

Scalar Scalar::operator+(const Scalar& rhs) const {
    return combine(*this, rhs,
                   [](const mpq_class& a, const mpq_class& b) { return mpq_class(a + b); },
                   [](double a, double b) { return a + b; });
}

Scalar Scalar::operator-(const Scalar& rhs) const {
    return combine(*this, rhs,
                   [](const mpq_class& a, const mpq_class& b) { return mpq_class(a - b); },
                   [](double a, double b) { return a - b; });
}

Scalar Scalar::operator*(const Scalar& rhs) const {
    return combine(*this, rhs,
                   [](const mpq_class& a, const mpq_class& b) { return mpq_class(a * b); },
                   [](double a, double b) { return a * b; });
}

Scalar Scalar::operator/(const Scalar& rhs) const {
    if (rhs.is_rational() && rhs.is_zero()) throw Error("division by zero");
    return combine(*this, rhs,
                   [](const mpq_class& a, const mpq_class& b) { return mpq_class(a / b); },
                   [](double a, double b) { return a / b; });
}

Scalar& Scalar::operator+=(const Scalar& rhs) { return *this = *this + rhs; }
Scalar& Scalar::operator-=(const Scalar& rhs) { return *this = *this - rhs; }
Scalar& Scalar::operator*=(const Scalar& rhs) { return *this = *this * rhs; }

bool Scalar::operator==(const Scalar& rhs) const {
    if (is_rational() && rhs.is_rational()) {
        return cmp(std::get<mpq_class>(value_), std::get<mpq_class>(rhs.value_)) == 0;
    }
    return to_double() == rhs.to_double();
}

bool Scalar::operator<(const Scalar& rhs) const {
    if (is_rational() && rhs.is_rational()) {
        return cmp(std::get<mpq_class>(value_), std::get<mpq_class>(rhs.value_)) < 0;
    }
    return to_double() < rhs.to_double();
}

bool Scalar::operator<=(const Scalar& rhs) const {
    if (is_rational() && rhs.is_rational()) {
        return cmp(std::get<mpq_class>(value_), std::get<mpq_class>(rhs.value_)) <= 0;
    }
    return to_double() <= rhs.to_double();
}

Scalar Scalar::abs() const {
    if (is_rational()) return from_mpq(mpq_class(::abs(std::get<mpq_class>(value_))));
    return Scalar(std::fabs(std::get<double>(value_)));
}

double Scalar::to_double() const {
    if (is_rational()) return std::get<mpq_class>(value_).get_d();
    return std::get<double>(value_);
}

std::string Scalar::to_string() const {
    if (is_rational()) {
        const mpq_class& q = std::get<mpq_class>(value_);
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    double d = std::get<double>(value_);
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

bool Scalar::fits_int64() const {
    if (!is_integer()) return false;
    if (is_rational()) {
        const mpz_class& n = std::get<mpq_class>(value_).get_num();
        return n.fits_slong_p() != 0; // long is 64-bit on this target
    }
    double d = std::get<double>(value_);
    return d >= -9.2233720368547758e18 && d <= 9.2233720368547758e18;
}

std::int64_t Scalar::to_int64() const {
    if (is_rational()) return std::get<mpq_class>(value_).get_num().get_si();
    return static_cast<std::int64_t>(std::get<double>(value_));
}

Scalar abs(const Scalar& s) { return s.abs(); }

} // namespace relctrl
