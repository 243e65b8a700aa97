#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

namespace relctrl {

/// Arithmetic backend for every Scalar constructed afterwards.
/// Rational is the default: exact arbitrary-precision fractions.
/// Float exists for large randomized sweeps where exactness is not required.
enum class ArithmeticMode { Rational, Float };

ArithmeticMode arithmetic_mode();
void set_arithmetic_mode(ArithmeticMode mode);

/// RAII guard restoring the previous arithmetic mode (used by tests).
class ModeGuard {
  public:
    explicit ModeGuard(ArithmeticMode mode) : saved_(arithmetic_mode()) { set_arithmetic_mode(mode); }
    ~ModeGuard() { set_arithmetic_mode(saved_); }
    ModeGuard(const ModeGuard&) = delete;
    ModeGuard& operator=(const ModeGuard&) = delete;

  private:
    ArithmeticMode saved_;
};

/// A number in the active arithmetic mode: an exact rational kept in lowest
/// terms with positive denominator, or a binary double. Mixed-mode operands
/// promote to double.
class Scalar {
  public:
    Scalar(); // zero in the active mode
    Scalar(long value);
    Scalar(int value) : Scalar(static_cast<long>(value)) {}

    static Scalar rational(long numerator, long denominator);
    static Scalar from_mpq(mpq_class value);
    static Scalar from_mpz(const mpz_class& value);
    static Scalar from_double(double value);
    /// Parses "n", "-n" or "n/m" (decimal literals additionally in float mode).
    /// Throws SpecParseError on malformed input or zero denominator.
    static Scalar parse(const std::string& text);

    bool is_rational() const { return std::holds_alternative<mpq_class>(value_); }
    bool is_zero() const;
    bool is_negative() const;
    bool is_integer() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& rhs) const;
    Scalar operator-(const Scalar& rhs) const;
    Scalar operator*(const Scalar& rhs) const;
    /// Throws Error on exact division by zero.
    Scalar operator/(const Scalar& rhs) const;
    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);

    bool operator==(const Scalar& rhs) const;
    bool operator!=(const Scalar& rhs) const { return !(*this == rhs); }
    bool operator<(const Scalar& rhs) const;
    bool operator<=(const Scalar& rhs) const;
    bool operator>(const Scalar& rhs) const { return rhs < *this; }
    bool operator>=(const Scalar& rhs) const { return rhs <= *this; }

    Scalar abs() const;
    double to_double() const;
    /// "n" or "n/m" for rationals; shortest round-trip decimal for doubles.
    std::string to_string() const;
    /// Fits in int64 and is integral (used to emit bare JSON integers).
    bool fits_int64() const;
    std::int64_t to_int64() const;

    const mpq_class& rational_value() const { return std::get<mpq_class>(value_); }

  private:
    explicit Scalar(mpq_class q) : value_(std::move(q)) {}
    explicit Scalar(double d) : value_(d) {}

    std::variant<mpq_class, double> value_;
};

Scalar abs(const Scalar& s);

} // namespace relctrl
