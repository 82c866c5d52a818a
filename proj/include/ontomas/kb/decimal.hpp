#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ontomas::kb {

/// Exact base-10 number: `mantissa * 10^-scale`.
///
/// Energy costs are compounded by factors like 1.05 per adjustment step, so
/// doubles would drift away from values such as 110.25 after a few steps.
/// Values are kept normalized (no trailing zero digits in the fraction), which
/// makes the canonical text and equality agree.
class Decimal {
 public:
  Decimal() = default;
  Decimal(std::int64_t value);  // NOLINT(google-explicit-constructor)

  /// Accepts `[+-]digits[.digits]`. Returns nullopt on anything else.
  static std::optional<Decimal> parse(std::string_view text);
  /// Like parse() but throws std::invalid_argument.
  static Decimal fromString(std::string_view text);

  /// Canonical text: no exponent, no trailing fractional zeros, no "-0".
  [[nodiscard]] std::string toString() const;
  [[nodiscard]] double toDouble() const;
  [[nodiscard]] bool isInteger() const { return scale_ == 0; }
  [[nodiscard]] int scale() const { return scale_; }
  [[nodiscard]] bool isNegative() const { return mantissa_ < 0; }
  [[nodiscard]] bool isZero() const { return mantissa_ == 0; }

  friend Decimal operator+(const Decimal& a, const Decimal& b);
  friend Decimal operator-(const Decimal& a, const Decimal& b);
  friend Decimal operator*(const Decimal& a, const Decimal& b);
  Decimal operator-() const;
  Decimal& operator+=(const Decimal& other) { return *this = *this + other; }
  Decimal& operator-=(const Decimal& other) { return *this = *this - other; }
  Decimal& operator*=(const Decimal& other) { return *this = *this * other; }

  friend bool operator==(const Decimal& a, const Decimal& b) {
    return a.scale_ == b.scale_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  using Int = boost::multiprecision::cpp_int;
  Decimal(Int mantissa, int scale);
  void normalize();

  Int mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace ontomas::kb
