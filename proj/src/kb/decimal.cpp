#include "ontomas/kb/decimal.hpp"

#include <stdexcept>

namespace ontomas::kb {

namespace {

using Int = boost::multiprecision::cpp_int;

Int pow10(int exponent) {
  Int result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Decimal::Decimal(std::int64_t value) : mantissa_(value), scale_(0) {}

Decimal::Decimal(Int mantissa, int scale)
    : mantissa_(std::move(mantissa)), scale_(scale) {
  normalize();
}

void Decimal::normalize() {
  if (mantissa_ == 0) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  int scale = 0;
  bool sawDigit = false;
  bool sawPoint = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      sawDigit = true;
      if (sawPoint) ++scale;
    } else if (c == '.' && !sawPoint) {
      sawPoint = true;
    } else {
      return std::nullopt;
    }
  }
  if (!sawDigit) return std::nullopt;
  // cpp_int reads a leading zero as an octal prefix
  const auto firstNonZero = digits.find_first_not_of('0');
  digits = firstNonZero == std::string::npos ? "0" : digits.substr(firstNonZero);
  Int mantissa(digits);
  if (negative) mantissa = -mantissa;
  return Decimal(std::move(mantissa), scale);
}

Decimal Decimal::fromString(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) {
    throw std::invalid_argument("not a decimal: '" + std::string(text) + "'");
  }
  return *parsed;
}

std::string Decimal::toString() const {
  const bool negative = mantissa_ < 0;
  std::string digits = (negative ? Int(-mantissa_) : mantissa_).str();
  if (scale_ > 0) {
    if (static_cast<int>(digits.size()) <= scale_) {
      digits.insert(0, static_cast<std::size_t>(scale_) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
  }
  return negative ? "-" + digits : digits;
}

double Decimal::toDouble() const { return std::stod(toString()); }

Decimal operator+(const Decimal& a, const Decimal& b) {
  const int scale = std::max(a.scale_, b.scale_);
  return Decimal(a.mantissa_ * pow10(scale - a.scale_) +
                     b.mantissa_ * pow10(scale - b.scale_),
                 scale);
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + (-b); }

Decimal operator*(const Decimal& a, const Decimal& b) {
  return Decimal(a.mantissa_ * b.mantissa_, a.scale_ + b.scale_);
}

Decimal Decimal::operator-() const { return Decimal(Int(-mantissa_), scale_); }

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  const int scale = std::max(a.scale_, b.scale_);
  const Int lhs = a.mantissa_ * pow10(scale - a.scale_);
  const Int rhs = b.mantissa_ * pow10(scale - b.scale_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace ontomas::kb
