// Exact rational arithmetic for note durations.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zipfian {

/// Reduced fraction over int64 with positive denominator. Durations such as
/// 1/12 and 1/3 must survive scaling and serialization without float loss.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& other) const;
  Rational operator-(const Rational& other) const;
  Rational operator*(const Rational& other) const;

  bool operator==(const Rational& other) const {
    return num_ == other.num_ && den_ == other.den_;
  }
  bool operator!=(const Rational& other) const { return !(*this == other); }
  bool operator<(const Rational& other) const;

  bool positive() const { return num_ > 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "3/2" for proper fractions, "3" when the denominator is 1.
  std::string str() const;

  /// Accepts "3", "-3", "3/2". Throws DataError on anything else.
  static Rational parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace zipfian
