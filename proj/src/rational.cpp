#include "zipfian/rational.hpp"

#include <charconv>
#include <numeric>

#include "zipfian/errors.hpp"

namespace zipfian {

namespace {

std::int64_t checked(__int128 value, const char* op) {
  if (value > INT64_MAX || value < INT64_MIN) {
    throw DataError(std::string("rational overflow in ") + op);
  }
  return static_cast<std::int64_t>(value);
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("invalid rational: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw DataError("rational with zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  std::int64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  num_ = numerator / g;
  den_ = denominator / g;
}

Rational Rational::operator+(const Rational& other) const {
  __int128 n = static_cast<__int128>(num_) * other.den_ +
               static_cast<__int128>(other.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * other.den_;
  return Rational(checked(n, "+"), checked(d, "+"));
}

Rational Rational::operator-(const Rational& other) const {
  return *this + Rational(-other.num_, other.den_);
}

Rational Rational::operator*(const Rational& other) const {
  std::int64_t g1 = std::gcd(num_, other.den_);
  std::int64_t g2 = std::gcd(other.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  __int128 n = static_cast<__int128>(num_ / g1) * (other.num_ / g2);
  __int128 d = static_cast<__int128>(den_ / g2) * (other.den_ / g1);
  return Rational(checked(n, "*"), checked(d, "*"));
}

bool Rational::operator<(const Rational& other) const {
  return static_cast<__int128>(num_) * other.den_ <
         static_cast<__int128>(other.num_) * den_;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text, text));
  }
  return Rational(parse_int(text.substr(0, slash), text),
                  parse_int(text.substr(slash + 1), text));
}

}  // namespace zipfian
