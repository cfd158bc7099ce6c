#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spnd {

/// Exact nonnegative-or-positive rational with 64-bit parts, always reduced
/// and with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "p/q", an integer, or a plain decimal such as "0.25".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, std::int64_t k);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational min(const Rational& x, const Rational& y);

}  // namespace spnd
