#include "spnd/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace spnd {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  auto g = std::gcd(num, den);
  num_ = num / (g ? g : 1);
  den_ = den / (g ? g : 1);
}

namespace {
std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  return v;
}
}  // namespace

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto int_part = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (frac.size() > 17) throw std::invalid_argument("too many decimal digits: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    bool negative = !int_part.empty() && int_part[0] == '-';
    std::int64_t whole = int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, text);
    std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
    if (f < 0) throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    std::int64_t num = (negative ? -1 : 1) * ((negative ? -whole : whole) * den + f);
    return Rational(num, den);
  }
  return Rational(parse_int(text, text));
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

bool operator<(const Rational& x, const Rational& y) {
  return static_cast<__int128>(x.num_) * y.den_ < static_cast<__int128>(y.num_) * x.den_;
}

Rational operator/(const Rational& x, std::int64_t k) { return Rational(x.num_, x.den_ * k); }

Rational min(const Rational& x, const Rational& y) { return y < x ? y : x; }

}  // namespace spnd
