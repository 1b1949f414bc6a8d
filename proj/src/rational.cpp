#include "tubekit/rational.hpp"

#include "tubekit/errors.hpp"

#include <cctype>
#include <limits>

namespace tubekit {

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw ParseError("bad number '" + std::string(whole) + "'");
  BigInt value = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ParseError("bad number '" + std::string(whole) + "'");
    value = value * 10 + (s[pos] - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.empty()) throw ParseError("bad number '" + std::string(text) + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    bool negative = !digits.empty() && digits[0] == '-';
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    BigInt ip = parse_integer(digits, text);
    BigInt fp = parse_integer(frac, text);
    BigInt num = (negative ? BigInt(-ip) : ip) * scale + fp;
    return Rational(negative ? BigInt(-num) : num, scale);
  }
  return Rational(parse_integer(text, text));
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

BigInt floor_div(const Rational& r) {
  BigInt n = numerator(r);
  BigInt d = denominator(r);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

BigInt ceil_div(const Rational& r) {
  BigInt n = numerator(r);
  BigInt d = denominator(r);
  BigInt q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

bool is_dyadic(const Rational& r) {
  BigInt d = denominator(r);
  return (d & (d - 1)) == 0;
}

std::int64_t to_grid_index(const Rational& r, int m) {
  Rational scaled = r * Rational(BigInt(1) << m);
  if (denominator(scaled) != 1)
    throw DomainError(format_rational(r) + " is not a multiple of 2^-" + std::to_string(m));
  BigInt n = numerator(scaled);
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw DomainError("grid index out of range");
  return static_cast<std::int64_t>(n);
}

Rational from_grid_index(std::int64_t k, int m) {
  return Rational(BigInt(k), BigInt(1) << m);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace tubekit
