#include "kernelcat/numeric.hpp"

#include <cctype>
#include <string>

namespace krn::detail {

Rational parse_decimal_exact(std::string_view text) {
  const std::string original(text);
  auto fail = [&] { throw Error(ErrorCode::ParseError, "not a number: '" + original + "'"); };

  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';

  std::string digits;
  long long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();

  long long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    if (i >= text.size()) fail();
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) fail();
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) fail();

  using boost::multiprecision::mpz_int;
  // a leading zero would make gmp read the digits as octal
  const auto nonzero = digits.find_first_not_of('0');
  mpz_int mantissa(nonzero == std::string::npos ? std::string("0") : digits.substr(nonzero));
  long long power = exponent - scale;
  mpz_int ten_pow = boost::multiprecision::pow(mpz_int(10), static_cast<unsigned>(power < 0 ? -power : power));
  Rational value = power >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  return negative ? Rational(-value) : value;
}

}  // namespace krn::detail
