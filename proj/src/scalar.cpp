#include "torsig/scalar.hpp"

#include <cctype>

namespace torsig {

namespace {

BigInt parse_integer(const std::string& text, const std::string& whole) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw InputError("malformed rational: \"" + whole + "\"");
  for (std::size_t j = i; j < text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(text[j])))
      throw InputError("malformed rational: \"" + whole + "\"");
  return BigInt(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s, text));
  const BigInt num = parse_integer(s.substr(0, slash), text);
  const BigInt den = parse_integer(s.substr(slash + 1), text);
  if (den == 0) throw InputError("zero denominator in \"" + text + "\"");
  return Rational(num, den);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace torsig
