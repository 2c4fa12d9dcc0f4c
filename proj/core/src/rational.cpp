#include "htqd/rational.hpp"

#include "htqd/errors.hpp"

#include <cctype>
#include <sstream>

namespace htqd {

namespace {

Int parse_integer(const std::string& text) {
  if (text.empty()) throw Error(Code::RationalParseError, "empty integer");
  std::size_t i = 0;
  if (text[0] == '-') i = 1;
  if (i == text.size()) throw Error(Code::RationalParseError, "sign without digits");
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw Error(Code::RationalParseError, "invalid integer '" + text + "'");
  }
  return Int(text);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_integer(text));
  }
  Int num = parse_integer(text.substr(0, slash));
  std::string den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text[0] == '-')
    throw Error(Code::RationalParseError, "denominator must be positive in '" + text + "'");
  Int den = parse_integer(den_text);
  if (den == 0) throw Error(Code::RationalParseError, "zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string rational_str(const Rational& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << "/" << denominator(r);
  return out.str();
}

std::string vec_str(const Vec2& v) {
  return "(" + rational_str(v.x) + ", " + rational_str(v.y) + ")";
}

std::string mat_str(const Mat2& m) {
  return "[[" + rational_str(m.a) + "," + rational_str(m.b) + "],[" + rational_str(m.c) + "," +
         rational_str(m.d) + "]]";
}

}  // namespace htqd
