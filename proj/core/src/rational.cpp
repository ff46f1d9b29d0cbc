#include "carnot/rational.hpp"

#include <cctype>

#include "carnot/errors.hpp"

namespace carnot {

Rational rat_parse(const std::string& s) {
  if (s.empty()) throw MalformedSpec("empty rational literal");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '+' && c != '/')
      throw MalformedSpec("bad rational literal: '" + s + "'");
  }
  try {
    Rational r(s);
    if (r.get_den() == 0) throw MalformedSpec("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw MalformedSpec("bad rational literal: '" + s + "'");
  }
}

std::string rat_str(const Rational& r) {
  return r.get_str();
}

Rational rat_pow(const Rational& base, unsigned e) {
  Rational out(1);
  Rational b = base;
  while (e) {
    if (e & 1u) out *= b;
    b *= b;
    e >>= 1u;
  }
  return out;
}

}  // namespace carnot
