#pragma once

#include <gmpxx.h>

#include <string>

namespace carnot {

/// Exact rational scalar used by every symbolic computation.
using Rational = mpq_class;

/// Parse "p", "-p/q" or a plain integer string. Throws MalformedSpec on junk.
Rational rat_parse(const std::string& s);

/// Canonical "p" or "p/q" rendering.
std::string rat_str(const Rational& r);

inline double rat_double(const Rational& r) { return r.get_d(); }

inline bool rat_is_zero(const Rational& r) { return sgn(r) == 0; }

/// Rational power with integer exponent >= 0.
Rational rat_pow(const Rational& base, unsigned e);

}  // namespace carnot
