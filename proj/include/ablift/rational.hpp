#ifndef ABLIFT_RATIONAL_HPP
#define ABLIFT_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ablift {

// Arbitrary precision, always canonicalized.
using Rational = mpq_class;
using Integer = mpz_class;

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

// Accepts "p", "-p", "p/q"; throws ParseError.
Rational parse_rational(std::string_view text);

Integer factorial(unsigned n);

}  // namespace ablift

#endif  // ABLIFT_RATIONAL_HPP
