// Exact rational arithmetic on top of GMP.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mfe {

using Rational = mpq_class;
using Integer = mpz_class;

// a/b in lowest terms; b must be nonzero.
Rational ratio(long a, long b);

// "p/q" for non-integers, "p" for integers.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "p", "p/q", "-p/q"; throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

// q^e for any integer exponent; q must be nonzero when e < 0.
Rational pow(const Rational& q, long e);

Integer factorial(unsigned long n);
Integer catalan(unsigned long n);

}  // namespace mfe
