#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace fplab {

// Exact arithmetic backing every counting-measure computation.  GMP's
// canonicalised mpq keeps proportions reduced, so equality tests are exact.
using Rational = mpq_class;
using BigInt = mpz_class;

// C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

// C(n, k) as uint64_t, or throws Budget when the count does not fit.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k);

// Parses "0.41", "-3", "2/5", "1e-2" into an exact rational.  Decimal text is
// taken at face value (0.41 -> 41/100), never through a double.
Rational parse_rational(std::string_view text);

// Exact value of the double (every finite double is rational).
Rational rational_from_double(double value);

BigInt floor_to_int(const Rational& q);
BigInt ceil_to_int(const Rational& q);

double to_double(const Rational& q);

// "num/den" in lowest terms, or just "num" for integers.
std::string to_string(const Rational& q);

} // namespace fplab
