#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace homkit {

using Int = mpz_class;
using Rat = mpq_class;

// base^e for e >= 0.
Int int_pow(const Int& base, unsigned long e);

// base^e; negative e inverts (base must be nonzero then). 0^0 == 1.
Rat rat_pow(const Rat& base, long e);

// Parses "p", "-p", "p/q" with q > 0 after normalization. Throws ParseError.
Rat parse_rat(const std::string& s);

// Canonical form: reduced, positive denominator, "/1" omitted.
std::string rat_to_string(const Rat& r);
std::string int_to_string(const Int& n);

double rat_to_double(const Rat& r);

// Bit length of the larger of |numerator|, denominator.
size_t rat_bits(const Rat& r);

// Strict total order usable as a std::map comparator.
struct RatLess {
  bool operator()(const Rat& a, const Rat& b) const { return cmp(a, b) < 0; }
};

}  // namespace homkit
