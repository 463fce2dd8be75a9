#pragma once

// Exact integer and rational scalars shared by every module.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace orbidisk {

using Int = mpz_class;
using Rat = mpq_class;

using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

/// Builds num/den in lowest terms with positive denominator.
Rat make_rat(const Int& num, const Int& den = 1);

bool is_integer(const Rat& x);
Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);
/// x - floor(x), always in [0, 1).
Rat frac_part(const Rat& x);

Int gcd_int(const Int& a, const Int& b);
Int lcm_int(const Int& a, const Int& b);
Int factorial(unsigned long n);

/// "p/q" with q > 0 and gcd 1; integers render without "/1".
std::string to_string(const Rat& x);
std::string to_string(const Int& x);

/// Parses "p", "-p" or "p/q". Throws Error(kind::parse) on malformed input.
Rat parse_rational(std::string_view text);

RatVector to_rat(const IntVector& v);
/// Converts when every entry is integral; throws otherwise.
IntVector to_int(const RatVector& v);

std::int64_t to_i64(const Int& x);

}  // namespace orbidisk
