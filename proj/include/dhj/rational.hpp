#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace dhj {

// All core computations run on unbounded-precision rationals. Floating
// point appears only in the CLI's optional --approx rendering.
using BigInt = mpz_class;
using Rat = mpq_class;

BigInt factorial(unsigned long n);

// C(n, r); zero when r > n.
BigInt binomial(unsigned long n, unsigned long r);

// n! / (c_1! ... c_k!) for nonnegative counts; n is their sum.
BigInt multinomial(const std::vector<int>& counts);

BigInt int_pow(unsigned long base, unsigned long exp);

// Reduced fraction with positive denominator; throws on zero denominator.
Rat make_rat(BigInt num, BigInt den);

inline Rat rat_of(const BigInt& value) { return Rat(value); }

// "p" when the denominator is 1, else "p/q"; always reduced.
std::string rat_to_string(const Rat& value);

// Accepts "p" or "p/q" with optional leading sign.
Rat rat_from_string(const std::string& text);

double rat_to_double(const Rat& value);

}  // namespace dhj
