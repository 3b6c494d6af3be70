#include "dhj/rational.hpp"

#include <stdexcept>

namespace dhj {

BigInt factorial(unsigned long n) {
  thread_local std::vector<BigInt> cache{BigInt(1)};
  while (cache.size() <= n) cache.push_back(cache.back() * static_cast<unsigned long>(cache.size()));
  return cache[n];
}

BigInt binomial(unsigned long n, unsigned long r) {
  if (r > n) return BigInt(0);
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, r);
  return out;
}

BigInt multinomial(const std::vector<int>& counts) {
  unsigned long n = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial: negative count");
    n += static_cast<unsigned long>(c);
  }
  BigInt out = factorial(n);
  for (int c : counts) {
    if (c > 1) {
      BigInt f = factorial(static_cast<unsigned long>(c));
      mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), f.get_mpz_t());
    }
  }
  return out;
}

BigInt int_pow(unsigned long base, unsigned long exp) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

Rat make_rat(BigInt num, BigInt den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat out(num, den);
  out.canonicalize();
  return out;
}

std::string rat_to_string(const Rat& value) { return value.get_str(); }

Rat rat_from_string(const std::string& text) {
  Rat out;
  if (text.empty() || mpq_set_str(out.get_mpq_t(), text.c_str(), 10) != 0)
    throw std::invalid_argument("not a rational: '" + text + "'");
  if (mpz_sgn(mpq_denref(out.get_mpq_t())) == 0)
    throw std::invalid_argument("zero denominator: '" + text + "'");
  out.canonicalize();
  return out;
}

double rat_to_double(const Rat& value) { return value.get_d(); }

}  // namespace dhj
