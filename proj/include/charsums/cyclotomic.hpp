#pragma once

#include <gmpxx.h>
#include <complex>
#include <vector>

#include "qseries/numutil.hpp"

namespace charsums {

/// Element of Z[zeta_M], stored as an integer coefficient vector of length
/// phi(M), canonically reduced mod the M-th cyclotomic polynomial.
struct CycInt {
  long M = 1;
  std::vector<mpz_class> c;  // degree < phi(M)

  static const std::vector<mpz_class>& cyclotomic_poly(long M);  // ascending, monic

  static CycInt zero(long M);
  static CycInt integer(long M, const mpz_class& v);
  static CycInt zeta_power(long M, long e);
  // Reduces sum_e counts[e] zeta^e, counts indexed 0..M-1.
  static CycInt from_counts(long M, const std::vector<mpz_class>& counts);

  CycInt operator+(const CycInt& o) const;
  CycInt operator-(const CycInt& o) const;
  CycInt operator*(const CycInt& o) const;
  CycInt pow(unsigned long e) const;
  bool operator==(const CycInt& o) const { return M == o.M && c == o.c; }
  bool operator!=(const CycInt& o) const { return !(*this == o); }

  // Galois action zeta -> zeta^t, gcd(t, M) = 1.
  CycInt galois(long t) const;

  bool is_rational_integer(mpz_class* out = nullptr) const;

  // Complex embedding zeta -> exp(2 pi i t / M).
  std::complex<double> embed(long t) const;

  std::string str() const;
};

}  // namespace charsums
