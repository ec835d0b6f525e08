#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qseries {

// Sentinel for infinite p-adic valuation (value is zero at full precision).
inline constexpr long VAL_INF = 1L << 40;

mpz_class zpow(const mpz_class& base, unsigned long e);
mpz_class zpow_mod(const mpz_class& base, const mpz_class& e, const mpz_class& mod);

// Inverse of a mod `mod`; throws if gcd(a, mod) != 1.
mpz_class modinv(const mpz_class& a, const mpz_class& mod);

// Exact p-adic valuation; x must be nonzero.
long val_p(const mpz_class& x, long p);
long val_p(const mpq_class& x, long p);

// Valuation with VAL_INF for zero.
long val_p_or_inf(const mpz_class& x, long p);
long val_p_or_inf(const mpq_class& x, long p);

// Balanced representative of x mod n, in (-n/2, n/2].
mpz_class balanced_lift(const mpz_class& x, const mpz_class& n);

bool is_prime(long n);
std::vector<std::pair<long, int>> factorize(long n);

long euler_phi(long n);

}  // namespace qseries
