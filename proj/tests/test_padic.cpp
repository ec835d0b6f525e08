#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "padic/padic.hpp"

using namespace padic;
using qseries::zpow;
using qseries::zpow_mod;

TEST_CASE("valuation") {
  CHECK(valuation(mpz_class(50), 5) == 2);
  CHECK(valuation(mpq_class(-4, 3), 3) == -1);
  CHECK(valuation(zpow(mpz_class(7), 11), 7) == 11);
  CHECK(valuation(mpz_class(0), 5) == VAL_INF);
}

TEST_CASE("hensel_gamma forced cases") {
  PadicScalar g1 = hensel_gamma(1, 2, 5, 3);
  CHECK(g1.residue == 16);  // 2^4

  PadicScalar g2 = hensel_gamma(2, 2, 5, 4);
  CHECK(g2.residue == 621);  // -4 in 1 + 5Z_5, (-4)^2 = 16

  PadicScalar g3 = hensel_gamma(2, 1, 7, 5);
  CHECK(g3.residue == 1);
}

TEST_CASE("hensel_gamma defining congruence at full precision (property)") {
  std::mt19937_64 rng(31);
  std::vector<long> primes = {5, 7, 11, 13};
  std::uniform_int_distribution<int> mi(1, 6), di(1, 50), Mi(1, 10);
  for (int it = 0; it < 100; ++it) {
    long p = primes[(size_t)(rng() % primes.size())];
    int m = mi(rng);
    while (m % p == 0) m = mi(rng);
    int M = Mi(rng);
    long dn = di(rng), dd = di(rng);
    if (dn % p == 0 || dd % p == 0) continue;
    mpq_class delta(dn, dd);
    delta.canonicalize();
    PadicScalar g = hensel_gamma(m, delta, p, M);
    mpz_class pM = zpow(mpz_class(p), (unsigned long)M);
    mpz_class target = zpow_mod(mpz_class(delta.get_num()), mpz_class(p - 1), pM) *
                       zpow_mod(mpz_class(delta.get_den()), mpz_class(-(p - 1)), pM) % pM;
    CHECK(zpow_mod(g.residue, mpz_class(m), pM) == target);
    CHECK(g.residue % p == 1);
  }
}

TEST_CASE("hensel_gamma rejects bad input") {
  CHECK_THROWS(hensel_gamma(5, 2, 5, 3));   // p | m
  CHECK_THROWS(hensel_gamma(2, 10, 5, 3));  // delta not a unit
}

static int angle_scan_oracle(int k1, long p) {
  long best = 1 << 30;
  for (long j = k1; j <= 200; ++j) {
    long v = j;
    for (long q = p; q <= j; q *= p) v -= j / q;
    best = std::min(best, v);
  }
  return (int)best;
}

TEST_CASE("angle against a direct scan") {
  CHECK(angle(11, 11) == 10);
  CHECK(angle(2, 5) == 2);
  CHECK(angle(1, 2) == 1);
  CHECK(angle(1, 97) == 1);
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
    for (int k1 = 1; k1 <= 14; ++k1) CHECK(angle(k1, p) == angle_scan_oracle(k1, p));
}

TEST_CASE("angle equals k-1 for large p") {
  for (int k1 = 1; k1 <= 12; ++k1)
    for (long p : {29L, 31L, 97L})
      if (p > k1 && p >= 2 * k1) CHECK(angle(k1, p) == k1);
}
