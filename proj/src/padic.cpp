#include "padic/padic.hpp"

#include <stdexcept>

namespace padic {

using qseries::modinv;
using qseries::val_p_or_inf;
using qseries::zpow;
using qseries::zpow_mod;

PadicScalar PadicScalar::make(long p, int M, const mpz_class& value) {
  PadicScalar s;
  s.p = p;
  s.M = M;
  mpz_class pM = zpow(mpz_class(p), (unsigned long)M);
  s.residue = value % pM;
  if (s.residue < 0) s.residue += pM;
  s.val = std::min(val_p_or_inf(s.residue, p), (long)VAL_INF);
  if (s.val >= M) s.val = VAL_INF;
  return s;
}

long valuation(const mpz_class& x, long p) { return val_p_or_inf(x, p); }
long valuation(const mpq_class& x, long p) { return val_p_or_inf(x, p); }

PadicScalar hensel_gamma(int m, const mpq_class& delta, long p, int M) {
  if (!qseries::is_prime(p)) throw std::invalid_argument("hensel_gamma: p must be prime");
  if (m < 1) throw std::invalid_argument("hensel_gamma: m must be positive");
  if (m % p == 0) throw std::invalid_argument("hensel_gamma: p | m");
  if (delta == 0 || valuation(delta, p) != 0)
    throw std::invalid_argument("hensel_gamma: delta must be a p-adic unit");

  mpz_class pM = zpow(mpz_class(p), (unsigned long)M);
  mpz_class target = zpow_mod(mpz_class(delta.get_num()), mpz_class(p - 1), pM) *
                     zpow_mod(mpz_class(delta.get_den()), mpz_class(-(p - 1)), pM) % pM;

  // Newton for F(g) = g^m - target, starting at g = 1 (a simple root mod p,
  // as target = 1 mod p by Fermat).
  mpz_class g = 1;
  int prec = 1;
  while (prec < M) {
    prec = std::min(2 * prec, M);
    mpz_class mod = zpow(mpz_class(p), (unsigned long)prec);
    mpz_class gm = zpow_mod(g, mpz_class(m), mod);
    mpz_class F = (gm - target) % mod;
    if (F < 0) F += mod;
    mpz_class dF = (mpz_class(m) * zpow_mod(g, mpz_class(m - 1), mod)) % mod;
    g = (g - F * modinv(dF, mod)) % mod;
    if (g < 0) g += mod;
  }
  if (zpow_mod(g, mpz_class(m), pM) != target)
    throw std::runtime_error("hensel_gamma: iteration failed to verify gamma^m = delta^(p-1)");
  if (g % p != 1)
    throw std::runtime_error("hensel_gamma: root left 1 + pZ_p");
  return PadicScalar::make(p, M, g);
}

static long legendre_factorial_val(long j, long p) {
  long v = 0;
  long q = p;
  while (q <= j) {
    v += j / q;
    if (q > j / p) break;
    q *= p;
  }
  return v;
}

int angle(int k_minus_1, long p) {
  if (k_minus_1 < 1) throw std::invalid_argument("angle: k-1 must be >= 1");
  long bound = ((long)k_minus_1 + p) * p / (p - 1) + p;
  long best = VAL_INF;
  for (long j = k_minus_1; j <= bound; ++j) {
    long v = j - legendre_factorial_val(j, p);
    if (v < best) best = v;
  }
  return (int)best;
}

qseries::CuspContext make_cusp_context(int m, const mpq_class& delta, long p, int M) {
  qseries::CuspContext ctx;
  ctx.m = m;
  ctx.delta = delta;
  ctx.p = p;
  ctx.M = M;
  ctx.gamma = hensel_gamma(m, delta, p, M).residue;
  ctx.validate();
  return ctx;
}

}  // namespace padic
