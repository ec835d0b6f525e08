#include "qseries/numutil.hpp"

namespace qseries {

mpz_class zpow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

mpz_class zpow_mod(const mpz_class& base, const mpz_class& e, const mpz_class& mod) {
  mpz_class r;
  if (e < 0) {
    mpz_class inv = modinv(base, mod);
    mpz_class epos = -e;
    mpz_powm(r.get_mpz_t(), inv.get_mpz_t(), epos.get_mpz_t(), mod.get_mpz_t());
  } else {
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  }
  return r;
}

mpz_class modinv(const mpz_class& a, const mpz_class& mod) {
  mpz_class r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()))
    throw std::domain_error("modinv: " + a.get_str() + " is not invertible mod " + mod.get_str());
  return r;
}

long val_p(const mpz_class& x, long p) {
  if (x == 0) throw std::domain_error("val_p of zero");
  mpz_class r = x, q, rem;
  long v = 0;
  mpz_class P = p;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.get_mpz_t(), P.get_mpz_t());
    if (rem != 0) return v;
    r = q;
    ++v;
  }
}

long val_p(const mpq_class& x, long p) {
  if (x == 0) throw std::domain_error("val_p of zero");
  long v = val_p(mpz_class(x.get_num()), p);
  if (x.get_den() != 1) v -= val_p(mpz_class(x.get_den()), p);
  return v;
}

long val_p_or_inf(const mpz_class& x, long p) { return x == 0 ? VAL_INF : val_p(x, p); }
long val_p_or_inf(const mpq_class& x, long p) { return x == 0 ? VAL_INF : val_p(x, p); }

mpz_class balanced_lift(const mpz_class& x, const mpz_class& n) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  if (2 * r > n) r -= n;
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) { n /= d; ++e; }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

long euler_phi(long n) {
  long r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

}  // namespace qseries
