#include "charsums/ff.hpp"

#include <algorithm>
#include <numeric>

namespace charsums {

namespace {

// dense polynomial arithmetic over F_p, coefficients in [0, p)
using Poly = std::vector<long>;

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, long p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  // reduce mod monic f
  size_t k = f.size() - 1;
  for (size_t d = c.size(); d-- > k;) {
    long top = c[d];
    if (top == 0) continue;
    for (size_t j = 0; j < k; ++j) {
      c[d - k + j] = (c[d - k + j] - top * f[j]) % p;
      if (c[d - k + j] < 0) c[d - k + j] += p;
    }
    c[d] = 0;
  }
  c.resize(k);
  return poly_trim(c);
}

Poly poly_powmod(Poly base, mpz_class e, const Poly& f, long p) {
  Poly r = {1};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mulmod(r, base, f, p);
    e >>= 1;
    if (e > 0) base = poly_mulmod(base, base, f, p);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, long p) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    long inv = (long)qseries::modinv(mpz_class(b.back()), mpz_class(p)).get_si();
    Poly r = a;
    for (;;) {
      r = poly_trim(r);
      if (r.size() < b.size()) break;
      long top = r.back() * inv % p;
      size_t shift = r.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j) {
        r[shift + j] = (r[shift + j] - top * b[j]) % p;
        if (r[shift + j] < 0) r[shift + j] += p;
      }
    }
    a = b;
    b = r;
  }
  return a;
}

// Rabin: f of degree k is irreducible iff x^(p^k) = x mod f and
// gcd(x^(p^(k/l)) - x, f) = 1 for every prime l | k.
bool poly_irreducible(const Poly& f, long p, int k) {
  Poly x = {0, 1};
  mpz_class pk = qseries::zpow(mpz_class(p), (unsigned long)k);
  Poly xq = poly_powmod(x, pk, f, p);
  if (poly_trim(xq) != poly_trim(x)) return false;
  for (auto [ell, e] : qseries::factorize(k)) {
    (void)e;
    mpz_class pe = qseries::zpow(mpz_class(p), (unsigned long)(k / ell));
    Poly xe = poly_powmod(x, pe, f, p);
    // xe - x
    Poly diff = xe;
    diff.resize(std::max(diff.size(), x.size()), 0);
    diff[1] = (diff[1] - 1 % p + p) % p;
    Poly g = poly_gcd(f, diff, p);
    if (poly_trim(g).size() != 1) return false;
  }
  return true;
}

long encode(const Poly& a, long p) {
  long v = 0;
  for (size_t i = a.size(); i-- > 0;) v = v * p + a[i];
  return v;
}

Poly decode(long v, long p, int k) {
  Poly a((size_t)k, 0);
  for (int i = 0; i < k; ++i) {
    a[(size_t)i] = v % p;
    v /= p;
  }
  return poly_trim(a);
}

}  // namespace

FFCtx FFCtx::make(long p, int k, int skip_generators) {
  if (!qseries::is_prime(p) || p < 3)
    throw std::invalid_argument("FFCtx: p must be an odd prime");
  if (k < 1) throw std::invalid_argument("FFCtx: k must be >= 1");
  FFCtx F;
  F.p = p;
  F.k = k;
  F.q = 1;
  for (int i = 0; i < k; ++i) {
    F.q *= p;
    if (F.q > kMaxQ)
      throw std::invalid_argument("FFCtx: q = p^k exceeds the table guard " +
                                  std::to_string(kMaxQ));
  }

  Poly f;
  if (k == 1) {
    f = {0, 1};  // unused
  } else {
    // smallest monic irreducible of degree k by encoded value
    bool found = false;
    for (long low = 0; low < F.q && !found; ++low) {
      f = decode(low, p, k);
      f.resize((size_t)k + 1, 0);
      f[(size_t)k] = 1;
      if (poly_irreducible(f, p, k)) found = true;
    }
    if (!found) throw std::runtime_error("FFCtx: no irreducible polynomial found");
    F.modpoly.assign(f.begin(), f.end());
  }

  auto raw_mul = [&](long a, long b) {
    if (k == 1) return a * b % p;
    return encode(poly_mulmod(decode(a, p, k), decode(b, p, k), f, p), p);
  };
  auto raw_pow = [&](long a, long e) {
    long r = 1;
    while (e > 0) {
      if (e & 1) r = raw_mul(r, a);
      e >>= 1;
      if (e > 0) a = raw_mul(a, a);
    }
    return r;
  };

  auto factors = qseries::factorize(F.q - 1);
  int skipped = 0;
  for (long cand = 2; cand < F.q; ++cand) {
    bool ok = true;
    for (auto [ell, e] : factors) {
      (void)e;
      if (raw_pow(cand, (F.q - 1) / ell) == 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (skipped < skip_generators) {
      ++skipped;
      continue;
    }
    F.gen = cand;
    break;
  }
  if (F.gen == 0) throw std::runtime_error("FFCtx: no generator found");

  F.dlog.assign((size_t)F.q, -1);
  F.expt.assign((size_t)(2 * (F.q - 1)), 0);
  long cur = 1;
  for (long e = 0; e < F.q - 1; ++e) {
    if (F.dlog[(size_t)cur] != -1)
      throw std::runtime_error("FFCtx: generator has order < q-1");
    F.dlog[(size_t)cur] = e;
    F.expt[(size_t)e] = cur;
    F.expt[(size_t)(e + F.q - 1)] = cur;
    cur = raw_mul(cur, F.gen);
  }
  if (cur != 1) throw std::runtime_error("FFCtx: generator order check failed");
  return F;
}

long FFCtx::add(long a, long b) const {
  if (k == 1) return (a + b) % p;
  long r = 0, mul = 1;
  for (int i = 0; i < k; ++i) {
    long da = a % p, db = b % p;
    a /= p;
    b /= p;
    r += (da + db) % p * mul;
    mul *= p;
  }
  return r;
}

long FFCtx::neg(long a) const {
  if (k == 1) return (p - a) % p;
  long r = 0, mul = 1;
  for (int i = 0; i < k; ++i) {
    long da = a % p;
    a /= p;
    r += (p - da) % p * mul;
    mul *= p;
  }
  return r;
}

long FFCtx::sub(long a, long b) const { return add(a, neg(b)); }

long FFCtx::pow(long a, long e) const {
  if (a == 0) {
    if (e == 0) return 1;
    return 0;
  }
  long d = dlog[(size_t)a] * (e % (q - 1)) % (q - 1);
  if (d < 0) d += q - 1;
  return expt[(size_t)d];
}

long FFCtx::from_base(long r) const {
  r %= p;
  if (r < 0) r += p;
  return r;  // constants encode as their digit-0 value
}

MultChar mult_char(const FFCtx& F, long order) {
  if (order < 1 || (F.q - 1) % order != 0)
    throw std::invalid_argument("mult_char: order must divide q-1");
  return MultChar{&F, order};
}

}  // namespace charsums
