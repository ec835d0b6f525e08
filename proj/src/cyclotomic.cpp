#include "charsums/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace charsums {

namespace {

using ZPoly = std::vector<mpz_class>;

ZPoly ztrim(ZPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// exact division by a monic divisor
ZPoly zdiv_exact(ZPoly num, const ZPoly& den) {
  size_t dd = den.size() - 1;
  if (num.size() <= dd) throw std::runtime_error("zdiv_exact: degree too small");
  ZPoly q(num.size() - dd, 0);
  for (size_t shift = q.size(); shift-- > 0;) {
    mpz_class top = num[shift + dd];
    if (top == 0) continue;
    q[shift] = top;
    for (size_t j = 0; j <= dd; ++j) num[shift + j] -= top * den[j];
  }
  for (auto& x : num)
    if (x != 0) throw std::runtime_error("zdiv_exact: division not exact");
  return q;
}

}  // namespace

const std::vector<mpz_class>& CycInt::cyclotomic_poly(long M) {
  static std::map<long, ZPoly> cache;
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  // Phi_M = (x^M - 1) / prod_{d | M, d < M} Phi_d
  ZPoly poly((size_t)M + 1, 0);
  poly[0] = -1;
  poly[(size_t)M] = 1;
  for (long d = 1; d < M; ++d) {
    if (M % d != 0) continue;
    poly = zdiv_exact(poly, cyclotomic_poly(d));
  }
  return cache.emplace(M, ztrim(poly)).first->second;
}

static ZPoly reduce_mod_cyclo(ZPoly a, long M) {
  const ZPoly& f = CycInt::cyclotomic_poly(M);
  size_t k = f.size() - 1;
  a = ztrim(a);
  while (a.size() > k) {
    mpz_class top = a.back();
    size_t shift = a.size() - 1 - k;
    for (size_t j = 0; j < k; ++j) a[shift + j] -= top * f[j];
    a.pop_back();
    a = ztrim(a);
  }
  a.resize(k, 0);
  return a;
}

CycInt CycInt::zero(long M) {
  CycInt z;
  z.M = M;
  z.c.assign((size_t)qseries::euler_phi(M), 0);
  return z;
}

CycInt CycInt::integer(long M, const mpz_class& v) {
  CycInt z = zero(M);
  z.c[0] = v;
  return z;
}

CycInt CycInt::zeta_power(long M, long e) {
  e %= M;
  if (e < 0) e += M;
  ZPoly a((size_t)e + 1, 0);
  a[(size_t)e] = 1;
  CycInt z;
  z.M = M;
  z.c = reduce_mod_cyclo(std::move(a), M);
  return z;
}

CycInt CycInt::from_counts(long M, const std::vector<mpz_class>& counts) {
  CycInt z;
  z.M = M;
  z.c = reduce_mod_cyclo(ZPoly(counts.begin(), counts.end()), M);
  return z;
}

CycInt CycInt::operator+(const CycInt& o) const {
  if (M != o.M) throw std::invalid_argument("CycInt: mixed cyclotomic orders");
  CycInt z = *this;
  for (size_t i = 0; i < c.size(); ++i) z.c[i] += o.c[i];
  return z;
}

CycInt CycInt::operator-(const CycInt& o) const {
  if (M != o.M) throw std::invalid_argument("CycInt: mixed cyclotomic orders");
  CycInt z = *this;
  for (size_t i = 0; i < c.size(); ++i) z.c[i] -= o.c[i];
  return z;
}

CycInt CycInt::operator*(const CycInt& o) const {
  if (M != o.M) throw std::invalid_argument("CycInt: mixed cyclotomic orders");
  if (c.empty()) return *this;
  ZPoly prod(2 * c.size(), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    for (size_t j = 0; j < o.c.size(); ++j) prod[i + j] += c[i] * o.c[j];
  }
  CycInt z;
  z.M = M;
  z.c = reduce_mod_cyclo(std::move(prod), M);
  return z;
}

CycInt CycInt::pow(unsigned long e) const {
  CycInt r = integer(M, 1);
  CycInt b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

CycInt CycInt::galois(long t) const {
  t %= M;
  if (t < 0) t += M;
  if (std::gcd(t, M) != 1) throw std::invalid_argument("CycInt::galois: t not coprime to M");
  ZPoly a((size_t)M, 0);
  for (size_t j = 0; j < c.size(); ++j) a[(size_t)((long)j * t % M)] += c[j];
  CycInt z;
  z.M = M;
  z.c = reduce_mod_cyclo(std::move(a), M);
  return z;
}

bool CycInt::is_rational_integer(mpz_class* out) const {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return false;
  if (out) *out = c.empty() ? mpz_class(0) : c[0];
  return true;
}

std::complex<double> CycInt::embed(long t) const {
  std::complex<double> z = 0;
  for (size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    double ang = 2.0 * M_PI * (double)((long)j * t % M) / (double)M;
    z += c[j].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return z;
}

std::string CycInt::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) os << ",";
    os << c[i].get_str();
  }
  os << "] in Z[zeta_" << M << "]";
  return os.str();
}

}  // namespace charsums
