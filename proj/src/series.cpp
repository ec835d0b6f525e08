#include "qseries/series.hpp"

#include <numeric>
#include <sstream>

namespace qseries {

// ---- Ring ------------------------------------------------------------------

Ring Ring::mod(long p, int M) {
  if (p < 2 || !is_prime(p)) throw SeriesError("Ring::mod: p must be prime");
  if (M < 1) throw SeriesError("Ring::mod: M must be >= 1");
  Ring r;
  r.kind = ModPrimePower;
  r.p = p;
  r.M = M;
  r.pM = zpow(mpz_class(p), (unsigned long)M);
  return r;
}

mpq_class Ring::reduce(const mpq_class& v) const {
  if (is_exact()) return v;
  mpz_class num = v.get_num(), den = v.get_den();
  mpz_class r = (num * modinv(den, pM)) % pM;
  if (r < 0) r += pM;
  return mpq_class(r);
}

std::string Ring::str() const {
  if (is_exact()) return "Q";
  return "Zp " + std::to_string(p) + " " + std::to_string(M);
}

// ---- FracSeries basics -----------------------------------------------------

static const mpq_class kZero = 0;

const mpq_class& FracSeries::coeff(long n) const {
  if (n > hi)
    throw SeriesError("coefficient at index " + std::to_string(n) +
                      " is beyond the known order " + std::to_string(hi));
  if (is_zero() || n < lo) return kZero;
  return c[(size_t)(n - lo)];
}

mpq_class FracSeries::coeff_q(const mpq_class& e) const {
  mpq_class idx = e * m;
  if (idx.get_den() != 1) return 0;  // off-grid exponents carry nothing
  long n = (long)idx.get_num().get_si();
  return coeff(n);
}

FracSeries FracSeries::zero(int m, long hi, Ring ring) {
  FracSeries f;
  f.m = m;
  f.lo = 0;
  f.hi = hi;
  f.ring = ring;
  return f;
}

FracSeries FracSeries::monomial(int m, long n, const mpq_class& v, long hi, Ring ring) {
  if (n > hi) throw SeriesError("monomial index beyond requested order");
  FracSeries f = zero(m, hi, ring);
  if (v == 0) return f;
  f.lo = n;
  f.c.assign((size_t)(hi - n + 1), 0);
  f.c[0] = ring.reduce(v);
  f.normalize();
  return f;
}

FracSeries FracSeries::one(int m, long hi, Ring ring) { return monomial(m, 0, 1, hi, ring); }

void FracSeries::normalize() {
  size_t skip = 0;
  while (skip < c.size() && c[skip] == 0) ++skip;
  if (skip == c.size()) {
    c.clear();
    lo = 0;
    return;
  }
  if (skip > 0) {
    c.erase(c.begin(), c.begin() + (long)skip);
    lo += (long)skip;
  }
}

std::string FracSeries::str() const {
  std::ostringstream os;
  if (is_zero()) {
    os << "0";
  } else {
    bool first = true;
    int shown = 0;
    for (long n = lo; n <= hi && shown < 12; ++n) {
      const mpq_class& v = coeff(n);
      if (v == 0) continue;
      if (!first) os << " + ";
      os << v.get_str() << "*t^" << n;
      first = false;
      ++shown;
    }
    if (shown == 12) os << " + ...";
  }
  os << "  [m=" << m << ", O(t^" << hi + 1 << "), " << ring.str() << "]";
  return os.str();
}

// ---- CuspContext ------------------------------------------------------------

void CuspContext::validate() const {
  if (m < 1) throw SeriesError("CuspContext: m must be positive");
  if (!is_prime(p)) throw SeriesError("CuspContext: p must be prime");
  if (M < 1) throw SeriesError("CuspContext: M must be >= 1");
  if (m % p == 0) throw SeriesError("CuspContext: p | m");
  if (delta == 0) throw SeriesError("CuspContext: delta must be nonzero");
  if (val_p(delta, p) != 0) throw SeriesError("CuspContext: delta must be a p-adic unit");
  mpz_class pM = zpow(mpz_class(p), (unsigned long)M);
  if (gamma < 0 || gamma >= pM) throw SeriesError("CuspContext: gamma not reduced mod p^M");
  if (gamma % p != 1) throw SeriesError("CuspContext: gamma != 1 mod p");
  mpz_class lhs = zpow_mod(gamma, mpz_class(m), pM);
  mpz_class rhs = zpow_mod(mpz_class(delta.get_num()), mpz_class(p - 1), pM) *
                  zpow_mod(mpz_class(delta.get_den()), mpz_class(-(p - 1)), pM) % pM;
  if (lhs != rhs % pM) throw SeriesError("CuspContext: gamma^m != delta^(p-1) mod p^M");
}

// ---- grid handling -----------------------------------------------------------

FracSeries rescale(const FracSeries& f, int m2) {
  if (m2 == f.m) return f;
  if (m2 % f.m != 0) throw SeriesError("rescale: target grid must refine the current one");
  long s = m2 / f.m;
  FracSeries out;
  out.m = m2;
  out.ring = f.ring;
  out.hi = f.hi * s;
  if (f.is_zero()) {
    out.lo = 0;
    return out;
  }
  out.lo = f.lo * s;
  out.c.assign((size_t)(out.hi - out.lo + 1), 0);
  for (long n = f.lo; n <= f.hi; ++n) out.c[(size_t)((n - f.lo) * s)] = f.coeff(n);
  return out;
}

static void require_same_ring(const FracSeries& f, const FracSeries& g, const char* op) {
  if (f.ring != g.ring)
    throw SeriesError(std::string(op) + ": ring mismatch (" + f.ring.str() + " vs " +
                      g.ring.str() + "); reduce explicitly first");
}

static int common_grid(const FracSeries& f, const FracSeries& g) {
  return (int)std::lcm((long)f.m, (long)g.m);
}

// ---- additive ops -----------------------------------------------------------

FracSeries add(const FracSeries& f, const FracSeries& g) {
  require_same_ring(f, g, "add");
  int l = common_grid(f, g);
  FracSeries F = rescale(f, l), G = rescale(g, l);
  long hi = std::min(F.hi, G.hi);
  long lo = hi + 1;
  if (!F.is_zero()) lo = std::min(lo, F.lo);
  if (!G.is_zero()) lo = std::min(lo, G.lo);
  if (lo > hi) return FracSeries::zero(l, hi, f.ring);
  FracSeries out = FracSeries::zero(l, hi, f.ring);
  out.lo = lo;
  out.c.assign((size_t)(hi - lo + 1), 0);
  for (long n = lo; n <= hi; ++n) {
    mpq_class v = F.coeff(n) + G.coeff(n);
    out.c[(size_t)(n - lo)] = f.ring.reduce(v);
  }
  out.normalize();
  return out;
}

FracSeries neg(const FracSeries& f) { return scalar_mul(-1, f); }

FracSeries sub(const FracSeries& f, const FracSeries& g) { return add(f, neg(g)); }

FracSeries scalar_mul(const mpq_class& a, const FracSeries& f) {
  FracSeries out = f;
  if (a == 0) {
    out.c.clear();
    out.lo = 0;
    return out;
  }
  for (auto& v : out.c) v = f.ring.reduce(v * a);
  out.normalize();
  return out;
}

FracSeries shift(const FracSeries& f, long delta_idx) {
  FracSeries out = f;
  out.hi += delta_idx;
  if (!out.is_zero()) out.lo += delta_idx;
  return out;
}

FracSeries truncated(const FracSeries& f, long new_hi) {
  if (new_hi > f.hi) throw SeriesError("truncated: cannot extend the known order");
  FracSeries out = f;
  out.hi = new_hi;
  if (out.is_zero()) return out;
  if (new_hi < out.lo) {
    out.c.clear();
    out.lo = 0;
    return out;
  }
  out.c.resize((size_t)(new_hi - out.lo + 1));
  out.normalize();
  return out;
}

// ---- multiplicative ops -------------------------------------------------------

FracSeries mul(const FracSeries& f, const FracSeries& g) {
  require_same_ring(f, g, "mul");
  int l = common_grid(f, g);
  FracSeries F = rescale(f, l), G = rescale(g, l);
  // The first unknown coefficient of either factor contaminates products from
  // (hi+1) + other.lo onward.
  long hi = std::min(F.hi + G.lo, G.hi + F.lo);
  if (F.is_zero() || G.is_zero()) return FracSeries::zero(l, hi, f.ring);
  long lo = F.lo + G.lo;
  if (lo > hi) return FracSeries::zero(l, hi, f.ring);
  FracSeries out = FracSeries::zero(l, hi, f.ring);
  out.lo = lo;
  out.c.assign((size_t)(hi - lo + 1), 0);
  mpq_class acc, term;
  for (long n = lo; n <= hi; ++n) {
    acc = 0;
    long i0 = std::max(F.lo, n - G.hi);
    long i1 = std::min(F.hi, n - G.lo);
    for (long i = i0; i <= i1; ++i) {
      const mpq_class& a = F.c[(size_t)(i - F.lo)];
      if (a == 0) continue;
      const mpq_class& b = G.c[(size_t)(n - i - G.lo)];
      if (b == 0) continue;
      term = a * b;
      acc += term;
    }
    out.c[(size_t)(n - lo)] = f.ring.reduce(acc);
  }
  out.normalize();
  return out;
}

FracSeries invert(const FracSeries& f) {
  if (f.is_zero()) throw SeriesError("invert: series is zero");
  const mpq_class& a0 = f.c[0];
  mpq_class inv0;
  if (f.ring.is_exact()) {
    inv0 = 1 / a0;
  } else {
    mpz_class n0 = a0.get_num();
    if (mpz_divisible_ui_p(n0.get_mpz_t(), (unsigned long)f.ring.p))
      throw SeriesError("invert: leading coefficient is not a unit mod p");
    inv0 = mpq_class(modinv(n0, f.ring.pM));
  }
  long R = f.hi - f.lo;
  std::vector<mpq_class> b((size_t)R + 1, 0);
  b[0] = inv0;
  mpq_class acc;
  for (long n = 1; n <= R; ++n) {
    acc = 0;
    for (long j = 1; j <= n; ++j) {
      const mpq_class& aj = f.c[(size_t)j];
      if (aj == 0) continue;
      acc += aj * b[(size_t)(n - j)];
    }
    b[(size_t)n] = f.ring.reduce(-inv0 * acc);
  }
  FracSeries out;
  out.m = f.m;
  out.ring = f.ring;
  out.lo = -f.lo;
  out.hi = f.hi - 2 * f.lo;
  out.c = std::move(b);
  out.normalize();
  return out;
}

FracSeries div(const FracSeries& f, const FracSeries& g) { return mul(f, invert(g)); }

FracSeries pow_int(const FracSeries& f, long e) {
  if (e < 0) return pow_int(invert(f), -e);
  if (e == 0) return FracSeries::one(f.m, f.hi - f.lo, f.ring);
  FracSeries acc = f;
  FracSeries out;
  bool have = false;
  long bits = e;
  while (bits > 0) {
    if (bits & 1) {
      out = have ? mul(out, acc) : acc;
      have = true;
    }
    bits >>= 1;
    if (bits > 0) acc = mul(acc, acc);
  }
  return out;
}

FracSeries pow_rational(const FracSeries& f, const mpq_class& r, int max_den) {
  if (!f.ring.is_exact())
    throw SeriesError("pow_rational: exact-rational ring required (reduce afterwards)");
  if (f.is_zero()) throw SeriesError("pow_rational: series is zero");
  if (f.c[0] != 1)
    throw SeriesError("pow_rational: leading coefficient must be 1; normalize the caller side");

  long R = f.hi - f.lo;
  // y = (1+u)^r from (1+u) y' = r u' y:  n y_n = sum_j ((r+1) j - n) a_j y_{n-j}.
  std::vector<mpq_class> y((size_t)R + 1, 0);
  y[0] = 1;
  mpq_class acc, w;
  for (long n = 1; n <= R; ++n) {
    acc = 0;
    for (long j = 1; j <= n; ++j) {
      const mpq_class& aj = f.c[(size_t)j];
      if (aj == 0) continue;
      w = (r + 1) * j - n;
      acc += w * aj * y[(size_t)(n - j)];
    }
    y[(size_t)n] = acc / n;
  }

  mpq_class lead(f.lo, f.m);
  lead.canonicalize();
  mpq_class e0 = r * lead;  // leading exponent in q-units
  long den = (long)e0.get_den().get_si();
  long m_out = std::lcm((long)f.m, den);
  if (m_out > max_den)
    throw SeriesError("pow_rational: exponent " + e0.get_str() +
                      " needs grid 1/" + std::to_string(m_out) +
                      " which exceeds the allowed denominator " + std::to_string(max_den));
  long step = m_out / f.m;
  long lo_out = (long)mpz_class(e0.get_num() * (m_out / den)).get_si();

  FracSeries out;
  out.m = (int)m_out;
  out.ring = f.ring;
  out.lo = lo_out;
  out.hi = lo_out + R * step;
  out.c.assign((size_t)(R * step + 1), 0);
  for (long j = 0; j <= R; ++j) out.c[(size_t)(j * step)] = y[(size_t)j];
  out.normalize();
  return out;
}

// ---- the operators from the congruence machinery ------------------------------

FracSeries theta_deriv(const FracSeries& f, int iterations) {
  if (iterations < 1) throw SeriesError("theta_deriv: iterations must be positive");
  FracSeries out = f;
  if (f.is_zero()) return out;
  if (f.ring.is_exact()) {
    for (long n = f.lo; n <= f.hi; ++n) {
      mpq_class& v = out.c[(size_t)(n - f.lo)];
      if (v == 0) continue;
      mpq_class factor(n, f.m);
      factor.canonicalize();
      mpq_class acc = 1;
      for (int i = 0; i < iterations; ++i) acc *= factor;
      v *= acc;
    }
  } else {
    if (f.m % f.ring.p == 0)
      throw SeriesError("theta_deriv: p divides the grid denominator m");
    mpz_class minv = modinv(mpz_class(f.m), f.ring.pM);
    for (long n = f.lo; n <= f.hi; ++n) {
      mpq_class& v = out.c[(size_t)(n - f.lo)];
      if (v == 0) continue;
      mpz_class base = (mpz_class(n) * minv) % f.ring.pM;
      if (base < 0) base += f.ring.pM;
      mpz_class factor = zpow_mod(base, mpz_class(iterations), f.ring.pM);
      v = f.ring.reduce(v * mpq_class(factor));
    }
  }
  out.normalize();
  return out;
}

FracSeries frob_twist(const FracSeries& f, const CuspContext& ctx, int k) {
  if (k < 1) throw SeriesError("frob_twist: weight must be >= 1");
  long p = ctx.p;
  if (f.ring.is_exact()) {
    if (ctx.gamma != 1)
      throw SeriesError("frob_twist: gamma != 1 requires the mod-p^M ring");
  } else {
    if (f.ring.p != ctx.p || f.ring.M != ctx.M)
      throw SeriesError("frob_twist: series ring does not match the cusp context");
  }
  FracSeries out;
  out.m = f.m;
  out.ring = f.ring;
  out.hi = f.hi * p;
  if (f.is_zero()) {
    out.lo = 0;
    return out;
  }
  out.lo = f.lo * p;
  out.c.assign((size_t)(out.hi - out.lo + 1), 0);
  mpz_class pk = zpow(mpz_class(p), (unsigned long)(k - 1));
  for (long n = f.lo; n <= f.hi; ++n) {
    const mpq_class& v = f.coeff(n);
    if (v == 0) continue;
    mpq_class w = v * mpq_class(pk);
    if (!f.ring.is_exact() && ctx.gamma != 1)
      w *= mpq_class(zpow_mod(ctx.gamma, mpz_class(n), f.ring.pM));
    out.c[(size_t)(n * p - out.lo)] = f.ring.reduce(w);
  }
  out.normalize();
  return out;
}

FracSeries reduce_mod(const FracSeries& f, long p, int M) {
  if (!f.ring.is_exact()) {
    if (f.ring.p != p || M > f.ring.M)
      throw SeriesError("reduce_mod: cannot re-reduce " + f.ring.str() + " to Zp " +
                        std::to_string(p) + " " + std::to_string(M));
  }
  Ring ring = Ring::mod(p, M);
  FracSeries out;
  out.m = f.m;
  out.ring = ring;
  out.hi = f.hi;
  out.lo = f.is_zero() ? 0 : f.lo;
  out.c.reserve(f.c.size());
  for (long n = f.lo; n < f.lo + (long)f.c.size(); ++n) {
    const mpq_class& v = f.c[(size_t)(n - f.lo)];
    if (v != 0 && mpz_divisible_ui_p(v.get_den().get_mpz_t(), (unsigned long)p))
      throw ReduceError("reduce_mod: coefficient " + v.get_str() + " at index " +
                            std::to_string(n) + " has denominator divisible by " +
                            std::to_string(p),
                        n);
    out.c.push_back(ring.reduce(v));
  }
  out.normalize();
  return out;
}

// ---- comparisons ----------------------------------------------------------------

bool agree_on_common(const FracSeries& f, const FracSeries& g) {
  if (f.ring != g.ring) return false;
  int l = common_grid(f, g);
  FracSeries F = rescale(f, l), G = rescale(g, l);
  long hi = std::min(F.hi, G.hi);
  long lo = std::min(F.is_zero() ? 0 : F.lo, G.is_zero() ? 0 : G.lo);
  for (long n = lo; n <= hi; ++n)
    if (F.coeff(n) != G.coeff(n)) return false;
  return true;
}

bool identical(const FracSeries& f, const FracSeries& g) {
  return f.m == g.m && f.lo == g.lo && f.hi == g.hi && f.ring == g.ring && f.c == g.c;
}

}  // namespace qseries
