#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qseries/numutil.hpp"

namespace qseries {

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by reduce_mod when p divides a coefficient denominator.
struct ReduceError : SeriesError {
  long index;
  ReduceError(const std::string& msg, long idx) : SeriesError(msg), index(idx) {}
};

/// Coefficient ring: exact rationals, or Z/p^M after an explicit reduction.
struct Ring {
  enum Kind { ExactRational, ModPrimePower };
  Kind kind = ExactRational;
  long p = 0;
  int M = 0;
  mpz_class pM = 0;

  static Ring exact() { return Ring{}; }
  static Ring mod(long p, int M);

  bool is_exact() const { return kind == ExactRational; }
  bool operator==(const Ring& o) const { return kind == o.kind && p == o.p && M == o.M; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  // Canonical residue of an exact rational in [0, p^M).  Throws if the
  // denominator is not a unit.
  mpq_class reduce(const mpq_class& v) const;
  std::string str() const;
};

/// Laurent series in t = q^(1/m), truncated: coefficients are known exactly
/// for indices lo..hi and are *unknown* (not zero) above hi.  Indices below
/// lo are zero.  The canonical zero series has lo = 0 and no coefficients,
/// but still carries hi as its known order.
struct FracSeries {
  int m = 1;
  long lo = 0;
  long hi = -1;
  std::vector<mpq_class> c;  // c[n - lo] is the coefficient of t^n
  Ring ring;

  bool is_zero() const { return c.empty(); }
  bool known(long n) const { return n <= hi; }

  // Coefficient of t^n; throws for n > hi (unknown region).
  const mpq_class& coeff(long n) const;

  // Coefficient of q^e for rational e; zero if e is off the grid.
  mpq_class coeff_q(const mpq_class& e) const;

  static FracSeries zero(int m, long hi, Ring ring = Ring::exact());
  static FracSeries monomial(int m, long n, const mpq_class& v, long hi,
                             Ring ring = Ring::exact());
  static FracSeries one(int m, long hi, Ring ring = Ring::exact());

  // Drops leading zero coefficients (raising lo); collapses to canonical
  // zero if everything vanishes.  hi is preserved.
  void normalize();

  std::string str() const;
};

/// Expansion data at one cusp: t^m = q/delta, and the Frobenius twist scalar
/// gamma mod p^M with gamma = 1 (p) and gamma^m = delta^(p-1) (p^M).
struct CuspContext {
  int m = 1;
  mpq_class delta = 1;
  long p = 0;
  int M = 0;
  mpz_class gamma = 1;

  // Checks the arithmetic invariants above; throws on violation.
  void validate() const;
};

// ---- arithmetic -----------------------------------------------------------

// Rescales onto a finer grid m2 (m | m2).
FracSeries rescale(const FracSeries& f, int m2);

FracSeries add(const FracSeries& f, const FracSeries& g);
FracSeries sub(const FracSeries& f, const FracSeries& g);
FracSeries neg(const FracSeries& f);
FracSeries mul(const FracSeries& f, const FracSeries& g);
FracSeries scalar_mul(const mpq_class& a, const FracSeries& f);

// Multiplies by t^delta_idx (on f's grid).
FracSeries shift(const FracSeries& f, long delta_idx);

// Truncates to a smaller known order.
FracSeries truncated(const FracSeries& f, long new_hi);

// Inverse of a series with unit leading coefficient.
FracSeries invert(const FracSeries& f);
FracSeries div(const FracSeries& f, const FracSeries& g);

// Integer power (negative allowed when invertible).
FracSeries pow_int(const FracSeries& f, long e);

/// f^r for rational r.  Requires the exact ring and leading coefficient 1
/// (after factoring out the leading monomial).  The output grid is enlarged
/// when r*lo/m leaves the current one; max_den bounds the enlargement.
FracSeries pow_rational(const FracSeries& f, const mpq_class& r, int max_den = 1024);

/// (q d/dq)^iterations: multiplies the t^n coefficient by (n/m)^iterations.
/// In the mod ring this needs gcd(p, m) = 1.
FracSeries theta_deriv(const FracSeries& f, int iterations);

/// The q-expansion Frobenius at weight k: b(n) t^n -> p^(k-1) gamma^n b(n) t^(np).
/// Exact-ring inputs require gamma = 1.
FracSeries frob_twist(const FracSeries& f, const CuspContext& ctx, int k);

/// Reduction into Z/p^M; reports the first offending index if p divides a
/// coefficient denominator.
FracSeries reduce_mod(const FracSeries& f, long p, int M);

// Equality of all coefficients on the common known range.
bool agree_on_common(const FracSeries& f, const FracSeries& g);

// Strict equality including grid, range and ring.
bool identical(const FracSeries& f, const FracSeries& g);

}  // namespace qseries
