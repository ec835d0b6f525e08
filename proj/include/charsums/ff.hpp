#pragma once

#include <stdexcept>
#include <vector>

#include "qseries/numutil.hpp"

namespace charsums {

/// F_q with q = p^k, elements encoded as integers in [0, q): the base-p
/// digits of the encoding are the coefficients of the residue polynomial.
/// Multiplication runs through discrete-log tables built from a fixed
/// generator, so q is capped to keep the tables in memory.
struct FFCtx {
  long p = 0;
  int k = 1;
  long q = 0;
  std::vector<long> modpoly;  // monic irreducible, length k+1 (empty for k = 1)
  long gen = 0;
  std::vector<long> dlog;  // size q, dlog[0] = -1
  std::vector<long> expt;  // size 2(q-1): expt[e] = gen^(e mod q-1)

  static constexpr long kMaxQ = 1 << 21;

  // skip_generators > 0 picks a later generator; every identity computed from
  // a full Galois orbit must come out the same.
  static FFCtx make(long p, int k, int skip_generators = 0);

  long add(long a, long b) const;
  long sub(long a, long b) const;
  long neg(long a) const;
  long mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    return expt[(size_t)(dlog[(size_t)a] + dlog[(size_t)b])];
  }
  long pow(long a, long e) const;
  long one() const { return 1; }

  // +1 / -1 / 0 at zero: the quadratic character (q odd).
  int chi2(long a) const {
    if (a == 0) return 0;
    return dlog[(size_t)a] % 2 == 0 ? 1 : -1;
  }

  // The element of F_p under the inclusion F_p -> F_q (constant polynomials).
  long from_base(long r) const;
};

/// Character of F_q^* of order n | q-1, pinned by chi(gen) = zeta_n.
struct MultChar {
  const FFCtx* F;
  long order;

  // exponent e with chi(x) = zeta_order^e, or -1 for x = 0
  long exponent(long x) const {
    if (x == 0) return -1;
    return F->dlog[(size_t)x] % order;
  }
};

MultChar mult_char(const FFCtx& F, long order);

}  // namespace charsums
