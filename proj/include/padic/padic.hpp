#pragma once

#include <gmpxx.h>

#include "qseries/numutil.hpp"
#include "qseries/series.hpp"

namespace padic {

using qseries::VAL_INF;

/// An element of Z/p^M with its valuation on the side.  val == VAL_INF means
/// the residue is zero at this precision.
struct PadicScalar {
  long p;
  int M;
  mpz_class residue;  // in [0, p^M)
  long val;

  static PadicScalar make(long p, int M, const mpz_class& value);
  mpz_class modulus() const { return qseries::zpow(mpz_class(p), (unsigned long)M); }
};

// ord_p; rationals take the numerator/denominator difference.  Zero reports
// the VAL_INF sentinel.
long valuation(const mpz_class& x, long p);
long valuation(const mpq_class& x, long p);

/// The unique gamma in 1 + pZ_p with gamma^m = delta^(p-1), computed mod p^M
/// by Newton iteration (precision doubles each step).  Requires p coprime to
/// m and to delta.
PadicScalar hensel_gamma(int m, const mpq_class& delta, long p, int M);

/// inf over j >= k-1 of ord_p(p^j / j!).  Scan bound: ord_p(j!) <= (j-1)/(p-1),
/// so j - ord_p(j!) >= j(p-2)/(p-1) + 1/(p-1), which exceeds the value at
/// j = k-1 once j > ((k-1) + p) * p/(p-1).
int angle(int k_minus_1, long p);

/// Cusp context with gamma filled in by hensel_gamma.
qseries::CuspContext make_cusp_context(int m, const mpq_class& delta, long p, int M);

}  // namespace padic
