#pragma once

#include <map>
#include <string>
#include <vector>

#include "charsums/cyclotomic.hpp"
#include "charsums/ff.hpp"

namespace charsums {

enum class FiberType { Good, SplitMult, NonsplitMult, Additive };

struct JacobiResult {
  CycInt value;
  bool degenerate;  // some a_i = 0 mod m, or sum a_i = 0 mod m
};

/// J_a = (-1)^r sum over x_1 + ... + x_r = -1 of chi(x_1)^a_1 ... chi(x_r)^a_r,
/// with chi of order m pinned by chi(gen) = zeta_m and chi^a(0) = 0.
JacobiResult jacobi_sum(const FFCtx& F, const std::vector<long>& a, long m);

/// J_i(1) = chi^N(-1) J_(2i, N) with chi of order 2N; needs q = 1 mod 2N.
CycInt fermat_J(int N, const FFCtx& F, int i);

/// sum_{i=1}^{N-1} J_i(1)^2, a rational integer by Galois conjugacy (throws if
/// the reduction is not rational).
mpz_class jacobi_trace_sum(int N, const FFCtx& F);

/// Affine point count of Y^2 = X(X+1)(X+t^N) over (t, X, Y) in F_q^3.
long long surface_count(int N, const FFCtx& F);

/// Fiber classification at t via the root multiplicities of X(X+1)(X+t^N) and
/// the squareness of the node's tangent-cone discriminant.
FiberType classify_fiber(int N, const FFCtx& F, long t);

/// Trace of Frob_q on the middle cohomology, as the negative sum of fiber
/// traces over the t-line: good fibers contribute -(q + 1 - #E_t), bad ones
/// +-1 by split type.
long long lefschetz_trace(int N, const FFCtx& F);

/// Same value assembled from surface_count plus the bad-fiber bookkeeping.
long long trace_via_surface(int N, const FFCtx& F);

struct LocalFactor {
  int N = 0;
  long p = 0;
  std::vector<long long> traces;    // over F_(p^k) for k = 1..N-1
  std::vector<mpz_class> charpoly;  // ascending, monic, degree N-1
  bool integral = false;            // Newton divisions exact
  bool weil_ok = false;             // |e_i| <= C(d, i) p^i
  int pm_sign = 0;                  // for the T^d +- p^d shape, else 0
};

/// Characteristic polynomial of Frob_p on the (N-1)-dimensional space, by
/// Newton's identities from traces over extensions.  degrees must contain
/// 1..N-1.
LocalFactor local_factor(int N, long p, const std::vector<int>& degrees);

/// Exact CycInt identity between a power of a base-field Jacobi sum and an
/// extension-field Jacobi sum under the norm-compatible character lift:
///   J_(2, N/d)(p)^(2k) = J_(2N', N N'/d)(p~)^2,  (p^k - 1)/d = 2 N N'/d.
/// Requires p = 1 mod N.
bool davenport_hasse_check(int N, int d, long p, int k);

struct DavenportHasseDetail {
  CycInt lhs, rhs;
  bool pass;
};
DavenportHasseDetail davenport_hasse_detail(int N, int d, long p, int k);

/// Exponent data of the ideal factorization of J_a: e_t = sum_rho <t a_rho / m>
/// for every unit t mod m.
std::map<long, mpq_class> omega_exponent(long m, const std::vector<long>& a);

}  // namespace charsums
