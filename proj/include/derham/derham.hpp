#pragma once

#include <string>
#include <vector>

#include "modforms/modforms.hpp"
#include "padic/padic.hpp"
#include "qseries/series.hpp"

namespace derham {

using qseries::VAL_INF;

struct CongruenceItem {
  long n;
  long required;  // valuation demanded at this index (VAL_INF = must vanish)
  long attained;
  bool pass;
  int sub = 0;  // basis label when several congruence families share a report
};

struct CongruenceReport {
  long p = 0;
  int k = 0;
  bool strengthen = false;
  std::vector<CongruenceItem> items;
  bool pass = false;
  std::string note;
};

/// Three-or-more-term congruence check.  H is given leading-first, the way
/// H_p(T) = T^r - A T^(r-1) + ... is usually written down; internally the
/// tested sum at index n with s = ord_p(n) is
///   sum_j p^((k-1)j) H[r-j] b(n/p^j)  =  0  mod p^((k-1)s)
/// (plus angle(k-1, p) more with `strengthen`), with b(x) = 0 for x not an
/// integer.  A cusp context supplies the gamma twist; without one the series
/// is taken at a cusp with delta = 1, gamma = 1.
CongruenceReport asd_check(const modforms::FormRecord& f, const std::vector<mpq_class>& H,
                           int k, long p, long n_max, bool strengthen = false,
                           const qseries::CuspContext* ctx = nullptr);

struct WxWitness {
  long n;
  std::string reason;
};

struct WxReport {
  bool pass = false;
  std::vector<WxWitness> witnesses;
};

/// Principal-part test: a_n / n^(k-1) may introduce no denominator primes
/// beyond the ones already present in the expansion, for every n < 0.
WxReport weakly_exact_check(const modforms::FormRecord& f, int k);

struct PivotLog {
  long n;    // constraint index t^n
  int col;
  long val;  // valuation of the pivot in the p^M-scaled system
};

// The window carries no constraint that pins some unknown.
struct UnderdeterminedError : qseries::SeriesError {
  using qseries::SeriesError::SeriesError;
};

/// One linear relation  sum_j x_j cols[j] == rhs  modulo partial^(k-1) of
/// Z_p((t)), read off coefficientwise: for every n in the window with p | n
/// (and n = 0), coefficient(n) of the difference must vanish mod
/// p^min(M, (k-1) ord_p(n) + extra).  `extra` is angle(k-1, p) when the
/// relation comes from a holomorphic form (the image then lies in
/// p^angle * the lattice), 0 otherwise.  Solved by valuation-aware
/// elimination over Z/p^M; x[j] comes back mod p^prec[j].
struct RelationResult {
  std::vector<mpz_class> x;
  std::vector<int> prec;
  int attained = 0;             // min over prec
  long residual_deficiency = 0; // worst valuation shortfall on re-checking all rows
  std::vector<PivotLog> pivots;
};

RelationResult solve_relation(const std::vector<qseries::FracSeries>& cols,
                              const qseries::FracSeries& rhs, int k, long p, int M,
                              long win_lo, long win_hi, long extra = 0,
                              bool include_trivial_constraints = false);

struct FrobReport {
  long p = 0;
  int k = 0;
  int M = 0;
  long win_lo = 0, win_hi = 0;
  bool eigen_mode = false;
  int N = 0;  // Phi_0(N) label when the basis carries eigen indices

  std::vector<int> permutation;   // permutation[i-1] = i*p mod N (eigen mode)
  std::vector<mpz_class> alphas;  // p^shift phi(f_i) = alphas[i] f_(i p mod N)
  std::vector<int> alpha_prec;
  std::vector<long> alpha_val;    // ord_p(alpha_i) proper, negative when shifted
  std::vector<int> alpha_shift;   // > 0 when the relation only holds after
                                  // scaling by p^shift (the eigenvalue has a
                                  // denominator; seen at p <= k-1)
  std::vector<bool> alpha_derived;  // filled from the functional equation when
                                    // the window carries no information
                                    // (split p: the non-unit chain is blind)

  std::vector<std::vector<mpz_class>> matrix;  // row i: phi(f_i) in the basis
  int attained = 0;                            // M'
  long residual_deficiency = 0;
  std::vector<PivotLog> pivots;

  std::vector<mpz_class> charpoly_mod;  // ascending, monic
  std::vector<int> charpoly_prec;       // per coefficient; cycle products are
                                        // pinned deeper than single alphas
  std::vector<mpz_class> charpoly_int;  // balanced lifts
  bool charpoly_certified = false;      // the Weil bound pins every lift
  bool funceq_applicable = false;
  bool funceq_ok = false;
  int funceq_sign = 0;
  bool weil_ok = false;
  double weil_max_err = 0.0;
  long det_val = 0;      // ord_p of det(matrix); sum of alpha valuations in eigen mode
  int product_prec = 0;  // precision at which the alpha product is pinned (eigen mode)
};

/// Recovers the matrix of the q-expansion Frobenius on the span of `basis`
/// modulo the image of partial^(k-1).  With B-eigenvalue labels the system
/// splits into one scalar per basis element along i -> i*p mod N; otherwise a
/// dense solve is run per row.  Exact-rational input is reduced mod p^M first.
FrobReport frobenius_matrix(const std::vector<modforms::FormRecord>& basis,
                            const qseries::CuspContext& ctx, int k, long win_lo,
                            long win_hi, bool force_dense = false);

/// Checks  (p^(k-1)/alpha_i) a_i(j) = a_(i p mod N)(p j)  mod p^((k-1)(ord_p(j)+1))
/// for i = 1..N-1 and j <= n_max, using the solved alphas and the exact
/// expansions.  Errors out when the attained precision cannot support the
/// strongest tested modulus.
CongruenceReport eigen_congruence_check(int N, long p, const FrobReport& frob,
                                        const std::vector<modforms::FormRecord>& basis_exact,
                                        long n_max);

/// The monic degree-r polynomial with H(phi~)(f) = 0 modulo the image of
/// partial^(k-1), solved from the window like frobenius_matrix.  Integer
/// lifts of the coefficients are attached when the Weil bound certifies them.
/// This is the route that works for every p, including the split case where
/// the non-unit eigenvalue leaves no trace on a single eigenform's expansion.
struct AnnihilatorResult {
  long p = 0;
  int k = 0, degree = 0;
  std::vector<mpz_class> charpoly_mod;  // ascending, monic, mod p^attained
  std::vector<int> coeff_prec;          // per solved coefficient (constant..T^(r-1))
  int attained = 0;
  std::vector<mpz_class> charpoly_int;
  bool certified = false;
  long residual_deficiency = 0;
};

AnnihilatorResult annihilator_poly(const modforms::FormRecord& f,
                                   const qseries::CuspContext& ctx, int k, int degree,
                                   long win_lo, long win_hi);

}  // namespace derham
