#include "derham/derham.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace derham {

using modforms::FormRecord;
using qseries::FracSeries;
using qseries::Ring;
using qseries::modinv;
using qseries::SeriesError;
using qseries::val_p;
using qseries::val_p_or_inf;
using qseries::zpow;

static long ord_p_long(long n, long p) {
  if (n == 0) return VAL_INF;
  if (n < 0) n = -n;
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// valuation of a residue, capped: zero reads as `cap`
static long vcap(const mpz_class& x, long p, long cap) {
  if (x == 0) return cap;
  return std::min(val_p(x, p), cap);
}

// ---- asd_check --------------------------------------------------------------

CongruenceReport asd_check(const FormRecord& f, const std::vector<mpq_class>& H, int k,
                           long p, long n_max, bool strengthen,
                           const qseries::CuspContext* ctx) {
  const FracSeries& s = f.series;
  if (!s.ring.is_exact())
    throw SeriesError("asd_check: exact-rational expansion required");
  if (H.size() < 2) throw SeriesError("asd_check: H needs degree >= 1");
  if (s.hi < n_max)
    throw SeriesError("asd_check: expansion known through t^" + std::to_string(s.hi) +
                      " but n_max = " + std::to_string(n_max));
  for (long n = s.lo; n <= s.hi && !s.is_zero(); ++n) {
    const mpq_class& v = s.coeff(n);
    if (v != 0 && val_p(v, p) < 0)
      throw SeriesError("asd_check: coefficient at t^" + std::to_string(n) +
                        " is not p-integral");
  }

  int r = (int)H.size() - 1;
  std::vector<mpq_class> A(H.rbegin(), H.rend());  // ascending: H(T) = sum A_j T^j
  for (auto& a : A)
    if (a != 0 && val_p(a, p) < 0)
      throw SeriesError("asd_check: H has a non-p-integral coefficient");

  int ang = strengthen ? padic::angle(k - 1, p) : 0;
  bool twist = ctx != nullptr && ctx->gamma != 1;
  long s_cap = 0;
  for (long n = 1; n <= n_max; n *= p) ++s_cap;
  long E = (k - 1) * (s_cap + 1) + ang + 2;  // twist working precision
  mpz_class pE = zpow(mpz_class(p), (unsigned long)E);

  CongruenceReport rep;
  rep.p = p;
  rep.k = k;
  rep.strengthen = strengthen;
  rep.note =
      "tested sum_j p^((k-1)j) A_j b(n/p^j) with b(x) = 0 for x not an integer; "
      "H listed leading-first";

  std::vector<mpz_class> pkj(r + 1);  // p^((k-1)j)
  for (int j = 0; j <= r; ++j) pkj[j] = zpow(mpz_class(p), (unsigned long)((k - 1) * j));

  bool all_pass = true;
  for (long n = -n_max; n <= n_max; ++n) {
    long sv = ord_p_long(n, p);
    long required = (n == 0) ? VAL_INF : (k - 1) * sv + ang;
    long attained;
    if (!twist || n == 0) {
      mpq_class V = 0;
      long np = n;
      for (int j = 0; j <= r; ++j) {
        if (j > 0) {
          if (np % p != 0) break;  // later terms are off the integer grid too
          np /= p;
        }
        if (np <= s.hi) V += mpq_class(pkj[j]) * A[j] * s.coeff(np);
      }
      attained = val_p_or_inf(V, p);
    } else {
      // gamma-twisted sum mod p^E; gamma^(n (p^j - 1)/(p - 1)) multiplies term j
      mpz_class V = 0;
      long np = n;
      for (int j = 0; j <= r; ++j) {
        if (j > 0) {
          if (np % p != 0) break;
          np /= p;
        }
        if (np > s.hi) continue;
        mpq_class coeff = s.coeff(np);
        if (coeff == 0) continue;
        mpz_class b = (coeff.get_num() * modinv(coeff.get_den(), pE)) % pE;
        mpz_class aj = (A[j].get_num() * modinv(A[j].get_den(), pE)) % pE;
        mpz_class gexp = 0;
        mpz_class ppow = 1;
        for (int l = 0; l < j; ++l) {
          gexp += ppow;
          ppow *= p;
        }
        gexp *= n;
        mpz_class g = qseries::zpow_mod(ctx->gamma, gexp, pE);
        V = (V + pkj[j] * aj * g * b) % pE;
      }
      if (V < 0) V += pE;
      attained = vcap(V, p, E);
      if (required > E && attained == E) required = E;  // capped comparison
    }
    bool pass = (n == 0) ? (attained == VAL_INF || attained >= E) : attained >= required;
    all_pass = all_pass && pass;
    rep.items.push_back({n, required, attained, pass, 0});
  }
  rep.pass = all_pass;
  return rep;
}

// ---- weakly_exact_check -------------------------------------------------------

WxReport weakly_exact_check(const FormRecord& f, int k) {
  const FracSeries& s = f.series;
  if (!s.ring.is_exact())
    throw SeriesError("weakly_exact_check: exact-rational expansion required");
  WxReport rep;
  mpz_class den_lcm = 1;
  for (long n = s.lo; n < s.lo + (long)s.c.size(); ++n) {
    const mpq_class& v = s.coeff(n);
    if (v != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
  }
  for (long n = s.lo; n <= std::min(s.hi, -1L) && !s.is_zero(); ++n) {
    const mpq_class& v = s.coeff(n);
    if (v == 0) continue;
    for (auto [ell, e] : qseries::factorize(-n)) {
      long need = (long)(k - 1) * e;
      long have = val_p(v, ell);
      if (have >= need) continue;
      if (mpz_divisible_ui_p(den_lcm.get_mpz_t(), (unsigned long)ell)) continue;
      std::ostringstream msg;
      msg << "a(" << n << ") = " << v.get_str() << " has ord_" << ell << " = " << have
          << " < " << need << " = (k-1) ord_" << ell << "(n)";
      rep.witnesses.push_back({n, msg.str()});
    }
  }
  rep.pass = rep.witnesses.empty();
  return rep;
}

// ---- the linear solver ----------------------------------------------------------

namespace {
struct SolveRow {
  std::vector<mpz_class> a;  // scaled into mod p^M
  mpz_class b;
  long n;
  long e;  // native modulus exponent
};
}  // namespace

RelationResult solve_relation(const std::vector<FracSeries>& cols, const FracSeries& rhs,
                              int k, long p, int M, long win_lo, long win_hi, long extra,
                              bool include_trivial_constraints) {
  if (cols.empty()) throw SeriesError("solve_relation: no columns");
  Ring ring = Ring::mod(p, M);
  auto check = [&](const FracSeries& s, const char* what) {
    if (s.ring != ring)
      throw SeriesError(std::string("solve_relation: ") + what + " must be reduced mod " +
                        ring.str());
    if (s.hi < win_hi)
      throw SeriesError(std::string("solve_relation: ") + what + " known through t^" +
                        std::to_string(s.hi) + " < window end " + std::to_string(win_hi) +
                        "; enlarge the expansion");
  };
  for (auto& c : cols) check(c, "column");
  check(rhs, "rhs");
  const size_t d = cols.size();
  const mpz_class& pM = ring.pM;

  std::vector<SolveRow> rows, native;
  for (long n = win_lo; n <= win_hi; ++n) {
    long sv = ord_p_long(n, p);
    if (sv == 0 && !include_trivial_constraints) continue;
    long e = (n == 0) ? M : std::min<long>(M, (long)(k - 1) * sv + extra);
    SolveRow row;
    row.n = n;
    row.e = e;
    row.a.resize(d);
    bool nonzero = false;
    mpz_class scale = zpow(mpz_class(p), (unsigned long)(M - e));
    for (size_t j = 0; j < d; ++j) {
      row.a[j] = (cols[j].coeff(n).get_num() * scale) % pM;
      if (row.a[j] != 0) nonzero = true;
    }
    row.b = (rhs.coeff(n).get_num() * scale) % pM;
    if (row.b != 0) nonzero = true;
    if (!nonzero) continue;
    native.push_back(row);  // keep the scaled-but-unreduced copy for verification
    rows.push_back(std::move(row));
  }

  RelationResult res;
  res.x.assign(d, 0);
  res.prec.assign(d, 0);

  // Forward elimination with global-minimum-valuation pivoting: at each step
  // every remaining entry has valuation >= the pivot's, so the elimination
  // multipliers are integral and exact mod p^M.
  std::vector<char> used(rows.size(), 0);
  std::vector<int> pivot_of_col(d, -1);
  std::vector<long> pivot_val(d, 0);
  std::vector<std::pair<int, int>> order;  // (row, col) in pivot order
  for (size_t step = 0; step < d; ++step) {
    long best_v = M;
    int bi = -1, bj = -1;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (used[i]) continue;
      for (size_t j = 0; j < d; ++j) {
        if (pivot_of_col[j] >= 0) continue;
        long v = vcap(rows[i].a[j], p, M);
        if (v < best_v) {
          best_v = v;
          bi = (int)i;
          bj = (int)j;
        }
      }
    }
    if (bi < 0) break;
    mpz_class pv = zpow(mpz_class(p), (unsigned long)best_v);
    mpz_class unit = rows[(size_t)bi].a[(size_t)bj] / pv;
    mpz_class uinv = modinv(unit, pM);
    for (auto& x : rows[(size_t)bi].a) x = x * uinv % pM;
    rows[(size_t)bi].b = rows[(size_t)bi].b * uinv % pM;
    rows[(size_t)bi].a[(size_t)bj] = pv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (used[i] || (int)i == bi) continue;
      mpz_class& ci = rows[i].a[(size_t)bj];
      if (ci == 0) continue;
      mpz_class lambda = ci / pv;
      for (size_t j = 0; j < d; ++j) {
        rows[i].a[j] = (rows[i].a[j] - lambda * rows[(size_t)bi].a[j]) % pM;
        if (rows[i].a[j] < 0) rows[i].a[j] += pM;
      }
      rows[i].b = (rows[i].b - lambda * rows[(size_t)bi].b) % pM;
      if (rows[i].b < 0) rows[i].b += pM;
    }
    used[(size_t)bi] = 1;
    pivot_of_col[(size_t)bj] = bi;
    pivot_val[(size_t)bj] = best_v;
    order.emplace_back(bi, bj);
    res.pivots.push_back({rows[(size_t)bi].n, bj, best_v});
  }
  for (size_t j = 0; j < d; ++j)
    if (pivot_of_col[j] < 0)
      throw UnderdeterminedError("solve_relation: underdetermined system in window [" +
                                 std::to_string(win_lo) + ", " + std::to_string(win_hi) +
                                 "]; enlarge the window");

  // Back substitution, tracking how far each unknown is pinned down.
  long max_def = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto [i, j] = *it;
    long v = pivot_val[(size_t)j];
    long E = M;
    mpz_class z = rows[(size_t)i].b;
    for (size_t l = 0; l < d; ++l) {
      if ((long)l == j) continue;
      const mpz_class& cl = rows[(size_t)i].a[l];
      if (cl == 0) continue;
      E = std::min(E, vcap(cl, p, M) + (long)res.prec[l]);
      z -= cl * res.x[l];
    }
    mpz_class pEz = zpow(mpz_class(p), (unsigned long)E);
    z %= pEz;
    if (z < 0) z += pEz;
    long vz = vcap(z, p, E);
    if (vz < v) {
      max_def = std::max(max_def, v - vz);
      res.x[(size_t)j] = 0;
      res.prec[(size_t)j] = 0;
      continue;
    }
    long prec = E - v;
    mpz_class xval = (z / zpow(mpz_class(p), (unsigned long)v)) %
                     zpow(mpz_class(p), (unsigned long)prec);
    res.x[(size_t)j] = xval;
    res.prec[(size_t)j] = (int)prec;
  }
  res.attained = (int)M;
  for (size_t j = 0; j < d; ++j) res.attained = std::min(res.attained, res.prec[j]);

  // Residual certificate: every native constraint must hold to the precision
  // we can still see after the solve.
  for (auto& row : native) {
    mpz_class w = -row.b;
    for (size_t j = 0; j < d; ++j) w += row.a[j] * res.x[j];
    w %= pM;
    if (w < 0) w += pM;
    // row was scaled by p^(M-e); checkable precision is min(M, attained + (M-e))
    long t = std::min<long>(M, (long)res.attained + (M - row.e));
    long vw = vcap(w, p, M);
    if (vw < t) max_def = std::max(max_def, t - vw);
  }
  res.residual_deficiency = max_def;
  return res;
}

// ---- characteristic polynomial helpers ------------------------------------------

static mpz_class det_rec(const std::vector<std::vector<mpz_class>>& A) {
  size_t n = A.size();
  if (n == 1) return A[0][0];
  if (n == 2) return A[0][0] * A[1][1] - A[0][1] * A[1][0];
  mpz_class det = 0;
  for (size_t c = 0; c < n; ++c) {
    if (A[0][c] == 0) continue;
    std::vector<std::vector<mpz_class>> B(n - 1, std::vector<mpz_class>(n - 1));
    for (size_t r = 1; r < n; ++r) {
      size_t cc = 0;
      for (size_t s = 0; s < n; ++s) {
        if (s == c) continue;
        B[r - 1][cc++] = A[r][s];
      }
    }
    mpz_class term = A[0][c] * det_rec(B);
    if (c % 2)
      det -= term;
    else
      det += term;
  }
  return det;
}

// charpoly of an integer matrix via principal-minor sums; ascending, monic.
static std::vector<mpz_class> int_charpoly(const std::vector<std::vector<mpz_class>>& A) {
  size_t d = A.size();
  if (d > 12) throw SeriesError("charpoly: dimension too large");
  std::vector<mpz_class> S(d + 1, 0);
  for (unsigned long mask = 1; mask < (1ul << d); ++mask) {
    std::vector<int> idx;
    for (size_t j = 0; j < d; ++j)
      if (mask & (1ul << j)) idx.push_back((int)j);
    std::vector<std::vector<mpz_class>> B(idx.size(), std::vector<mpz_class>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t s = 0; s < idx.size(); ++s) B[r][s] = A[(size_t)idx[r]][(size_t)idx[s]];
    S[idx.size()] += det_rec(B);
  }
  std::vector<mpz_class> c(d + 1);
  c[d] = 1;
  for (size_t i = 1; i <= d; ++i) c[d - i] = (i % 2 == 0) ? S[i] : mpz_class(-S[i]);
  return c;
}

static std::vector<std::complex<double>> poly_roots(const std::vector<mpz_class>& poly) {
  size_t d = poly.size() - 1;
  std::vector<std::complex<double>> coeff(d + 1);
  for (size_t i = 0; i <= d; ++i) coeff[i] = poly[i].get_d();
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 0;
    for (size_t i = d + 1; i-- > 0;) v = v * x + coeff[i];
    return v;
  };
  std::vector<std::complex<double>> r(d);
  for (size_t i = 0; i < d; ++i) r[i] = std::pow(std::complex<double>(0.4, 0.9), (double)(i + 1));
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0;
    for (size_t i = 0; i < d; ++i) {
      std::complex<double> den = 1;
      for (size_t j = 0; j < d; ++j)
        if (j != i) den *= (r[i] - r[j]);
      std::complex<double> delta = eval(r[i]) / den;
      r[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  return r;
}

static mpz_class binom(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return r;
}

// ---- frobenius_matrix ----------------------------------------------------------

FrobReport frobenius_matrix(const std::vector<FormRecord>& basis,
                            const qseries::CuspContext& ctx, int k, long win_lo,
                            long win_hi, bool force_dense) {
  if (basis.empty()) throw SeriesError("frobenius_matrix: empty basis");
  ctx.validate();
  const long p = ctx.p;
  const int M = ctx.M;
  const size_t d = basis.size();

  std::vector<FracSeries> F;
  for (auto& rec : basis) {
    FracSeries s = rec.series.ring.is_exact() ? qseries::reduce_mod(rec.series, p, M)
                                              : rec.series;
    F.push_back(std::move(s));
  }
  for (auto& s : F)
    if (s.m != F[0].m) throw SeriesError("frobenius_matrix: mixed grids in basis");

  bool eigen = !force_dense;
  for (auto& rec : basis) eigen = eigen && rec.b_eigen.has_value();
  int N = (int)d + 1;
  if (eigen) {
    std::vector<char> seen((size_t)N, 0);
    for (auto& rec : basis) {
      int i = *rec.b_eigen;
      if (i < 1 || i > N - 1 || seen[(size_t)i]) {
        eigen = false;
        break;
      }
      seen[(size_t)i] = 1;
    }
    if (p % N == 0) eigen = false;
  }

  FrobReport rep;
  rep.p = p;
  rep.k = k;
  rep.M = M;
  rep.win_lo = win_lo;
  rep.win_hi = win_hi;
  rep.eigen_mode = eigen;
  rep.N = eigen ? N : 0;
  rep.matrix.assign(d, std::vector<mpz_class>(d, 0));

  std::vector<FracSeries> phi;
  for (auto& s : F) phi.push_back(qseries::frob_twist(s, ctx, k));

  long max_def = 0;
  int attained = M;

  // A holomorphic source lands in p^angle times the lattice, so its rows get
  // the stronger modulus.  This is what makes the non-unit alphas reachable.
  auto extra_for = [&](const FormRecord& rec) -> long {
    bool holo = rec.holo == modforms::HoloClass::Cusp ||
                rec.holo == modforms::HoloClass::Modular;
    return holo ? padic::angle(k - 1, p) : 0;
  };

  if (eigen) {
    // basis is ordered by its labels below
    std::vector<int> label_to_pos((size_t)N, -1);
    for (size_t j = 0; j < d; ++j) label_to_pos[(size_t)*basis[j].b_eigen] = (int)j;
    rep.alphas.assign(d, 0);
    rep.alpha_prec.assign(d, 0);
    rep.alpha_val.assign(d, 0);
    rep.alpha_shift.assign(d, 0);
    rep.alpha_derived.assign(d, false);
    rep.permutation.assign(d, 0);
    std::vector<size_t> deferred;
    for (size_t idx = 0; idx < d; ++idx) {
      int i = *basis[idx].b_eigen;
      int sigma = (int)(((long)i * p) % N);
      int spos = label_to_pos[(size_t)sigma];
      if (spos < 0)
        throw SeriesError("frobenius_matrix: basis lacks the eigen label " +
                          std::to_string(sigma));
      rep.permutation[idx] = sigma;
      // The relation may need scaling by p^shift before it lands in the
      // integral lattice (for p <= k-1 the eigenvalue can have a denominator),
      // and at split p the window can carry no information at all about a
      // non-unit chain; those alphas are completed from det = +-p^((k-1)d/2).
      bool solved = false;
      for (int shift = 0; shift <= 2 * (k - 1) && !solved; ++shift) {
        FracSeries rhs = phi[idx];
        if (shift > 0)
          rhs = qseries::scalar_mul(mpq_class(zpow(mpz_class(p), (unsigned long)shift)),
                                    phi[idx]);
        RelationResult r;
        try {
          r = solve_relation({F[(size_t)spos]}, rhs, k, p, M, win_lo, win_hi,
                             extra_for(basis[idx]));
        } catch (const UnderdeterminedError&) {
          deferred.push_back(idx);
          break;
        }
        if (r.residual_deficiency > 0 || r.attained < 1) continue;
        rep.alphas[idx] = r.x[0];
        rep.alpha_prec[idx] = r.prec[0];
        rep.alpha_shift[idx] = shift;
        rep.alpha_val[idx] = vcap(r.x[0], p, r.prec[0]) - shift;
        rep.pivots.insert(rep.pivots.end(), r.pivots.begin(), r.pivots.end());
        max_def = std::max(max_def, r.residual_deficiency);
        attained = std::min(attained, r.attained);
        solved = true;
      }
      if (!solved && (deferred.empty() || deferred.back() != idx))
        throw SeriesError("frobenius_matrix: relation for f_" + std::to_string(i) +
                          " stays inconsistent after rescaling; wrong basis?");
    }

    if (!deferred.empty()) {
      if (d != 2 || deferred.size() != 1)
        throw SeriesError(
            "frobenius_matrix: underdetermined eigenvalue and no functional-equation "
            "completion for d != 2; enlarge the window");
      size_t b = deferred[0], a = 1 - b;
      if (rep.alpha_shift[a] != 0)
        throw SeriesError("frobenius_matrix: cannot complete from a shifted eigenvalue");
      long va = rep.alpha_val[a];
      int preca = rep.alpha_prec[a];
      if (preca <= va)
        throw SeriesError("frobenius_matrix: solved eigenvalue too coarse to complete");
      // alpha_a alpha_b = +- p^(k-1); pick the sign making the trace a Weil
      // integer.
      long ucap = preca - va;
      mpz_class pu = zpow(mpz_class(p), (unsigned long)ucap);
      mpz_class unit_a = rep.alphas[a] / zpow(mpz_class(p), (unsigned long)va);
      mpz_class uinv = modinv(unit_a % pu, pu);
      long vb = (k - 1) - va;
      if (vb < 0)
        throw SeriesError("frobenius_matrix: completion would not be p-integral");
      mpz_class pb = zpow(mpz_class(p), (unsigned long)(vb + ucap));
      mpz_class base = zpow(mpz_class(p), (unsigned long)vb) * uinv % pb;
      mpz_class tr_mod = zpow(mpz_class(p), (unsigned long)std::min<long>(preca, vb + ucap));
      mpz_class weil2 = 4 * zpow(mpz_class(p), (unsigned long)(k - 1));
      int good_sign = 0;
      for (int sign : {1, -1}) {
        mpz_class tr = (rep.alphas[a] + sign * base) % tr_mod;
        mpz_class lift = qseries::balanced_lift(tr, tr_mod);
        if (lift * lift <= weil2) {
          if (good_sign != 0)
            throw SeriesError(
                "frobenius_matrix: both completion signs give Weil-bounded traces; "
                "not enough precision");
          good_sign = sign;
        }
      }
      if (good_sign == 0)
        throw SeriesError("frobenius_matrix: no completion sign gives a Weil-bounded "
                          "trace; wrong basis?");
      mpz_class ab = good_sign == 1 ? base : pb - base;
      rep.alphas[b] = ab;
      rep.alpha_prec[b] = (int)(vb + ucap);
      rep.alpha_val[b] = vb;
      rep.alpha_derived[b] = true;
    }
    for (size_t idx = 0; idx < d; ++idx) {
      attained = std::min(attained, rep.alpha_prec[idx]);
      rep.matrix[idx][(size_t)(label_to_pos[(size_t)rep.permutation[idx]])] =
          rep.alphas[idx];
    }
  } else {
    for (size_t idx = 0; idx < d; ++idx) {
      RelationResult r =
          solve_relation(F, phi[idx], k, p, M, win_lo, win_hi, extra_for(basis[idx]));
      rep.matrix[idx] = r.x;
      rep.pivots.insert(rep.pivots.end(), r.pivots.begin(), r.pivots.end());
      max_def = std::max(max_def, r.residual_deficiency);
      attained = std::min(attained, r.attained);
    }
  }
  rep.residual_deficiency = max_def;
  rep.attained = attained;
  if (attained < 1)
    throw SeriesError("frobenius_matrix: no precision attained; enlarge window or M");

  bool shifted = false;
  for (int s : rep.alpha_shift) shifted = shifted || s > 0;

  mpz_class pA = zpow(mpz_class(p), (unsigned long)attained);
  for (auto& row : rep.matrix)
    for (auto& x : row) {
      x %= pA;
      if (x < 0) x += pA;
    }

  // A shifted eigenvalue means the matrix itself is not p-integral; the
  // characteristic-polynomial block only makes sense without shifts.
  if (!shifted) {
    if (rep.eigen_mode) {
      // charpoly = prod over permutation cycles of (T^len - prod alphas);
      // a cycle product is pinned deeper than its factors, so precision is
      // tracked per coefficient.
      struct PCoeff {
        mpz_class v;
        long e;  // known mod p^e
      };
      std::vector<int> label_to_pos((size_t)N, -1);
      for (size_t j = 0; j < d; ++j) label_to_pos[(size_t)*basis[j].b_eigen] = (int)j;
      std::vector<char> seen(d, 0);
      std::vector<PCoeff> poly = {{1, (long)M + 64}};  // exact monic 1
      auto reduce_p = [&](PCoeff& c) {
        mpz_class mod = zpow(mpz_class(p), (unsigned long)c.e);
        c.v %= mod;
        if (c.v < 0) c.v += mod;
      };
      for (size_t start = 0; start < d; ++start) {
        if (seen[start]) continue;
        std::vector<size_t> cycle;
        size_t cur = start;
        while (!seen[cur]) {
          seen[cur] = 1;
          cycle.push_back(cur);
          cur = (size_t)label_to_pos[(size_t)rep.permutation[cur]];
        }
        long total = 0;
        for (size_t i : cycle) total += rep.alpha_val[i];
        long P = (long)M + 64;
        mpz_class prod = 1;
        for (size_t i : cycle) {
          prod *= rep.alphas[i];
          P = std::min(P, (long)rep.alpha_prec[i] + total - rep.alpha_val[i]);
        }
        // multiply poly by T^len - prod
        size_t len = cycle.size();
        std::vector<PCoeff> next(poly.size() + len, PCoeff{0, (long)M + 64});
        for (size_t i = 0; i < poly.size(); ++i) {
          // T^len * poly
          PCoeff hi = poly[i];
          PCoeff& slot = next[i + len];
          slot.e = std::min(slot.e, hi.e);
          slot.v += hi.v;
          // (-prod) * poly
          PCoeff& lo = next[i];
          long ep = std::min(poly[i].e + vcap(prod, p, P), P + vcap(poly[i].v, p, poly[i].e));
          lo.e = std::min(lo.e, ep);
          lo.v -= prod * poly[i].v;
        }
        for (auto& c : next) reduce_p(c);
        poly = std::move(next);
      }
      rep.charpoly_mod.resize(d + 1);
      rep.charpoly_prec.resize(d + 1);
      rep.charpoly_int.resize(d + 1);
      rep.charpoly_certified = true;
      for (size_t i = 0; i <= d; ++i) {
        long e = std::min<long>(poly[i].e, M);
        rep.charpoly_mod[i] = poly[i].v % zpow(mpz_class(p), (unsigned long)e);
        if (rep.charpoly_mod[i] < 0) rep.charpoly_mod[i] += zpow(mpz_class(p), (unsigned long)e);
        rep.charpoly_prec[i] = (int)e;
        mpz_class pe = zpow(mpz_class(p), (unsigned long)e);
        rep.charpoly_int[i] = qseries::balanced_lift(rep.charpoly_mod[i], pe);
        size_t ei = d - i;
        if (ei == 0) continue;
        mpz_class bound2 = binom((long)d, (long)ei) * binom((long)d, (long)ei) *
                           zpow(mpz_class(p), (unsigned long)((k - 1) * ei));
        if (rep.charpoly_int[i] * rep.charpoly_int[i] > bound2)
          rep.charpoly_certified = false;
        if (pe * pe <= 4 * bound2) rep.charpoly_certified = false;
      }
    } else {
      rep.charpoly_mod = int_charpoly(rep.matrix);
      for (auto& c : rep.charpoly_mod) {
        c %= pA;
        if (c < 0) c += pA;
      }
      rep.charpoly_int.resize(rep.charpoly_mod.size());
      rep.charpoly_prec.assign(rep.charpoly_mod.size(), attained);
      rep.charpoly_certified = true;
      for (size_t i = 0; i < rep.charpoly_mod.size(); ++i) {
        rep.charpoly_int[i] = qseries::balanced_lift(rep.charpoly_mod[i], pA);
        // Weil bound on the elementary symmetric functions:
        // |c_(d-i)| <= C(d,i) p^((k-1)i/2)
        size_t ei = d - i;
        if (ei == 0) continue;
        mpz_class bound2 = binom((long)d, (long)ei) * binom((long)d, (long)ei) *
                           zpow(mpz_class(p), (unsigned long)((k - 1) * ei));
        if (rep.charpoly_int[i] * rep.charpoly_int[i] > bound2)
          rep.charpoly_certified = false;
        if (pA * pA <= 4 * bound2) rep.charpoly_certified = false;
      }
    }

    // functional equation c_j = eps c_(d-j) p^((k-1)(d/2 - j))
    if (d % 2 == 0) {
      rep.funceq_applicable = true;
      size_t dh = d / 2;
      mpz_class pkd = zpow(mpz_class(p), (unsigned long)((k - 1) * dh));
      if (rep.charpoly_int[0] == pkd)
        rep.funceq_sign = 1;
      else if (rep.charpoly_int[0] == -pkd)
        rep.funceq_sign = -1;
      if (rep.funceq_sign != 0) {
        rep.funceq_ok = true;
        for (size_t j = 0; j <= dh; ++j) {
          mpz_class expect = rep.funceq_sign * rep.charpoly_int[d - j] *
                             zpow(mpz_class(p), (unsigned long)((k - 1) * (dh - j)));
          if (rep.charpoly_int[j] != expect) rep.funceq_ok = false;
        }
      }
    }

    // Weil absolute values of the integer candidate
    if (rep.charpoly_certified) {
      double target = std::pow((double)p, (double)(k - 1) / 2.0);
      double worst = 0;
      for (auto& root : poly_roots(rep.charpoly_int))
        worst = std::max(worst, std::abs(std::abs(root) - target) / target);
      rep.weil_max_err = worst;
      rep.weil_ok = worst < 1e-9;
    }
  }

  if (rep.eigen_mode) {
    // det = (sign of the permutation) * prod alpha_i, and each alpha's
    // valuation is certain; the product is pinned one level deeper than the
    // individual factors.  product_prec refers to prod alphas[i], i.e. the
    // stored (possibly shifted) numerators.
    long total = 0, P = 1 << 20;
    for (size_t i = 0; i < d; ++i) total += rep.alpha_val[i] + rep.alpha_shift[i];
    for (size_t i = 0; i < d; ++i)
      P = std::min(P, (long)rep.alpha_prec[i] + total -
                          (rep.alpha_val[i] + rep.alpha_shift[i]));
    rep.det_val = 0;
    for (size_t i = 0; i < d; ++i) rep.det_val += rep.alpha_val[i];
    rep.product_prec = (int)P;
  } else {
    rep.det_val = vcap(rep.charpoly_mod[0], p, attained);
    rep.product_prec = attained;
  }
  return rep;
}

AnnihilatorResult annihilator_poly(const FormRecord& f, const qseries::CuspContext& ctx,
                                   int k, int degree, long win_lo, long win_hi) {
  if (degree < 1) throw SeriesError("annihilator_poly: degree must be >= 1");
  ctx.validate();
  const long p = ctx.p;
  const int M = ctx.M;
  FracSeries base =
      f.series.ring.is_exact() ? qseries::reduce_mod(f.series, p, M) : f.series;
  bool holo =
      f.holo == modforms::HoloClass::Cusp || f.holo == modforms::HoloClass::Modular;
  long extra = holo ? padic::angle(k - 1, p) : 0;

  std::vector<FracSeries> cols;
  cols.push_back(base);
  FracSeries power = base;
  for (int j = 1; j < degree; ++j) {
    power = qseries::frob_twist(power, ctx, k);
    cols.push_back(power);
  }
  FracSeries rhs = qseries::neg(qseries::frob_twist(power, ctx, k));

  RelationResult r = solve_relation(cols, rhs, k, p, M, win_lo, win_hi, extra);

  AnnihilatorResult out;
  out.p = p;
  out.k = k;
  out.degree = degree;
  out.attained = r.attained;
  out.residual_deficiency = r.residual_deficiency;
  out.coeff_prec = r.prec;
  mpz_class pA = zpow(mpz_class(p), (unsigned long)r.attained);
  out.charpoly_mod.resize((size_t)degree + 1);
  out.charpoly_int.resize((size_t)degree + 1);
  out.charpoly_mod[(size_t)degree] = 1;
  out.charpoly_int[(size_t)degree] = 1;
  out.certified = r.attained > 0;
  for (int j = 0; j < degree; ++j) {
    // T^degree + sum_j x_j T^j annihilates f
    mpz_class pj = zpow(mpz_class(p), (unsigned long)r.prec[(size_t)j]);
    mpz_class cm = r.x[(size_t)j] % pA;
    if (cm < 0) cm += pA;
    out.charpoly_mod[(size_t)j] = cm;
    mpz_class lift = qseries::balanced_lift(r.x[(size_t)j], pj);
    out.charpoly_int[(size_t)j] = lift;
    size_t ei = (size_t)(degree - j);
    mpz_class bound2 = binom(degree, (long)ei) * binom(degree, (long)ei) *
                       zpow(mpz_class(p), (unsigned long)((k - 1) * ei));
    if (lift * lift > bound2) out.certified = false;
    if (pj * pj <= 4 * bound2) out.certified = false;
  }
  return out;
}

// ---- eigen_congruence_check ------------------------------------------------------

CongruenceReport eigen_congruence_check(int N, long p, const FrobReport& frob,
                                        const std::vector<FormRecord>& basis_exact,
                                        long n_max) {
  if (!frob.eigen_mode)
    throw SeriesError("eigen_congruence_check: needs an eigen-mode Frobenius report");
  if (frob.N != N || frob.p != p)
    throw SeriesError("eigen_congruence_check: report does not match N, p");
  const int k = frob.k;
  CongruenceReport rep;
  rep.p = p;
  rep.k = k;
  rep.note =
      "checked p^(k-1)/alpha_i * a_i(j) = a_(ip mod N)(pj); alphas normalized by "
      "phi(f_i) = alpha_i f_(ip mod N), so the paired-coefficient scalar of the "
      "other convention is p^(k-1)/alpha_i";

  for (int s : frob.alpha_shift)
    if (s != 0)
      throw SeriesError("eigen_congruence_check: shifted (non-integral) eigenvalues");

  std::vector<int> label_to_pos((size_t)N, -1);
  for (size_t j = 0; j < basis_exact.size(); ++j) {
    if (!basis_exact[j].b_eigen) throw SeriesError("eigen_congruence_check: unlabeled basis");
    label_to_pos[(size_t)*basis_exact[j].b_eigen] = (int)j;
  }

  mpz_class pk = zpow(mpz_class(p), (unsigned long)(k - 1));
  bool all_pass = true;
  for (size_t idx = 0; idx < basis_exact.size(); ++idx) {
    int i = *basis_exact[idx].b_eigen;
    int sigma = frob.permutation[idx];
    int spos = label_to_pos[(size_t)sigma];
    const mpz_class& alpha = frob.alphas[idx];
    long prec = frob.alpha_prec[idx];
    long va = frob.alpha_val[idx];
    if (va >= prec)
      throw SeriesError("eigen_congruence_check: alpha_" + std::to_string(i) +
                        " vanishes to its full precision");
    const FracSeries& fi = basis_exact[idx].series;
    const FracSeries& fs = basis_exact[(size_t)spos].series;
    if (!fi.ring.is_exact() || !fs.ring.is_exact())
      throw SeriesError("eigen_congruence_check: exact-rational expansions required");
    if (fs.hi < p * n_max)
      throw SeriesError("eigen_congruence_check: need expansions through t^" +
                        std::to_string(p * n_max));
    for (long j = 1; j <= n_max; ++j) {
      long s = ord_p_long(j, p);
      long required = (long)(k - 1) * (s + 1);
      // checked in the multiplied-through form p^(k-1) a_i(j) = alpha a_s(pj);
      // substituting alpha mod p^prec perturbs it by p^(prec + ord a_s(pj))
      long coeff_ord = val_p_or_inf(fs.coeff(p * j), p);
      if (prec + coeff_ord < required + va)
        throw SeriesError("eigen_congruence_check: precision shortfall at i = " +
                          std::to_string(i) + ", j = " + std::to_string(j) + ": alpha_" +
                          std::to_string(i) + " known mod p^" + std::to_string(prec) +
                          " but p^" + std::to_string(required + va - coeff_ord) +
                          " is needed");
      mpq_class diff = mpq_class(pk) * fi.coeff(j) - mpq_class(alpha) * fs.coeff(p * j);
      long attained;
      if (diff == 0)
        attained = VAL_INF;
      else
        attained = val_p(diff, p) - va;  // back in the p^(k-1)/alpha normalization
      bool pass = attained >= required;
      all_pass = all_pass && pass;
      rep.items.push_back({j, required, attained, pass, i});
    }
  }
  rep.pass = all_pass;
  return rep;
}

}  // namespace derham
