#include "charsums/charsums.hpp"

#include <numeric>
#include <stdexcept>

namespace charsums {

using qseries::zpow;

namespace {
// x_1..x_(r-1) free over F_q^*, x_r forced to -1 - sum; zero arguments kill
// the term.
void jacobi_rec(const FFCtx& F, const std::vector<long>& a, long m, size_t pos,
                long sum, long exp, std::vector<mpz_class>& counts) {
  if (pos + 1 == a.size()) {
    long xr = F.sub(F.neg(1), sum);
    if (xr == 0) return;
    long e = (exp + a[pos] * (F.dlog[(size_t)xr] % m)) % m;
    counts[(size_t)e] += 1;
    return;
  }
  for (long x = 1; x < F.q; ++x) {
    long e = (exp + a[pos] * (F.dlog[(size_t)x] % m)) % m;
    jacobi_rec(F, a, m, pos + 1, F.add(sum, x), e, counts);
  }
}
}  // namespace

JacobiResult jacobi_sum(const FFCtx& F, const std::vector<long>& a, long m) {
  if (m < 1 || (F.q - 1) % m != 0)
    throw std::invalid_argument("jacobi_sum: m must divide q-1");
  if (a.empty()) throw std::invalid_argument("jacobi_sum: empty exponent vector");

  std::vector<long> ared;
  bool degenerate = false;
  long asum = 0;
  for (long ai : a) {
    long red = ((ai % m) + m) % m;
    if (red == 0) degenerate = true;
    asum = (asum + red) % m;
    ared.push_back(red);
  }
  if (asum == 0) degenerate = true;

  std::vector<mpz_class> counts((size_t)m, 0);
  jacobi_rec(F, ared, m, 0, 0, 0, counts);
  CycInt J = CycInt::from_counts(m, counts);
  if (a.size() % 2 == 1) J = CycInt::zero(m) - J;
  return {J, degenerate};
}

CycInt fermat_J(int N, const FFCtx& F, int i) {
  long m = 2L * N;
  if ((F.q - 1) % m != 0)
    throw std::invalid_argument("fermat_J: needs q = 1 mod 2N");
  JacobiResult J = jacobi_sum(F, {2L * i, (long)N}, m);
  // chi^N(-1) = (-1)^((q-1)/2)
  bool minus = ((F.q - 1) / 2) % 2 == 1;
  return minus ? CycInt::zero(m) - J.value : J.value;
}

mpz_class jacobi_trace_sum(int N, const FFCtx& F) {
  CycInt total = CycInt::zero(2L * N);
  for (int i = 1; i <= N - 1; ++i) {
    CycInt J = fermat_J(N, F, i);
    total = total + J * J;
  }
  mpz_class out;
  if (!total.is_rational_integer(&out))
    throw std::runtime_error("jacobi_trace_sum: Galois-conjugate sum is not rational: " +
                             total.str());
  return out;
}

long long surface_count(int N, const FFCtx& F) {
  if (std::gcd(F.q, 2L * N) != 1)
    throw std::invalid_argument("surface_count: q must be coprime to 2N");
  long long chi_sum = 0;
  std::vector<long> xx1((size_t)F.q);  // X(X+1)
  for (long X = 0; X < F.q; ++X) xx1[(size_t)X] = F.mul(X, F.add(X, 1));
  for (long t = 0; t < F.q; ++t) {
    long c = F.pow(t, N);
    for (long X = 0; X < F.q; ++X)
      chi_sum += F.chi2(F.mul(xx1[(size_t)X], F.add(X, c)));
  }
  return (long long)F.q * F.q + chi_sum;
}

FiberType classify_fiber(int N, const FFCtx& F, long t) {
  long c = F.pow(t, N);
  // roots of X(X+1)(X+c): 0, -1, -c
  if (c != 0 && c != 1) return FiberType::Good;
  long x0, x1;  // double root, simple root
  if (c == 0) {
    x0 = 0;
    x1 = F.neg(1);
  } else {
    x0 = F.neg(1);
    x1 = 0;
  }
  // tangent cone at the node (x0, 0): Y^2 = (x0 - x1)(X - x0)^2
  int sq = F.chi2(F.sub(x0, x1));
  if (sq == 0) return FiberType::Additive;  // triple root; unreachable here
  return sq == 1 ? FiberType::SplitMult : FiberType::NonsplitMult;
}

long long lefschetz_trace(int N, const FFCtx& F) {
  if (std::gcd(F.q, 2L * N) != 1)
    throw std::invalid_argument("lefschetz_trace: q must be coprime to 2N");
  long long total = 0;
  std::vector<long> xx1((size_t)F.q);
  for (long X = 0; X < F.q; ++X) xx1[(size_t)X] = F.mul(X, F.add(X, 1));
  for (long t = 0; t < F.q; ++t) {
    FiberType type = classify_fiber(N, F, t);
    if (type == FiberType::Good) {
      long c = F.pow(t, N);
      long long s = 0;
      for (long X = 0; X < F.q; ++X) s += F.chi2(F.mul(xx1[(size_t)X], F.add(X, c)));
      total += s;  // -(q + 1 - #E_t) = sum of chi2
    } else {
      total -= (type == FiberType::SplitMult) ? 1 : -1;
    }
  }
  return total;
}

long long trace_via_surface(int N, const FFCtx& F) {
  long long surf = surface_count(N, F);
  long long good = 0;
  long long bad_affine = 0;
  long long bad_tr = 0;
  for (long t = 0; t < F.q; ++t) {
    FiberType type = classify_fiber(N, F, t);
    if (type == FiberType::Good) {
      ++good;
      continue;
    }
    long c = F.pow(t, N);
    for (long X = 0; X < F.q; ++X)
      bad_affine += 1 + F.chi2(F.mul(F.mul(X, F.add(X, 1)), F.add(X, c)));
    bad_tr += (type == FiberType::SplitMult) ? 1 : -1;
  }
  return surf - bad_affine - (long long)F.q * good - bad_tr;
}

LocalFactor local_factor(int N, long p, const std::vector<int>& degrees) {
  if (p < 3 || !qseries::is_prime(p) || (long)N % p == 0)
    throw std::invalid_argument("local_factor: need p an odd prime coprime to N");
  int d = N - 1;
  std::vector<char> have((size_t)d + 1, 0);
  for (int k : degrees)
    if (k >= 1 && k <= d) have[(size_t)k] = 1;
  for (int k = 1; k <= d; ++k)
    if (!have[(size_t)k])
      throw std::invalid_argument(
          "local_factor: Newton reconstruction needs traces for degrees 1.." +
          std::to_string(d));

  LocalFactor lf;
  lf.N = N;
  lf.p = p;
  std::vector<mpq_class> s((size_t)d + 1, 0);
  for (int k = 1; k <= d; ++k) {
    FFCtx F = FFCtx::make(p, k);
    long long tr = lefschetz_trace(N, F);
    lf.traces.push_back(tr);
    s[(size_t)k] = (long)tr;
  }

  // e_i = (1/i) sum_{j=1..i} (-1)^(j-1) e_(i-j) s_j
  std::vector<mpq_class> e((size_t)d + 1, 0);
  e[0] = 1;
  lf.integral = true;
  for (int i = 1; i <= d; ++i) {
    mpq_class acc = 0;
    for (int j = 1; j <= i; ++j) {
      mpq_class term = e[(size_t)(i - j)] * s[(size_t)j];
      if (j % 2 == 0)
        acc -= term;
      else
        acc += term;
    }
    e[(size_t)i] = acc / i;
    if (e[(size_t)i].get_den() != 1) lf.integral = false;
  }
  if (!lf.integral)
    throw std::runtime_error("local_factor: Newton identities produced non-integers");

  lf.charpoly.assign((size_t)d + 1, 0);
  lf.charpoly[(size_t)d] = 1;
  for (int i = 1; i <= d; ++i)
    lf.charpoly[(size_t)(d - i)] = (i % 2 == 0) ? mpz_class(e[(size_t)i].get_num())
                                                : mpz_class(-e[(size_t)i].get_num());

  lf.weil_ok = true;
  for (int i = 1; i <= d; ++i) {
    mpz_class bound;
    mpz_bin_uiui(bound.get_mpz_t(), (unsigned long)d, (unsigned long)i);
    bound *= zpow(mpz_class(p), (unsigned long)i);
    if (abs(lf.charpoly[(size_t)(d - i)]) > bound) lf.weil_ok = false;
  }

  bool middle_zero = true;
  for (int i = 1; i < d; ++i)
    if (lf.charpoly[(size_t)i] != 0) middle_zero = false;
  if (middle_zero) {
    mpz_class pd = zpow(mpz_class(p), (unsigned long)d);
    if (lf.charpoly[0] == pd) lf.pm_sign = 1;
    if (lf.charpoly[0] == -pd) lf.pm_sign = -1;
  }
  return lf;
}

DavenportHasseDetail davenport_hasse_detail(int N, int d, long p, int k) {
  if (N < 3 || N % 2 == 0) throw std::invalid_argument("davenport_hasse: N odd >= 3");
  if (d < 1 || N % d != 0) throw std::invalid_argument("davenport_hasse: d | N required");
  if (p % N != 1) throw std::invalid_argument("davenport_hasse: p = 1 mod N required");
  if (k < 1) throw std::invalid_argument("davenport_hasse: k >= 1");

  FFCtx Fk = FFCtx::make(p, k);
  long qk = Fk.q;
  if ((qk - 1) % (2L * N) != 0)
    throw std::invalid_argument("davenport_hasse: 2N must divide p^k - 1");
  long Nprime = (qk - 1) / (2L * N);
  long Mord = (qk - 1) / d;  // order of the lifted character; the CycInt order

  // Right side: J_(2N', N N'/d) over F_(p^k) with chi~ of order (p^k-1)/d,
  // squared.
  JacobiResult rhsJ = jacobi_sum(Fk, {2 * Nprime, (long)N * Nprime / d}, Mord);
  CycInt rhs = rhsJ.value * rhsJ.value;

  // Left side: the base character is the norm lift, chi_p(Norm(x)) = chi~^N'(x).
  // Norm(gen~) generates F_p^*, and chi_p(Norm(gen~)) = zeta_Mord^N'.
  long norm_gen_enc = Fk.pow(Fk.gen, (qk - 1) / (p - 1));
  if (norm_gen_enc >= p)
    throw std::runtime_error("davenport_hasse: norm of the generator is not in F_p");
  FFCtx F1 = FFCtx::make(p, 1);
  long ind = F1.dlog[(size_t)norm_gen_enc];
  long ind_inv = (long)qseries::modinv(mpz_class(ind), mpz_class(p - 1)).get_si();

  // J_(2, N/d) over F_p, accumulated directly in zeta_Mord exponents
  std::vector<mpz_class> counts((size_t)Mord, 0);
  long m_base = 2L * N / d;
  for (long x1 = 1; x1 < p; ++x1) {
    long x2 = F1.sub(F1.neg(1), x1);
    if (x2 == 0) continue;
    long e1 = F1.dlog[(size_t)x1] * ind_inv % (p - 1);  // dlog base Norm(gen~)
    long e2 = F1.dlog[(size_t)x2] * ind_inv % (p - 1);
    long e = (2 * e1 + (long)(N / d) * e2) % m_base;
    if (e < 0) e += m_base;
    // embed zeta_(2N/d)^e = zeta_Mord^(e * Mord / m_base)
    counts[(size_t)(e * (Mord / m_base) % Mord)] += 1;
  }
  CycInt lhsJ = CycInt::from_counts(Mord, counts);
  CycInt lhs = lhsJ.pow(2UL * (unsigned long)k);

  return {lhs, rhs, lhs == rhs};
}

bool davenport_hasse_check(int N, int d, long p, int k) {
  return davenport_hasse_detail(N, d, p, k).pass;
}

std::map<long, mpq_class> omega_exponent(long m, const std::vector<long>& a) {
  if (m <= 1) throw std::invalid_argument("omega_exponent: m > 1 required");
  std::map<long, mpq_class> out;
  for (long t = 1; t < m; ++t) {
    if (std::gcd(t, m) != 1) continue;
    mpq_class e = 0;
    for (long ar : a) {
      long num = t * ar % m;
      if (num < 0) num += m;
      mpq_class part(num, m);
      part.canonicalize();
      e += part;
    }
    out[t] = e;
  }
  return out;
}

}  // namespace charsums
