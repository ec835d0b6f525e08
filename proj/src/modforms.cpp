#include "modforms/modforms.hpp"

#include <numeric>

namespace modforms {

using qseries::FracSeries;
using qseries::Ring;
using qseries::SeriesError;

std::string holo_class_name(HoloClass h) {
  switch (h) {
    case HoloClass::Cusp: return "cusp";
    case HoloClass::Modular: return "modular";
    case HoloClass::WeakCusp: return "weak-cusp";
    case HoloClass::WeaklyExact: return "weakly-exact";
    case HoloClass::Weak: return "weak";
  }
  return "?";
}

// In-place multiply of a dense coefficient block (indices 0..hi) by 1 + sign*t^idx.
static void mul_binomial(std::vector<mpq_class>& v, long idx, int sign) {
  for (long n = (long)v.size() - 1; n >= idx; --n) {
    if (v[(size_t)(n - idx)] == 0) continue;
    if (sign > 0)
      v[(size_t)n] += v[(size_t)(n - idx)];
    else
      v[(size_t)n] -= v[(size_t)(n - idx)];
  }
}

// prod_{n>=1} (1 + sign*t^(a*n + b)) through t^hi, as a unit series on grid m.
static FracSeries sparse_product(int m, long hi, long a, long b, int sign) {
  std::vector<mpq_class> v((size_t)hi + 1, 0);
  v[0] = 1;
  for (long n = 1; a * n + b <= hi; ++n) mul_binomial(v, a * n + b, sign);
  FracSeries out;
  out.m = m;
  out.lo = 0;
  out.hi = hi;
  out.c = std::move(v);
  return out;
}

FormRecord eta_quotient(const std::vector<std::pair<mpq_class, mpq_class>>& spec,
                        long order, int weight, const std::string& group) {
  if (spec.empty()) throw SeriesError("eta_quotient: empty spec");
  mpq_class prefactor = 0;  // sum of c*e/24, the exponent of the leading monomial
  for (auto& [c, e] : spec) {
    if (c <= 0) throw SeriesError("eta_quotient: scales must be positive");
    prefactor += c * e / 24;
  }
  long margin = 2 + std::abs((long)mpz_class(prefactor.get_num() / prefactor.get_den()).get_si());
  long target_q = order + margin;

  FracSeries prod;
  bool have = false;
  for (auto& [c, e] : spec) {
    long a = (long)c.get_num().get_si();
    long b = (long)c.get_den().get_si();
    // (1 - q^(cn)) = (1 - t^(an)) on the grid 1/b
    FracSeries P = sparse_product((int)b, target_q * b, a, 0, -1);
    FracSeries F = qseries::pow_rational(P, e);
    prod = have ? qseries::mul(prod, F) : F;
    have = true;
  }

  long m_fin = std::lcm((long)prod.m, (long)prefactor.get_den().get_si());
  if (m_fin > 512)
    throw SeriesError("eta_quotient: grid overflow, leading exponent " + prefactor.get_str() +
                      " needs denominator " + std::to_string(m_fin));
  prod = qseries::rescale(prod, (int)m_fin);
  long shift_idx = (long)mpz_class(prefactor.get_num() *
                                   (m_fin / prefactor.get_den().get_si())).get_si();
  FracSeries out = qseries::shift(prod, shift_idx);
  out = qseries::truncated(out, order * m_fin);

  FormRecord rec;
  rec.series = std::move(out);
  rec.weight = weight;
  rec.group = group;
  rec.holo = HoloClass::Weak;
  return rec;
}

FormRecord eisenstein(int k, long order) {
  if (k != 4 && k != 6)
    throw SeriesError("eisenstein: only k = 4 and k = 6 are supported");
  long A = (k == 4) ? 240 : -504;
  std::vector<mpz_class> sigma((size_t)order + 1, 0);
  for (long d = 1; d <= order; ++d) {
    mpz_class dk = qseries::zpow(mpz_class(d), (unsigned long)(k - 1));
    for (long n = d; n <= order; n += d) sigma[(size_t)n] += dk;
  }
  FracSeries s;
  s.m = 1;
  s.lo = 0;
  s.hi = order;
  s.c.assign((size_t)order + 1, 0);
  s.c[0] = 1;
  for (long n = 1; n <= order; ++n) s.c[(size_t)n] = mpq_class(A * sigma[(size_t)n]);
  FormRecord rec;
  rec.series = std::move(s);
  rec.weight = k;
  rec.group = "SL2(Z)";
  rec.holo = HoloClass::Modular;
  return rec;
}

std::vector<mpz_class> ramanujan_tau(long n_max) {
  if (n_max < 1) throw SeriesError("ramanujan_tau: n_max must be >= 1");
  FormRecord delta = eta_quotient({{1, 24}}, n_max, 12, "SL2(Z)");
  std::vector<mpz_class> tau((size_t)n_max + 1, 0);
  for (long n = 1; n <= n_max; ++n) tau[(size_t)n] = delta.series.coeff(n).get_num();
  return tau;
}

FormRecord weak_e4_delta(long order) {
  long D = order + 2;
  FracSeries e4 = eisenstein(4, D).series;
  FracSeries delta = eta_quotient({{1, 24}}, D).series;
  FracSeries e4c = qseries::pow_int(e4, 3);
  FracSeries f = qseries::sub(qseries::mul(qseries::mul(e4c, e4c), qseries::invert(delta)),
                              qseries::scalar_mul(1464, e4c));
  FormRecord rec;
  rec.series = qseries::truncated(f, order);
  rec.weight = 12;
  rec.group = "SL2(Z)";
  rec.holo = HoloClass::WeaklyExact;
  return rec;
}

FermatSuite fermat_suite(int N, long t_order) {
  if (N < 3 || N % 2 == 0)
    throw SeriesError("fermat_suite: N must be odd and >= 3");
  long T = t_order + 2;

  // Everything below is on the grid t = q^(1/2).
  FracSeries theta;  // sum over n of t^(n^2)
  theta.m = 2;
  theta.lo = 0;
  theta.hi = T;
  theta.c.assign((size_t)T + 1, 0);
  theta.c[0] = 1;
  for (long n = 1; n * n <= T; ++n) theta.c[(size_t)(n * n)] = 2;

  FracSeries theta1 = qseries::pow_int(theta, 2);
  FracSeries theta1_cubed = qseries::pow_int(theta, 6);

  FracSeries A = sparse_product(2, T, 2, -1, -1);  // prod (1 - t^(2n-1))
  FracSeries B = sparse_product(2, T, 2, 0, +1);   // prod (1 + t^(2n))
  FracSeries C = sparse_product(2, T, 2, -1, +1);  // prod (1 + t^(2n-1))

  FracSeries Binv = qseries::invert(B);
  FracSeries AB8 = qseries::pow_int(qseries::mul(A, Binv), 8);
  FracSeries CB8 = qseries::pow_int(qseries::mul(C, Binv), 8);

  FracSeries xN = qseries::shift(AB8, -1);                       // -16 lambda~
  FracSeries yN = qseries::shift(CB8, -1);                       // 16 (1 - lambda~)
  FracSeries lam_tilde = qseries::scalar_mul(mpq_class(-1, 16), xN);

  FracSeries G = qseries::pow_int(qseries::div(A, C), 8);        // t^N as a series
  FracSeries t_hm = qseries::pow_rational(G, mpq_class(1, N));
  if (t_hm.m != 2)
    throw SeriesError("fermat_suite: hauptmodul left the q^(1/2) grid");
  FracSeries lambda = qseries::sub(FracSeries::one(2, G.hi), G);

  FracSeries yN_inv = qseries::invert(yN);

  FermatSuite suite;
  suite.N = N;

  auto wrap = [&](FracSeries s, int weight, const std::string& group, HoloClass h) {
    FormRecord r;
    r.series = qseries::truncated(std::move(s), t_order);
    r.weight = weight;
    r.group = group;
    r.holo = h;
    return r;
  };

  suite.theta1 = wrap(theta1, 1, "Delta", HoloClass::Modular);
  suite.lambda_tilde = wrap(lam_tilde, 0, "Gamma(2)", HoloClass::Weak);
  suite.lambda = wrap(lambda, 0, "Gamma(2)", HoloClass::Weak);
  suite.hauptmodul = wrap(t_hm, 0, "Phi0(" + std::to_string(N) + ")", HoloClass::Weak);

  FracSeries fi = qseries::mul(qseries::mul(theta1_cubed, t_hm), yN_inv);
  for (int i = 1; i <= N - 1; ++i) {
    if (fi.is_zero() || fi.lo != 1 || fi.coeff(1) != 1)
      throw SeriesError("fermat_suite: f_" + std::to_string(i) +
                        " is not normalized to leading coefficient 1 at q^(1/2)");
    FormRecord r = wrap(fi, 3, "Phi0(" + std::to_string(N) + ")",
                        i <= (N - 1) / 2 ? HoloClass::Cusp : HoloClass::WeaklyExact);
    r.b_eigen = i;
    suite.f.push_back(std::move(r));
    if (i < N - 1) fi = qseries::mul(fi, t_hm);
  }
  return suite;
}

int dim_s3(int N) {
  if (N < 3 || N % 2 == 0)
    throw SeriesError("dim_s3: N must be odd and >= 3");
  return (N - 1) / 2;
}

}  // namespace modforms
