#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "padic/padic.hpp"
#include "qseries/series.hpp"

using namespace qseries;

namespace {

FracSeries from_coeffs(int m, long lo, std::vector<mpq_class> v, Ring ring = Ring::exact()) {
  FracSeries f;
  f.m = m;
  f.lo = lo;
  f.hi = lo + (long)v.size() - 1;
  f.c = std::move(v);
  f.ring = ring;
  f.normalize();
  return f;
}

// q * prod (1 - q^n)^24 expanded by naive repeated multiplication; the
// independent route for Delta coefficients.
std::vector<mpz_class> delta_bruteforce(long order) {
  std::vector<mpz_class> v((size_t)order + 1, 0);
  v[0] = 1;
  for (long n = 1; n <= order; ++n) {
    for (int rep = 0; rep < 24; ++rep) {
      for (long i = order; i >= n; --i) v[(size_t)i] -= v[(size_t)(i - n)];
    }
  }
  std::vector<mpz_class> out((size_t)order + 2, 0);
  for (long i = 0; i <= order; ++i) out[(size_t)(i + 1)] = v[(size_t)i];  // shift by q
  return out;
}

FracSeries random_series(std::mt19937_64& rng, int max_order = 30) {
  std::uniform_int_distribution<int> mdist(1, 3), lodist(-3, 3), numdist(-9, 9),
      dendist(1, 4);
  int m = mdist(rng);
  long lo = lodist(rng);
  long hi = lo + max_order;
  std::vector<mpq_class> c;
  for (long n = lo; n <= hi; ++n) {
    mpq_class v(numdist(rng), dendist(rng));
    v.canonicalize();
    c.push_back(v);
  }
  FracSeries f = from_coeffs(m, lo, std::move(c));
  if (f.is_zero()) return FracSeries::monomial(m, 0, 1, hi);
  return f;
}

}  // namespace

TEST_CASE("mul basic identities") {
  FracSeries one_plus = from_coeffs(1, 0, {1, 1});
  FracSeries one_minus = from_coeffs(1, 0, {1, -1});
  FracSeries prod = mul(one_plus, one_minus);
  CHECK(prod.coeff(0) == 1);
  CHECK(prod.coeff(1) == 0);
  // both factors known through q^1, so the product is known through q^1 only
  CHECK(prod.hi == 1);

  FracSeries f = from_coeffs(2, -1, {3, 0, mpq_class(1, 2)});
  FracSeries one = FracSeries::one(2, 10);
  CHECK(agree_on_common(mul(f, one), f));
}

TEST_CASE("mul against independently convolved Delta inverse") {
  long order = 50;
  auto tau = delta_bruteforce(order + 2);
  std::vector<mpq_class> dc;
  for (long n = 1; n < (long)tau.size(); ++n) dc.emplace_back(tau[(size_t)n]);
  FracSeries delta = from_coeffs(1, 1, std::move(dc));
  FracSeries inv = invert(delta);
  FracSeries prod = mul(delta, inv);
  CHECK(prod.lo == 0);
  CHECK(prod.coeff(0) == 1);
  for (long n = 1; n <= prod.hi; ++n) CHECK(prod.coeff(n) == 0);
  CHECK(prod.hi >= order);
}

TEST_CASE("truncation propagates through mul") {
  FracSeries f = from_coeffs(1, 0, {1, 2, 3});       // known to q^2
  FracSeries g = from_coeffs(1, 2, {5, 7, 1, 1, 1}); // lo 2, known to q^6
  FracSeries h = mul(f, g);
  CHECK(h.lo == 2);
  CHECK(h.hi == std::min(2L + 6L, 2L + 2L));  // min(f.hi + g.lo, g.hi + f.lo)
  CHECK(h.coeff(2) == 5);
  CHECK(h.coeff(3) == 7 + 10);
}

TEST_CASE("pow_rational binomial series") {
  FracSeries f = from_coeffs(1, 0, {1, 1, 0, 0, 0, 0});
  FracSeries r = pow_rational(f, mpq_class(1, 2));
  CHECK(r.coeff(0) == 1);
  CHECK(r.coeff(1) == mpq_class(1, 2));
  CHECK(r.coeff(2) == mpq_class(-1, 8));
  CHECK(r.coeff(3) == mpq_class(1, 16));

  FracSeries cube = pow_rational(f, 3);
  FracSeries direct = mul(f, mul(f, f));
  CHECK(agree_on_common(cube, direct));
  CHECK(cube.coeff(1) == 3);
  CHECK(cube.coeff(2) == 3);
  CHECK(cube.coeff(3) == 1);
}

TEST_CASE("pow_rational grid enlargement and round trip") {
  // leading monomial q^1 taken to power 1/2 lands on the half-integer grid
  FracSeries f = from_coeffs(1, 1, {1, 4, 6});
  FracSeries r = pow_rational(f, mpq_class(1, 2));
  CHECK(r.m == 2);
  CHECK(r.lo == 1);  // q^(1/2)
  FracSeries back = pow_rational(r, 2);
  CHECK(agree_on_common(rescale(f, 2), back));

  CHECK_THROWS_AS(pow_rational(from_coeffs(1, 0, {2, 1}), mpq_class(1, 2)), SeriesError);
  CHECK_THROWS_AS(pow_rational(f, mpq_class(1, 2), /*max_den=*/1), SeriesError);
}

TEST_CASE("pow_rational addition law (property)") {
  std::mt19937_64 rng(12345);
  for (int it = 0; it < 40; ++it) {
    FracSeries u = random_series(rng, 18);
    // normalize to leading coefficient 1
    FracSeries f = scalar_mul(1 / u.c[0], u);
    std::uniform_int_distribution<int> nd(-5, 5), dd(1, 3);
    mpq_class a(nd(rng), dd(rng)), b(nd(rng), dd(rng));
    a.canonicalize();
    b.canonicalize();
    FracSeries lhs = mul(pow_rational(f, a), pow_rational(f, b));
    FracSeries rhs = pow_rational(f, a + b);
    CHECK(agree_on_common(lhs, rhs));
  }
}

TEST_CASE("theta_deriv monomials and Leibniz") {
  FracSeries mono = FracSeries::monomial(1, 7, 1, 20);
  CHECK(theta_deriv(mono, 1).coeff(7) == 7);

  FracSeries half = FracSeries::monomial(2, 1, 1, 20);  // q^(1/2)
  CHECK(theta_deriv(half, 2).coeff(1) == mpq_class(1, 4));

  std::mt19937_64 rng(99);
  for (int it = 0; it < 40; ++it) {
    FracSeries f = random_series(rng, 20);
    FracSeries g = random_series(rng, 20);
    FracSeries lhs = theta_deriv(mul(f, g), 1);
    FracSeries rhs = add(mul(theta_deriv(f, 1), g), mul(f, theta_deriv(g, 1)));
    CHECK(agree_on_common(lhs, rhs));
  }
}

TEST_CASE("theta_deriv in the mod ring") {
  Ring ring = Ring::mod(5, 3);
  FracSeries f = reduce_mod(from_coeffs(2, 1, {1, 2, 3}), 5, 3);
  FracSeries d = theta_deriv(f, 1);
  // (n/m) = n * inv(2) mod 125; inv(2) = 63
  CHECK(d.coeff(1) == mpq_class((1 * 63) % 125));
  CHECK(d.coeff(2) == mpq_class((2 * 63 * 2) % 125));
  FracSeries bad = f;
  bad.m = 5;
  CHECK_THROWS_AS(theta_deriv(bad, 1), SeriesError);
  (void)ring;
}

TEST_CASE("frob_twist monomial rule and additivity") {
  CuspContext ctx;
  ctx.m = 1;
  ctx.delta = 1;
  ctx.p = 11;
  ctx.M = 12;
  ctx.gamma = 1;
  FracSeries mono = FracSeries::monomial(1, -1, 1, 30);
  FracSeries tw = frob_twist(mono, ctx, 12);
  CHECK(tw.coeff(-11) == mpq_class(zpow(mpz_class(11), 11)));
  CHECK(tw.hi == 330);

  FracSeries z = FracSeries::zero(1, 30);
  CHECK(frob_twist(z, ctx, 12).is_zero());

  std::mt19937_64 rng(7);
  CuspContext c2;
  c2.m = 2;
  c2.delta = 1;
  c2.p = 5;
  c2.M = 6;
  c2.gamma = 1;
  for (int it = 0; it < 20; ++it) {
    FracSeries f = random_series(rng, 15);
    FracSeries g = random_series(rng, 15);
    f.m = 2;
    g.m = 2;
    FracSeries lhs = frob_twist(add(f, g), c2, 3);
    FracSeries rhs = add(frob_twist(f, c2, 3), frob_twist(g, c2, 3));
    CHECK(agree_on_common(lhs, rhs));
  }
}

TEST_CASE("frob_twist with a nontrivial gamma") {
  // gamma for m = 2, delta = 2, p = 5: gamma = -4 in 1 + 5Z_5
  qseries::CuspContext ctx = padic::make_cusp_context(2, 2, 5, 4);
  CHECK(ctx.gamma == 621);  // -4 mod 625
  FracSeries f = reduce_mod(from_coeffs(2, 1, {1, 1}), 5, 4);
  FracSeries tw = frob_twist(f, ctx, 3);
  // index 1 -> 5 with factor p^2 gamma^1
  CHECK(tw.coeff(5) == mpq_class((25 * 621) % 625));
  // index 2 -> 10 with factor p^2 gamma^2: (-4)^2 = 16
  CHECK(tw.coeff(10) == mpq_class((25 * 16) % 625));
  // exact ring refuses gamma != 1
  CHECK_THROWS_AS(frob_twist(from_coeffs(2, 1, {1}), ctx, 3), SeriesError);
}

TEST_CASE("reduce_mod basics and failure reporting") {
  FracSeries f = from_coeffs(1, 1, {mpq_class(-4, 3)});
  FracSeries r = reduce_mod(f, 5, 2);
  CHECK(r.coeff(1) == 7);  // 3^-1 = 17 mod 25, -4*17 = -68 = 7

  FracSeries ints = from_coeffs(1, 0, {26, -1, 100});
  FracSeries ri = reduce_mod(ints, 5, 2);
  CHECK(ri.coeff(0) == 1);
  CHECK(ri.coeff(1) == 24);
  CHECK(ri.coeff(2) == 0);

  try {
    reduce_mod(f, 3, 2);
    FAIL("expected ReduceError");
  } catch (const ReduceError& e) {
    CHECK(e.index == 1);
  }
}

TEST_CASE("ring axioms on random truncated series (property)") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 200; ++it) {
    FracSeries f = random_series(rng, 12);
    FracSeries g = random_series(rng, 12);
    FracSeries h = random_series(rng, 12);
    CHECK(agree_on_common(mul(f, g), mul(g, f)));
    CHECK(agree_on_common(mul(mul(f, g), h), mul(f, mul(g, h))));
    CHECK(agree_on_common(mul(f, add(g, h)), add(mul(f, g), mul(f, h))));
  }
}

TEST_CASE("reduce_mod commutes with mul") {
  std::mt19937_64 rng(55);
  for (int it = 0; it < 50; ++it) {
    FracSeries f = random_series(rng, 12);
    FracSeries g = random_series(rng, 12);
    // clear denominators of 7
    auto clean = [](FracSeries s) {
      for (auto& v : s.c)
        while (mpz_divisible_ui_p(v.get_den().get_mpz_t(), 7)) v *= 7;
      s.normalize();
      return s;
    };
    f = clean(f);
    g = clean(g);
    FracSeries lhs = reduce_mod(mul(f, g), 7, 4);
    FracSeries rhs = mul(reduce_mod(f, 7, 4), reduce_mod(g, 7, 4));
    CHECK(agree_on_common(lhs, rhs));
  }
}

TEST_CASE("mixed-ring operands are rejected") {
  FracSeries f = from_coeffs(1, 0, {1, 2});
  FracSeries g = reduce_mod(from_coeffs(1, 0, {1, 2}), 5, 2);
  CHECK_THROWS_AS(mul(f, g), SeriesError);
  CHECK_THROWS_AS(add(f, g), SeriesError);
}

TEST_CASE("cusp context validation") {
  CuspContext good = padic::make_cusp_context(2, 2, 5, 4);
  good.validate();
  CuspContext bad = good;
  bad.gamma = 4;  // the root not congruent to 1 mod 5
  CHECK_THROWS_AS(bad.validate(), SeriesError);
  CuspContext pdividesm = good;
  pdividesm.m = 5;
  CHECK_THROWS_AS(pdividesm.validate(), SeriesError);
}
