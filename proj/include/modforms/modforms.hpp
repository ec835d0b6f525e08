#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qseries/series.hpp"

namespace modforms {

enum class HoloClass { Cusp, Modular, WeakCusp, WeaklyExact, Weak };

std::string holo_class_name(HoloClass h);

/// A q-expansion with the bookkeeping needed downstream: weight, the group it
/// lives on, and (for the Fermat bases) the eigenvalue index of the slash
/// action of B.
struct FormRecord {
  qseries::FracSeries series;
  int weight = 0;
  std::string group;
  std::optional<int> b_eigen;
  HoloClass holo = HoloClass::Modular;
};

/// Product over entries (scale c, exponent e) of [q^(c/24) prod(1 - q^(cn))]^e,
/// expanded through q^order.  The caller sets weight/group on the result.
FormRecord eta_quotient(const std::vector<std::pair<mpq_class, mpq_class>>& spec,
                        long order, int weight = 0, const std::string& group = "");

/// Normalized Eisenstein series, constant term 1.  Only k = 4 and 6 are wired.
FormRecord eisenstein(int k, long order);

/// tau(1..n_max) from the 24th power of the Dedekind eta product.
std::vector<mpz_class> ramanujan_tau(long n_max);

/// E4^6/Delta - 1464 E4^3, the weight-12 weakly exact cusp form of level one,
/// expanded through q^order.
FormRecord weak_e4_delta(long order);

/// Everything living on the Fermat quotient: all series exact on the q^(1/2)
/// grid, with indices counted in t = q^(1/2) units through t^t_order.
struct FermatSuite {
  int N;
  FormRecord theta1;        // weight 1
  FormRecord lambda_tilde;  // modular function
  FormRecord lambda;        // 1 - t^N = 16 q^(1/2) - 128 q + ...
  FormRecord hauptmodul;    // t, the N-th root with leading coefficient +1
  std::vector<FormRecord> f;  // f[i-1] = f_i = theta1^3 t^i / (16(1 - lambda_tilde))
};

FermatSuite fermat_suite(int N, long t_order);

/// dim S_3(Phi_0(N)) = (N-1)/2.
int dim_s3(int N);

}  // namespace modforms
