#pragma once

// Shared generators and independent oracles for the test suites.

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "padic/distribution.hpp"
#include "padic/linalg.hpp"
#include "padic/promeasure.hpp"

namespace padic::testing {

inline void expect_kind(ErrorKind k, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(k);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), k) << e.what();
  }
}

inline Ring unram_ring(u64 p, std::vector<i64> g, int prec) {
  RingSpec s = RingSpec::zp(p, prec);
  s.unram = std::move(g);
  return Ring::make(s);
}

/// Z_2, Z_3, Z_5, an unramified quadratic ring and a wild e = 2 ring.
inline std::vector<Ring> sample_rings(int prec) {
  return {Ring::zp(2, prec), Ring::zp(3, prec), Ring::zp(5, prec), unram_ring(3, {1, 0, 1}, prec),
          Ring::make(RingSpec::cyclotomic_ring(3, 1, prec))};
}

inline Element random_element(const Ring& R, std::mt19937_64& rng) {
  std::vector<u128> c(R.data().dim());
  for (auto& v : c) v = static_cast<u128>(rng()) % R.data().mod.modulus();
  return R.from_coords(c);
}

/// Element of valuation at least v (in pi-units).
inline Element random_element_val(const Ring& R, int v, std::mt19937_64& rng) {
  Element a = random_element(R, rng);
  return v > 0 ? a.mul_pi(v).reduce(R.precision()) : a;
}

inline PowerSeries random_series(const Ring& R, int M, std::mt19937_64& rng) {
  std::vector<Element> c;
  for (int i = 0; i < M; ++i) c.push_back(random_element(R, rng));
  return PowerSeries(R, std::move(c), M);
}

inline Distribution random_distribution(const FiniteAbelianGroup& G, const Ring& R, std::mt19937_64& rng) {
  std::vector<Element> v;
  for (i64 i = 0; i < G.size(); ++i) v.push_back(random_element(R, rng));
  return Distribution(G, R, std::move(v));
}

inline ProMeasure random_measure(const FiniteAbelianGroup& D, const Ring& R, int M, std::mt19937_64& rng) {
  std::vector<PowerSeries> s;
  for (i64 i = 0; i < D.size(); ++i) s.push_back(random_series(R, M, rng));
  return ProMeasure(D, std::move(s));
}

/// sum over (delta, i) of chi(delta) zeta^i times the mass of (delta, gamma^i Gamma_n).
inline Element twist_sum_oracle(const ProMeasure& mu, const Character& chi, const Element& zeta, int n) {
  Distribution d = level_reduce(mu, n);
  const Ring& R = mu.ring();
  Element s = R.zero();
  for (const auto& g : d.group().elements()) {
    GroupElement dd(g.begin(), g.end() - 1);
    s += chi.eval(R, dd) * zeta.pow(static_cast<u64>(g.back())) * d.at(g);
  }
  return s;
}

/// Random distinguished polynomial of degree lambda times a random unit, times pi^mu.
inline PowerSeries random_prepared(const Ring& R, int M, int mu, int lambda, std::mt19937_64& rng) {
  std::vector<Element> P;
  for (int i = 0; i < lambda; ++i) P.push_back(random_element_val(R, 1, rng));
  P.push_back(R.one());
  std::vector<Element> U;
  for (int i = 0; i < M; ++i) U.push_back(random_element(R, rng));
  if (!U[0].is_unit()) U[0] += R.one();
  if (!U[0].is_unit()) U[0] += R.one();
  PowerSeries f = PowerSeries(R, P, M) * PowerSeries(R, U, M);
  for (int i = 0; i < M; ++i) f[i] = f[i].mul_pi(mu).reduce(R.precision());
  return f;
}

/// Determinant by the permutation expansion.
inline PowerSeries leibniz_det(const SeriesMatrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PowerSeries acc(m[0][0].ring(), m[0][0].tdeg());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    PowerSeries t = PowerSeries::monomial(m[0][0].ring(), 0, m[0][0].tdeg());
    for (int i = 0; i < n; ++i) t *= m[i][perm[i]];
    acc = (inv & 1) ? acc - t : acc + t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

/// Exponent of #(Z_p[T]/(f, omega_n)) from a Smith normal form of the
/// multiplication matrix over Z/p^K, or -1 when a zero block survives.
inline int smith_order_exponent(u64 p, int K, const std::vector<i64>& f, int n) {
  i128 mod = 1;
  for (int i = 0; i < K; ++i) mod *= p;
  auto red = [&](i128 v) {
    v %= mod;
    return v < 0 ? v + mod : v;
  };
  int d = 1;
  for (int i = 0; i < n; ++i) d *= static_cast<int>(p);
  // omega_n coefficients by Pascal's rule.
  std::vector<i128> row{1};
  for (int k = 0; k < d; ++k) {
    std::vector<i128> next(row.size() + 1, 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] = red(next[i] + row[i]);
      next[i + 1] = red(next[i + 1] + row[i]);
    }
    row = next;
  }
  row[0] = red(row[0] - 1);
  auto reduce_mod_omega = [&](std::vector<i128> a) {
    for (int k = static_cast<int>(a.size()) - 1; k >= d; --k) {
      i128 t = a[k];
      for (int i = 0; i <= d; ++i) a[k - d + i] = red(a[k - d + i] - t * row[i] % mod);
    }
    a.resize(d, 0);
    return a;
  };
  std::vector<std::vector<i128>> m(d, std::vector<i128>(d, 0));
  for (int j = 0; j < d; ++j) {
    std::vector<i128> col(j, 0);
    for (i64 c : f) col.push_back(red(c));
    col = reduce_mod_omega(col);
    for (int i = 0; i < d; ++i) m[i][j] = col[i];
  }
  auto vp = [&](i128 v) {
    int k = 0;
    while (v % (i128)p == 0 && k < K) {
      v /= (i128)p;
      ++k;
    }
    return k;
  };
  auto inv_unit = [&](i128 u) {
    // Extended Euclid modulo p^K.
    i128 a = u, b = mod, x0 = 1, x1 = 0;
    while (b) {
      i128 q = a / b;
      std::tie(a, b) = std::make_pair(b, a - q * b);
      std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    return red(x0);
  };
  int total = 0;
  for (int k = 0; k < d; ++k) {
    int br = -1, bc = -1, bv = K;
    for (int i = k; i < d; ++i)
      for (int j = k; j < d; ++j)
        if (m[i][j] != 0 && vp(m[i][j]) < bv) {
          bv = vp(m[i][j]);
          br = i;
          bc = j;
        }
    if (br < 0) return -1;
    std::swap(m[k], m[br]);
    for (auto& r : m) std::swap(r[k], r[bc]);
    i128 pv = 1;
    for (int i = 0; i < bv; ++i) pv *= p;
    i128 uinv = inv_unit(m[k][k] / pv);
    for (int i = k + 1; i < d; ++i) {
      i128 fct = red((m[i][k] / pv) * uinv);
      for (int j = k; j < d; ++j) m[i][j] = red(m[i][j] - fct * m[k][j] % mod);
    }
    for (int j = k + 1; j < d; ++j) {
      i128 fct = red((m[k][j] / pv) * uinv);
      for (int i = k; i < d; ++i) m[i][j] = red(m[i][j] - fct * m[i][k] % mod);
    }
    total += bv;
  }
  return total;
}

}  // namespace padic::testing
