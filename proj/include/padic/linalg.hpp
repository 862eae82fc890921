#pragma once

// Linear algebra over O and over O[[T]]: determinant valuations by
// minimal-valuation pivoting, division-free determinants of series matrices,
// finite-quotient orders and coprimality certificates.

#include <optional>
#include <vector>

#include "padic/series.hpp"

namespace padic {

using Matrix = std::vector<std::vector<Element>>;
using SeriesMatrix = std::vector<std::vector<PowerSeries>>;

struct DetValuation {
  /// pi-adic valuation of the determinant; empty when it vanishes at precision.
  std::optional<int> valuation;
  /// Rank found before the remaining block vanished.
  int rank = 0;
  int precision = 0;
};

/// Gaussian elimination with full pivoting on the entry of least valuation.
/// Each Schur complement keeps the absolute precision of the input, so pivot
/// valuations are exact as long as the pivot is nonzero at that precision.
inline DetValuation det_valuation(Matrix a) {
  const int n = static_cast<int>(a.size());
  DetValuation out;
  if (n == 0) {
    out.valuation = 0;
    return out;
  }
  const Ring R = a[0][0].ring();
  int prec = R.precision();
  for (const auto& row : a)
    for (const auto& x : row) prec = std::min(prec, x.precision());
  out.precision = prec;
  for (auto& row : a)
    for (auto& x : row) x = x.reduce(prec).with_precision(R.precision());
  int total = 0;
  for (int k = 0; k < n; ++k) {
    int pr = -1, pc = -1, best = prec;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j) {
        auto v = a[i][j].reduce(prec).valuation();
        if (v && *v < best) {
          best = *v;
          pr = i;
          pc = j;
        }
      }
    if (pr < 0) {
      out.rank = k;
      return out;
    }
    std::swap(a[k], a[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);
    total += best;
    Element unit_inv = a[k][k].div_pi(best).with_precision(R.precision()).inverse();
    for (int i = k + 1; i < n; ++i) {
      if (a[i][k].reduce(prec).is_zero()) continue;
      Element factor = a[i][k].div_pi(best).with_precision(R.precision()) * unit_inv;
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] - factor * a[k][j]).reduce(prec).with_precision(R.precision());
    }
  }
  out.rank = n;
  out.valuation = total;
  return out;
}

/// Determinant of a square matrix of series, by expansion over column
/// subsets (no divisions, so exact in O[[T]]).
inline PowerSeries series_det(const SeriesMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) fail(ErrorKind::InvalidSpec, "empty matrix");
  if (n > 16) fail(ErrorKind::InvalidSpec, "matrix too large for subset expansion");
  const Ring& R = m[0][0].ring();
  const int M = m[0][0].tdeg();
  std::vector<std::optional<PowerSeries>> dp(std::size_t(1) << n);
  dp[0] = PowerSeries::monomial(R, 0, M);
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (!dp[mask]) continue;
    const int row = __builtin_popcountll(mask);
    if (row == n) continue;
    for (int c = 0; c < n; ++c) {
      if (mask & (std::size_t(1) << c)) continue;
      if (m[row][c].is_zero()) continue;
      // Sign of placing column c after the columns already used.
      int above = __builtin_popcountll(mask >> (c + 1));
      PowerSeries term = *dp[mask] * m[row][c];
      if (above & 1) term = -term;
      auto& slot = dp[mask | (std::size_t(1) << c)];
      slot = slot ? *slot + term : term;
    }
  }
  auto& full = dp.back();
  if (!full) return PowerSeries(R, M);
  return *full;
}

/// Adjugate of a square series matrix (transpose of the cofactor matrix).
inline SeriesMatrix series_adjugate(const SeriesMatrix& m) {
  const int n = static_cast<int>(m.size());
  const Ring& R = m[0][0].ring();
  const int M = m[0][0].tdeg();
  SeriesMatrix adj(n, std::vector<PowerSeries>(n, PowerSeries(R, M)));
  if (n == 1) {
    adj[0][0] = PowerSeries::monomial(R, 0, M);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SeriesMatrix minor;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<PowerSeries> row;
        for (int c = 0; c < n; ++c)
          if (c != j) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      PowerSeries d = series_det(minor);
      adj[j][i] = ((i + j) & 1) ? -d : d;
    }
  return adj;
}

// ---------------------------------------------------------------------------
// Orders of finite quotients

enum class OrderStatus { Finite, NotFinite, Inconclusive };

struct QuotientOrder {
  OrderStatus status = OrderStatus::Inconclusive;
  /// #(quotient) = q^exponent when finite.
  int exponent = 0;
  /// For NotFinite: Phi_{p^k}(1+T) divides f, so zeta_{p^k} - 1 is a common root.
  int witness_level = -1;
  int certified_precision = 0;
};

/// Matrix of multiplication by f on O[T]/(m) in the basis 1, T, ..., T^{d-1}.
inline Matrix multiplication_matrix(const Poly& f, const Poly& m) {
  const int d = static_cast<int>(m.size()) - 1;
  const Ring& R = m.back().ring();
  Matrix a(d, std::vector<Element>(d, R.zero()));
  Poly col = poly_divmod_monic(f, m).second;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) a[i][j] = col[i];
    // col <- T * col mod m
    Poly shifted(d + 1, R.zero());
    for (int i = 0; i < d; ++i) shifted[i + 1] = col[i];
    col = poly_divmod_monic(shifted, m).second;
  }
  return a;
}

inline Poly series_poly(const PowerSeries& f) {
  Poly out;
  const int deg = f.degree();
  for (int i = 0; i <= std::max(deg, 0); ++i) out.push_back(f[i]);
  return out;
}

inline bool poly_divides_at_precision(const Poly& f, const Poly& m) {
  auto rem = poly_divmod_monic(f, m).second;
  return std::all_of(rem.begin(), rem.end(), [](const Element& x) { return x.is_zero(); });
}

/// Size of O[[T]]/(f, omega_n) as a power of the residue field size.
inline QuotientOrder quotient_order(const PowerSeries& f, int n) {
  const Ring& R = f.ring();
  (void)omega(R, n, f.tdeg());  // truncation check
  QuotientOrder out;
  out.certified_precision = f.precision();
  if (f.is_zero()) return out;
  Poly fp = series_poly(f);
  DetValuation dv = det_valuation(multiplication_matrix(fp, omega_poly(R, n)));
  out.certified_precision = dv.precision;
  if (dv.valuation) {
    out.status = OrderStatus::Finite;
    out.exponent = *dv.valuation;
    return out;
  }
  for (int k = 0; k <= n; ++k) {
    if (!poly_divides_at_precision(fp, cyclotomic_shifted_poly(R, k))) continue;
    // Confirm the common root at an actual root of unity.
    RingExtension ext = R.adjoin_p_power_roots(k);
    Element x = ext.target.wild_root(k) - ext.target.one();
    if (!eval_at(f.base_change(ext), x).is_zero()) continue;
    out.status = OrderStatus::NotFinite;
    out.witness_level = k;
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coprimality

enum class CoprimeStatus { Certified, NotCoprime, Inconclusive };

struct CoprimalityCertificate {
  CoprimeStatus status = CoprimeStatus::Inconclusive;
  /// Exponent of #(O[[T]]/(f, g)) when certified.
  int order_exponent = 0;
  /// Common divisor witness for NotCoprime (pi, or a monic polynomial).
  Poly witness;
};

/// Monic gcd of two polynomials over O, found by Euclid on the monic
/// normalizations; returns empty when a leading coefficient is not a unit.
inline std::optional<Poly> monic_gcd(Poly a, Poly b) {
  auto normalize = [](Poly& p) -> bool {
    int d = poly_degree(p);
    p.resize(d + 1);
    if (d < 0) return true;
    if (!p[d].is_unit()) return false;
    Element inv = p[d].inverse();
    for (auto& x : p) x = x * inv;
    return true;
  };
  if (!normalize(a) || !normalize(b)) return std::nullopt;
  while (poly_degree(b) >= 0) {
    Poly r = poly_divmod_monic(a, b).second;
    a = std::move(b);
    b = std::move(r);
    if (!normalize(b)) return std::nullopt;
  }
  return a;
}

inline CoprimalityCertificate coprimality_certificate(const PowerSeries& f, const PowerSeries& g) {
  if (!(f.ring() == g.ring())) fail(ErrorKind::SpecMismatch, "series over different rings");
  const Ring& R = f.ring();
  WeierstrassData wf = weierstrass_prepare(f);
  WeierstrassData wg = weierstrass_prepare(g);
  CoprimalityCertificate out;
  if (wf.mu > 0 && wg.mu > 0) {
    out.status = CoprimeStatus::NotCoprime;
    out.witness = {R.uniformizer()};
    return out;
  }
  // Make the series with mu = 0 the modulus: O[[T]]/(P) is free of rank lambda.
  const WeierstrassData& mod = wg.mu == 0 ? wg : wf;
  const PowerSeries& other = wg.mu == 0 ? f : g;
  if (mod.lambda == 0) {
    out.status = CoprimeStatus::Certified;
    return out;
  }
  Poly P = distinguished_poly(mod);
  DetValuation dv = det_valuation(multiplication_matrix(series_poly(other), P));
  if (dv.valuation) {
    out.status = CoprimeStatus::Certified;
    out.order_exponent = *dv.valuation;
    return out;
  }
  const WeierstrassData& w2 = (&mod == &wg) ? wf : wg;
  if (auto d = monic_gcd(distinguished_poly(w2), P); d && poly_degree(*d) >= 1) {
    if (poly_divides_at_precision(distinguished_poly(w2), *d) && poly_divides_at_precision(P, *d)) {
      out.status = CoprimeStatus::NotCoprime;
      out.witness = *d;
      return out;
    }
  }
  return out;
}

}  // namespace padic
