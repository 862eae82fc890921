#pragma once

// Characteristic ideals of presented torsion modules over O[[T]] and
// O[Delta][[T]], chi-parts, and finiteness of Gamma_n-(co)invariants.

#include <optional>
#include <string>
#include <vector>

#include "padic/promeasure.hpp"

namespace padic {

/// Generator pi^mu * P of a characteristic ideal, in Weierstrass normal form.
struct CharIdealGen {
  Ring ring;
  int tdeg = kDefaultTdeg;
  int mu = 0;  // in pi-units
  Poly P;      // monic distinguished
  /// The generator vanished at working precision: no normal form exists.
  bool vanishes = false;
  /// Known only up to a power of the uniformizer (p = 2).
  bool up_to_uniformizer = false;
  int certified_precision = 0;

  int lambda() const { return poly_degree(P); }
  PowerSeries series() const {
    PowerSeries s(ring, P, tdeg);
    for (int i = 0; i < s.tdeg(); ++i) s[i] = s[i].mul_pi(mu).reduce(ring.precision());
    return s;
  }
};

inline CharIdealGen char_gen_from_series(const PowerSeries& f) {
  CharIdealGen g;
  g.ring = f.ring();
  g.tdeg = f.tdeg();
  g.up_to_uniformizer = f.ring().p() == 2;
  if (f.is_zero()) {
    g.vanishes = true;
    g.certified_precision = f.precision();
    return g;
  }
  WeierstrassData w = weierstrass_prepare(f);
  g.mu = w.mu;
  g.P = distinguished_poly(w);
  g.certified_precision = w.certified_precision;
  return g;
}

/// Monic gcd of two distinguished polynomials. Each Euclid remainder is
/// replaced by its distinguished part, which has the same gcd with a
/// distinguished polynomial. Empty if a remainder cannot be prepared.
inline std::optional<Poly> distinguished_gcd(Poly a, Poly b) {
  const Ring& R = a.back().ring();
  if (poly_degree(a) < poly_degree(b)) std::swap(a, b);
  while (poly_degree(b) >= 1) {
    Poly r = poly_divmod_monic(a, b).second;
    int d = poly_degree(r);
    if (d < 0) return b;
    try {
      WeierstrassData w = weierstrass_prepare(R, std::vector<Element>(r.begin(), r.begin() + d + 1), d + 1);
      a = std::move(b);
      b = distinguished_poly(w);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return Poly{R.one()};
}

// ---------------------------------------------------------------------------
// Presentations

/// M = O[[T]]^cols / (row space); rows are relations.
struct ModulePresentation {
  SeriesMatrix rows;
  bool non_torsion = false;

  int relations() const { return static_cast<int>(rows.size()); }
  int generators() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
  const Ring& ring() const { return rows.at(0).at(0).ring(); }
  int tdeg() const { return rows.at(0).at(0).tdeg(); }
};

/// M = O[Delta][[T]]^cols / (row space).
struct GroupRingPresentation {
  FiniteAbelianGroup delta;
  std::vector<std::vector<ProMeasure>> rows;

  int relations() const { return static_cast<int>(rows.size()); }
  int generators() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
  const Ring& ring() const { return rows.at(0).at(0).ring(); }
  int tdeg() const { return rows.at(0).at(0).tdeg(); }
};

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> index_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline constexpr std::size_t kMaxMinors = 4096;

/// Char(M) as the gcd of the maximal minors, i.e. (det) for square presentations.
inline CharIdealGen char_ideal(const ModulePresentation& pres) {
  if (pres.non_torsion) fail(ErrorKind::NonTorsion, "presentation flagged as non-torsion");
  const int r = pres.relations(), s = pres.generators();
  if (s == 0) fail(ErrorKind::InvalidSpec, "presentation without generators");
  if (r < s) fail(ErrorKind::NonTorsion, "fewer relations than generators: free part of rank " + std::to_string(s - r));
  auto subsets = index_subsets(r, s);
  if (subsets.size() > kMaxMinors) fail(ErrorKind::InvalidSpec, "too many maximal minors");
  // Entries are polynomials (zero tail), so each minor is computed at a
  // length that holds the whole determinant polynomial.
  std::vector<int> row_deg(r, 0);
  for (int i = 0; i < r; ++i)
    for (const auto& x : pres.rows[i]) row_deg[i] = std::max(row_deg[i], x.degree());
  std::vector<CharIdealGen> minors;
  int prec = pres.ring().precision();
  for (const auto& rs : subsets) {
    int len = 1;
    for (int i : rs) len += row_deg[i];
    len = std::max(len, pres.tdeg());
    SeriesMatrix m;
    for (int i : rs) {
      std::vector<PowerSeries> row;
      for (const auto& x : pres.rows[i]) row.push_back(x.truncate(len));
      m.push_back(std::move(row));
    }
    CharIdealGen g = char_gen_from_series(series_det(m));
    g.tdeg = pres.tdeg();
    if (!g.vanishes && g.lambda() >= pres.tdeg())
      fail(ErrorKind::LambdaOverflow, "characteristic polynomial degree exceeds the truncation");
    prec = std::min(prec, g.certified_precision);
    if (!g.vanishes) minors.push_back(std::move(g));
  }
  CharIdealGen out;
  out.ring = pres.ring();
  out.tdeg = pres.tdeg();
  out.up_to_uniformizer = out.ring.p() == 2;
  out.certified_precision = prec;
  if (minors.empty()) {
    out.vanishes = true;
    return out;
  }
  out.mu = minors[0].mu;
  out.P = minors[0].P;
  for (std::size_t i = 1; i < minors.size(); ++i) {
    out.mu = std::min(out.mu, minors[i].mu);
    auto g = distinguished_gcd(out.P, minors[i].P);
    if (!g) {
      out.vanishes = true;
      return out;
    }
    out.P = *g;
  }
  return out;
}

/// Entrywise chi-quotient: a presentation of O(chi) (x)_{O[Delta]} M.
inline ModulePresentation chi_decompose(const GroupRingPresentation& pres, const Character& chi) {
  ModulePresentation out;
  for (const auto& row : pres.rows) {
    std::vector<PowerSeries> r;
    for (const auto& x : row) r.push_back(chi_quotient(x, chi));
    out.rows.push_back(std::move(r));
  }
  return out;
}

/// M viewed as an O[[T]]-module: generator (c, eps) is eps times generator c,
/// and relation (r, delta') is delta' times relation r.
inline ModulePresentation restrict_to_lambda(const GroupRingPresentation& pres) {
  const auto& D = pres.delta;
  const i64 n = D.size();
  ModulePresentation out;
  for (const auto& row : pres.rows)
    for (i64 dp = 0; dp < n; ++dp) {
      std::vector<PowerSeries> r;
      for (const auto& x : row)
        for (i64 e = 0; e < n; ++e) r.push_back(x.at(D.add(D.element(e), D.neg(D.element(dp)))));
      out.rows.push_back(std::move(r));
    }
  return out;
}

struct ChiPartReport {
  CharIdealGen lhs;
  std::vector<Character> characters;
  std::vector<CharIdealGen> rhs;
  /// u^a Char(M) = u^b prod_chi Char(M_chi), in pi-units.
  int a = 0, b = 0;
  bool ok = false;
  std::string message;
};

inline bool poly_equal(const Poly& x, const Poly& y) {
  if (poly_degree(x) != poly_degree(y)) return false;
  for (int i = 0; i <= poly_degree(x); ++i)
    if (!(x[i] == y[i])) return false;
  return true;
}

inline ChiPartReport chipart_verify(const GroupRingPresentation& pres) {
  ChiPartReport rep;
  rep.lhs = char_ideal(restrict_to_lambda(pres));
  int mu = 0;
  Poly prod{pres.ring().one()};
  for (const auto& chi : Character::all(pres.delta)) {
    rep.characters.push_back(chi);
    rep.rhs.push_back(char_ideal(chi_decompose(pres, chi)));
    const auto& g = rep.rhs.back();
    if (g.vanishes) {
      rep.message = "chi-part generator vanishes at precision for " + chi.describe();
      return rep;
    }
    mu += g.mu;
    prod = poly_mul(prod, g.P);
  }
  if (rep.lhs.vanishes) {
    rep.message = "characteristic ideal of M vanishes at precision";
    return rep;
  }
  if (!poly_equal(rep.lhs.P, prod)) {
    rep.message = "distinguished parts differ";
    return rep;
  }
  rep.a = std::max(0, mu - rep.lhs.mu);
  rep.b = std::max(0, rep.lhs.mu - mu);
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Finiteness of Gamma_n-invariants and coinvariants

enum class FinitenessStatus { Certified, NotFinite, Inconclusive };

inline std::string_view to_string(FinitenessStatus s) {
  switch (s) {
    case FinitenessStatus::Certified: return "certified";
    case FinitenessStatus::NotFinite: return "not-finite";
    case FinitenessStatus::Inconclusive: return "inconclusive";
  }
  return "";
}

struct FinitenessCertificate {
  FinitenessStatus status = FinitenessStatus::Inconclusive;
  /// Exponents e_m with #(Lambda/(gen, omega_m)) = q^{e_m}, m = 0..n, when certified.
  std::vector<int> orders;
  /// NotFinite: zeta = W^witness_power with W the designated primitive p^n-th root,
  /// of exact order p^witness_level.
  int witness_level = -1;
  i64 witness_power = -1;
  int certified_precision = 0;
};

/// The ring R together with an embedding into a ring holding primitive p^n-th roots.
struct RootTower {
  RingExtension ext;
  bool trivial = true;
  Element embed(const Element& a) const { return trivial ? a : ext.embed(a); }
  const Ring& target(const Ring& R) const { return trivial ? R : ext.target; }
};

inline RootTower root_tower(const Ring& R, int n) {
  RootTower t;
  if (R.wild_level() < n) {
    t.ext = R.adjoin_p_power_roots(n);
    t.trivial = false;
  }
  return t;
}

inline FinitenessCertificate finiteness_certificate(const CharIdealGen& gen, int n) {
  FinitenessCertificate out;
  const Ring& R = gen.ring;
  (void)omega(R, n, gen.tdeg);  // truncation check
  out.certified_precision = gen.certified_precision;
  if (gen.vanishes) return out;
  RootTower tower = root_tower(R, n);
  const Ring& S = tower.target(R);
  PowerSeries P(R, gen.P, gen.tdeg);
  PowerSeries PS = tower.trivial ? P : P.base_change(tower.ext);
  const Element W = S.wild_root(n);
  i64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<i64>(R.p());
  Element zeta = S.one();
  bool inconclusive = false;
  for (i64 j = 0; j < pn; ++j, zeta *= W) {
    Element v = eval_at(PS, zeta - S.one());
    if (!v.is_zero()) continue;
    int k = 0;
    for (i64 o = j == 0 ? 1 : pn / std::gcd(pn, j); o > 1; o /= static_cast<i64>(R.p())) ++k;
    if (poly_divides_at_precision(gen.P, cyclotomic_shifted_poly(R, k))) {
      out.status = FinitenessStatus::NotFinite;
      out.witness_level = k;
      out.witness_power = j;
      return out;
    }
    inconclusive = true;
  }
  if (inconclusive) return out;
  PowerSeries g = gen.series();
  for (int m = 0; m <= n; ++m) {
    QuotientOrder q = quotient_order(g, m);
    if (q.status != OrderStatus::Finite) return out;
    out.orders.push_back(q.exponent);
  }
  out.status = FinitenessStatus::Certified;
  return out;
}

}  // namespace padic
