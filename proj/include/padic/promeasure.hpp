#pragma once

// Measures on Delta x Gamma as elements sum_delta f_delta(T) [delta] of
// O[Delta][[T]], with T = gamma - 1 for the fixed generator gamma of Gamma.

#include <string>
#include <vector>

#include "padic/distribution.hpp"
#include "padic/linalg.hpp"

namespace padic {

struct GammaContext {
  std::string label = "gamma";
  friend bool operator==(const GammaContext&, const GammaContext&) = default;
};

class ProMeasure {
 public:
  ProMeasure() = default;
  ProMeasure(FiniteAbelianGroup delta, Ring R, int tdeg)
      : delta_(std::move(delta)), s_(delta_.size(), PowerSeries(R, tdeg)) {}
  ProMeasure(FiniteAbelianGroup delta, std::vector<PowerSeries> series, GammaContext gamma = {})
      : delta_(std::move(delta)), s_(std::move(series)), gamma_(std::move(gamma)) {
    if (static_cast<i64>(s_.size()) != delta_.size()) fail(ErrorKind::InvalidSpec, "one series per Delta element required");
    for (const auto& f : s_)
      if (!(f.ring() == s_[0].ring()) || f.tdeg() != s_[0].tdeg())
        fail(ErrorKind::SpecMismatch, "series of a measure must share ring and truncation");
  }

  /// The group element (delta0, gamma^a) as a measure: (1+T)^a at delta0.
  static ProMeasure dirac(const FiniteAbelianGroup& delta, const Ring& R, int tdeg, const GroupElement& d0,
                          const PadicExponent& a) {
    ProMeasure m(delta, R, tdeg);
    m.s_[delta.index_of(d0)] = binomial_power(R, a, tdeg);
    return m;
  }
  static ProMeasure dirac(const FiniteAbelianGroup& delta, const Ring& R, int tdeg, const GroupElement& d0, i64 a = 0) {
    return dirac(delta, R, tdeg, d0, PadicExponent::integer(R.p(), a));
  }
  /// f(T) [1].
  static ProMeasure scalar_series(const FiniteAbelianGroup& delta, const PowerSeries& f) {
    ProMeasure m(delta, f.ring(), f.tdeg());
    m.s_[0] = f;
    return m;
  }

  const FiniteAbelianGroup& delta() const { return delta_; }
  const GammaContext& gamma() const { return gamma_; }
  const Ring& ring() const { return s_.at(0).ring(); }
  int tdeg() const { return s_.at(0).tdeg(); }
  const std::vector<PowerSeries>& series() const { return s_; }
  const PowerSeries& at(const GroupElement& d) const { return s_[delta_.index_of(d)]; }
  PowerSeries& at(const GroupElement& d) { return s_[delta_.index_of(d)]; }

  int precision() const {
    int n = ring().precision();
    for (const auto& f : s_) n = std::min(n, f.precision());
    return n;
  }
  bool is_zero() const {
    return std::all_of(s_.begin(), s_.end(), [](const PowerSeries& f) { return f.is_zero(); });
  }
  ProMeasure reduce(int n) const {
    ProMeasure r = *this;
    for (auto& f : r.s_) f = f.reduce(n);
    return r;
  }

  friend ProMeasure operator+(const ProMeasure& a, const ProMeasure& b) {
    check_same(a, b);
    ProMeasure r = a;
    for (std::size_t i = 0; i < r.s_.size(); ++i) r.s_[i] += b.s_[i];
    return r;
  }
  friend ProMeasure operator-(const ProMeasure& a, const ProMeasure& b) {
    check_same(a, b);
    ProMeasure r = a;
    for (std::size_t i = 0; i < r.s_.size(); ++i) r.s_[i] -= b.s_[i];
    return r;
  }
  friend ProMeasure operator*(const PowerSeries& f, const ProMeasure& a) {
    ProMeasure r = a;
    for (auto& g : r.s_) g = f * g;
    return r;
  }
  friend ProMeasure operator*(const Element& c, const ProMeasure& a) {
    ProMeasure r = a;
    for (auto& g : r.s_) g = c * g;
    return r;
  }
  /// Product in O[Delta][[T]] (convolution of measures).
  friend ProMeasure operator*(const ProMeasure& a, const ProMeasure& b) {
    check_same(a, b);
    const auto& D = a.delta_;
    ProMeasure r(D, a.ring(), a.tdeg());
    r.gamma_ = a.gamma_;
    for (i64 i = 0; i < D.size(); ++i) {
      if (a.s_[i].is_zero()) continue;
      for (i64 j = 0; j < D.size(); ++j) {
        if (b.s_[j].is_zero()) continue;
        r.s_[D.index_of(D.add(D.element(i), D.element(j)))] += a.s_[i] * b.s_[j];
      }
    }
    return r;
  }
  friend bool operator==(const ProMeasure& a, const ProMeasure& b) {
    return a.delta_ == b.delta_ && a.gamma_ == b.gamma_ && a.s_ == b.s_;
  }

  static void check_same(const ProMeasure& a, const ProMeasure& b) {
    if (!(a.delta_ == b.delta_)) fail(ErrorKind::DomainMismatch, "measures on different Delta");
    if (!(a.gamma_ == b.gamma_)) fail(ErrorKind::DomainMismatch, "measures with different Gamma contexts");
    if (!(a.ring() == b.ring()) || a.tdeg() != b.tdeg()) fail(ErrorKind::SpecMismatch, "measures over different series rings");
  }

 private:
  FiniteAbelianGroup delta_;
  std::vector<PowerSeries> s_;
  GammaContext gamma_;
};

/// Delta x Z/p^n, the level-n quotient of Delta x Gamma.
inline FiniteAbelianGroup level_group(const FiniteAbelianGroup& delta, u64 p, int n) {
  i64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<i64>(p);
  return FiniteAbelianGroup::product(delta, FiniteAbelianGroup::cyclic(pn));
}

/// Projection Delta x Z/p^n -> Delta x Z/p^m for m <= n.
inline GroupMorphism level_projection(const FiniteAbelianGroup& delta, u64 p, int n, int m) {
  if (m > n) fail(ErrorKind::InvalidSpec, "level projection must go down");
  auto src = level_group(delta, p, n), dst = level_group(delta, p, m);
  std::vector<GroupElement> im;
  for (int i = 0; i < delta.rank(); ++i) {
    GroupElement g = dst.identity();
    g[i] = 1 % delta.orders()[i];
    im.push_back(g);
  }
  GroupElement g = dst.identity();
  g.back() = 1 % dst.orders().back();
  im.push_back(g);
  return GroupMorphism(src, dst, im);
}

/// Coefficients of f mod omega_n in the basis (1+T)^i, 0 <= i < p^n:
/// mass_i = sum_{k >= i} c_k C(k,i) (-1)^{k-i}.
inline std::vector<Element> gamma_masses(const PowerSeries& f, int n) {
  const Ring& R = f.ring();
  Poly rem = poly_divmod_monic(series_poly(f), omega_poly(R, n)).second;
  const int d = static_cast<int>(omega_poly(R, n).size()) - 1;
  rem.resize(d, R.zero());
  std::vector<Element> out(d, R.zero(f.precision()));
  std::vector<Element> row{R.one()};  // row k of Pascal's triangle
  for (int k = 0; k < d; ++k) {
    if (k > 0) {
      std::vector<Element> next(k + 1, R.zero());
      for (int i = 0; i <= k; ++i) {
        if (i < k) next[i] += row[i];
        if (i > 0) next[i] += row[i - 1];
      }
      row = std::move(next);
    }
    if (rem[k].is_zero()) continue;
    for (int i = 0; i <= k; ++i) {
      Element t = row[i] * rem[k];
      out[i] = ((k - i) & 1) ? out[i] - t : out[i] + t;
    }
  }
  return out;
}

/// The finite-level image on Delta x Z/p^n.
inline Distribution level_reduce(const ProMeasure& mu, int n) {
  const Ring& R = mu.ring();
  (void)omega(R, n, mu.tdeg());  // truncation check
  auto G = level_group(mu.delta(), R.p(), n);
  std::vector<Element> v;
  for (const auto& f : mu.series()) {
    auto m = gamma_masses(f, n);
    v.insert(v.end(), m.begin(), m.end());
  }
  return Distribution(G, R, std::move(v));
}

/// Inverse of level_reduce on measures supported in degree < p^n:
/// sum over (delta, i) of mass * (1+T)^i [delta].
inline ProMeasure from_level(const Distribution& d, const FiniteAbelianGroup& delta, int tdeg) {
  const Ring& R = d.ring();
  const i64 pn = d.group().orders().back();
  ProMeasure mu(delta, R, tdeg);
  std::vector<PowerSeries> powers;
  for (i64 i = 0; i < pn; ++i) powers.push_back(binomial_power(R, i, tdeg));
  for (i64 k = 0; k < d.group().size(); ++k) {
    GroupElement g = d.group().element(k);
    GroupElement dd(g.begin(), g.end() - 1);
    mu.at(dd) += d.values()[k] * powers[g.back()];
  }
  return mu;
}

inline ProMeasure pro_pushforward(const GroupMorphism& phi, const ProMeasure& mu) {
  if (!(phi.domain() == mu.delta())) fail(ErrorKind::DomainMismatch, "morphism domain differs from Delta");
  ProMeasure r(phi.codomain(), std::vector<PowerSeries>(phi.codomain().size(), PowerSeries(mu.ring(), mu.tdeg())),
               mu.gamma());
  for (i64 i = 0; i < mu.delta().size(); ++i) r.at(phi(mu.delta().element(i))) += mu.series()[i];
  return r;
}

inline ProMeasure pro_pullback(const GroupMorphism& phi, const ProMeasure& mu) {
  if (!(phi.codomain() == mu.delta())) fail(ErrorKind::DomainMismatch, "morphism codomain differs from Delta");
  std::vector<PowerSeries> s;
  for (const auto& d : phi.domain().elements()) s.push_back(mu.at(phi(d)));
  return ProMeasure(phi.domain(), std::move(s), mu.gamma());
}

/// sum_delta chi(delta) f_delta(T), values of chi taken in the ring of mu.
inline PowerSeries chi_quotient(const ProMeasure& mu, const Character& chi) {
  if (!(chi.group() == mu.delta())) fail(ErrorKind::DomainMismatch, "character on a different group");
  const Ring& R = mu.ring();
  PowerSeries out(R, mu.tdeg());
  for (i64 i = 0; i < mu.delta().size(); ++i) {
    const auto& f = mu.series()[i];
    if (f.is_zero()) continue;
    out += chi.eval(R, mu.delta().element(i)) * f;
  }
  return out;
}

/// Base change of every coordinate along a ring extension.
inline ProMeasure base_change(const ProMeasure& mu, const RingExtension& ext) {
  std::vector<PowerSeries> s;
  for (const auto& f : mu.series()) s.push_back(f.base_change(ext));
  return ProMeasure(mu.delta(), std::move(s), mu.gamma());
}

/// Integral of chi(delta) zeta^i against mu: chi_quotient evaluated at zeta - 1.
inline Element twist_eval(const ProMeasure& mu, const Character& chi, const Element& zeta) {
  return eval_at(chi_quotient(mu, chi), zeta - mu.ring().one());
}

/// Least n with zeta^{p^n} = 1, or -1 when none is found up to max_n.
inline int p_power_order_level(const Element& zeta, int max_n) {
  Element z = zeta;
  const Ring& R = zeta.ring();
  for (int n = 0; n <= max_n; ++n) {
    if (z == R.one()) return n;
    z = z.pow(R.p());
  }
  return -1;
}

inline Element integrate_locally_constant(const ProMeasure& mu, int n, const std::vector<Element>& f) {
  return integrate(level_reduce(mu, n), f);
}

// ---------------------------------------------------------------------------
// Pseudo-measures

/// A quotient num / den; multiplying by an admissible alpha gives a measure.
struct PseudoMeasure {
  ProMeasure num;
  PowerSeries den;
};

/// (alpha * num) / den, each coordinate divided by Weierstrass division.
inline ProMeasure pseudo_multiply(const PseudoMeasure& nu, const ProMeasure& alpha) {
  ProMeasure prod = alpha * nu.num;
  std::vector<PowerSeries> s;
  for (const auto& f : prod.series()) s.push_back(series_divide(f, nu.den));
  return ProMeasure(prod.delta(), std::move(s), prod.gamma());
}

inline ProMeasure pseudo_multiply(const PseudoMeasure& nu, const PowerSeries& alpha) {
  return pseudo_multiply(nu, ProMeasure::scalar_series(nu.num.delta(), alpha));
}

}  // namespace padic
