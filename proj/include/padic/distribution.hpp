#pragma once

// Distributions on finite abelian groups, stored by their singleton masses,
// and the matching group-ring elements.

#include <vector>

#include "padic/groups.hpp"

namespace padic {

class Distribution {
 public:
  Distribution() = default;
  Distribution(FiniteAbelianGroup G, Ring R) : G_(std::move(G)), R_(std::move(R)), v_(G_.size(), R_.zero()) {}
  /// values in the enumeration order of G.
  Distribution(FiniteAbelianGroup G, Ring R, std::vector<Element> values)
      : G_(std::move(G)), R_(std::move(R)), v_(std::move(values)) {
    if (static_cast<i64>(v_.size()) != G_.size()) fail(ErrorKind::InvalidSpec, "one value per group element required");
    for (const auto& x : v_)
      if (!(x.ring() == R_)) fail(ErrorKind::SpecMismatch, "value from a different ring");
  }

  static Distribution dirac(const FiniteAbelianGroup& G, const Ring& R, const GroupElement& g) {
    Distribution d(G, R);
    d.v_[G.index_of(g)] = R.one();
    return d;
  }
  static Distribution constant(const FiniteAbelianGroup& G, const Element& c) {
    return Distribution(G, c.ring(), std::vector<Element>(G.size(), c));
  }

  const FiniteAbelianGroup& group() const { return G_; }
  const Ring& ring() const { return R_; }
  const std::vector<Element>& values() const { return v_; }
  const Element& at(const GroupElement& g) const { return v_[G_.index_of(g)]; }
  Element& at(const GroupElement& g) { return v_[G_.index_of(g)]; }

  Element total_mass() const {
    Element s = R_.zero();
    for (const auto& x : v_) s += x;
    return s;
  }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](const Element& x) { return x.is_zero(); });
  }

  friend Distribution operator+(const Distribution& a, const Distribution& b) {
    check_same(a, b);
    Distribution r = a;
    for (std::size_t i = 0; i < r.v_.size(); ++i) r.v_[i] += b.v_[i];
    return r;
  }
  friend Distribution operator-(const Distribution& a, const Distribution& b) {
    check_same(a, b);
    Distribution r = a;
    for (std::size_t i = 0; i < r.v_.size(); ++i) r.v_[i] -= b.v_[i];
    return r;
  }
  friend Distribution operator*(const Element& s, const Distribution& a) {
    Distribution r = a;
    for (auto& x : r.v_) x = s * x;
    return r;
  }
  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.G_ == b.G_ && a.R_ == b.R_ && a.v_ == b.v_;
  }

  static void check_same(const Distribution& a, const Distribution& b) {
    if (!(a.G_ == b.G_)) fail(ErrorKind::DomainMismatch, "distributions on different groups");
    if (!(a.R_ == b.R_)) fail(ErrorKind::SpecMismatch, "distributions with values in different rings");
  }

 private:
  FiniteAbelianGroup G_;
  Ring R_;
  std::vector<Element> v_;
};

/// Element sum_g a_g [g] of R[G], coefficients in the enumeration order of G.
struct GroupRingElement {
  FiniteAbelianGroup group;
  std::vector<Element> coeffs;

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.group == b.group && a.coeffs == b.coeffs;
  }
};

inline GroupRingElement to_group_ring(const Distribution& mu) { return {mu.group(), mu.values()}; }
inline Distribution from_group_ring(const GroupRingElement& a, const Ring& R) {
  return Distribution(a.group, R, a.coeffs);
}

inline GroupRingElement group_ring_mul(const GroupRingElement& a, const GroupRingElement& b) {
  if (!(a.group == b.group)) fail(ErrorKind::DomainMismatch, "group-ring elements over different groups");
  const auto& G = a.group;
  const Ring& R = a.coeffs.at(0).ring();
  GroupRingElement r{G, std::vector<Element>(G.size(), R.zero())};
  for (i64 i = 0; i < G.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    GroupElement gi = G.element(i);
    for (i64 j = 0; j < G.size(); ++j) r.coeffs[G.index_of(G.add(gi, G.element(j)))] += a.coeffs[i] * b.coeffs[j];
  }
  return r;
}

inline Element mass(const Distribution& mu, const std::vector<GroupElement>& X) {
  Element s = mu.ring().zero();
  for (const auto& x : X) s += mu.at(x);
  return s;
}

/// (phi_* mu)(y) = mu(phi^{-1}{y}).
inline Distribution pushforward(const GroupMorphism& phi, const Distribution& mu) {
  if (!(phi.domain() == mu.group())) fail(ErrorKind::DomainMismatch, "morphism domain differs from distribution group");
  Distribution r(phi.codomain(), mu.ring());
  const auto& G = mu.group();
  for (i64 i = 0; i < G.size(); ++i) r.at(phi(G.element(i))) += mu.values()[i];
  return r;
}

/// (phi^# mu')({g}) = mu'({phi(g)}).
inline Distribution pullback_sharp(const GroupMorphism& phi, const Distribution& mu) {
  if (!(phi.codomain() == mu.group())) fail(ErrorKind::DomainMismatch, "morphism codomain differs from distribution group");
  const auto& G = phi.domain();
  Distribution r(G, mu.ring());
  for (i64 i = 0; i < G.size(); ++i) {
    GroupElement g = G.element(i);
    r.at(g) = mu.at(phi(g));
  }
  return r;
}

/// (sigma_* mu)(X) = mu(X - sigma).
inline Distribution translate(const GroupElement& sigma, const Distribution& mu) {
  const auto& G = mu.group();
  G.check(sigma);
  Distribution r(G, mu.ring());
  for (i64 i = 0; i < G.size(); ++i) {
    GroupElement g = G.element(i);
    r.at(G.add(sigma, g)) = mu.values()[i];
  }
  return r;
}

/// Product distribution on G x G.
inline Distribution product_distribution(const Distribution& a, const Distribution& b) {
  auto GG = FiniteAbelianGroup::product(a.group(), b.group());
  std::vector<Element> v;
  for (const auto& x : a.values())
    for (const auto& y : b.values()) v.push_back(x * y);
  return Distribution(GG, a.ring(), std::move(v));
}

/// Convolution as the image of the product distribution under addition.
inline Distribution convolve(const Distribution& a, const Distribution& b) {
  Distribution::check_same(a, b);
  return pushforward(GroupMorphism::addition(a.group()), product_distribution(a, b));
}

/// sum_g f(g) mu({g}); f is given as one value per group element.
inline Element integrate(const Distribution& mu, const std::vector<Element>& f) {
  if (static_cast<i64>(f.size()) != mu.group().size()) fail(ErrorKind::DomainMismatch, "integrand size mismatch");
  Element s = mu.ring().zero();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i].ring() == mu.ring())) fail(ErrorKind::SpecMismatch, "integrand in a different ring");
    s += f[i] * mu.values()[i];
  }
  return s;
}

/// Values of chi on G in enumeration order.
inline std::vector<Element> character_values(const Character& chi, const Ring& R) {
  std::vector<Element> out;
  for (const auto& g : chi.group().elements()) out.push_back(chi.eval(R, g));
  return out;
}

/// e_chi = (1/#G) sum_g chi(g^{-1}) [g].
inline Distribution idempotent(const Character& chi, const Ring& R) {
  const auto& G = chi.group();
  Element n = R.from_int(G.size());
  if (!n.is_unit()) fail(ErrorKind::OrderNotInvertible, "group order " + std::to_string(G.size()) + " divisible by p");
  Element inv = n.inverse();
  Distribution d(G, R);
  for (const auto& g : G.elements()) d.at(g) = inv * chi.eval(R, G.neg(g));
  return d;
}

/// True when sigma_* mu = mu for every sigma in H.
inline bool is_invariant(const Distribution& mu, const std::vector<GroupElement>& H) {
  return std::all_of(H.begin(), H.end(), [&](const GroupElement& s) { return translate(s, mu) == mu; });
}

/// For mu invariant under Ker(phi), the distribution mu' on the codomain with
/// phi^# mu' = mu, supported on the image.
inline Distribution descend(const GroupMorphism& phi, const Distribution& mu) {
  if (!(phi.domain() == mu.group())) fail(ErrorKind::DomainMismatch, "morphism domain differs from distribution group");
  auto ki = kernel_image(phi);
  if (!is_invariant(mu, ki.kernel)) fail(ErrorKind::DomainMismatch, "distribution not invariant under the kernel");
  Distribution r(phi.codomain(), mu.ring());
  for (const auto& g : mu.group().elements()) r.at(phi(g)) = mu.at(g);
  return r;
}

/// mu restricted to a subset, zero elsewhere.
inline Distribution restrict_to(const Distribution& mu, const std::vector<GroupElement>& X) {
  Distribution r(mu.group(), mu.ring());
  for (const auto& x : X) r.at(x) = mu.at(x);
  return r;
}

}  // namespace padic
