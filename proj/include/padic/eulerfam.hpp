#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "padic/iwmod.hpp"
#include "padic/promeasure.hpp"

namespace padic {

/// Frobenius of a prime in Delta_g x Gamma: (delta, gamma^a).
struct FrobeniusDatum {
  GroupElement delta;
  PadicExponent gamma;
};

struct ModulusNode {
  std::string label;
  std::vector<std::string> primes;  // prime labels dividing the modulus
  FiniteAbelianGroup delta;
  std::map<std::string, FrobeniusDatum> frobenius;
  i64 w = 1;
  std::vector<ProMeasure> J_generators;

  bool is_trivial() const { return primes.empty(); }
  bool divisible_by(const std::string& l) const { return std::find(primes.begin(), primes.end(), l) != primes.end(); }
};

/// g_from divisible by g_to, with the projection Delta_from -> Delta_to.
struct PosetEdge {
  std::string from, to;
  GroupMorphism projection;
};

struct ModuliPoset {
  std::vector<ModulusNode> nodes;
  std::vector<PosetEdge> edges;

  const ModulusNode* find(const std::string& label) const {
    for (const auto& n : nodes)
      if (n.label == label) return &n;
    return nullptr;
  }
  const ModulusNode& node(const std::string& label) const {
    if (auto* n = find(label)) return *n;
    fail(ErrorKind::NodeMissing, "no modulus node '" + label + "'");
  }
  const ModulusNode* find_by_primes(std::set<std::string> ps) const {
    for (const auto& n : nodes)
      if (std::set<std::string>(n.primes.begin(), n.primes.end()) == ps) return &n;
    return nullptr;
  }
  const PosetEdge* edge(const std::string& from, const std::string& to) const {
    for (const auto& e : edges)
      if (e.from == from && e.to == to) return &e;
    return nullptr;
  }

  /// Structural checks: groups match, moduli divide, projections compose and
  /// Frobenius data project to Frobenius data.
  void validate() const {
    for (const auto& n : nodes)
      for (const auto& [l, f] : n.frobenius) {
        if (n.divisible_by(l)) fail(ErrorKind::InvalidSpec, "Frobenius of " + l + " given at ramified node " + n.label);
        n.delta.check(f.delta);
      }
    for (const auto& e : edges) {
      const auto& a = node(e.from);
      const auto& b = node(e.to);
      if (!(e.projection.domain() == a.delta) || !(e.projection.codomain() == b.delta))
        fail(ErrorKind::DomainMismatch, "projection " + e.from + " -> " + e.to + " has the wrong groups");
      for (const auto& l : b.primes)
        if (!a.divisible_by(l)) fail(ErrorKind::InvalidSpec, b.label + " does not divide " + a.label);
      for (const auto& [l, f] : a.frobenius) {
        auto it = b.frobenius.find(l);
        if (it == b.frobenius.end()) continue;
        if (e.projection(f.delta) != it->second.delta)
          fail(ErrorKind::InvalidSpec, "Frobenius of " + l + " does not project along " + e.from + " -> " + e.to);
      }
    }
    for (const auto& e1 : edges)
      for (const auto& e2 : edges) {
        if (e1.to != e2.from) continue;
        const PosetEdge* e3 = edge(e1.from, e2.to);
        if (!e3) continue;
        for (const auto& d : e1.projection.domain().elements())
          if (e2.projection(e1.projection(d)) != e3->projection(d))
            fail(ErrorKind::InvalidMorphism, "projections " + e1.from + " -> " + e1.to + " -> " + e2.to + " do not compose");
      }
  }
};

/// Measures on every non-trivial node and a pseudo-measure on the trivial one.
struct MeasureFamily {
  ModuliPoset poset;
  std::map<std::string, ProMeasure> measures;
  std::optional<PseudoMeasure> trivial;

  const ProMeasure& at(const std::string& label) const {
    auto it = measures.find(label);
    if (it == measures.end()) fail(ErrorKind::NodeMissing, "no measure at '" + label + "'");
    return it->second;
  }
  const PseudoMeasure& trivial_measure() const {
    if (!trivial) fail(ErrorKind::NodeMissing, "no pseudo-measure at the trivial modulus");
    return *trivial;
  }
};

// ---------------------------------------------------------------------------
// Group-ring arithmetic

/// Matrix of y -> x*y on O[Delta][[T]] in the basis of Delta elements.
inline SeriesMatrix group_ring_matrix(const ProMeasure& x) {
  const auto& D = x.delta();
  const i64 n = D.size();
  SeriesMatrix m(n, std::vector<PowerSeries>(n, PowerSeries(x.ring(), x.tdeg())));
  for (i64 r = 0; r < n; ++r)
    for (i64 c = 0; c < n; ++c) m[r][c] = x.at(D.add(D.element(r), D.neg(D.element(c))));
  return m;
}

/// Every coordinate re-truncated at length L (zero-padded when L is larger).
inline ProMeasure with_length(const ProMeasure& mu, int L) {
  std::vector<PowerSeries> s;
  for (const auto& f : mu.series()) s.push_back(f.truncate(L));
  return ProMeasure(mu.delta(), std::move(s), mu.gamma());
}

/// y with x*y = h mod T^M, by adjugate and Weierstrass division by det(x).
/// det(x) is a zero divisor mod T^L: the quotient is determined only up to
/// pi^{(L-k) v} at T^k, v >= 1/lambda the least root valuation of its
/// distinguished part. The division therefore runs at L = M + lambda (N + 1)
/// and x_long supplies x at that length (the zero-padded x when absent).
/// FactorNotInvertible when det(x) vanishes; NotDivisible when no y exists.
inline ProMeasure group_ring_divide(const ProMeasure& h, const ProMeasure& x,
                                    const std::function<ProMeasure(int)>& x_long = {}) {
  ProMeasure::check_same(x, h);
  const int M = h.tdeg();
  PowerSeries det0 = series_det(group_ring_matrix(x));
  if (det0.is_zero()) fail(ErrorKind::FactorNotInvertible, "factor is a zero divisor at precision");
  const int lam = weierstrass_prepare(det0).lambda;
  const int L = M + lam * (h.ring().precision() + 1);
  ProMeasure xl = x_long ? x_long(L) : with_length(x, L);
  ProMeasure hl = with_length(h, L);
  SeriesMatrix m = group_ring_matrix(xl);
  PowerSeries det = series_det(m);
  SeriesMatrix adj = series_adjugate(m);
  const i64 n = h.delta().size();
  std::vector<PowerSeries> y;
  for (i64 r = 0; r < n; ++r) {
    PowerSeries w(h.ring(), L);
    for (i64 c = 0; c < n; ++c) w += adj[r][c] * hl.series()[c];
    y.push_back(series_divide(w, det).truncate(M));
  }
  return ProMeasure(h.delta(), std::move(y), h.gamma());
}

/// 1 - sigma^{-1} for sigma = (delta, gamma^a).
inline ProMeasure euler_factor(const FiniteAbelianGroup& D, const Ring& R, int tdeg, const FrobeniusDatum& f) {
  return ProMeasure::dirac(D, R, tdeg, D.identity()) - ProMeasure::dirac(D, R, tdeg, D.neg(f.delta), -f.gamma);
}

inline const FrobeniusDatum& frobenius_at(const ModulusNode& n, const std::string& l) {
  auto it = n.frobenius.find(l);
  if (it == n.frobenius.end()) fail(ErrorKind::MissingFrobeniusDatum, "no Frobenius of " + l + " at " + n.label);
  return it->second;
}

/// Product of 1 - sigma_l^{-1} over primes of `from` not dividing `to`, on Delta_to.
inline ProMeasure edge_euler_product(const ModuliPoset& P, const PosetEdge& e, const Ring& R, int tdeg) {
  const auto& a = P.node(e.from);
  const auto& b = P.node(e.to);
  ProMeasure prod = ProMeasure::dirac(b.delta, R, tdeg, b.delta.identity());
  for (const auto& l : a.primes)
    if (!b.divisible_by(l)) prod = prod * euler_factor(b.delta, R, tdeg, frobenius_at(b, l));
  return prod;
}

// ---------------------------------------------------------------------------
// Compatibility

struct EdgeReport {
  std::string from, to;
  bool ok = true;
  i64 delta_index = -1;  // first discrepancy
  int coefficient = -1;
};

struct CompatibilityReport {
  std::vector<EdgeReport> edges;
  bool ok() const {
    return std::all_of(edges.begin(), edges.end(), [](const EdgeReport& e) { return e.ok; });
  }
};

namespace detail {

inline void first_difference(const ProMeasure& a, const ProMeasure& b, EdgeReport& rep) {
  for (i64 i = 0; i < a.delta().size(); ++i) {
    const auto& f = a.series()[i];
    const auto& g = b.series()[i];
    for (int k = 0; k < f.tdeg(); ++k)
      if (!(f[k] == g[k])) {
        rep.ok = false;
        rep.delta_index = i;
        rep.coefficient = k;
        return;
      }
  }
}

}  // namespace detail

/// pi_* mu(from) == prod (1 - sigma_l^{-1}) mu(to) on every edge. At the
/// trivial node both sides are multiplied by the denominator.
inline CompatibilityReport euler_compatibility_check(const MeasureFamily& fam) {
  fam.poset.validate();
  CompatibilityReport out;
  for (const auto& e : fam.poset.edges) {
    EdgeReport rep{e.from, e.to};
    const ProMeasure& top = fam.at(e.from);
    ProMeasure lhs = pro_pushforward(e.projection, top);
    ProMeasure E = edge_euler_product(fam.poset, e, top.ring(), top.tdeg());
    if (fam.poset.node(e.to).is_trivial()) {
      const auto& nu = fam.trivial_measure();
      detail::first_difference(nu.den * lhs, E * nu.num, rep);
    } else {
      detail::first_difference(lhs, E * fam.at(e.to), rep);
    }
    out.edges.push_back(rep);
  }
  return out;
}

/// Raises Incompatible naming the first failing edge.
inline void require_compatible(const MeasureFamily& fam) {
  for (const auto& e : euler_compatibility_check(fam).edges)
    if (!e.ok)
      fail(ErrorKind::Incompatible, "edge " + e.from + " -> " + e.to + " differs at Delta index " +
                                        std::to_string(e.delta_index) + ", T^" + std::to_string(e.coefficient));
}

/// Family determined by the measure at `top`: each node below it gets
/// pi_* mu(top) divided by the Euler product of its edge.
inline MeasureFamily family_derive(const ModuliPoset& P, const std::string& top, const ProMeasure& master) {
  P.validate();
  const auto& tn = P.node(top);
  if (!(master.delta() == tn.delta)) fail(ErrorKind::DomainMismatch, "master measure is not on Delta of " + top);
  MeasureFamily fam{P, {}, std::nullopt};
  fam.measures.emplace(top, master);
  for (const auto& n : P.nodes) {
    if (n.label == top) continue;
    const PosetEdge* e = P.edge(top, n.label);
    if (!e) fail(ErrorKind::NodeMissing, "no edge " + top + " -> " + n.label);
    ProMeasure z = pro_pushforward(e->projection, master);
    ProMeasure E = edge_euler_product(P, *e, master.ring(), master.tdeg());
    if (n.is_trivial()) {
      // num / den with den = det(E), num = adj(E) z.
      SeriesMatrix m = group_ring_matrix(E);
      PowerSeries det = series_det(m);
      if (det.is_zero()) fail(ErrorKind::FactorNotInvertible, "Euler product at " + n.label + " is a zero divisor");
      SeriesMatrix adj = series_adjugate(m);
      std::vector<PowerSeries> s;
      for (std::size_t r = 0; r < adj.size(); ++r) {
        PowerSeries w(master.ring(), master.tdeg());
        for (std::size_t c = 0; c < adj.size(); ++c) w += adj[r][c] * z.series()[c];
        s.push_back(w);
      }
      fam.trivial = PseudoMeasure{ProMeasure(n.delta, std::move(s), master.gamma()), det};
      continue;
    }
    try {
      fam.measures.emplace(n.label, group_ring_divide(z, E, [&](int L) {
                             return edge_euler_product(P, *e, master.ring(), L);
                           }));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NotDivisible) throw;
      fail(ErrorKind::FactorNotInvertible, "Euler product at " + n.label + " does not divide the pushforward");
    }
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Psi symbols

/// Symbol of an ideal a prime to the modulus: sigma_a - N(a).
struct PsiSymbol {
  std::string node;
  std::string ideal;
  i64 norm = 0;
};

inline ProMeasure psi_element(const ModulusNode& n, const Ring& R, int tdeg, const PsiSymbol& s) {
  const auto& f = frobenius_at(n, s.ideal);
  return ProMeasure::dirac(n.delta, R, tdeg, f.delta, f.gamma) -
         R.from_int(s.norm) * ProMeasure::dirac(n.delta, R, tdeg, n.delta.identity());
}

/// (sigma_a - N(a)) mu(g); at the trivial node through the pseudo-measure,
/// which raises NotDivisible unless the symbol kills the denominator.
inline ProMeasure psi_image(const MeasureFamily& fam, const PsiSymbol& s) {
  const auto& n = fam.poset.node(s.node);
  if (n.is_trivial()) {
    const auto& nu = fam.trivial_measure();
    return pseudo_multiply(nu, psi_element(n, nu.num.ring(), nu.num.tdeg(), s));
  }
  const auto& mu = fam.at(s.node);
  return psi_element(n, mu.ring(), mu.tdeg(), s) * mu;
}

/// A quotient y with x*y = h for the first J generator x that divides h.
inline std::optional<ProMeasure> j_membership(const ModulusNode& n, const ProMeasure& h) {
  for (const auto& x : n.J_generators) {
    try {
      ProMeasure y = group_ring_divide(h, x);
      if (x * y == h) return y;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NotDivisible && err.kind() != ErrorKind::FactorNotInvertible) throw;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// p-adic L-values

/// Character of Delta_g attached to a modulus node.
struct NodeCharacter {
  std::string node;
  Character chi;
};

struct LpValue {
  Element value;
  std::optional<Element> clearing_factor;  // den(zeta^{-1} - 1) at the trivial node
};

/// L_{p,h}(xi) = integral of xi^{-1} against mu(h), xi = chi * (gamma -> zeta).
inline LpValue lp_eval(const MeasureFamily& fam, const std::string& h, const Character& chi, const Element& zeta) {
  const auto& n = fam.poset.node(h);
  const Element zi = zeta.inverse();
  if (n.is_trivial()) {
    const Ring& R = zeta.ring();
    if (chi.is_trivial() && zeta == R.one())
      fail(ErrorKind::TrivialCharacterAtTrivialModulus, "the trivial character has a pole at the trivial modulus");
    const auto& nu = fam.trivial_measure();
    return {twist_eval(nu.num, chi.inverse(), zi), eval_at(nu.den, zi - R.one())};
  }
  return {twist_eval(fam.at(h), chi.inverse(), zi), std::nullopt};
}

/// chi(delta) zeta^a for a Frobenius (delta, gamma^a); zeta of p-power order.
inline Element frobenius_value(const Character& chi, const FrobeniusDatum& f, const Element& zeta) {
  const Ring& R = zeta.ring();
  int n = p_power_order_level(zeta, 64);
  if (n < 0) fail(ErrorKind::InvalidSpec, "zeta is not a p-power root of unity");
  return chi.eval(R, f.delta) * zeta.pow(f.gamma.residue(n));
}

/// Removes the Euler factor at p: value * (1 - chi(p)) when p is unramified.
inline Element lp_imprimitive(const Element& value, const std::optional<FrobeniusDatum>& frob_p, const Character& chi,
                              const Element& zeta, bool ramified) {
  if (ramified) return value;
  if (!frob_p) fail(ErrorKind::MissingFrobeniusDatum, "Frobenius at p required for an unramified prime");
  return value * (zeta.ring().one() - frobenius_value(chi, *frob_p, zeta));
}

// ---------------------------------------------------------------------------
// Units characteristic ideal

/// Generator of the chi-part: chi(mu(f_chi)), or chi(T mu(1)) for trivial chi.
inline PowerSeries units_char_series(const MeasureFamily& fam, const NodeCharacter& c) {
  const auto& n = fam.poset.node(c.node);
  if (!(c.chi.group() == n.delta)) fail(ErrorKind::DomainMismatch, "character is not on Delta of " + c.node);
  if (n.is_trivial()) {
    const auto& nu = fam.trivial_measure();
    PowerSeries T = PowerSeries::monomial(nu.num.ring(), 1, nu.num.tdeg());
    return chi_quotient(pseudo_multiply(nu, T), c.chi);
  }
  return chi_quotient(fam.at(c.node), c.chi);
}

inline CharIdealGen units_char_ideal(const MeasureFamily& fam, const NodeCharacter& c) {
  return char_gen_from_series(units_char_series(fam, c));
}

// ---------------------------------------------------------------------------
// Finiteness pipeline

enum class PipelineStatus { Certified, NotFinite, Inconclusive, NoAuxiliaryPrime };

inline std::string_view to_string(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::Certified: return "certified";
    case PipelineStatus::NotFinite: return "not-finite";
    case PipelineStatus::Inconclusive: return "inconclusive";
    case PipelineStatus::NoAuxiliaryPrime: return "no-auxiliary-prime";
  }
  return "?";
}

struct PipelineReport {
  PipelineStatus status = PipelineStatus::Inconclusive;
  std::string message;
  std::vector<Element> values;        // factor * generator at zeta - 1, zeta = W^j
  std::vector<Element> route_values;  // the same through L_{p, f l}
  bool routes_agree = true;
  FinitenessCertificate certificate;
  int certified_precision = 0;
};

/// Finiteness of the chi-part of the units quotient at level n, read off from
/// twisted L-values at the auxiliary prime l. The Euler factor at l must be a
/// unit series: chi(delta_l) != 1 mod pi for chi != 1, a_l a unit for chi = 1.
inline PipelineReport finiteness_pipeline(const MeasureFamily& fam, const NodeCharacter& c, int n,
                                          const std::string& aux) {
  PipelineReport out;
  const auto& node = fam.poset.node(c.node);
  auto fit = node.frobenius.find(aux);
  if (fit == node.frobenius.end() || node.divisible_by(aux)) {
    out.status = PipelineStatus::NoAuxiliaryPrime;
    out.message = "no Frobenius datum for " + aux + " at " + c.node;
    return out;
  }
  const FrobeniusDatum& sl = fit->second;
  PowerSeries F = units_char_series(fam, c);
  const Ring& R = F.ring();
  const int M = F.tdeg();
  PowerSeries fac(R, M);
  PowerSeries route_series(R, M);  // chi((1 - sigma_l^{-1}) mu(f_chi))
  ProMeasure E = euler_factor(node.delta, R, M, sl);
  if (c.chi.is_trivial()) {
    if (sl.gamma.residue(1) == 0) {
      out.status = PipelineStatus::NoAuxiliaryPrime;
      out.message = aux + " splits completely in the first layer";
      return out;
    }
    fac = series_divide(chi_quotient(E, c.chi), PowerSeries::monomial(R, 1, M));
    route_series = node.is_trivial() ? chi_quotient(pseudo_multiply(fam.trivial_measure(), E), c.chi)
                                     : chi_quotient(E * fam.at(c.node), c.chi);
  } else {
    if ((R.one() - c.chi.eval(R, sl.delta)).valuation().value_or(R.precision()) > 0) {
      out.status = PipelineStatus::NoAuxiliaryPrime;
      out.message = "chi(Frob " + aux + ") is congruent to 1";
      return out;
    }
    fac = chi_quotient(E, c.chi);
    route_series = chi_quotient(E * fam.at(c.node), c.chi);
  }

  CharIdealGen gen = char_gen_from_series(F);
  out.certificate = finiteness_certificate(gen, n);
  out.certified_precision = gen.certified_precision;

  // Second route: integral of xi against mu(f_chi l).
  std::set<std::string> ps(node.primes.begin(), node.primes.end());
  ps.insert(aux);
  const ModulusNode* up = fam.poset.find_by_primes(ps);
  if (!up) fail(ErrorKind::NodeMissing, "no node for " + c.node + " times " + aux);
  const PosetEdge* e = fam.poset.edge(up->label, c.node);
  if (!e) fail(ErrorKind::NodeMissing, "no edge " + up->label + " -> " + c.node);
  Character chi_up = pull_character(c.chi, e->projection);

  RootTower tower = root_tower(R, n);
  const Ring& S = tower.target(R);
  auto lift = [&](const PowerSeries& f) { return tower.trivial ? f : f.base_change(tower.ext); };
  PowerSeries facS = lift(fac), PS = lift(PowerSeries(R, gen.P, M)), AS = lift(route_series);
  ProMeasure muUp = tower.trivial ? fam.at(up->label) : base_change(fam.at(up->label), tower.ext);
  MeasureFamily lifted{fam.poset, {{up->label, muUp}}, std::nullopt};
  const Element W = S.wild_root(n);
  i64 pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<i64>(R.p());
  Element zeta = S.one();
  bool zero = false;
  for (i64 j = 0; j < pn; ++j, zeta *= W) {
    Element t = zeta - S.one();
    Element v = eval_at(facS, t) * eval_at(PS, t);
    if (v.is_zero()) zero = true;
    out.values.push_back(v);
    Element a = eval_at(AS, t);
    Element b = lp_eval(lifted, up->label, chi_up.inverse(), zeta.inverse()).value;
    out.route_values.push_back(b);
    if (!(a == b)) out.routes_agree = false;
  }
  if (!zero && out.certificate.status == FinitenessStatus::Certified) {
    out.status = PipelineStatus::Certified;
  } else if (zero && out.certificate.status == FinitenessStatus::NotFinite) {
    out.status = PipelineStatus::NotFinite;
  } else {
    out.status = PipelineStatus::Inconclusive;
  }
  return out;
}

}  // namespace padic
