#pragma once

#include <random>

#include "padic/eulerfam.hpp"
#include "support.hpp"

namespace padic::testing {

/// Moduli (1) | l1 | l1l2 with Delta = 1, Z/2, Z/2 x Z/3 and Frobenius
/// exponents a1, a2 for l1, l2. The ideal "a" is prime to every modulus.
inline ModuliPoset three_node_poset(u64 p, const PadicExponent& a1, const PadicExponent& a2, const PadicExponent& aa) {
  FiniteAbelianGroup D0 = FiniteAbelianGroup::trivial(), D1({2}), D2({2, 3});
  ModulusNode n0{"(1)", {}, D0, {{"l1", {{}, a1}}, {"l2", {{}, a2}}, {"a", {{}, aa}}}, 2, {}};
  ModulusNode n1{"l1", {"l1"}, D1, {{"l2", {{1}, a2}}, {"a", {{1}, aa}}}, 2, {}};
  ModulusNode n2{"l1l2", {"l1", "l2"}, D2, {{"a", {{1, 1}, aa}}}, 2, {}};
  GroupMorphism p21(D2, D1, {{1}, {0}});
  GroupMorphism p20 = GroupMorphism::zero(D2, D0);
  GroupMorphism p10 = GroupMorphism::zero(D1, D0);
  return {{n0, n1, n2}, {{"l1l2", "l1", p21}, {"l1l2", "(1)", p20}, {"l1", "(1)", p10}}};
}

/// A measure on `delta` pushing forward to `target` along `phi`: random
/// masses off the fibre representatives, fixed up on them.
inline ProMeasure lift_with_pushforward(const GroupMorphism& phi, const ProMeasure& target, int low_degree,
                                        std::mt19937_64& rng) {
  const auto& D = phi.domain();
  const auto& H = phi.codomain();
  ProMeasure mu(D, target.ring(), target.tdeg());
  std::vector<i64> rep(H.size(), -1);
  for (i64 i = 0; i < D.size(); ++i) {
    auto h = H.index_of(phi(D.element(i)));
    if (rep[h] < 0)
      rep[h] = i;
    else
      mu.at(D.element(i)) = random_series(target.ring(), low_degree, rng).truncate(target.tdeg());
  }
  ProMeasure rest = pro_pushforward(phi, mu);
  for (i64 h = 0; h < H.size(); ++h) {
    if (rep[h] < 0) fail(ErrorKind::InvalidSpec, "projection is not surjective");
    mu.at(D.element(rep[h])) = target.series()[h] - rest.series()[h];
  }
  return mu;
}

/// Euler-compatible family on three_node_poset with mu(1) = num / T.
inline MeasureFamily three_node_family(const ModuliPoset& P, const PowerSeries& num, std::mt19937_64& rng) {
  const Ring& R = num.ring();
  const int M = num.tdeg();
  MeasureFamily fam{P, {}, std::nullopt};
  const auto& D0 = P.node("(1)").delta;
  PseudoMeasure nu{ProMeasure::scalar_series(D0, num), PowerSeries::monomial(R, 1, M)};
  fam.trivial = nu;
  ProMeasure base = pseudo_multiply(nu, edge_euler_product(P, *P.edge("l1", "(1)"), R, M));
  ProMeasure m1 = lift_with_pushforward(P.edge("l1", "(1)")->projection, base, 6, rng);
  ProMeasure t1 = edge_euler_product(P, *P.edge("l1l2", "l1"), R, M) * m1;
  ProMeasure m2 = lift_with_pushforward(P.edge("l1l2", "l1")->projection, t1, 6, rng);
  fam.measures.emplace("l1", m1);
  fam.measures.emplace("l1l2", m2);
  return fam;
}

}  // namespace padic::testing
