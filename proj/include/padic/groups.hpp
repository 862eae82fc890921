#pragma once

// Finite abelian groups Z/d_1 x ... x Z/d_r, morphisms between them and
// characters with values in a coefficient ring.

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "padic/core.hpp"

namespace padic {

using GroupElement = std::vector<i64>;

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<i64> orders) : d_(std::move(orders)) {
    for (i64 d : d_)
      if (d < 1) fail(ErrorKind::InvalidSpec, "cyclic order must be positive");
    size_ = 1;
    for (i64 d : d_) {
      if (size_ > (i64(1) << 40) / d) fail(ErrorKind::InvalidSpec, "group too large");
      size_ *= d;
    }
  }

  static FiniteAbelianGroup trivial() { return FiniteAbelianGroup(std::vector<i64>{}); }
  static FiniteAbelianGroup cyclic(i64 n) { return FiniteAbelianGroup({n}); }
  static FiniteAbelianGroup product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    std::vector<i64> d = a.d_;
    d.insert(d.end(), b.d_.begin(), b.d_.end());
    return FiniteAbelianGroup(std::move(d));
  }

  const std::vector<i64>& orders() const { return d_; }
  int rank() const { return static_cast<int>(d_.size()); }
  i64 size() const { return size_; }

  /// Least common multiple of the cyclic orders (1 for the trivial group).
  i64 exponent() const {
    i64 r = 1;
    for (i64 d : d_) r = std::lcm(r, d);
    return r;
  }

  bool contains(const GroupElement& g) const {
    if (g.size() != d_.size()) return false;
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (g[i] < 0 || g[i] >= d_[i]) return false;
    return true;
  }
  void check(const GroupElement& g) const {
    if (!contains(g)) fail(ErrorKind::ElementOutOfGroup, "element " + format(g) + " not in " + describe());
  }

  /// Lexicographic enumeration: the first coordinate is the most significant digit.
  i64 index_of(const GroupElement& g) const {
    check(g);
    i64 idx = 0;
    for (std::size_t i = 0; i < d_.size(); ++i) idx = idx * d_[i] + g[i];
    return idx;
  }
  GroupElement element(i64 idx) const {
    GroupElement g(d_.size());
    for (int i = rank() - 1; i >= 0; --i) {
      g[i] = idx % d_[i];
      idx /= d_[i];
    }
    return g;
  }
  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    for (i64 i = 0; i < size_; ++i) out.push_back(element(i));
    return out;
  }

  GroupElement identity() const { return GroupElement(d_.size(), 0); }
  GroupElement generator(int i) const {
    GroupElement g = identity();
    g[i] = 1 % d_[i];
    return g;
  }
  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    GroupElement r(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) r[i] = (a[i] + b[i]) % d_[i];
    return r;
  }
  GroupElement neg(const GroupElement& a) const {
    GroupElement r(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) r[i] = (d_[i] - a[i]) % d_[i];
    return r;
  }
  GroupElement scale(const GroupElement& a, i64 k) const {
    GroupElement r(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) r[i] = ((a[i] * (k % d_[i])) % d_[i] + d_[i]) % d_[i];
    return r;
  }
  i64 order_of(const GroupElement& a) const {
    i64 r = 1;
    for (std::size_t i = 0; i < d_.size(); ++i) r = std::lcm(r, d_[i] / std::gcd(d_[i], a[i]));
    return r;
  }

  std::string describe() const {
    if (d_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < d_.size(); ++i) s += (i ? "xZ/" : "Z/") + std::to_string(d_[i]);
    return s;
  }
  static std::string format(const GroupElement& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a.d_ == b.d_; }

 private:
  std::vector<i64> d_;
  i64 size_ = 1;
};

class GroupMorphism {
 public:
  GroupMorphism() = default;
  /// images[i] is the image of the i-th standard generator of the domain.
  GroupMorphism(FiniteAbelianGroup dom, FiniteAbelianGroup cod, std::vector<GroupElement> images)
      : dom_(std::move(dom)), cod_(std::move(cod)), img_(std::move(images)) {
    if (static_cast<int>(img_.size()) != dom_.rank()) fail(ErrorKind::InvalidMorphism, "one image per generator required");
    for (int i = 0; i < dom_.rank(); ++i) {
      if (!cod_.contains(img_[i])) fail(ErrorKind::InvalidMorphism, "image " + std::to_string(i) + " not in codomain");
      if (cod_.scale(img_[i], dom_.orders()[i]) != cod_.identity())
        fail(ErrorKind::InvalidMorphism, "image of generator " + std::to_string(i) + " has order not dividing " +
                                             std::to_string(dom_.orders()[i]));
    }
  }

  static GroupMorphism identity(const FiniteAbelianGroup& G) {
    std::vector<GroupElement> im;
    for (int i = 0; i < G.rank(); ++i) im.push_back(G.generator(i));
    return GroupMorphism(G, G, im);
  }
  static GroupMorphism zero(const FiniteAbelianGroup& G, const FiniteAbelianGroup& H) {
    return GroupMorphism(G, H, std::vector<GroupElement>(G.rank(), H.identity()));
  }
  /// Addition G x G -> G.
  static GroupMorphism addition(const FiniteAbelianGroup& G) {
    std::vector<GroupElement> im;
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < G.rank(); ++i) im.push_back(G.generator(i));
    return GroupMorphism(FiniteAbelianGroup::product(G, G), G, im);
  }

  const FiniteAbelianGroup& domain() const { return dom_; }
  const FiniteAbelianGroup& codomain() const { return cod_; }
  const std::vector<GroupElement>& images() const { return img_; }

  GroupElement operator()(const GroupElement& g) const {
    dom_.check(g);
    GroupElement r = cod_.identity();
    for (int i = 0; i < dom_.rank(); ++i) r = cod_.add(r, cod_.scale(img_[i], g[i]));
    return r;
  }

 private:
  FiniteAbelianGroup dom_, cod_;
  std::vector<GroupElement> img_;
};

struct KernelImage {
  std::vector<GroupElement> kernel;
  std::vector<GroupElement> image;
  bool surjective = false;
};

inline KernelImage kernel_image(const GroupMorphism& phi) {
  KernelImage out;
  const auto& H = phi.codomain();
  std::vector<char> hit(H.size(), 0);
  for (const auto& g : phi.domain().elements()) {
    GroupElement y = phi(g);
    if (y == H.identity()) out.kernel.push_back(g);
    hit[H.index_of(y)] = 1;
  }
  for (i64 i = 0; i < H.size(); ++i)
    if (hit[i]) out.image.push_back(H.element(i));
  out.surjective = static_cast<i64>(out.image.size()) == H.size();
  return out;
}

/// Every morphism G -> H, in lexicographic order of the generator images.
inline std::vector<GroupMorphism> enumerate_morphisms(const FiniteAbelianGroup& G, const FiniteAbelianGroup& H) {
  std::vector<std::vector<GroupElement>> choices(G.rank());
  for (int i = 0; i < G.rank(); ++i)
    for (const auto& h : H.elements())
      if (H.scale(h, G.orders()[i]) == H.identity()) choices[i].push_back(h);
  std::vector<GroupMorphism> out;
  std::vector<GroupElement> cur(G.rank());
  std::function<void(int)> rec = [&](int i) {
    if (i == G.rank()) {
      out.emplace_back(G, H, cur);
      return;
    }
    for (const auto& h : choices[i]) {
      cur[i] = h;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// A character G -> mu_R, stored as the exponent of zeta_R at each generator,
/// with R the exponent of G. Values are realized through the designated roots
/// of the target ring, so two characters are equal iff their exponents are.
class Character {
 public:
  Character() = default;
  Character(FiniteAbelianGroup G, std::vector<i64> exps) : G_(std::move(G)), e_(std::move(exps)) {
    const i64 R = G_.exponent();
    if (static_cast<int>(e_.size()) != G_.rank()) fail(ErrorKind::InvalidSpec, "one exponent per generator required");
    for (int i = 0; i < G_.rank(); ++i) {
      e_[i] = ((e_[i] % R) + R) % R;
      if ((e_[i] * G_.orders()[i]) % R != 0)
        fail(ErrorKind::InvalidSpec, "character exponent incompatible with generator order");
    }
  }

  static Character trivial(const FiniteAbelianGroup& G) { return Character(G, std::vector<i64>(G.rank(), 0)); }

  /// All characters of G, lexicographic in the per-generator index k_i with
  /// exponent k_i * R / d_i.
  static std::vector<Character> all(const FiniteAbelianGroup& G) {
    const i64 R = G.exponent();
    std::vector<i64> dual;
    for (i64 d : G.orders()) dual.push_back(d);
    FiniteAbelianGroup Gd(dual);
    std::vector<Character> out;
    for (const auto& k : Gd.elements()) {
      std::vector<i64> e(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) e[i] = k[i] * (R / G.orders()[i]);
      out.emplace_back(G, e);
    }
    return out;
  }

  const FiniteAbelianGroup& group() const { return G_; }
  const std::vector<i64>& exponents() const { return e_; }
  i64 root_order() const { return G_.exponent(); }

  /// Order of the character: the least m with chi^m = 1.
  i64 order() const {
    const i64 R = G_.exponent();
    i64 g = R;
    for (i64 x : e_) g = std::gcd(g, x);
    return R / g;
  }
  bool is_trivial() const { return order() == 1; }

  Character inverse() const {
    std::vector<i64> e;
    for (i64 x : e_) e.push_back(-x);
    return Character(G_, e);
  }
  friend Character operator*(const Character& a, const Character& b) {
    if (!(a.G_ == b.G_)) fail(ErrorKind::DomainMismatch, "characters on different groups");
    std::vector<i64> e;
    for (std::size_t i = 0; i < a.e_.size(); ++i) e.push_back(a.e_[i] + b.e_[i]);
    return Character(a.G_, e);
  }
  friend bool operator==(const Character& a, const Character& b) { return a.G_ == b.G_ && a.e_ == b.e_; }

  /// chi(g) as an exponent of zeta_R.
  i64 exponent_at(const GroupElement& g) const {
    G_.check(g);
    const i64 R = G_.exponent();
    i64 s = 0;
    for (int i = 0; i < G_.rank(); ++i) s = (s + e_[i] * g[i]) % R;
    return s;
  }

  /// chi(g) in the ring, computed as zeta_m^{s/(R/m)} with m the character order,
  /// so only roots of order m are required.
  Element eval(const Ring& ring, const GroupElement& g) const {
    const i64 m = order();
    const i64 s = exponent_at(g) / (G_.exponent() / m);
    if (m == 1) return ring.one();
    return ring.root_of_unity(static_cast<u64>(m)).pow(static_cast<u64>(s));
  }

  std::string describe() const {
    std::string s = "chi[";
    for (std::size_t i = 0; i < e_.size(); ++i) s += (i ? "," : "") + std::to_string(e_[i]);
    return s + "/" + std::to_string(G_.exponent()) + "]";
  }

 private:
  FiniteAbelianGroup G_;
  std::vector<i64> e_;
};

/// chi o phi on the domain of phi.
inline Character pull_character(const Character& chi, const GroupMorphism& phi) {
  if (!(chi.group() == phi.codomain())) fail(ErrorKind::DomainMismatch, "character is not on the codomain");
  const FiniteAbelianGroup& G = phi.domain();
  const i64 RG = G.exponent(), RH = chi.root_order();
  std::vector<i64> e;
  for (int i = 0; i < G.rank(); ++i) {
    i64 s = chi.exponent_at(phi(G.generator(i)));
    // zeta_RH^s has order dividing the generator order, hence dividing RG.
    i64 g = std::gcd(RH, RG);
    e.push_back((s / (RH / g)) * (RG / g));
  }
  return Character(G, e);
}

}  // namespace padic
