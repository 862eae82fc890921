#pragma once

// Complete local coefficient rings O = W[pi]/(E(pi)), where W = Z_p[x]/(g(x))
// is unramified of degree f and E is Eisenstein of degree e over W. Elements
// are stored in the basis {x^i pi^j} with absolute pi-adic precision.

#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "padic/detail/modarith.hpp"
#include "padic/error.hpp"

namespace padic {

inline constexpr int kMaxAbsoluteDegree = 128;
inline constexpr u64 kMaxResidueField = u64(1) << 24;

/// A nonnegative rational in lowest terms, used for valuations with v(p) = 1.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  static Rational make(i64 n, i64 d) {
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct RingSpec {
  u64 p = 0;
  /// Monic g(x), low-to-high; degree f. Degree one means W = Z_p.
  std::vector<i64> unram{0, 1};
  /// Monic E(pi), low-to-high, each coefficient an element of W given by its
  /// x-coordinates. Ignored when `cyclotomic` is positive.
  std::vector<std::vector<i64>> eisenstein;
  /// When k > 0 the Eisenstein modulus is Phi_{p^k}(1 + pi).
  int cyclotomic = 0;
  /// Default (and maximal) absolute pi-adic precision of the ring.
  int precision = 32;

  static RingSpec zp(u64 p, int precision = 32) {
    RingSpec s;
    s.p = p;
    s.eisenstein = {{-static_cast<i64>(p)}, {1}};
    s.precision = precision;
    return s;
  }
  static RingSpec cyclotomic_ring(u64 p, int k, int precision = 32, std::vector<i64> unram = {0, 1}) {
    RingSpec s;
    s.p = p;
    s.unram = std::move(unram);
    s.cyclotomic = k;
    s.precision = precision;
    return s;
  }
};

class Ring;
class Element;
struct RingExtension;

namespace detail {

struct RingData {
  RingSpec spec;
  u64 p = 0;
  int f = 1, e = 1, N = 1, K = 1;
  u64 q = 0;
  ModArith mod;
  std::vector<u128> pow_p;
  std::vector<u128> g;                 // f+1 entries, monic
  std::vector<std::vector<u128>> E;    // e+1 entries, each of size f
  int cyc_level = 0;
  std::vector<u128> p_over_pi;         // coordinates of p / pi
  std::vector<u64> residue_gen;
  std::vector<u128> teich_gen;

  int dim() const { return e * f; }

  int digits_for(int prec, int j) const {
    int rem = prec - j;
    if (rem <= 0) return 0;
    return (rem + e - 1) / e;
  }

  void canonicalize(std::vector<u128>& c, int prec) const {
    for (int j = 0; j < e; ++j) {
      int dg = digits_for(prec, j);
      for (int i = 0; i < f; ++i) {
        u128& v = c[j * f + i];
        v = dg == 0 ? 0 : (dg >= K ? v : v % pow_p[dg]);
      }
    }
  }

  void w_mul_acc(const u128* a, const u128* b, u128* out) const {
    if (f == 1) {
      out[0] = mod.add(out[0], mod.mul(a[0], b[0]));
      return;
    }
    std::vector<u128> r(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
      if (a[i] == 0) continue;
      for (int k = 0; k < f; ++k) r[i + k] = mod.add(r[i + k], mod.mul(a[i], b[k]));
    }
    for (int d = 2 * f - 2; d >= f; --d) {
      u128 t = r[d];
      if (t == 0) continue;
      for (int i = 0; i < f; ++i) r[d - f + i] = mod.sub(r[d - f + i], mod.mul(t, g[i]));
    }
    for (int i = 0; i < f; ++i) out[i] = mod.add(out[i], r[i]);
  }

  std::vector<u128> mul(const std::vector<u128>& a, const std::vector<u128>& b) const {
    if (e == 1 && f == 1) return {mod.mul(a[0], b[0])};
    std::vector<u128> r((2 * e - 1) * f, 0);
    for (int j1 = 0; j1 < e; ++j1) {
      const u128* pa = &a[j1 * f];
      if (std::all_of(pa, pa + f, [](u128 v) { return v == 0; })) continue;
      for (int j2 = 0; j2 < e; ++j2) w_mul_acc(pa, &b[j2 * f], &r[(j1 + j2) * f]);
    }
    std::vector<u128> tmp(f);
    for (int d = 2 * e - 2; d >= e; --d) {
      const u128* t = &r[d * f];
      if (std::all_of(t, t + f, [](u128 v) { return v == 0; })) continue;
      for (int j = 0; j < e; ++j) {
        std::fill(tmp.begin(), tmp.end(), 0);
        w_mul_acc(t, E[j].data(), tmp.data());
        for (int i = 0; i < f; ++i) r[(d - e + j) * f + i] = mod.sub(r[(d - e + j) * f + i], tmp[i]);
      }
    }
    r.resize(e * f);
    return r;
  }

  int vp(u128 v) const {
    if (v == 0) return K;
    int k = 0;
    while (v % p == 0) {
      v /= p;
      ++k;
    }
    return k;
  }
};

inline i128 binom_i128(int n, int k) {
  if (k < 0 || k > n) return 0;
  i128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Coefficients of Phi_{p^k}(1 + t) = sum_{i<p} (1+t)^{i p^{k-1}}.
inline std::vector<i128> cyclotomic_shifted(u64 p, int k) {
  u64 pk1 = 1;
  for (int i = 1; i < k; ++i) pk1 *= p;
  const int e = static_cast<int>((p - 1) * pk1);
  std::vector<i128> c(e + 1, 0);
  for (u64 i = 0; i < p; ++i) {
    int n = static_cast<int>(i * pk1);
    for (int j = 0; j <= n; ++j) c[j] += binom_i128(n, j);
  }
  return c;
}

}  // namespace detail

class Ring {
 public:
  Ring() = default;

  static Ring make(const RingSpec& spec);
  static Ring zp(u64 p, int precision = 32) { return make(RingSpec::zp(p, precision)); }

  bool valid() const noexcept { return d_ != nullptr; }
  const RingSpec& spec() const { return d_->spec; }
  u64 p() const { return d_->p; }
  int f() const { return d_->f; }
  int e() const { return d_->e; }
  int precision() const { return d_->N; }
  u64 residue_size() const { return d_->q; }
  int cyclotomic_level() const { return d_->cyc_level; }
  const detail::RingData& data() const { return *d_; }

  Element zero(int prec = -1) const;
  Element one() const;
  Element from_int(i128 v, int prec = -1) const;
  Element from_coords(std::vector<u128> coords, int prec = -1) const;
  Element uniformizer() const;
  Element teichmuller(const std::vector<u64>& residue) const;
  Element root_of_unity(u64 order) const;
  /// Designated primitive p^k-th root of unity (1 + pi at the top level).
  Element wild_root(int k) const;
  const std::vector<u64>& residue_generator() const { return d_->residue_gen; }

  /// Largest k with a primitive p^k-th root of unity available.
  int wild_level() const {
    if (d_->cyc_level > 0) return d_->cyc_level;
    return d_->p == 2 ? 1 : 0;
  }

  /// Adjoin the p^k-th roots of unity by a cyclotomic Eisenstein layer.
  RingExtension adjoin_p_power_roots(int k) const;

  friend bool operator==(const Ring& a, const Ring& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    const auto& x = *a.d_;
    const auto& y = *b.d_;
    return x.p == y.p && x.N == y.N && x.g == y.g && x.E == y.E;
  }

 private:
  explicit Ring(std::shared_ptr<const detail::RingData> d) : d_(std::move(d)) {}
  std::shared_ptr<const detail::RingData> d_;
};

class Element {
 public:
  Element() = default;
  Element(Ring ring, std::vector<u128> coords, int prec) : ring_(std::move(ring)), c_(std::move(coords)), prec_(prec) {
    const auto& d = ring_.data();
    if (static_cast<int>(c_.size()) != d.dim()) fail(ErrorKind::InvalidSpec, "coordinate count mismatch");
    if (prec_ < 0) prec_ = 0;
    if (prec_ > d.N) prec_ = d.N;
    for (auto& v : c_) v %= d.mod.modulus();
    d.canonicalize(c_, prec_);
  }

  const Ring& ring() const { return ring_; }
  int precision() const { return prec_; }
  const std::vector<u128>& coords() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u128 v) { return v == 0; });
  }

  /// Valuation in pi-units (v(pi) = 1); empty when zero at precision.
  std::optional<int> valuation() const {
    const auto& d = ring_.data();
    std::optional<int> best;
    for (int j = 0; j < d.e; ++j) {
      int vj = -1;
      for (int i = 0; i < d.f; ++i) {
        u128 v = c_[j * d.f + i];
        if (v == 0) continue;
        int k = d.vp(v);
        if (vj < 0 || k < vj) vj = k;
      }
      if (vj < 0) continue;
      int cand = d.e * vj + j;
      if (!best || cand < *best) best = cand;
    }
    return best;
  }

  /// Valuation normalized so that v(p) = 1.
  std::optional<Rational> valuation_rational() const {
    auto v = valuation();
    if (!v) return std::nullopt;
    return Rational::make(*v, ring_.e());
  }

  bool is_unit() const {
    auto v = valuation();
    return v && *v == 0;
  }

  std::vector<u64> residue() const {
    const auto& d = ring_.data();
    std::vector<u64> r(d.f);
    for (int i = 0; i < d.f; ++i) r[i] = static_cast<u64>(c_[i] % d.p);
    return r;
  }

  Element reduce(int n) const {
    if (n > prec_) fail(ErrorKind::PrecisionIncrease, "cannot raise precision from " + std::to_string(prec_) + " to " + std::to_string(n));
    return Element(ring_, c_, n);
  }

  /// Same value, precision set to min(n, ring cap); only meaningful for exact inputs.
  Element with_precision(int n) const { return Element(ring_, c_, n); }

  Element operator-() const {
    const auto& d = ring_.data();
    std::vector<u128> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = d.mod.neg(c_[i]);
    return Element(ring_, std::move(r), prec_);
  }

  friend Element operator+(const Element& a, const Element& b) {
    check_same(a, b);
    const auto& d = a.ring_.data();
    std::vector<u128> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = d.mod.add(a.c_[i], b.c_[i]);
    return Element(a.ring_, std::move(r), std::min(a.prec_, b.prec_));
  }
  friend Element operator-(const Element& a, const Element& b) {
    check_same(a, b);
    const auto& d = a.ring_.data();
    std::vector<u128> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = d.mod.sub(a.c_[i], b.c_[i]);
    return Element(a.ring_, std::move(r), std::min(a.prec_, b.prec_));
  }
  friend Element operator*(const Element& a, const Element& b) {
    check_same(a, b);
    return Element(a.ring_, a.ring_.data().mul(a.c_, b.c_), std::min(a.prec_, b.prec_));
  }
  Element& operator+=(const Element& b) { return *this = *this + b; }
  Element& operator-=(const Element& b) { return *this = *this - b; }
  Element& operator*=(const Element& b) { return *this = *this * b; }

  /// Equality at the common precision.
  friend bool operator==(const Element& a, const Element& b) {
    if (!(a.ring_ == b.ring_)) return false;
    int n = std::min(a.prec_, b.prec_);
    return a.reduce(n).c_ == b.reduce(n).c_;
  }

  Element pow(u64 n) const {
    Element r = ring_.one().with_precision(prec_);
    Element b = *this;
    while (n) {
      if (n & 1) r *= b;
      b *= b;
      n >>= 1;
    }
    return r;
  }

  Element pow_signed(i64 n) const { return n >= 0 ? pow(static_cast<u64>(n)) : inverse().pow(static_cast<u64>(-n)); }

  Element inverse() const;

  /// Exact division by pi^k; requires valuation >= k. Loses k digits.
  Element div_pi(int k = 1) const;

  /// Multiply by pi^k; precision grows by k up to the ring cap.
  Element mul_pi(int k = 1) const {
    Element r = *this;
    Element pi = ring_.uniformizer();
    for (int i = 0; i < k; ++i) r = Element(ring_, ring_.data().mul(r.c_, pi.c_), r.prec_ + 1);
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << detail::u128_to_string(c_[i]);
    os << "]+O(pi^" << prec_ << ")";
    return os.str();
  }

 private:
  static void check_same(const Element& a, const Element& b) {
    if (!a.ring_.valid() || !b.ring_.valid() || !(a.ring_ == b.ring_))
      fail(ErrorKind::SpecMismatch, "elements belong to different rings");
  }

  Ring ring_;
  std::vector<u128> c_;
  int prec_ = 0;
};

/// A base change O -> O' obtained by adjoining p-power roots of unity.
struct RingExtension {
  Ring source;
  Ring target;
  Element pi_image;  // image of the source uniformizer

  Element embed(const Element& a) const {
    if (!(a.ring() == source)) fail(ErrorKind::SpecMismatch, "embedding applied to foreign element");
    const auto& sd = source.data();
    const int ratio = target.e() / source.e();
    const int prec = std::min(target.precision(), a.precision() * ratio);
    Element acc = target.zero(target.precision());
    for (int j = sd.e - 1; j >= 0; --j) {
      std::vector<u128> w(target.data().dim(), 0);
      for (int i = 0; i < sd.f; ++i) w[i] = a.coords()[j * sd.f + i];
      acc = acc * pi_image + target.from_coords(std::move(w));
    }
    return acc.with_precision(prec).reduce(prec);
  }
};

// ---------------------------------------------------------------------------

inline Ring Ring::make(const RingSpec& spec) {
  auto d = std::make_shared<detail::RingData>();
  d->spec = spec;
  const u64 p = spec.p;
  if (!detail::is_prime(p) || p >= (u64(1) << 31)) fail(ErrorKind::InvalidSpec, "p must be a prime below 2^31");
  d->p = p;

  if (spec.unram.size() < 2 || spec.unram.back() != 1) fail(ErrorKind::InvalidSpec, "unram: modulus must be monic of degree >= 1");
  d->f = static_cast<int>(spec.unram.size()) - 1;
  {
    detail::FpPoly gbar;
    for (i64 c : spec.unram) gbar.push_back(static_cast<u64>(((c % (i64)p) + (i64)p) % (i64)p));
    if (!detail::fp_irreducible(gbar, p)) fail(ErrorKind::NotIrreducible, "unram: modulus is reducible modulo p");
  }

  std::vector<std::vector<i128>> Eint;
  if (spec.cyclotomic > 0) {
    auto c = detail::cyclotomic_shifted(p, spec.cyclotomic);
    for (i128 v : c) Eint.push_back({v});
    d->cyc_level = spec.cyclotomic;
  } else {
    if (spec.eisenstein.size() < 2) fail(ErrorKind::InvalidSpec, "eisenstein: modulus must have degree >= 1");
    for (const auto& w : spec.eisenstein) {
      if (static_cast<int>(w.size()) > d->f) fail(ErrorKind::InvalidSpec, "eisenstein: coefficient has more than f coordinates");
      std::vector<i128> v(w.begin(), w.end());
      Eint.push_back(v);
    }
    const auto& lead = Eint.back();
    bool monic = !lead.empty() && lead[0] == 1 && std::all_of(lead.begin() + 1, lead.end(), [](i128 v) { return v == 0; });
    if (!monic) fail(ErrorKind::NotEisenstein, "eisenstein: modulus must be monic");
  }
  d->e = static_cast<int>(Eint.size()) - 1;
  if (d->e * d->f > kMaxAbsoluteDegree) fail(ErrorKind::InvalidSpec, "absolute degree e*f exceeds " + std::to_string(kMaxAbsoluteDegree));

  // Eisenstein check on integer coefficients.
  auto vp_int = [p](i128 v) {
    if (v == 0) return 1 << 20;
    int k = 0;
    while (v % (i128)p == 0) {
      v /= (i128)p;
      ++k;
    }
    return k;
  };
  for (int j = 0; j < d->e; ++j) {
    int m = 1 << 20;
    for (i128 v : Eint[j]) m = std::min(m, vp_int(v));
    if (m < 1) fail(ErrorKind::NotEisenstein, "eisenstein: coefficient " + std::to_string(j) + " is a unit");
    if (j == 0 && m != 1) fail(ErrorKind::NotEisenstein, "eisenstein: constant term must have valuation exactly 1");
  }
  if (spec.cyclotomic == 0) {
    // Recognize cyclotomic layers given explicitly so the wild root is designated.
    u64 pk1 = 1;
    for (int k = 1; (p - 1) * pk1 <= (u64)d->e; ++k, pk1 *= p) {
      if ((p - 1) * pk1 != (u64)d->e) continue;
      auto c = detail::cyclotomic_shifted(p, k);
      bool same = true;
      for (int j = 0; j <= d->e && same; ++j) {
        const auto& w = Eint[j];
        if (w.empty() ? c[j] != 0 : w[0] != c[j]) same = false;
        for (std::size_t i = 1; i < w.size() && same; ++i)
          if (w[i] != 0) same = false;
      }
      if (same) d->cyc_level = k;
    }
  }

  if (spec.precision < 1) fail(ErrorKind::InvalidSpec, "prec must be positive");
  d->N = spec.precision;
  d->K = (d->N + d->e - 1) / d->e;
  d->pow_p.assign(d->K + 1, 1);
  for (int k = 1; k <= d->K; ++k) {
    if (d->pow_p[k - 1] > ((u128(1) << 126) / p)) fail(ErrorKind::InvalidSpec, "precision too large for this prime");
    d->pow_p[k] = d->pow_p[k - 1] * p;
  }
  d->mod = detail::ModArith(d->pow_p[d->K]);

  {
    u128 q = 1;
    for (int i = 0; i < d->f; ++i) {
      q *= p;
      if (q > kMaxResidueField) fail(ErrorKind::InvalidSpec, "residue field too large");
    }
    d->q = static_cast<u64>(q);
  }
  for (i64 c : spec.unram) d->g.push_back(d->mod.from_signed(c));
  for (const auto& w : Eint) {
    std::vector<u128> v(d->f, 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      i128 x = w[i];
      // Cyclotomic coefficients may exceed the modulus; reduce exactly.
      i128 m = static_cast<i128>(d->pow_p[d->K]);
      x %= m;
      if (x < 0) x += m;
      v[i] = static_cast<u128>(x);
    }
    d->E.push_back(std::move(v));
  }

  // p / pi = -(pi^{e-1} + c_{e-1} pi^{e-2} + ... + c_1) / u0 with c_0 = p u0.
  {
    Ring tmp(d);
    std::vector<u128> s(d->dim(), 0);
    for (int j = 0; j < d->e; ++j) {
      const auto& w = (j + 1 == d->e) ? std::vector<u128>(d->f, 0) : d->E[j + 1];
      for (int i = 0; i < d->f; ++i) s[j * d->f + i] = w[i];
    }
    s[(d->e - 1) * d->f] = d->mod.add(s[(d->e - 1) * d->f], 1);
    std::vector<u128> u0(d->dim(), 0);
    for (int i = 0; i < d->f; ++i) {
      // c_0 is divisible by p; exact division of its integer lift.
      i128 x = Eint[0].size() > (std::size_t)i ? Eint[0][i] : 0;
      i128 m = static_cast<i128>(d->pow_p[d->K]);
      i128 y = x / (i128)p;
      y %= m;
      if (y < 0) y += m;
      u0[i] = static_cast<u128>(y);
    }
    Element u0e(tmp, u0, d->N);
    Element se(tmp, s, d->N);
    Element r = -(se * u0e.inverse());
    d->p_over_pi = r.coords();
  }

  // Residue-field generator and its Teichmueller lift.
  {
    detail::FpPoly gbar;
    for (u128 c : d->g) gbar.push_back(static_cast<u64>(c % p));
    const u64 q = d->q;
    auto factors = detail::prime_factors(q - 1);
    for (u64 idx = 1; idx < q; ++idx) {
      detail::FpPoly a;
      u64 t = idx;
      for (int i = 0; i < d->f; ++i) {
        a.push_back(t % p);
        t /= p;
      }
      bool gen = true;
      for (u64 r : factors) {
        auto h = detail::fp_powmod(a, (q - 1) / r, gbar, p);
        if (h.size() == 1 && h[0] == 1) {
          gen = false;
          break;
        }
      }
      if (q == 2) gen = (idx == 1);
      if (gen) {
        d->residue_gen = a;
        break;
      }
    }
    Ring tmp(d);
    d->teich_gen = tmp.teichmuller(d->residue_gen).coords();
  }
  return Ring(std::move(d));
}

inline Element Ring::zero(int prec) const { return Element(*this, std::vector<u128>(d_->dim(), 0), prec < 0 ? d_->N : prec); }

inline Element Ring::one() const {
  std::vector<u128> c(d_->dim(), 0);
  c[0] = 1;
  return Element(*this, std::move(c), d_->N);
}

inline Element Ring::from_int(i128 v, int prec) const {
  std::vector<u128> c(d_->dim(), 0);
  c[0] = d_->mod.from_signed(v);
  return Element(*this, std::move(c), prec < 0 ? d_->N : prec);
}

inline Element Ring::from_coords(std::vector<u128> coords, int prec) const {
  return Element(*this, std::move(coords), prec < 0 ? d_->N : prec);
}

inline Element Ring::uniformizer() const {
  std::vector<u128> c(d_->dim(), 0);
  if (d_->e >= 2) {
    c[d_->f] = 1;
  } else {
    for (int i = 0; i < d_->f; ++i) c[i] = d_->mod.neg(d_->E[0][i]);
  }
  return Element(*this, std::move(c), d_->N);
}

inline Element Ring::teichmuller(const std::vector<u64>& residue) const {
  const auto& d = *d_;
  if (static_cast<int>(residue.size()) != d.f) fail(ErrorKind::InvalidSpec, "residue has wrong number of coordinates");
  if (std::all_of(residue.begin(), residue.end(), [&](u64 v) { return v % d.p == 0; }))
    fail(ErrorKind::ZeroResidue, "Teichmueller lift of zero");
  std::vector<u128> c(d.dim(), 0);
  for (int i = 0; i < d.f; ++i) c[i] = residue[i] % d.p;
  Element x(*this, std::move(c), d.N);
  for (int it = 0; it <= d.N + 1; ++it) {
    Element y = x.pow(d.q);
    if (y == x) return x;
    x = y;
  }
  return x;
}

inline Element Ring::wild_root(int k) const {
  if (k == 0) return one();
  if (d_->p == 2 && k == 1 && d_->cyc_level < 1) return -one();
  if (d_->cyc_level < k) fail(ErrorKind::RootNotAvailable, "no primitive p^" + std::to_string(k) + "-th root of unity in this ring");
  u64 expo = 1;
  for (int i = k; i < d_->cyc_level; ++i) expo *= d_->p;
  return (one() + uniformizer()).pow(expo);
}

inline Element Ring::root_of_unity(u64 order) const {
  if (order == 0) fail(ErrorKind::InvalidSpec, "root of unity of order 0");
  const u64 p = d_->p;
  int k = 0;
  u64 tame = order, wild = 1;
  while (tame % p == 0) {
    tame /= p;
    wild *= p;
    ++k;
  }
  if ((d_->q - 1) % tame != 0)
    fail(ErrorKind::RootNotAvailable, "no primitive " + std::to_string(tame) + "-th root of unity: residue field too small");
  Element t = Element(*this, d_->teich_gen, d_->N).pow((d_->q - 1) / tame);
  Element w = wild_root(k);
  // Combine so that z^wild = t and z^tame = w; this keeps the designated
  // roots power-compatible: root_of_unity(n)^(n/m) == root_of_unity(m).
  auto inv_mod = [](u64 a, u64 m) -> u64 {
    if (m == 1) return 0;
    for (u64 x = 1; x < m; ++x)
      if ((a % m) * x % m == 1) return x;
    return 0;
  };
  return t.pow(inv_mod(wild % tame, tame)) * w.pow(inv_mod(tame % wild, wild));
}

inline RingExtension Ring::adjoin_p_power_roots(int k) const {
  const auto& d = *d_;
  if (k <= wild_level()) return RingExtension{*this, *this, uniformizer()};
  if (!(d.e == 1 || d.cyc_level > 0))
    fail(ErrorKind::RootNotAvailable, "cannot adjoin p-power roots to a non-cyclotomic ramified ring");
  RingSpec s;
  s.p = d.p;
  s.unram = d.spec.unram;
  s.cyclotomic = k;
  const int e_new = static_cast<int>(detail::cyclotomic_shifted(d.p, k).size()) - 1;
  s.precision = d.N * (e_new / d.e);
  Ring target = Ring::make(s);
  Element img;
  if (d.e == 1) {
    std::vector<u128> c(target.data().dim(), 0);
    for (int i = 0; i < d.f; ++i) c[i] = d.mod.neg(d.E[0][i]);
    img = target.from_coords(std::move(c));
  } else {
    u64 expo = 1;
    for (int i = d.cyc_level; i < k; ++i) expo *= d.p;
    img = (target.one() + target.uniformizer()).pow(expo) - target.one();
  }
  return RingExtension{*this, target, img};
}

inline Element Element::inverse() const {
  const auto& d = ring_.data();
  if (is_zero()) fail(ErrorKind::PrecisionExhausted, "inverse of an element that vanishes at precision");
  if (!is_unit()) fail(ErrorKind::NotUnit, "inverse of a non-unit");
  detail::FpPoly gbar;
  for (u128 c : d.g) gbar.push_back(static_cast<u64>(c % d.p));
  detail::FpPoly a = residue();
  auto inv = d.q == 2 ? detail::FpPoly{1} : detail::fp_powmod(a, d.q - 2, gbar, d.p);
  std::vector<u128> c(d.dim(), 0);
  for (std::size_t i = 0; i < inv.size(); ++i) c[i] = inv[i];
  Element x(ring_, std::move(c), d.N);
  Element self_full(ring_, c_, d.N);
  Element two = ring_.from_int(2);
  for (int it = 0; it < 64; ++it) {
    Element ax = self_full * x;
    if (ax.reduce(prec_) == ring_.one().reduce(prec_)) return x.reduce(prec_);
    x = x * (two - ax);
  }
  fail(ErrorKind::PrecisionExhausted, "Newton inversion did not converge");
}

inline Element Element::div_pi(int k) const {
  const auto& d = ring_.data();
  Element cur = *this;
  for (int s = 0; s < k; ++s) {
    if (cur.prec_ == 0) fail(ErrorKind::PrecisionExhausted, "division by pi exhausts precision");
    auto v = cur.valuation();
    if (v && *v < 1) fail(ErrorKind::NotDivisible, "element is not divisible by pi");
    std::vector<u128> r(d.dim(), 0);
    for (int j = 1; j < d.e; ++j)
      for (int i = 0; i < d.f; ++i) r[(j - 1) * d.f + i] = cur.c_[j * d.f + i];
    std::vector<u128> a0(d.dim(), 0);
    for (int i = 0; i < d.f; ++i) a0[i] = cur.c_[i] / d.p;
    auto t = d.mul(a0, d.p_over_pi);
    for (int i = 0; i < d.dim(); ++i) r[i] = d.mod.add(r[i], t[i]);
    cur = Element(ring_, std::move(r), cur.prec_ - 1);
  }
  return cur;
}

}  // namespace padic
