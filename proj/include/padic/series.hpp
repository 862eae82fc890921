#pragma once

// Truncated power series O[[T]] / (pi^N, T^M).
//
// A series with M stored coefficients is identified with the polynomial of
// degree < M it stores ("zero tail"). Preparation, division and reduction
// modulo omega_n are exact statements about that polynomial.

#include <optional>
#include <string>
#include <vector>

#include "padic/core.hpp"

namespace padic {

inline constexpr int kDefaultTdeg = 64;

class PowerSeries {
 public:
  PowerSeries() = default;
  PowerSeries(Ring ring, int tdeg) : ring_(std::move(ring)), c_(tdeg, ring_.zero()) {
    if (tdeg < 1) fail(ErrorKind::InvalidSpec, "tdeg must be positive");
  }
  /// Coefficients beyond tdeg are dropped; missing ones are zero.
  PowerSeries(Ring ring, std::vector<Element> coeffs, int tdeg) : PowerSeries(std::move(ring), tdeg) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) {
      if (!(coeffs[i].ring() == ring_)) fail(ErrorKind::SpecMismatch, "coefficient from a different ring");
      c_[i] = std::move(coeffs[i]);
    }
  }

  static PowerSeries from_ints(const Ring& R, const std::vector<i64>& coeffs, int tdeg) {
    std::vector<Element> c;
    for (i64 v : coeffs) c.push_back(R.from_int(v));
    return PowerSeries(R, std::move(c), tdeg);
  }
  static PowerSeries constant(const Element& a, int tdeg) { return PowerSeries(a.ring(), {a}, tdeg); }
  static PowerSeries monomial(const Ring& R, int k, int tdeg) {
    PowerSeries s(R, tdeg);
    if (k < tdeg) s.c_[k] = R.one();
    return s;
  }

  const Ring& ring() const { return ring_; }
  int tdeg() const { return static_cast<int>(c_.size()); }
  const Element& operator[](int i) const { return c_[i]; }
  Element& operator[](int i) { return c_[i]; }
  const std::vector<Element>& coeffs() const { return c_; }

  int precision() const {
    int n = ring_.precision();
    for (const auto& a : c_) n = std::min(n, a.precision());
    return n;
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Element& a) { return a.is_zero(); });
  }

  /// Index of the last nonzero coefficient, or -1.
  int degree() const {
    for (int i = tdeg() - 1; i >= 0; --i)
      if (!c_[i].is_zero()) return i;
    return -1;
  }

  /// Minimal pi-valuation over the coefficients; empty if zero at precision.
  std::optional<int> min_valuation() const {
    std::optional<int> best;
    for (const auto& a : c_) {
      auto v = a.valuation();
      if (v && (!best || *v < *best)) best = v;
    }
    return best;
  }

  PowerSeries reduce(int n) const {
    PowerSeries r = *this;
    for (auto& a : r.c_) a = a.reduce(std::min(n, a.precision()));
    return r;
  }

  PowerSeries truncate(int tdeg) const {
    PowerSeries r(ring_, tdeg);
    for (int i = 0; i < std::min(tdeg, this->tdeg()); ++i) r.c_[i] = c_[i];
    return r;
  }

  PowerSeries operator-() const {
    PowerSeries r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
  }
  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    PowerSeries r = a;
    for (int i = 0; i < a.tdeg(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    PowerSeries r = a;
    for (int i = 0; i < a.tdeg(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    const int M = a.tdeg();
    const int da = a.degree(), db = b.degree();
    PowerSeries r(a.ring_, M);
    int prec = std::min(a.precision(), b.precision());
    for (auto& x : r.c_) x = x.with_precision(prec);
    for (int i = 0; i <= da; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = 0; j <= db && i + j < M; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend PowerSeries operator*(const Element& s, const PowerSeries& a) {
    PowerSeries r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  PowerSeries& operator+=(const PowerSeries& b) { return *this = *this + b; }
  PowerSeries& operator-=(const PowerSeries& b) { return *this = *this - b; }
  PowerSeries& operator*=(const PowerSeries& b) { return *this = *this * b; }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
    if (!(a.ring_ == b.ring_) || a.tdeg() != b.tdeg()) return false;
    for (int i = 0; i < a.tdeg(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }

  PowerSeries pow(u64 n) const {
    PowerSeries r = monomial(ring_, 0, tdeg());
    PowerSeries b = *this;
    while (n) {
      if (n & 1) r *= b;
      n >>= 1;
      if (n) b *= b;
    }
    return r;
  }

  /// Multiplicative inverse modulo T^M; requires a unit constant term.
  PowerSeries inverse() const {
    const int M = tdeg();
    Element inv0 = c_[0].inverse();
    PowerSeries r(ring_, M);
    r.c_[0] = inv0;
    const int d = degree();
    for (int k = 1; k < M; ++k) {
      Element acc = ring_.zero(precision());
      for (int i = 1; i <= std::min(k, d); ++i) acc += c_[i] * r.c_[k - i];
      r.c_[k] = -(acc * inv0);
    }
    return r;
  }

  /// Multiply by T^k (dropping overflow) or, for negative k, divide by T^{-k}
  /// discarding the low terms.
  PowerSeries shift(int k) const {
    PowerSeries r(ring_, tdeg());
    for (int i = 0; i < tdeg(); ++i) {
      int j = i + k;
      if (j >= 0 && j < tdeg()) r.c_[j] = c_[i];
    }
    return r;
  }

  /// Apply a base change to every coefficient.
  PowerSeries base_change(const RingExtension& ext) const {
    std::vector<Element> c;
    for (const auto& a : c_) c.push_back(ext.embed(a));
    return PowerSeries(ext.target, std::move(c), tdeg());
  }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i <= std::max(0, degree()); ++i) s += (i ? " + " : "") + c_[i].to_string() + "*T^" + std::to_string(i);
    return s;
  }

 private:
  static void check_same(const PowerSeries& a, const PowerSeries& b) {
    if (!(a.ring_ == b.ring_)) fail(ErrorKind::SpecMismatch, "series over different rings");
    if (a.tdeg() != b.tdeg()) fail(ErrorKind::SpecMismatch, "series with different truncation");
  }

  Ring ring_;
  std::vector<Element> c_;
};

// ---------------------------------------------------------------------------
// Binomial powers and omega_n

/// A p-adic integer known through `digits` base-p digits (little-endian).
/// Exact integers carry their value and count as known to every digit.
struct PadicExponent {
  u64 p = 0;
  std::vector<u64> digits;
  std::optional<i64> exact;

  static PadicExponent integer(u64 p, i64 v) {
    PadicExponent a;
    a.p = p;
    a.exact = v;
    return a;
  }
  static PadicExponent from_digits(u64 p, std::vector<u64> d) {
    for (u64 x : d)
      if (x >= p) fail(ErrorKind::SchemaViolation, "exponent digit not below p");
    PadicExponent a;
    a.p = p;
    a.digits = std::move(d);
    return a;
  }
  /// num/den in Z_p (den prime to p), expanded to n digits.
  static PadicExponent rational(u64 p, i64 num, i64 den, int n) {
    if (den == 0 || den % (i64)p == 0) fail(ErrorKind::InvalidSpec, "denominator must be prime to p");
    u128 m = 1;
    for (int i = 0; i < n; ++i) m *= p;
    detail::ModArith ar(m);
    // Inverse of den modulo p^n by Hensel lifting from the residue inverse.
    u128 d = ar.from_signed(den);
    u128 x = detail::fp_inv(static_cast<u64>(d % p), p);
    for (int it = 0; it < 8 * n + 8; ++it) x = ar.mul(x, ar.sub(2, ar.mul(d, x)));
    u128 v = ar.mul(ar.from_signed(num), x);
    std::vector<u64> dig;
    for (int i = 0; i < n; ++i) {
      dig.push_back(static_cast<u64>(v % p));
      v /= p;
    }
    return from_digits(p, std::move(dig));
  }

  /// Digits 0..n-1, padding exact integers; fails when fewer are known.
  std::vector<u64> first_digits(int n) const {
    if (!exact) {
      if (static_cast<int>(digits.size()) < n)
        fail(ErrorKind::InsufficientExponentPrecision,
             "exponent known to " + std::to_string(digits.size()) + " digits, " + std::to_string(n) + " needed");
      return {digits.begin(), digits.begin() + n};
    }
    u128 m = 1;
    for (int i = 0; i < n; ++i) m *= p;
    detail::ModArith ar(m);
    u128 v = ar.from_signed(*exact);
    std::vector<u64> out;
    for (int i = 0; i < n; ++i) {
      out.push_back(static_cast<u64>(v % p));
      v /= p;
    }
    return out;
  }

  /// -a; the digit form stays known to the same number of digits.
  PadicExponent operator-() const {
    if (exact) return integer(p, -*exact);
    std::vector<u64> out(digits.size());
    u64 borrow = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      u64 d = digits[i] + borrow;
      out[i] = d == 0 ? 0 : (d == p ? 0 : p - d);
      borrow = d == 0 ? 0 : 1;
    }
    return from_digits(p, std::move(out));
  }

  /// a mod p^n as an integer in [0, p^n).
  u64 residue(int n) const {
    if (n == 0) return 0;
    auto d = first_digits(n);
    u64 r = 0;
    for (int i = n - 1; i >= 0; --i) r = r * p + d[i];
    return r;
  }

  friend PadicExponent operator+(const PadicExponent& a, const PadicExponent& b) {
    if (a.exact && b.exact) return integer(a.p, *a.exact + *b.exact);
    std::size_t n = SIZE_MAX;
    if (!a.exact) n = std::min(n, a.digits.size());
    if (!b.exact) n = std::min(n, b.digits.size());
    auto da = a.first_digits(static_cast<int>(n)), db = b.first_digits(static_cast<int>(n));
    std::vector<u64> out(n);
    u64 carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      u64 s = da[i] + db[i] + carry;
      out[i] = s % a.p;
      carry = s / a.p;
    }
    return from_digits(a.p, std::move(out));
  }
};

/// Number of exponent digits that influence (1+T)^alpha mod (pi^N, T^M).
inline int binomial_digits_needed(const Ring& R, int tdeg) {
  int lg = 0;
  for (u64 v = R.p(); v <= static_cast<u64>(std::max(1, tdeg - 1)); v *= R.p()) ++lg;
  return (R.precision() + R.e() - 1) / R.e() + lg;
}

/// (1+T)^alpha by the digit expansion alpha = sum a_i p^i.
inline PowerSeries binomial_power(const Ring& R, const PadicExponent& alpha, int tdeg) {
  if (alpha.p != R.p()) fail(ErrorKind::SpecMismatch, "exponent is not over the ring prime");
  const int D = binomial_digits_needed(R, tdeg);
  auto dig = alpha.first_digits(D);
  PowerSeries base = PowerSeries::from_ints(R, {1, 1}, tdeg);
  PowerSeries r = PowerSeries::monomial(R, 0, tdeg);
  for (int i = 0; i < D; ++i) {
    if (dig[i]) r *= base.pow(dig[i]);
    if (i + 1 < D) base = base.pow(R.p());
  }
  return r;
}

inline PowerSeries binomial_power(const Ring& R, i64 alpha, int tdeg) {
  return binomial_power(R, PadicExponent::integer(R.p(), alpha), tdeg);
}

/// Exact integer coefficients of omega_n = (1+T)^{p^n} - 1, degree p^n.
inline std::vector<Element> omega_poly(const Ring& R, int n) {
  u64 d = 1;
  for (int i = 0; i < n; ++i) d *= R.p();
  std::vector<Element> c(d + 1, R.zero());
  // Pascal row mod p^K.
  const auto& ar = R.data().mod;
  std::vector<u128> row{1};
  for (u64 k = 0; k < d; ++k) {
    std::vector<u128> next(row.size() + 1, 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] = ar.add(next[i], row[i]);
      next[i + 1] = ar.add(next[i + 1], row[i]);
    }
    row = std::move(next);
  }
  for (u64 i = 1; i <= d; ++i) {
    std::vector<u128> v(R.data().dim(), 0);
    v[0] = row[i];
    c[i] = R.from_coords(std::move(v));
  }
  return c;
}

inline PowerSeries omega(const Ring& R, int n, int tdeg) {
  u64 d = 1;
  for (int i = 0; i < n; ++i) {
    d *= R.p();
    if (d > static_cast<u64>(tdeg)) break;
  }
  if (d > static_cast<u64>(tdeg))
    fail(ErrorKind::TruncationTooSmall, "omega_" + std::to_string(n) + " needs tdeg >= p^n");
  return PowerSeries(R, omega_poly(R, n), tdeg);
}

// ---------------------------------------------------------------------------
// Polynomial helpers on coefficient vectors (low-to-high).

using Poly = std::vector<Element>;

inline int poly_degree(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (!a[i].is_zero()) return i;
  return -1;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, a[0].ring().zero());
  int prec = a[0].ring().precision();
  for (const auto& x : a) prec = std::min(prec, x.precision());
  for (const auto& x : b) prec = std::min(prec, x.precision());
  for (auto& x : r) x = x.with_precision(prec);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Division by a monic polynomial: a = q*m + r with deg r < deg m.
inline std::pair<Poly, Poly> poly_divmod_monic(Poly a, const Poly& m) {
  const int dm = static_cast<int>(m.size()) - 1;
  const Ring& R = m.back().ring();
  if (static_cast<int>(a.size()) <= dm) {
    a.resize(dm, R.zero());
    return {Poly{}, a};
  }
  Poly q(a.size() - dm, R.zero());
  for (int k = static_cast<int>(a.size()) - 1; k >= dm; --k) {
    Element t = a[k];
    q[k - dm] = t;
    if (t.is_zero()) continue;
    for (int i = 0; i <= dm; ++i) a[k - dm + i] -= t * m[i];
  }
  a.resize(dm);
  return {q, a};
}

/// Phi_{p^k}(1+T) with exact integer coefficients.
inline Poly cyclotomic_shifted_poly(const Ring& R, int k) {
  if (k == 0) return {R.zero(), R.one()};
  auto c = detail::cyclotomic_shifted(R.p(), k);
  Poly out;
  for (i128 v : c) out.push_back(R.from_int(v));
  return out;
}

// ---------------------------------------------------------------------------
// Weierstrass preparation

struct WeierstrassData {
  int mu = 0;  // in pi-units
  int lambda = 0;
  PowerSeries P;
  PowerSeries U;
  int certified_precision = 0;

  Rational mu_rational() const { return Rational::make(mu, P.ring().e()); }
};

/// Coefficients exceeding the truncation are accepted here so that a unit
/// index beyond the truncation is reported as such.
inline WeierstrassData weierstrass_prepare(const Ring& R, const std::vector<Element>& coeffs, int tdeg) {
  const int M = tdeg;
  int prec = R.precision();
  for (const auto& a : coeffs) prec = std::min(prec, a.precision());
  std::optional<int> mu;
  for (const auto& a : coeffs) {
    auto v = a.valuation();
    if (v && (!mu || *v < *mu)) mu = v;
  }
  if (!mu) fail(ErrorKind::PrecisionExhausted, "series vanishes at precision " + std::to_string(prec));
  const int cert = prec - *mu;
  std::vector<Element> g;
  for (const auto& a : coeffs) g.push_back(a.reduce(std::min(a.precision(), prec)).div_pi(*mu));
  int lambda = 0;
  while (!g[lambda].is_unit()) ++lambda;
  if (lambda >= M)
    fail(ErrorKind::LambdaOverflow, "first unit coefficient at index " + std::to_string(lambda) + " >= tdeg " + std::to_string(M));
  g.resize(std::min<std::size_t>(g.size(), M), R.zero());

  // Low part A (degree < lambda) and B = g div T^lambda.
  std::optional<int> vA;
  for (int i = 0; i < lambda; ++i) {
    auto v = g[i].valuation();
    if (v && (!vA || *v < *vA)) vA = v;
  }
  // q_k depends on q_{k + lambda t} through A^t, so carry that much tail.
  const int L = M + (vA ? lambda * ((cert + *vA - 1) / *vA) : 0);
  PowerSeries B(R, L);
  for (int i = lambda; i < static_cast<int>(g.size()); ++i) B[i - lambda] = g[i];
  PowerSeries Binv = B.inverse();
  PowerSeries q = Binv;
  for (int it = 0; it <= cert + 2 && vA; ++it) {
    // tau_lambda(q*A)
    PowerSeries t(R, L);
    for (int k = 0; k < L; ++k) {
      Element acc = R.zero(cert);
      for (int i = 0; i < lambda; ++i) {
        int j = k + lambda - i;
        if (j < L) acc += q[j] * g[i];
      }
      t[k] = acc;
    }
    PowerSeries next = Binv * (PowerSeries::monomial(R, 0, L) - t);
    next = next.reduce(cert);
    bool same = next == q.reduce(cert);
    q = next;
    if (same) break;
  }
  q = q.reduce(cert);
  WeierstrassData w;
  w.mu = *mu;
  w.lambda = lambda;
  w.certified_precision = cert;
  w.P = PowerSeries(R, M);
  for (int k = 0; k < lambda; ++k) {
    Element acc = R.zero(cert);
    for (int i = 0; i <= k; ++i) acc += q[k - i] * g[i];
    w.P[k] = acc;
  }
  if (lambda < M) w.P[lambda] = R.one();
  w.U = q.truncate(M).inverse().reduce(cert);
  return w;
}

inline WeierstrassData weierstrass_prepare(const PowerSeries& f) {
  return weierstrass_prepare(f.ring(), f.coeffs(), f.tdeg());
}

/// Coefficients of the distinguished polynomial as a degree-lambda polynomial.
inline Poly distinguished_poly(const WeierstrassData& w) {
  Poly P;
  for (int i = 0; i <= w.lambda; ++i) P.push_back(w.P[i]);
  return P;
}

/// pi^mu * U * P, the reconstruction of a prepared series.
inline PowerSeries reconstruct(const WeierstrassData& w) {
  PowerSeries r = w.U * w.P;
  for (int i = 0; i < r.tdeg(); ++i) r[i] = r[i].mul_pi(w.mu);
  return r.reduce(w.certified_precision + w.mu);
}

// ---------------------------------------------------------------------------
// Division in O[[T]]

/// h / g when g divides h; NotDivisible otherwise. Precision drops by mu(g).
inline PowerSeries series_divide(const PowerSeries& h, const PowerSeries& g) {
  if (!(h.ring() == g.ring()) || h.tdeg() != g.tdeg()) fail(ErrorKind::SpecMismatch, "division of incompatible series");
  const Ring& R = h.ring();
  const int M = h.tdeg();
  WeierstrassData w = weierstrass_prepare(g);
  int prec = std::min(h.precision(), w.certified_precision + w.mu);
  Poly hp;
  for (int i = 0; i < M; ++i) {
    Element a = h[i].reduce(std::min(prec, h[i].precision()));
    auto v = a.valuation();
    if (v && *v < w.mu) fail(ErrorKind::NotDivisible, "dividend not divisible by pi^" + std::to_string(w.mu));
    hp.push_back(a.div_pi(w.mu));
  }
  auto [Q, Rm] = poly_divmod_monic(hp, distinguished_poly(w));
  for (const auto& r : Rm)
    if (!r.is_zero()) fail(ErrorKind::NotDivisible, "distinguished part does not divide the dividend");
  PowerSeries qs(R, std::move(Q), M);
  return (w.U.inverse() * qs).reduce(prec - w.mu);
}

// ---------------------------------------------------------------------------
// Evaluation

/// f(x) for x in the maximal ideal (or zero at precision).
inline Element eval_at(const PowerSeries& f, const Element& x) {
  if (!(f.ring() == x.ring())) fail(ErrorKind::SpecMismatch, "evaluation point in a different ring");
  auto v = x.valuation();
  int vx = v ? *v : x.precision();
  if (vx == 0) fail(ErrorKind::NotInMaximalIdeal, "evaluation point is a unit");
  const int deg = f.degree();
  Element acc = f.ring().zero(f.precision());
  for (int i = deg; i >= 0; --i) acc = acc * x + f[i];
  long tail = static_cast<long>(f.tdeg()) * vx;
  int prec = static_cast<int>(std::min<long>(acc.precision(), tail));
  return acc.reduce(prec);
}

}  // namespace padic
