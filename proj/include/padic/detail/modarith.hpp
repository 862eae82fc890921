#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "padic/error.hpp"

namespace padic {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

namespace detail {

/// Residues modulo a fixed m < 2^126. Moduli below 2^64 take the native
/// 128-bit product path; larger ones go through a 256-bit intermediate.
class ModArith {
 public:
  ModArith() = default;
  explicit ModArith(u128 m) : m_(m), small_(m <= (u128)UINT64_MAX) {
    if (m < 2 || (m >> 126) != 0) fail(ErrorKind::InvalidSpec, "modulus out of supported range");
  }

  u128 modulus() const noexcept { return m_; }

  u128 add(u128 a, u128 b) const noexcept {
    u128 s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  u128 sub(u128 a, u128 b) const noexcept { return a >= b ? a - b : a + (m_ - b); }
  u128 neg(u128 a) const noexcept { return a == 0 ? 0 : m_ - a; }

  u128 mul(u128 a, u128 b) const {
    if (small_) return ((u128)(u64)a * (u64)b) % m_;
    using boost::multiprecision::uint256_t;
    uint256_t r = (uint256_t(to_mp(a)) * to_mp(b)) % to_mp(m_);
    return from_mp(r);
  }

  u128 from_signed(i128 v) const noexcept {
    if (v >= 0) return (u128)v % m_;
    u128 r = (u128)(-v) % m_;
    return r == 0 ? 0 : m_ - r;
  }

 private:
  static boost::multiprecision::uint256_t to_mp(u128 v) {
    boost::multiprecision::uint256_t r = (u64)(v >> 64);
    r <<= 64;
    r += (u64)v;
    return r;
  }
  static u128 from_mp(const boost::multiprecision::uint256_t& v) {
    u64 lo = static_cast<u64>(v & UINT64_MAX);
    u64 hi = static_cast<u64>((v >> 64) & UINT64_MAX);
    return ((u128)hi << 64) | lo;
  }

  u128 m_ = 2;
  bool small_ = true;
};

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), char('0' + int(v % 10)));
    v /= 10;
  }
  return s;
}

// ---- polynomials over F_p, low-to-high coefficient vectors ----

using FpPoly = std::vector<u64>;

inline void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 fp_pow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = (u64)((u128)r * a % p);
    a = (u64)((u128)a * a % p);
    e >>= 1;
  }
  return r;
}

inline u64 fp_inv(u64 a, u64 p) { return fp_pow(a, p - 2, p); }

inline FpPoly fp_mod(FpPoly a, const FpPoly& m, u64 p) {
  fp_trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 lead_inv = fp_inv(m.back(), p);
  while (a.size() > dm) {
    u64 t = (u64)((u128)a.back() * lead_inv % p);
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = (a[shift + i] + p - (u64)((u128)t * m[i] % p)) % p;
    fp_trim(a);
  }
  return a;
}

inline FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + (u64)((u128)a[i] * b[j] % p)) % p;
  return fp_mod(std::move(r), m, p);
}

inline FpPoly fp_powmod(FpPoly a, u64 e, const FpPoly& m, u64 p) {
  FpPoly r = fp_mod({1}, m, p);
  a = fp_mod(std::move(a), m, p);
  while (e) {
    if (e & 1) r = fp_mulmod(r, a, m, p);
    a = fp_mulmod(a, a, m, p);
    e >>= 1;
  }
  return r;
}

inline FpPoly fp_sub(FpPoly a, const FpPoly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  fp_trim(a);
  return a;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, u64 p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: m of degree f is irreducible over F_p iff x^(p^f) = x mod m
/// and gcd(x^(p^(f/r)) - x, m) = 1 for every prime r | f.
inline bool fp_irreducible(FpPoly m, u64 p) {
  fp_trim(m);
  if (m.size() < 2) return false;
  const u64 f = m.size() - 1;
  if (f == 1) return true;
  auto frob_iter = [&](u64 times) {
    FpPoly x = fp_mod({0, 1}, m, p);
    for (u64 i = 0; i < times; ++i) x = fp_powmod(x, p, m, p);
    return x;
  };
  const FpPoly x = fp_mod({0, 1}, m, p);
  if (fp_sub(frob_iter(f), x, p).size() != 0) return false;
  for (u64 r : prime_factors(f)) {
    FpPoly h = fp_sub(frob_iter(f / r), x, p);
    FpPoly g = fp_gcd(m, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail
}  // namespace padic
