#pragma once

// Canonical JSON documents for every value type. Encoders emit a fixed field
// order; decoders report the JSON path of the first offending field.

#include <json.hpp>

#include <string>
#include <vector>

#include "padic/eulerfam.hpp"
#include "padic/iwmod.hpp"
#include "padic/promeasure.hpp"

namespace padic::codec {

using Json = nlohmann::ordered_json;

/// Defaults applied to fields a document leaves out.
struct Defaults {
  int precision = 32;
  int tdeg = 64;
};

namespace detail {

[[noreturn]] inline void schema(const std::string& path, const std::string& msg) {
  fail(ErrorKind::SchemaViolation, (path.empty() ? "/" : path) + ": " + msg);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path + "/" + key, "missing field");
  return *it;
}

inline bool has(const Json& j, const std::string& key) { return j.is_object() && j.contains(key); }

inline i64 as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<i64>();
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

inline std::vector<i64> int_list(const Json& j, const std::string& path) {
  std::vector<i64> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) out.push_back(as_int(j[i], path + "/" + std::to_string(i)));
  return out;
}

/// Re-raise a library error with the document path in front.
template <class F>
auto at_path(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaViolation) throw;
    fail(e.kind(), (path.empty() ? "/" : path) + ": " + e.detail());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rings and elements

inline Json encode_ring(const Ring& R) {
  const RingSpec& s = R.spec();
  Json j;
  j["p"] = s.p;
  j["unram"] = s.unram;
  j["eisenstein"] = s.eisenstein;
  j["cyclotomic"] = s.cyclotomic;
  j["prec"] = s.precision;
  return j;
}

inline Ring decode_ring(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  RingSpec s;
  i64 p = as_int(field(j, "p", path), path + "/p");
  if (p < 2) schema(path + "/p", "prime expected");
  s.p = static_cast<u64>(p);
  if (has(j, "unram")) s.unram = int_list(j["unram"], path + "/unram");
  if (has(j, "cyclotomic")) s.cyclotomic = static_cast<int>(as_int(j["cyclotomic"], path + "/cyclotomic"));
  if (has(j, "eisenstein")) {
    const Json& e = as_array(j["eisenstein"], path + "/eisenstein");
    s.eisenstein.clear();
    for (std::size_t i = 0; i < e.size(); ++i) s.eisenstein.push_back(int_list(e[i], path + "/eisenstein/" + std::to_string(i)));
  } else if (s.cyclotomic == 0) {
    s.eisenstein = {{-p}, {1}};
  }
  s.precision = has(j, "prec") ? static_cast<int>(as_int(j["prec"], path + "/prec")) : d.precision;
  if (s.precision < 1) schema(path + "/prec", "precision must be positive");
  return at_path(path, [&] { return Ring::make(s); });
}

/// {coords: [[base-p digits, little-endian]...], prec}; coordinate j*f+i holds
/// the pi^j x^i part and has exactly as many digits as the precision allows.
inline Json encode_element(const Element& a) {
  const auto& d = a.ring().data();
  const u64 p = a.ring().p();
  Json coords = Json::array();
  for (int j = 0; j < d.e; ++j)
    for (int i = 0; i < d.f; ++i) {
      u128 v = a.coords()[j * d.f + i];
      Json digits = Json::array();
      for (int k = 0; k < d.digits_for(a.precision(), j); ++k) {
        digits.push_back(static_cast<u64>(v % p));
        v /= p;
      }
      coords.push_back(digits);
    }
  Json j;
  j["coords"] = coords;
  j["prec"] = a.precision();
  return j;
}

/// Accepts the canonical object or a plain integer.
inline Element decode_element(const Ring& R, const Json& j, const std::string& path) {
  using namespace detail;
  if (j.is_number_integer()) return R.from_int(j.get<i64>());
  const auto& d = R.data();
  const u64 p = R.p();
  int prec = has(j, "prec") ? static_cast<int>(as_int(j["prec"], path + "/prec")) : R.precision();
  if (prec < 0 || prec > R.precision()) schema(path + "/prec", "precision outside 0.." + std::to_string(R.precision()));
  const Json& c = as_array(field(j, "coords", path), path + "/coords");
  if (static_cast<int>(c.size()) != d.dim()) schema(path + "/coords", "expected " + std::to_string(d.dim()) + " coordinates");
  std::vector<u128> coords(d.dim(), 0);
  for (int j2 = 0; j2 < d.e; ++j2)
    for (int i = 0; i < d.f; ++i) {
      const int idx = j2 * d.f + i;
      const std::string cp = path + "/coords/" + std::to_string(idx);
      const Json& digits = as_array(c[idx], cp);
      if (static_cast<int>(digits.size()) > d.digits_for(prec, j2)) schema(cp, "more digits than the precision allows");
      u128 v = 0;
      for (std::size_t k = digits.size(); k-- > 0;) {
        i64 x = as_int(digits[k], cp + "/" + std::to_string(k));
        if (x < 0 || static_cast<u64>(x) >= p) schema(cp + "/" + std::to_string(k), "digit not in 0..p-1");
        v = v * p + static_cast<u64>(x);
      }
      coords[idx] = v;
    }
  return R.from_coords(std::move(coords), prec);
}

// ---------------------------------------------------------------------------
// Series

/// Coefficients up to the last one that is not an exact zero.
inline Json encode_coeffs(const PowerSeries& f) {
  int last = f.tdeg();
  while (last > 0 && f[last - 1].is_zero() && f[last - 1].precision() == f.ring().precision()) --last;
  Json c = Json::array();
  for (int i = 0; i < last; ++i) c.push_back(encode_element(f[i]));
  return c;
}

inline PowerSeries decode_coeffs(const Ring& R, int tdeg, const Json& j, const std::string& path) {
  const Json& c = detail::as_array(j, path);
  if (static_cast<int>(c.size()) > tdeg) detail::schema(path, "more coefficients than tdeg");
  std::vector<Element> co;
  for (std::size_t i = 0; i < c.size(); ++i) co.push_back(decode_element(R, c[i], path + "/" + std::to_string(i)));
  return PowerSeries(R, std::move(co), tdeg);
}

inline Json encode_series(const PowerSeries& f) {
  Json j;
  j["ring"] = encode_ring(f.ring());
  j["coeffs"] = encode_coeffs(f);
  j["tdeg"] = f.tdeg();
  return j;
}

inline PowerSeries decode_series(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  Ring R = decode_ring(field(j, "ring", path), path + "/ring", d);
  int M = has(j, "tdeg") ? static_cast<int>(as_int(j["tdeg"], path + "/tdeg")) : d.tdeg;
  if (M < 1) schema(path + "/tdeg", "tdeg must be positive");
  return decode_coeffs(R, M, field(j, "coeffs", path), path + "/coeffs");
}

inline Json encode_poly(const Poly& P) {
  Json c = Json::array();
  for (const auto& a : P) c.push_back(encode_element(a));
  return c;
}

inline Json encode_weierstrass(const WeierstrassData& w) {
  Json j;
  j["ring"] = encode_ring(w.P.ring());
  j["tdeg"] = w.P.tdeg();
  j["mu"] = w.mu;
  j["lambda"] = w.lambda;
  j["P"] = encode_coeffs(w.P);
  j["U"] = encode_coeffs(w.U);
  j["certified_precision"] = w.certified_precision;
  return j;
}

// ---------------------------------------------------------------------------
// Groups, characters, distributions

inline Json encode_group(const FiniteAbelianGroup& G) {
  Json j;
  j["orders"] = G.orders();
  return j;
}

inline FiniteAbelianGroup decode_group(const Json& j, const std::string& path) {
  auto o = detail::int_list(detail::field(j, "orders", path), path + "/orders");
  for (std::size_t i = 0; i < o.size(); ++i)
    if (o[i] < 1) detail::schema(path + "/orders/" + std::to_string(i), "order must be positive");
  return FiniteAbelianGroup(o);
}

inline GroupElement decode_group_element(const FiniteAbelianGroup& G, const Json& j, const std::string& path) {
  GroupElement g = detail::int_list(j, path);
  detail::at_path(path, [&] { G.check(g); return 0; });
  return g;
}

inline Json encode_morphism(const GroupMorphism& phi) {
  Json j;
  j["domain"] = encode_group(phi.domain());
  j["codomain"] = encode_group(phi.codomain());
  Json im = Json::array();
  for (int i = 0; i < phi.domain().rank(); ++i) im.push_back(phi(phi.domain().generator(i)));
  j["images"] = im;
  return j;
}

inline GroupMorphism decode_morphism(const Json& j, const std::string& path) {
  using namespace detail;
  auto D = decode_group(field(j, "domain", path), path + "/domain");
  auto C = decode_group(field(j, "codomain", path), path + "/codomain");
  const Json& im = as_array(field(j, "images", path), path + "/images");
  std::vector<GroupElement> imgs;
  for (std::size_t i = 0; i < im.size(); ++i) imgs.push_back(int_list(im[i], path + "/images/" + std::to_string(i)));
  return at_path(path, [&] { return GroupMorphism(D, C, imgs); });
}

inline Json encode_character(const Character& chi) {
  Json j;
  j["group"] = encode_group(chi.group());
  j["exponents"] = chi.exponents();
  return j;
}

inline Character decode_character(const Json& j, const std::string& path) {
  auto G = decode_group(detail::field(j, "group", path), path + "/group");
  auto e = detail::int_list(detail::field(j, "exponents", path), path + "/exponents");
  return detail::at_path(path, [&] { return Character(G, e); });
}

inline Json encode_distribution(const Distribution& mu) {
  Json j;
  j["group"] = encode_group(mu.group());
  j["ring"] = encode_ring(mu.ring());
  Json v = Json::array();
  for (const auto& a : mu.values()) v.push_back(encode_element(a));
  j["values"] = v;
  return j;
}

inline Distribution decode_distribution(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  auto G = decode_group(field(j, "group", path), path + "/group");
  Ring R = decode_ring(field(j, "ring", path), path + "/ring", d);
  const Json& v = as_array(field(j, "values", path), path + "/values");
  if (static_cast<i64>(v.size()) != G.size()) schema(path + "/values", "expected " + std::to_string(G.size()) + " values");
  std::vector<Element> vals;
  for (std::size_t i = 0; i < v.size(); ++i) vals.push_back(decode_element(R, v[i], path + "/values/" + std::to_string(i)));
  return Distribution(G, R, std::move(vals));
}

// ---------------------------------------------------------------------------
// Measures

inline Json encode_measure(const ProMeasure& mu) {
  Json j;
  j["ring"] = encode_ring(mu.ring());
  j["tdeg"] = mu.tdeg();
  j["delta"] = encode_group(mu.delta());
  j["gamma"] = Json{{"label", mu.gamma().label}};
  Json s = Json::array();
  for (i64 i = 0; i < mu.delta().size(); ++i)
    s.push_back(Json{{"at", mu.delta().element(i)}, {"coeffs", encode_coeffs(mu.series()[i])}});
  j["series"] = s;
  return j;
}

/// Delta elements left out of `series` carry the zero series.
inline ProMeasure decode_measure(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  Ring R = decode_ring(field(j, "ring", path), path + "/ring", d);
  int M = has(j, "tdeg") ? static_cast<int>(as_int(j["tdeg"], path + "/tdeg")) : d.tdeg;
  if (M < 1) schema(path + "/tdeg", "tdeg must be positive");
  auto D = decode_group(field(j, "delta", path), path + "/delta");
  GammaContext g;
  if (has(j, "gamma")) g.label = as_string(field(j["gamma"], "label", path + "/gamma"), path + "/gamma/label");
  std::vector<PowerSeries> s(D.size(), PowerSeries(R, M));
  std::vector<bool> seen(D.size(), false);
  const Json& arr = as_array(field(j, "series", path), path + "/series");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string ep = path + "/series/" + std::to_string(k);
    GroupElement at = decode_group_element(D, field(arr[k], "at", ep), ep + "/at");
    i64 idx = D.index_of(at);
    if (seen[idx]) schema(ep + "/at", "Delta element listed twice");
    seen[idx] = true;
    s[idx] = decode_coeffs(R, M, field(arr[k], "coeffs", ep), ep + "/coeffs");
  }
  return ProMeasure(D, std::move(s), g);
}

inline Json encode_pseudo(const PseudoMeasure& nu) {
  Json j;
  j["num"] = encode_measure(nu.num);
  j["den"] = encode_coeffs(nu.den);
  return j;
}

inline PseudoMeasure decode_pseudo(const Json& j, const std::string& path, const Defaults& d = {}) {
  ProMeasure num = decode_measure(detail::field(j, "num", path), path + "/num", d);
  PowerSeries den = decode_coeffs(num.ring(), num.tdeg(), detail::field(j, "den", path), path + "/den");
  return {num, den};
}

inline Json encode_exponent(const PadicExponent& a) {
  if (a.exact) return Json{{"int", *a.exact}};
  return Json{{"digits", a.digits}};
}

inline PadicExponent decode_exponent(u64 p, const Json& j, const std::string& path) {
  using namespace detail;
  if (j.is_number_integer()) return PadicExponent::integer(p, j.get<i64>());
  if (has(j, "int")) return PadicExponent::integer(p, as_int(j["int"], path + "/int"));
  auto dg = int_list(field(j, "digits", path), path + "/digits");
  std::vector<u64> u;
  for (std::size_t i = 0; i < dg.size(); ++i) {
    if (dg[i] < 0 || static_cast<u64>(dg[i]) >= p) schema(path + "/digits/" + std::to_string(i), "digit not in 0..p-1");
    u.push_back(static_cast<u64>(dg[i]));
  }
  return PadicExponent::from_digits(p, std::move(u));
}

// ---------------------------------------------------------------------------
// Modules

inline Json encode_presentation(const ModulePresentation& m) {
  Json j;
  j["ring"] = encode_ring(m.ring());
  j["tdeg"] = m.tdeg();
  Json rows = Json::array();
  for (const auto& r : m.rows) {
    Json row = Json::array();
    for (const auto& f : r) row.push_back(encode_coeffs(f));
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["non_torsion"] = m.non_torsion;
  return j;
}

inline ModulePresentation decode_presentation(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  Ring R = decode_ring(field(j, "ring", path), path + "/ring", d);
  int M = has(j, "tdeg") ? static_cast<int>(as_int(j["tdeg"], path + "/tdeg")) : d.tdeg;
  ModulePresentation m;
  const Json& rows = as_array(field(j, "rows", path), path + "/rows");
  if (rows.empty()) schema(path + "/rows", "at least one relation required");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = path + "/rows/" + std::to_string(r);
    const Json& row = as_array(rows[r], rp);
    if (row.size() != as_array(rows[0], path + "/rows/0").size() || row.empty()) schema(rp, "rows must have equal positive length");
    std::vector<PowerSeries> out;
    for (std::size_t c = 0; c < row.size(); ++c) out.push_back(decode_coeffs(R, M, row[c], rp + "/" + std::to_string(c)));
    m.rows.push_back(std::move(out));
  }
  if (has(j, "non_torsion")) {
    if (!j["non_torsion"].is_boolean()) schema(path + "/non_torsion", "expected a boolean");
    m.non_torsion = j["non_torsion"].get<bool>();
  }
  return m;
}

/// Rows of measures on a common Delta: {ring, tdeg, delta, rows: [[measure series lists]]}.
inline GroupRingPresentation decode_group_presentation(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  Json base;
  base["ring"] = field(j, "ring", path);
  if (has(j, "tdeg")) base["tdeg"] = j["tdeg"];
  base["delta"] = field(j, "delta", path);
  auto D = decode_group(j["delta"], path + "/delta");
  GroupRingPresentation g{D, {}};
  const Json& rows = as_array(field(j, "rows", path), path + "/rows");
  if (rows.empty()) schema(path + "/rows", "at least one relation required");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = path + "/rows/" + std::to_string(r);
    std::vector<ProMeasure> row;
    for (std::size_t c = 0; c < as_array(rows[r], rp).size(); ++c) {
      Json m = base;
      m["series"] = rows[r][c];
      row.push_back(decode_measure(m, rp + "/" + std::to_string(c), d));
    }
    if (row.empty() || row.size() != rows[0].size()) schema(rp, "rows must have equal positive length");
    g.rows.push_back(std::move(row));
  }
  return g;
}

inline Json encode_group_presentation(const GroupRingPresentation& g) {
  Json j;
  j["ring"] = encode_ring(g.ring());
  j["tdeg"] = g.tdeg();
  j["delta"] = encode_group(g.delta);
  Json rows = Json::array();
  for (const auto& r : g.rows) {
    Json row = Json::array();
    for (const auto& m : r) row.push_back(encode_measure(m)["series"]);
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

inline Json encode_char_gen(const CharIdealGen& c) {
  Json j;
  j["vanishes"] = c.vanishes;
  j["mu"] = c.mu;
  j["lambda"] = c.vanishes ? 0 : c.lambda();
  j["P"] = encode_poly(c.P);
  j["up_to_uniformizer"] = c.up_to_uniformizer;
  j["certified_precision"] = c.certified_precision;
  return j;
}

inline Json encode_certificate(const FinitenessCertificate& c) {
  Json j;
  j["status"] = std::string(to_string(c.status));
  j["orders"] = c.orders;
  j["witness_level"] = c.witness_level;
  j["witness_power"] = c.witness_power;
  j["certified_precision"] = c.certified_precision;
  return j;
}

// ---------------------------------------------------------------------------
// Scenarios: poset, nodes with Frobenius tables, measures, psi symbols

struct Scenario {
  MeasureFamily family;
  std::vector<PsiSymbol> psi;
};

inline Json encode_scenario(const Scenario& sc) {
  const auto& fam = sc.family;
  const ProMeasure& any = fam.measures.empty() ? fam.trivial_measure().num : fam.measures.begin()->second;
  Json j;
  j["ring"] = encode_ring(any.ring());
  j["tdeg"] = any.tdeg();
  Json nodes = Json::array();
  for (const auto& n : fam.poset.nodes) {
    Json nj;
    nj["label"] = n.label;
    nj["primes"] = n.primes;
    nj["delta"] = encode_group(n.delta);
    Json fr = Json::object();
    for (const auto& [l, f] : n.frobenius) fr[l] = Json{{"delta", f.delta}, {"gamma", encode_exponent(f.gamma)}};
    nj["frobenius"] = fr;
    nj["w"] = n.w;
    Json J = Json::array();
    for (const auto& x : n.J_generators) J.push_back(encode_measure(x)["series"]);
    nj["J"] = J;
    nodes.push_back(nj);
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& e : fam.poset.edges) {
    Json im = Json::array();
    for (int i = 0; i < e.projection.domain().rank(); ++i) im.push_back(e.projection(e.projection.domain().generator(i)));
    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"images", im}});
  }
  j["edges"] = edges;
  Json ms = Json::object();
  for (const auto& n : fam.poset.nodes) {
    auto it = fam.measures.find(n.label);
    if (it != fam.measures.end()) ms[n.label] = encode_measure(it->second)["series"];
  }
  j["measures"] = ms;
  if (fam.trivial)
    j["trivial"] = Json{{"num", encode_measure(fam.trivial->num)["series"]}, {"den", encode_coeffs(fam.trivial->den)}};
  Json ps = Json::array();
  for (const auto& s : sc.psi) ps.push_back(Json{{"node", s.node}, {"ideal", s.ideal}, {"norm", s.norm}});
  j["psi"] = ps;
  return j;
}

inline Scenario decode_scenario(const Json& j, const std::string& path, const Defaults& d = {}) {
  using namespace detail;
  Ring R = decode_ring(field(j, "ring", path), path + "/ring", d);
  int M = has(j, "tdeg") ? static_cast<int>(as_int(j["tdeg"], path + "/tdeg")) : d.tdeg;
  Scenario sc;
  auto& P = sc.family.poset;
  auto measure_on = [&](const FiniteAbelianGroup& D, const Json& series, const std::string& p) {
    Json m;
    m["ring"] = encode_ring(R);
    m["tdeg"] = M;
    m["delta"] = encode_group(D);
    m["series"] = series;
    return decode_measure(m, p, d);
  };
  const Json& nodes = as_array(field(j, "nodes", path), path + "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string np = path + "/nodes/" + std::to_string(i);
    const Json& nj = nodes[i];
    ModulusNode n;
    n.label = as_string(field(nj, "label", np), np + "/label");
    if (P.find(n.label)) schema(np + "/label", "duplicate node label");
    const Json& pr = as_array(field(nj, "primes", np), np + "/primes");
    for (std::size_t k = 0; k < pr.size(); ++k) n.primes.push_back(as_string(pr[k], np + "/primes/" + std::to_string(k)));
    n.delta = decode_group(field(nj, "delta", np), np + "/delta");
    if (has(nj, "frobenius")) {
      const Json& fr = nj["frobenius"];
      if (!fr.is_object()) schema(np + "/frobenius", "expected an object");
      for (auto it = fr.begin(); it != fr.end(); ++it) {
        const std::string fp = np + "/frobenius/" + it.key();
        FrobeniusDatum f;
        f.delta = decode_group_element(n.delta, field(it.value(), "delta", fp), fp + "/delta");
        f.gamma = decode_exponent(R.p(), field(it.value(), "gamma", fp), fp + "/gamma");
        n.frobenius.emplace(it.key(), f);
      }
    }
    if (has(nj, "w")) n.w = as_int(nj["w"], np + "/w");
    if (has(nj, "J")) {
      const Json& J = as_array(nj["J"], np + "/J");
      for (std::size_t k = 0; k < J.size(); ++k) n.J_generators.push_back(measure_on(n.delta, J[k], np + "/J/" + std::to_string(k)));
    }
    P.nodes.push_back(std::move(n));
  }
  const Json& edges = as_array(field(j, "edges", path), path + "/edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ep = path + "/edges/" + std::to_string(i);
    std::string from = as_string(field(edges[i], "from", ep), ep + "/from");
    std::string to = as_string(field(edges[i], "to", ep), ep + "/to");
    const ModulusNode* a = P.find(from);
    const ModulusNode* b = P.find(to);
    if (!a) schema(ep + "/from", "unknown node '" + from + "'");
    if (!b) schema(ep + "/to", "unknown node '" + to + "'");
    const Json& im = as_array(field(edges[i], "images", ep), ep + "/images");
    std::vector<GroupElement> imgs;
    for (std::size_t k = 0; k < im.size(); ++k) imgs.push_back(int_list(im[k], ep + "/images/" + std::to_string(k)));
    GroupMorphism phi = at_path(ep + "/images", [&] { return GroupMorphism(a->delta, b->delta, imgs); });
    P.edges.push_back({from, to, phi});
  }
  if (has(j, "measures")) {
    const Json& ms = j["measures"];
    if (!ms.is_object()) schema(path + "/measures", "expected an object");
    for (auto it = ms.begin(); it != ms.end(); ++it) {
      const ModulusNode* n = P.find(it.key());
      if (!n) schema(path + "/measures/" + it.key(), "unknown node");
      sc.family.measures.emplace(it.key(), measure_on(n->delta, it.value(), path + "/measures/" + it.key()));
    }
  }
  if (has(j, "trivial")) {
    const std::string tp = path + "/trivial";
    const ModulusNode* triv = nullptr;
    for (const auto& n : P.nodes)
      if (n.is_trivial()) triv = &n;
    if (!triv) schema(tp, "no node without primes");
    ProMeasure num = measure_on(triv->delta, field(j["trivial"], "num", tp), tp + "/num");
    sc.family.trivial = PseudoMeasure{num, decode_coeffs(R, M, field(j["trivial"], "den", tp), tp + "/den")};
  }
  if (has(j, "psi")) {
    const Json& ps = as_array(j["psi"], path + "/psi");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string sp = path + "/psi/" + std::to_string(i);
      sc.psi.push_back({as_string(field(ps[i], "node", sp), sp + "/node"), as_string(field(ps[i], "ideal", sp), sp + "/ideal"),
                        as_int(field(ps[i], "norm", sp), sp + "/norm")});
    }
  }
  at_path(path, [&] { P.validate(); return 0; });
  return sc;
}

}  // namespace padic::codec
