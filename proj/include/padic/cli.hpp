#pragma once

// Verb dispatch for the command-line tool. Each verb decodes its input
// document, calls one library operation and encodes the result.

#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <thread>

#include "padic/codec.hpp"

namespace padic::cli {

using codec::Json;

enum class Status { Ok, Inconclusive, NotFinite, Error };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Inconclusive: return "inconclusive";
    case Status::NotFinite: return "not-finite";
    case Status::Error: return "error";
  }
  return "?";
}

inline int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return 0;
    case Status::Inconclusive: return 2;
    case Status::NotFinite: return 3;
    case Status::Error: return 1;
  }
  return 1;
}

/// Batch severity: error over not-finite over inconclusive over ok.
inline Status worst(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::Ok: return 0;
      case Status::Inconclusive: return 1;
      case Status::NotFinite: return 2;
      case Status::Error: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

struct Outcome {
  Json payload;
  Status status = Status::Ok;
  int certified_precision = 0;
};

struct Result {
  Json document;
  Status status = Status::Ok;
  int exit() const { return exit_code(status); }
};

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
inline std::string digest(const Json& j) {
  u64 h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

using codec::Defaults;
using codec::detail::as_int;
using codec::detail::field;
using codec::detail::has;

inline int int_field(const Json& in, const std::string& key) {
  return static_cast<int>(as_int(field(in, key, ""), "/" + key));
}

/// zeta = W_k^j in the smallest tower ring holding p^k-th roots.
struct TowerPoint {
  RootTower tower;
  Element zeta;
};

inline TowerPoint tower_point(const Ring& R, const Json& z, const std::string& path) {
  int k = static_cast<int>(as_int(field(z, "level", path), path + "/level"));
  i64 j = has(z, "power") ? as_int(z["power"], path + "/power") : 1;
  if (k < 0) codec::detail::schema(path + "/level", "level must be nonnegative");
  TowerPoint t{root_tower(R, k), {}};
  const Ring& S = t.tower.target(R);
  i64 pk = 1;
  for (int i = 0; i < k; ++i) pk *= static_cast<i64>(R.p());
  t.zeta = S.wild_root(k).pow(static_cast<u64>(((j % pk) + pk) % pk));
  return t;
}

inline ProMeasure lift(const ProMeasure& mu, const RootTower& t) { return t.trivial ? mu : base_change(mu, t.ext); }

inline Status order_status(OrderStatus s) {
  return s == OrderStatus::Finite ? Status::Ok : s == OrderStatus::NotFinite ? Status::NotFinite : Status::Inconclusive;
}

inline Status finiteness_status(FinitenessStatus s) {
  return s == FinitenessStatus::Certified ? Status::Ok
         : s == FinitenessStatus::NotFinite ? Status::NotFinite
                                            : Status::Inconclusive;
}

inline std::string_view order_name(OrderStatus s) {
  return s == OrderStatus::Finite ? "finite" : s == OrderStatus::NotFinite ? "not-finite" : "inconclusive";
}

inline std::string_view coprime_name(CoprimeStatus s) {
  return s == CoprimeStatus::Certified ? "certified" : s == CoprimeStatus::NotCoprime ? "not-coprime" : "inconclusive";
}

// --- verbs ----------------------------------------------------------------

inline Outcome ring_info(const Json& in, const Defaults& d) {
  Ring R = codec::decode_ring(field(in, "ring", ""), "/ring", d);
  Json j;
  j["ring"] = codec::encode_ring(R);
  j["e"] = R.e();
  j["f"] = R.f();
  j["residue_size"] = R.residue_size();
  j["wild_level"] = R.wild_level();
  j["uniformizer"] = codec::encode_element(R.uniformizer());
  return {j, Status::Ok, R.precision()};
}

inline Outcome series_prep(const Json& in, const Defaults& d) {
  auto f = codec::decode_series(field(in, "series", ""), "/series", d);
  auto w = weierstrass_prepare(f);
  return {codec::encode_weierstrass(w), Status::Ok, w.certified_precision};
}

inline Outcome series_eval(const Json& in, const Defaults& d) {
  auto f = codec::decode_series(field(in, "series", ""), "/series", d);
  Element x = codec::decode_element(f.ring(), field(in, "point", ""), "/point");
  Element v = eval_at(f, x);
  return {Json{{"value", codec::encode_element(v)}}, Status::Ok, v.precision()};
}

inline Outcome series_order(const Json& in, const Defaults& d) {
  auto f = codec::decode_series(field(in, "series", ""), "/series", d);
  auto q = quotient_order(f, int_field(in, "n"));
  Json j;
  j["status"] = std::string(order_name(q.status));
  j["exponent"] = q.exponent;
  j["witness_level"] = q.witness_level;
  return {j, order_status(q.status), q.certified_precision};
}

inline Outcome series_coprime(const Json& in, const Defaults& d) {
  auto f = codec::decode_series(field(in, "f", ""), "/f", d);
  auto g = codec::decode_series(field(in, "g", ""), "/g", d);
  auto c = coprimality_certificate(f, g);
  Json j;
  j["status"] = std::string(coprime_name(c.status));
  j["order_exponent"] = c.order_exponent;
  j["witness"] = codec::encode_poly(c.witness);
  Status s = c.status == CoprimeStatus::Certified ? Status::Ok
             : c.status == CoprimeStatus::NotCoprime ? Status::NotFinite
                                                     : Status::Inconclusive;
  return {j, s, std::min(f.precision(), g.precision())};
}

inline Outcome dist_push(const Json& in, const Defaults& d) {
  auto mu = codec::decode_distribution(field(in, "distribution", ""), "/distribution", d);
  auto phi = codec::decode_morphism(field(in, "morphism", ""), "/morphism");
  auto r = pushforward(phi, mu);
  return {codec::encode_distribution(r), Status::Ok, mu.ring().precision()};
}

inline Outcome dist_pull(const Json& in, const Defaults& d) {
  auto mu = codec::decode_distribution(field(in, "distribution", ""), "/distribution", d);
  auto phi = codec::decode_morphism(field(in, "morphism", ""), "/morphism");
  auto r = pullback_sharp(phi, mu);
  return {codec::encode_distribution(r), Status::Ok, mu.ring().precision()};
}

inline Outcome dist_conv(const Json& in, const Defaults& d) {
  auto a = codec::decode_distribution(field(in, "a", ""), "/a", d);
  auto b = codec::decode_distribution(field(in, "b", ""), "/b", d);
  auto r = convolve(a, b);
  return {codec::encode_distribution(r), Status::Ok, a.ring().precision()};
}

inline Outcome measure_reduce(const Json& in, const Defaults& d) {
  auto mu = codec::decode_measure(field(in, "measure", ""), "/measure", d);
  auto r = level_reduce(mu, int_field(in, "n"));
  return {codec::encode_distribution(r), Status::Ok, mu.precision()};
}

inline Outcome measure_push(const Json& in, const Defaults& d) {
  auto mu = codec::decode_measure(field(in, "measure", ""), "/measure", d);
  auto phi = codec::decode_morphism(field(in, "morphism", ""), "/morphism");
  auto r = pro_pushforward(phi, mu);
  return {codec::encode_measure(r), Status::Ok, r.precision()};
}

inline Outcome measure_pull(const Json& in, const Defaults& d) {
  auto mu = codec::decode_measure(field(in, "measure", ""), "/measure", d);
  auto phi = codec::decode_morphism(field(in, "morphism", ""), "/morphism");
  auto r = pro_pullback(phi, mu);
  return {codec::encode_measure(r), Status::Ok, r.precision()};
}

inline Outcome measure_chi(const Json& in, const Defaults& d) {
  auto mu = codec::decode_measure(field(in, "measure", ""), "/measure", d);
  auto chi = codec::decode_character(field(in, "character", ""), "/character");
  auto f = chi_quotient(mu, chi);
  return {codec::encode_series(f), Status::Ok, f.precision()};
}

inline Outcome measure_twist(const Json& in, const Defaults& d) {
  auto mu = codec::decode_measure(field(in, "measure", ""), "/measure", d);
  auto chi = codec::decode_character(field(in, "character", ""), "/character");
  auto t = tower_point(mu.ring(), field(in, "zeta", ""), "/zeta");
  Element v = twist_eval(lift(mu, t.tower), chi, t.zeta);
  Json j;
  j["value_ring"] = codec::encode_ring(v.ring());
  j["value"] = codec::encode_element(v);
  return {j, Status::Ok, v.precision()};
}

inline Outcome measure_pseudo_mul(const Json& in, const Defaults& d) {
  auto nu = codec::decode_pseudo(field(in, "pseudo", ""), "/pseudo", d);
  auto alpha = codec::decode_measure(field(in, "alpha", ""), "/alpha", d);
  auto r = pseudo_multiply(nu, alpha);
  return {codec::encode_measure(r), Status::Ok, r.precision()};
}

inline Outcome module_char(const Json& in, const Defaults& d) {
  auto m = codec::decode_presentation(field(in, "presentation", ""), "/presentation", d);
  auto c = char_ideal(m);
  return {codec::encode_char_gen(c), c.vanishes ? Status::Inconclusive : Status::Ok, c.certified_precision};
}

inline Outcome module_chi(const Json& in, const Defaults& d) {
  auto g = codec::decode_group_presentation(field(in, "presentation", ""), "/presentation", d);
  auto chi = codec::decode_character(field(in, "character", ""), "/character");
  auto m = chi_decompose(g, chi);
  return {codec::encode_presentation(m), Status::Ok, g.ring().precision()};
}

inline Outcome module_chipart(const Json& in, const Defaults& d) {
  auto g = codec::decode_group_presentation(field(in, "presentation", ""), "/presentation", d);
  auto r = chipart_verify(g);
  Json j;
  j["ok"] = r.ok;
  j["a"] = r.a;
  j["b"] = r.b;
  j["lhs"] = codec::encode_char_gen(r.lhs);
  Json parts = Json::array();
  for (std::size_t i = 0; i < r.rhs.size(); ++i)
    parts.push_back(Json{{"character", codec::encode_character(r.characters[i])}, {"generator", codec::encode_char_gen(r.rhs[i])}});
  j["chi_parts"] = parts;
  j["message"] = r.message;
  int cert = r.lhs.certified_precision;
  for (const auto& c : r.rhs) cert = std::min(cert, c.certified_precision);
  return {j, r.ok ? Status::Ok : Status::Inconclusive, cert};
}

inline Outcome module_finiteness(const Json& in, const Defaults& d) {
  CharIdealGen gen = has(in, "generator")
                         ? char_gen_from_series(codec::decode_series(in["generator"], "/generator", d))
                         : char_ideal(codec::decode_presentation(field(in, "presentation", ""), "/presentation", d));
  auto c = finiteness_certificate(gen, int_field(in, "n"));
  return {codec::encode_certificate(c), finiteness_status(c.status), c.certified_precision};
}

inline codec::Scenario scenario(const Json& in, const Defaults& d) {
  return codec::decode_scenario(field(in, "scenario", ""), "/scenario", d);
}

inline NodeCharacter node_character(const MeasureFamily& fam, const Json& in) {
  std::string node = codec::detail::as_string(field(in, "node", ""), "/node");
  const auto& n = codec::detail::at_path("/node", [&]() -> const ModulusNode& { return fam.poset.node(node); });
  auto e = codec::detail::int_list(field(in, "exponents", ""), "/exponents");
  return {node, codec::detail::at_path("/exponents", [&] { return Character(n.delta, e); })};
}

inline Outcome euler_check(const Json& in, const Defaults& d) {
  auto sc = scenario(in, d);
  auto rep = euler_compatibility_check(sc.family);
  Json edges = Json::array();
  for (const auto& e : rep.edges)
    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"ok", e.ok}, {"delta_index", e.delta_index}, {"coefficient", e.coefficient}});
  Json j;
  j["ok"] = rep.ok();
  j["edges"] = edges;
  int cert = sc.family.trivial ? sc.family.trivial->num.precision() : 0;
  for (const auto& [l, m] : sc.family.measures) cert = cert ? std::min(cert, m.precision()) : m.precision();
  if (!rep.ok()) {
    for (const auto& e : rep.edges)
      if (!e.ok) {
        j["error"] = "Incompatible";
        j["message"] = "edge " + e.from + " -> " + e.to;
        break;
      }
    return {j, Status::Error, cert};
  }
  return {j, Status::Ok, cert};
}

inline Outcome euler_derive(const Json& in, const Defaults& d) {
  auto sc = scenario(in, d);
  std::string top = codec::detail::as_string(field(in, "top", ""), "/top");
  auto fam = family_derive(sc.family.poset, top, sc.family.at(top));
  int cert = fam.at(top).precision();
  for (const auto& [l, m] : fam.measures) cert = std::min(cert, m.precision());
  if (fam.trivial) cert = std::min(cert, fam.trivial->num.precision());
  return {codec::encode_scenario({fam, sc.psi}), Status::Ok, cert};
}

inline Outcome euler_psi(const Json& in, const Defaults& d) {
  auto sc = scenario(in, d);
  std::vector<PsiSymbol> syms = sc.psi;
  if (has(in, "symbol")) {
    const Json& s = in["symbol"];
    syms = {{codec::detail::as_string(field(s, "node", "/symbol"), "/symbol/node"),
             codec::detail::as_string(field(s, "ideal", "/symbol"), "/symbol/ideal"),
             as_int(field(s, "norm", "/symbol"), "/symbol/norm")}};
  }
  Json out = Json::array();
  int cert = 0;
  for (const auto& s : syms) {
    ProMeasure img = psi_image(sc.family, s);
    const auto& node = sc.family.poset.node(s.node);
    bool inJ = node.J_generators.empty() ? false : j_membership(node, img).has_value();
    out.push_back(Json{{"node", s.node}, {"ideal", s.ideal}, {"norm", s.norm}, {"image", codec::encode_measure(img)["series"]},
                       {"in_J", inJ}});
    cert = cert ? std::min(cert, img.precision()) : img.precision();
  }
  return {Json{{"images", out}}, Status::Ok, cert};
}

inline Outcome euler_lp(const Json& in, const Defaults& d) {
  auto sc = scenario(in, d);
  NodeCharacter c = node_character(sc.family, in);
  const auto& fam = sc.family;
  const Ring& R = fam.trivial ? fam.trivial->num.ring() : fam.measures.begin()->second.ring();
  auto t = tower_point(R, field(in, "zeta", ""), "/zeta");
  MeasureFamily lifted{fam.poset, {}, std::nullopt};
  for (const auto& [l, m] : fam.measures) lifted.measures.emplace(l, lift(m, t.tower));
  if (fam.trivial)
    lifted.trivial = PseudoMeasure{lift(fam.trivial->num, t.tower),
                                   t.tower.trivial ? fam.trivial->den : fam.trivial->den.base_change(t.tower.ext)};
  LpValue v = lp_eval(lifted, c.node, c.chi, t.zeta);
  Json j;
  j["value_ring"] = codec::encode_ring(v.value.ring());
  j["value"] = codec::encode_element(v.value);
  j["clearing_factor"] = v.clearing_factor ? codec::encode_element(*v.clearing_factor) : Json(nullptr);
  int cert = v.value.precision();
  if (v.clearing_factor) cert = std::min(cert, v.clearing_factor->precision());
  return {j, Status::Ok, cert};
}

inline Outcome euler_pipeline(const Json& in, const Defaults& d) {
  auto sc = scenario(in, d);
  NodeCharacter c = node_character(sc.family, in);
  std::string aux = codec::detail::as_string(field(in, "aux", ""), "/aux");
  auto r = finiteness_pipeline(sc.family, c, int_field(in, "n"), aux);
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["message"] = r.message;
  Json vals = Json::array(), route = Json::array();
  for (const auto& v : r.values) vals.push_back(codec::encode_element(v));
  for (const auto& v : r.route_values) route.push_back(codec::encode_element(v));
  j["values"] = vals;
  j["route_values"] = route;
  j["routes_agree"] = r.routes_agree;
  j["certificate"] = codec::encode_certificate(r.certificate);
  Status s = r.status == PipelineStatus::Certified   ? Status::Ok
             : r.status == PipelineStatus::NotFinite ? Status::NotFinite
                                                     : Status::Inconclusive;
  return {j, s, r.certified_precision};
}

using Handler = Outcome (*)(const Json&, const Defaults&);

inline const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"ring", ring_info},
      {"series.prep", series_prep},
      {"series.eval", series_eval},
      {"series.order", series_order},
      {"series.coprime", series_coprime},
      {"dist.push", dist_push},
      {"dist.pull", dist_pull},
      {"dist.conv", dist_conv},
      {"measure.reduce", measure_reduce},
      {"measure.push", measure_push},
      {"measure.pull", measure_pull},
      {"measure.chi", measure_chi},
      {"measure.twist", measure_twist},
      {"measure.pseudo-mul", measure_pseudo_mul},
      {"module.char", module_char},
      {"module.chi", module_chi},
      {"module.chipart", module_chipart},
      {"module.finiteness", module_finiteness},
      {"euler.check", euler_check},
      {"euler.derive", euler_derive},
      {"euler.psi", euler_psi},
      {"euler.lp", euler_lp},
      {"euler.pipeline", euler_pipeline},
  };
  return h;
}

inline Json document(const std::string& verb, const Json& input, const Outcome& o) {
  Json doc;
  doc["verb"] = verb;
  doc["inputs_digest"] = digest(input);
  doc["payload"] = o.payload;
  doc["certified_precision"] = o.certified_precision;
  doc["status"] = std::string(to_string(o.status));
  return doc;
}

}  // namespace detail

inline std::vector<std::string> verbs() {
  std::vector<std::string> v;
  for (const auto& [k, h] : detail::handlers()) v.push_back(k);
  return v;
}

/// One verb on one input document. Library errors become error documents.
inline Result run(const std::string& verb, const Json& input, const codec::Defaults& d = {}) {
  Outcome o;
  auto it = detail::handlers().find(verb);
  try {
    if (it == detail::handlers().end()) fail(ErrorKind::Usage, "unknown verb '" + verb + "'");
    o = it->second(input, d);
  } catch (const Error& e) {
    o = {Json{{"error", std::string(to_string(e.kind()))}, {"message", e.detail()}}, Status::Error, 0};
  } catch (const nlohmann::json::exception& e) {
    o = {Json{{"error", "SchemaViolation"}, {"message", e.what()}}, Status::Error, 0};
  }
  return {detail::document(verb, input, o), o.status};
}

/// {jobs: [{verb, input}...]} run on `workers` threads; results are assembled
/// by job index, so the output does not depend on scheduling.
inline Result run_batch(const Json& batch, int workers, const codec::Defaults& d = {}) {
  const Json* jobs = nullptr;
  try {
    jobs = &codec::detail::as_array(codec::detail::field(batch, "jobs", ""), "/jobs");
  } catch (const Error& e) {
    Outcome o{Json{{"error", std::string(to_string(e.kind()))}, {"message", e.detail()}}, Status::Error, 0};
    return {detail::document("batch", batch, o), Status::Error};
  }
  const std::size_t n = jobs->size();
  std::vector<Result> results(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      const Json& job = (*jobs)[i];
      std::string verb;
      Json input;
      if (job.is_object() && job.contains("verb") && job["verb"].is_string() && job.contains("input")) {
        verb = job["verb"].get<std::string>();
        input = job["input"];
        results[i] = run(verb, input, d);
      } else {
        Outcome o{Json{{"error", "SchemaViolation"}, {"message", "/jobs/" + std::to_string(i) + ": expected {verb, input}"}},
                          Status::Error, 0};
        results[i] = {detail::document("", job, o), Status::Error};
      }
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  Json docs = Json::array();
  Status s = Status::Ok;
  int cert = -1;
  for (const auto& r : results) {
    docs.push_back(r.document);
    s = worst(s, r.status);
    int c = r.document["certified_precision"].get<int>();
    cert = cert < 0 ? c : std::min(cert, c);
  }
  Outcome o{Json{{"results", docs}}, s, std::max(cert, 0)};
  return {detail::document("batch", batch, o), s};
}

}  // namespace padic::cli
