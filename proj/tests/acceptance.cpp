// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "padic/cli.hpp"
#include "scenario.hpp"
#include "support.hpp"

using namespace padic;
using namespace padic::testing;
namespace fs = std::filesystem;

namespace {

struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

std::vector<FiniteAbelianGroup> groups_up_to(int order) {
  std::vector<std::vector<i64>> all{{1},    {2},    {3},    {4},    {2, 2},    {5},  {6},  {7},    {8},
                                    {2, 4}, {2, 2, 2}, {9}, {3, 3}, {10}, {11}, {12}, {2, 6}};
  std::vector<FiniteAbelianGroup> out;
  for (const auto& o : all) {
    i64 n = 1;
    for (i64 v : o) n *= v;
    if (n <= order) out.push_back(n == 1 ? FiniteAbelianGroup::trivial() : FiniteAbelianGroup(o));
  }
  return out;
}

// 1. Pushforward / pullback identities and the image of the pullback.
void distribution_identities(Tally& t) {
  std::mt19937_64 rng(101);
  const auto groups = groups_up_to(12);
  for (u64 p : {2, 3, 5}) {
    Ring R = Ring::zp(p, 16);
    for (const auto& G : groups)
      for (const auto& H : groups)
        for (const auto& phi : enumerate_morphisms(G, H)) {
          auto ki = kernel_image(phi);
          const std::string tag = "p=" + std::to_string(p) + " " + G.describe() + "->" + H.describe();
          const Element k = R.from_int(static_cast<i64>(ki.kernel.size()));
          for (int it = 0; it < 25; ++it) {
            auto mu = random_distribution(G, R, rng);
            Distribution sum(G, R);
            for (const auto& s : ki.kernel) sum = sum + translate(s, mu);
            t.expect(pullback_sharp(phi, pushforward(phi, mu)) == sum, tag + " pull.push");
            auto mup = random_distribution(H, R, rng);
            t.expect(pushforward(phi, pullback_sharp(phi, mup)) == k * restrict_to(mup, ki.image), tag + " push.pull");
          }
          // Image of the pullback inside the invariants: every Dirac pulls back to an invariant.
          for (const auto& h : H.elements())
            t.expect(is_invariant(pullback_sharp(phi, Distribution::dirac(H, R, h)), ki.kernel), tag + " image");
          // Invariants inside the image: the coset indicators span them and each is a pullback.
          std::vector<bool> seen(G.size(), false);
          for (const auto& g : G.elements()) {
            if (seen[G.index_of(g)]) continue;
            Distribution ind(G, R);
            for (const auto& s : ki.kernel) {
              auto x = G.add(g, s);
              seen[G.index_of(x)] = true;
              ind.at(x) = R.one();
            }
            t.expect(pullback_sharp(phi, Distribution::dirac(H, R, phi(g))) == ind, tag + " coset");
          }
        }
  }
}

// 2. Distributions and group-ring elements are the same thing.
void group_ring_dictionary(Tally& t) {
  std::mt19937_64 rng(102);
  for (u64 p : {2, 3, 5}) {
    Ring R = Ring::zp(p, 10);
    for (const auto& G : groups_up_to(8)) {
      const std::string tag = "p=" + std::to_string(p) + " " + G.describe();
      for (const auto& a : G.elements()) {
        auto da = Distribution::dirac(G, R, a);
        t.expect(from_group_ring(to_group_ring(da), R) == da, tag + " round trip");
        for (const auto& b : G.elements()) {
          auto db = Distribution::dirac(G, R, b);
          t.expect(to_group_ring(convolve(da, db)) == group_ring_mul(to_group_ring(da), to_group_ring(db)),
                   tag + " basis product");
        }
      }
      for (int it = 0; it < 5; ++it) {
        auto a = random_distribution(G, R, rng), b = random_distribution(G, R, rng);
        t.expect(from_group_ring(to_group_ring(a), R) == a, tag + " round trip");
        t.expect(to_group_ring(convolve(a, b)) == group_ring_mul(to_group_ring(a), to_group_ring(b)), tag + " product");
      }
    }
  }
}

// 3. Weierstrass preparation.
void weierstrass_suite(Tally& t) {
  std::mt19937_64 rng(103);
  const auto rings = sample_rings(12);
  for (int it = 0; it < 500; ++it) {
    const Ring& R = rings[it % rings.size()];
    PowerSeries f = random_series(R, 16, rng);
    if (f.is_zero()) continue;
    auto w = weierstrass_prepare(f);
    t.expect(reconstruct(w) == f.reduce(w.certified_precision + w.mu), "reconstruction " + f.to_string());
  }
  for (int it = 0; it < 100; ++it) {
    const Ring& R = rings[it % rings.size()];
    int mf = static_cast<int>(rng() % 2), lf = static_cast<int>(rng() % 4);
    int mg = static_cast<int>(rng() % 2), lg = static_cast<int>(rng() % 4);
    auto f = random_prepared(R, 16, mf, lf, rng), g = random_prepared(R, 16, mg, lg, rng);
    auto w = weierstrass_prepare(f * g);
    t.expect(w.mu == mf + mg && w.lambda == lf + lg, "additivity");
  }
  Ring R2 = Ring::zp(2, 6);
  try {
    weierstrass_prepare(PowerSeries::from_ints(R2, {64, 128}, 8));
    t.expect(false, "PrecisionExhausted not raised");
  } catch (const Error& e) {
    t.expect(e.kind() == ErrorKind::PrecisionExhausted, e.what());
  }
  std::vector<Element> c(10, R2.from_int(2));
  c[9] = R2.one();
  try {
    weierstrass_prepare(R2, c, 8);
    t.expect(false, "LambdaOverflow not raised");
  } catch (const Error& e) {
    t.expect(e.kind() == ErrorKind::LambdaOverflow, e.what());
  }
}

PadicExponent random_exponent(u64 p, std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return PadicExponent::integer(p, static_cast<i64>(rng() % 2001) - 1000);
    case 1: {
      i64 den = 0;
      while (den == 0 || den % static_cast<i64>(p) == 0) den = static_cast<i64>(rng() % 50) + 1;
      return PadicExponent::rational(p, static_cast<i64>(rng() % 201) - 100, den, 24);
    }
    default: {
      std::vector<u64> d(24);
      for (auto& v : d) v = rng() % p;
      return PadicExponent::from_digits(p, d);
    }
  }
}

// 4. Binomial powers and omega_n.
void binomial_suite(Tally& t) {
  std::mt19937_64 rng(104);
  const int M = 64;
  for (int it = 0; it < 50; ++it) {
    u64 p = std::array<u64, 3>{2, 3, 5}[it % 3];
    Ring R = Ring::zp(p, 12);
    auto a = random_exponent(p, rng), b = random_exponent(p, rng);
    t.expect(binomial_power(R, a, M) * binomial_power(R, b, M) == binomial_power(R, a + b, M),
             "exponent law p=" + std::to_string(p));
  }
  for (u64 p : {2, 3, 5, 7}) {
    Ring R = Ring::zp(p, 12);
    u64 pn = 1;
    for (int n = 0; pn <= 64; ++n, pn *= p)
      t.expect(binomial_power(R, static_cast<i64>(pn), M) - PowerSeries::monomial(R, 0, M) == omega(R, n, M),
               "omega p=" + std::to_string(p) + " n=" + std::to_string(n));
  }
}

// 5. Twist evaluation against the finite-level sum.
void evaluation_consistency(Tally& t) {
  std::mt19937_64 rng(105);
  struct Setting {
    Ring ring;
    int level;
  };
  // p = 2 needs cube roots of unity for Z/6, so start from the unramified quadratic ring.
  std::vector<Setting> settings{{unram_ring(2, {1, 1, 1}, 8).adjoin_p_power_roots(2).target, 2},
                                {Ring::zp(3, 8).adjoin_p_power_roots(1).target, 1}};
  const std::vector<FiniteAbelianGroup> deltas{FiniteAbelianGroup::trivial(), FiniteAbelianGroup({2}),
                                               FiniteAbelianGroup({6})};
  for (int it = 0; it < 50; ++it) {
    const auto& s = settings[it % 2];
    const auto& D = deltas[(it / 2) % 3];
    auto mu = random_measure(D, s.ring, 16, rng);
    u64 pk = 1;
    for (int i = 0; i < s.level; ++i) pk *= s.ring.p();
    for (const auto& chi : Character::all(D))
      for (u64 j = 0; j < pk; ++j) {
        Element zeta = s.ring.wild_root(s.level).pow(j);
        t.expect(twist_eval(mu, chi, zeta) == twist_sum_oracle(mu, chi, zeta, s.level),
                 "p=" + std::to_string(s.ring.p()) + " " + D.describe() + " " + chi.describe());
      }
  }
}

// 6. Orders of Lambda/(f, omega_n) against a Smith form.
void order_growth(Tally& t) {
  std::mt19937_64 rng(106);
  auto small = [&](int r) { return static_cast<i64>(rng() % (2 * r + 1)) - r; };
  int finite = 0;
  for (int it = 0; it < 50; ++it) {
    const u64 p = it % 2 ? 3 : 2;
    const i64 pi = static_cast<i64>(p);
    const int mu = static_cast<int>(rng() % 2), lambda = static_cast<int>(rng() % 4);
    // Distinguished part with nonzero constant term, times a polynomial unit, times p^mu.
    std::vector<i64> P(lambda + 1, 0);
    for (int i = 0; i < lambda; ++i) P[i] = pi * small(3);
    if (lambda > 0 && P[0] == 0) P[0] = pi;
    P[lambda] = 1;
    std::vector<i64> U{1 + pi * small(2), small(2), small(2)};
    std::vector<i64> c(P.size() + U.size() - 1, 0);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < U.size(); ++j) c[i + j] += P[i] * U[j] * (mu ? pi : 1);
    Ring R = Ring::zp(p, 30);
    auto f = PowerSeries::from_ints(R, c, 32);
    std::vector<int> e;
    for (int n = 0; n <= 3; ++n) {
      auto q = quotient_order(f, n);
      int s = smith_order_exponent(p, 30, c, n);
      const std::string tag = f.to_string() + " n=" + std::to_string(n);
      if (s < 0) {
        t.expect(q.status != OrderStatus::Finite, tag + " should not be finite");
      } else {
        t.expect(q.status == OrderStatus::Finite && q.exponent == s, tag + " Smith mismatch");
        e.push_back(s);
      }
    }
    if (e.size() == 4) {
      ++finite;
      i64 p2 = pi * pi, p3 = p2 * pi;
      i64 nu2 = e[2] - mu * p2 - 2 * lambda, nu3 = e[3] - mu * p3 - 3 * lambda;
      t.expect(nu2 == nu3, f.to_string() + " growth formula");
    }
  }
  t.expect(finite >= 40, "too few finite instances");
  Ring R = Ring::zp(2, 24);
  auto f = PowerSeries::from_ints(R, {-2, 1}, 16);
  const int want[] = {1, 3, 4, 5};
  for (int n = 0; n <= 3; ++n) t.expect(quotient_order(f, n).exponent == want[n], "worked instance");
}

// 7. chi-part formula gaps.
void chipart_gaps(Tally& t) {
  std::mt19937_64 rng(107);
  Ring R = Ring::zp(5, 12);
  FiniteAbelianGroup D({2});
  auto rp = [&](int mu, int lambda) { return random_prepared(R, 24, mu, lambda, rng); };
  for (int it = 0; it < 20; ++it) {
    GroupRingPresentation pres{D, {}};
    if (it % 2 == 0) {
      pres.rows = {{ProMeasure(D, {rp(it % 4 == 0, 1 + it % 3), rp(0, 1)})}};
    } else {
      auto a = ProMeasure(D, {rp(0, 1), rp(0, 0)}), b = ProMeasure(D, {rp(1, 0), rp(0, 1)});
      auto c = ProMeasure(D, {rp(0, 0), rp(0, 1)}), d = ProMeasure(D, {rp(0, 2), rp(0, 1)});
      pres.rows = {{a, b}, {c, d}};
    }
    auto rep = chipart_verify(pres);
    t.expect(rep.ok && rep.a == 0 && rep.b == 0,
             "random presentation gap (" + std::to_string(rep.a) + "," + std::to_string(rep.b) + ") " + rep.message);
  }
  Ring R2 = Ring::zp(2, 12);
  auto one = ProMeasure::dirac(D, R2, 16, {0});
  auto delta = ProMeasure::dirac(D, R2, 16, {1});
  auto rep = chipart_verify({D, {{delta - one}, {R2.from_int(4) * one}}});
  t.expect(rep.ok && rep.a == 1 && rep.b == 0,
           "worked instance gap (" + std::to_string(rep.a) + "," + std::to_string(rep.b) + ")");
}

ModuliPoset poset(u64 p) {
  return three_node_poset(p, PadicExponent::integer(p, 2), PadicExponent::rational(p, 1, 2, 20),
                          PadicExponent::integer(p, 7));
}

// 8. Euler compatibility, localisation of a perturbation, psi divisibility.
void euler_layer(Tally& t) {
  std::mt19937_64 rng(108);
  Ring R = Ring::zp(5, 12);
  const int M = 24;
  auto fam = three_node_family(poset(5), random_series(R, 8, rng).truncate(M), rng);
  auto rep = euler_compatibility_check(fam);
  t.expect(rep.ok() && rep.edges.size() == 3, "genuine family rejected");

  auto bad = fam;
  bad.measures.at("l1").at({1})[5] += R.one();
  auto r2 = euler_compatibility_check(bad);
  for (const auto& e : r2.edges) {
    bool touches = e.from == "l1" || e.to == "l1";
    t.expect(e.ok != touches, "edge " + e.from + " -> " + e.to + " misreported");
    if (!e.ok) t.expect(e.coefficient == (e.to == "(1)" ? 6 : 5), "wrong coefficient on " + e.from + " -> " + e.to);
  }

  for (const std::string node : {"l1", "l1l2"}) {
    PsiSymbol s{node, "a", 6};
    auto x = psi_element(fam.poset.node(node), R, M, s);
    ModulusNode n = fam.poset.node(node);
    n.J_generators = {x};
    auto img = psi_image(fam, s);
    auto y = j_membership(n, img);
    t.expect(y.has_value() && x * *y == img, "psi image not in J at " + node);
  }
}

// 9. Pipeline verdict against the certificate on the units ideal.
void pipeline_equivalence(Tally& t) {
  std::mt19937_64 rng(109);
  const u64 p = 3;
  const int M = 32;
  Character chi(FiniteAbelianGroup({2}), {1});
  Character triv = Character::trivial(FiniteAbelianGroup::trivial());
  int certified = 0, not_finite = 0, inconclusive = 0;
  for (int it = 0; it < 20; ++it) {
    Ring R = Ring::zp(p, it == 19 ? 4 : 12);
    PowerSeries num = random_prepared(R, M, it % 3 == 0, 1 + it % 3, rng);
    if (it == 18) num = omega(R, 1, M) * PowerSeries::from_ints(R, {1, 1}, M);
    auto fam = three_node_family(poset(p), num, rng);
    if (it == 19) {
      // Everything divisible by p^4 at precision 4.
      const Element z = R.from_int(81);
      for (auto& [label, mu] : fam.measures) mu = z * mu;
      fam.trivial->num = z * fam.trivial->num;
    }
    for (int n = 0; n <= 3; ++n)
      for (const auto& [c, aux] : std::vector<std::pair<NodeCharacter, std::string>>{{{"l1", chi}, "l2"},
                                                                                   {{"(1)", triv}, "l1"}}) {
        const std::string tag = "family " + std::to_string(it) + " " + c.node + " n=" + std::to_string(n);
        auto rep = finiteness_pipeline(fam, c, n, aux);
        auto cert = finiteness_certificate(units_char_ideal(fam, c), n);
        PipelineStatus want = cert.status == FinitenessStatus::Certified   ? PipelineStatus::Certified
                              : cert.status == FinitenessStatus::NotFinite ? PipelineStatus::NotFinite
                                                                           : PipelineStatus::Inconclusive;
        t.expect(rep.status == want, tag + " verdict " + std::string(to_string(rep.status)) + " vs " + std::string(to_string(want)));
        if (rep.status == PipelineStatus::Certified) {
          ++certified;
          t.expect(rep.routes_agree, tag + " routes disagree");
        }
        not_finite += rep.status == PipelineStatus::NotFinite;
        inconclusive += rep.status == PipelineStatus::Inconclusive;
        if (it == 18 && c.node == "(1)" && n >= 1)
          t.expect(rep.status == PipelineStatus::NotFinite, tag + " omega_1 multiple not flagged");
        if (it == 19) t.expect(rep.status == PipelineStatus::Inconclusive, tag + " zero generator not inconclusive");
      }
  }
  t.expect(certified > 0 && not_finite > 0 && inconclusive > 0, "verdict mix missing a class");
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::pair<std::string, int> run_cli(const std::string& args, const std::string& input) {
  const fs::path tmp = fs::temp_directory_path() / ("padic_accept_" + std::to_string(::getpid()) + ".json");
  std::ofstream(tmp) << input;
  std::string cmd = std::string(PADIC_CLI_PATH) + " " + args + " --in " + tmp.string() + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int st = pclose(pipe);
  fs::remove(tmp);
  return {out, WIFEXITED(st) ? WEXITSTATUS(st) : -1};
}

// 10. Golden corpus through the binary, singly and batched on different worker counts.
void cli_reproducibility(Tally& t) {
  const fs::path golden = PADIC_GOLDEN_DIR;
  const auto codes = cli::Json::parse(slurp(golden / "expected" / "exit_codes.json"));
  std::vector<fs::path> inputs;
  for (const auto& e : fs::directory_iterator(golden / "inputs")) inputs.push_back(e.path());
  std::sort(inputs.begin(), inputs.end());
  t.expect(inputs.size() >= 25, "golden corpus has fewer than 25 documents");
  const std::map<std::string, int> contract{{"ok", 0}, {"error", 1}, {"inconclusive", 2}, {"not-finite", 3}};
  cli::Json jobs = cli::Json::array();
  for (const auto& path : inputs) {
    const std::string name = path.stem().string();
    auto c = cli::Json::parse(slurp(path));
    jobs.push_back(c);
    std::string verb = c["verb"];
    std::replace(verb.begin(), verb.end(), '.', ' ');
    auto [out, code] = run_cli(verb, c["input"].dump());
    t.expect(out == slurp(golden / "expected" / path.filename()), name + " differs from golden");
    t.expect(codes.contains(name) && code == codes[name].get<int>(), name + " exit code");
    auto doc = cli::Json::parse(out);
    t.expect(contract.at(doc["status"]) == code, name + " exit code breaks the status contract");
  }
  const std::string batch = cli::Json{{"jobs", jobs}}.dump();
  auto one = run_cli("batch --workers 1", batch);
  auto four = run_cli("batch --workers 4", batch);
  t.expect(one.first == four.first && one.second == four.second, "batch output depends on worker count");
  auto doc = cli::Json::parse(one.first);
  const auto& results = doc["payload"]["results"];
  t.expect(results.size() == inputs.size(), "batch lost results");
  for (std::size_t i = 0; i < results.size() && i < inputs.size(); ++i)
    t.expect(results[i].dump(2) + "\n" == slurp(golden / "expected" / inputs[i].filename()),
             inputs[i].stem().string() + " differs inside the batch");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Tally&)>> criteria{
      {"distribution operator identities", distribution_identities},
      {"distribution / group-ring dictionary", group_ring_dictionary},
      {"Weierstrass preparation", weierstrass_suite},
      {"binomial powers and omega_n", binomial_suite},
      {"twist evaluation consistency", evaluation_consistency},
      {"quotient order growth", order_growth},
      {"chi-part formula gaps", chipart_gaps},
      {"Euler layer", euler_layer},
      {"pipeline equivalence", pipeline_equivalence},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(t);
    } catch (const std::exception& e) {
      t.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = t.failures == 0;
    failed += !ok;
    std::printf("%s  %2zu  %-38s %6ld checks  %6.1fs%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                t.checks, secs, ok ? "" : "  first failure: ", ok ? "" : t.first.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
