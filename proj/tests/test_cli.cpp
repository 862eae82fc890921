#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "padic/cli.hpp"
#include "support.hpp"

using namespace padic;
using namespace padic::testing;
using padic::cli::Json;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = PADIC_GOLDEN_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CliRun {
  std::string out;
  int code = -1;
};

CliRun run_cli(const std::string& verb, const Json& input, const std::string& extra = "") {
  const fs::path tmp = fs::temp_directory_path() / ("padic_cli_" + std::to_string(::getpid()) + ".json");
  std::ofstream(tmp) << input.dump();
  std::string words = verb;
  std::replace(words.begin(), words.end(), '.', ' ');
  std::string cmd = std::string(PADIC_CLI_PATH) + " " + words + " --in " + tmp.string() + " " + extra + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int st = pclose(pipe);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  fs::remove(tmp);
  return r;
}

Json golden_batch() {
  Json jobs = Json::array();
  for (const auto& e : fs::directory_iterator(kGolden / "inputs")) {
    Json c = Json::parse(slurp(e.path()));
    jobs.push_back(c);
  }
  std::sort(jobs.begin(), jobs.end(), [](const Json& a, const Json& b) { return a.dump() < b.dump(); });
  return Json{{"jobs", jobs}};
}

}  // namespace

TEST(Cli, GoldenCorpusIsByteExact) {
  const Json codes = Json::parse(slurp(kGolden / "expected" / "exit_codes.json"));
  int seen = 0;
  for (const auto& e : fs::directory_iterator(kGolden / "inputs")) {
    const std::string name = e.path().stem().string();
    Json c = Json::parse(slurp(e.path()));
    CliRun r = run_cli(c["verb"], c["input"]);
    EXPECT_EQ(r.out, slurp(kGolden / "expected" / e.path().filename())) << name;
    EXPECT_EQ(r.code, codes.at(name).get<int>()) << name;
    ++seen;
  }
  EXPECT_EQ(seen, static_cast<int>(codes.size()));
}

TEST(Cli, LibraryRunMatchesBinary) {
  Json c = Json::parse(slurp(kGolden / "inputs" / "05_series_prep_T2_minus_p.json"));
  auto r = cli::run(c["verb"], c["input"]);
  EXPECT_EQ(r.document.dump(2) + "\n", run_cli(c["verb"], c["input"]).out);
}

TEST(Cli, VerbsAreThinWrappers) {
  std::mt19937_64 rng(11);
  Ring R = Ring::zp(7, 10);
  for (int it = 0; it < 5; ++it) {
    PowerSeries f = random_prepared(R, 16, it % 2, 2, rng);
    Json in{{"series", codec::encode_series(f)}};
    auto w = weierstrass_prepare(f);
    auto doc = cli::run("series.prep", in).document;
    EXPECT_EQ(doc["payload"], codec::encode_weierstrass(w));
    EXPECT_EQ(doc["certified_precision"], w.certified_precision);

    Element x = random_element_val(R, 1, rng);
    in["point"] = codec::encode_element(x);
    EXPECT_EQ(cli::run("series.eval", in).document["payload"]["value"], codec::encode_element(eval_at(f, x)));

    auto cert = finiteness_certificate(char_gen_from_series(f), 1);
    auto fin = cli::run("module.finiteness", Json{{"generator", codec::encode_series(f)}, {"n", 1}});
    EXPECT_EQ(fin.document["payload"], codec::encode_certificate(cert));
  }
  FiniteAbelianGroup D({2, 3});
  ProMeasure mu = random_measure(D, R, 12, rng);
  auto doc = cli::run("measure.reduce", Json{{"measure", codec::encode_measure(mu)}, {"n", 1}}).document;
  EXPECT_EQ(doc["payload"], codec::encode_distribution(level_reduce(mu, 1)));
}

TEST(Cli, CodecRoundTrips) {
  std::mt19937_64 rng(12);
  for (const Ring& R : sample_rings(9)) {
    EXPECT_EQ(codec::decode_ring(codec::encode_ring(R), ""), R);
    Element a = random_element(R, rng);
    EXPECT_EQ(codec::decode_element(R, codec::encode_element(a), ""), a);
  }
  Ring R = Ring::zp(5, 8);
  ProMeasure mu = random_measure(FiniteAbelianGroup({3}), R, 10, rng);
  EXPECT_EQ(codec::decode_measure(codec::encode_measure(mu), ""), mu);

  Json bad = codec::encode_element(R.from_int(3));
  bad["coords"][0][0] = 5;
  expect_kind(ErrorKind::SchemaViolation, [&] { codec::decode_element(R, bad, "/x"); });
  expect_kind(ErrorKind::SchemaViolation, [&] { codec::decode_ring(Json{{"prec", 4}}, "/ring"); });
}

TEST(Cli, ErrorsBecomeDocuments) {
  auto r = cli::run("series.factor", Json::object());
  EXPECT_EQ(r.status, cli::Status::Error);
  EXPECT_EQ(r.exit(), 1);
  EXPECT_EQ(r.document["payload"]["error"], "Usage");
  auto s = cli::run("series.prep", Json{{"series", 3}});
  EXPECT_EQ(s.document["payload"]["error"], "SchemaViolation");
  EXPECT_EQ(s.document["inputs_digest"].get<std::string>().size(), 16u);
}

TEST(Cli, BatchDoesNotDependOnWorkers) {
  Json batch = golden_batch();
  const std::string one = cli::run_batch(batch, 1).document.dump(2);
  EXPECT_EQ(cli::run_batch(batch, 4).document.dump(2), one);
  CliRun r = run_cli("batch", batch, "--workers 3");
  EXPECT_EQ(r.out, one + "\n");
  EXPECT_EQ(r.code, 1);  // the corpus contains error cases
  const Json results = Json::parse(one)["payload"]["results"];
  ASSERT_EQ(results.size(), batch["jobs"].size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& job = batch["jobs"][i];
    EXPECT_EQ(results[i], cli::run(job["verb"], job["input"]).document);
  }
}
