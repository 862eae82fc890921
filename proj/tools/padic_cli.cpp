#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "padic/cli.hpp"

namespace {

using padic::cli::Json;

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  long x = std::strtol(v, &end, 10);
  if (*end || x < 1 || x > 100000) {
    std::cerr << "error: " << name << " must be a positive integer, got '" << v << "'\n";
    std::exit(1);
  }
  return static_cast<int>(x);
}

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open input '" + path + "'");
    ss << f.rdbuf();
  }
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic measures, Iwasawa modules and Euler families"};
  std::vector<std::string> words;
  std::string in = "-", out;
  padic::codec::Defaults d{env_int("PADIC_PRECISION", 32), env_int("PADIC_TDEG", 64)};
  int workers = 1;
  unsigned long long seed = 0;
  app.add_option("verb", words, "verb path, e.g. `series prep` or `batch`")->required()->expected(1, 2);
  app.add_option("--in", in, "input document (default: stdin)");
  app.add_option("--out", out, "write the result document here instead of stdout");
  app.add_option("--precision", d.precision, "default pi-adic precision N")->check(CLI::Range(1, 100000));
  app.add_option("--tdeg", d.tdeg, "default T-truncation M")->check(CLI::Range(1, 100000));
  app.add_option("--workers", workers, "threads for batch documents")->check(CLI::Range(1, 256));
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.footer("verbs: batch, " + [] {
    std::string s;
    for (const auto& v : padic::cli::verbs()) s += (s.empty() ? "" : ", ") + v;
    return s;
  }());
  CLI11_PARSE(app, argc, argv);

  std::string verb = words[0];
  for (std::size_t i = 1; i < words.size(); ++i) verb += "." + words[i];

  Json input;
  try {
    input = Json::parse(read_input(in));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  padic::cli::Result r = verb == "batch" ? padic::cli::run_batch(input, workers, d) : padic::cli::run(verb, input, d);
  const std::string text = r.document.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return 1;
    }
    f << text;
  }
  if (r.status == padic::cli::Status::Error && r.document["payload"].contains("message")) {
    std::cerr << "error: " << r.document["payload"]["message"].get<std::string>() << "\n";
    if (r.document["payload"]["error"] == "Usage") std::cerr << app.help();
  }
  return r.exit();
}
