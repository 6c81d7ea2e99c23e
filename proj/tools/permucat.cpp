#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "permucat/suites.hpp"
#include "permucat/toric.hpp"

using namespace permucat;

namespace {

struct Flags {
  std::optional<int> n, n_max;
  std::optional<std::string> order;
  int margin = 1;
  int jobs = 0;
  std::string out, cache;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> range_of(const Flags& f, int lo, int def, int ceiling, const std::string& what) {
  if (f.n && f.n_max) throw UsageError("--n and --n-max are exclusive");
  int a = f.n ? *f.n : lo, b = f.n ? *f.n : f.n_max ? *f.n_max : def;
  if (a < lo || b > ceiling || a > b)
    throw UsageError(what + ": n must lie in [" + std::to_string(lo) + ", " + std::to_string(ceiling) + "]");
  return {a, b};
}

std::optional<Order> order_of(const Flags& f) {
  if (!f.order) return std::nullopt;
  return *f.order == "lex" ? Order::lex : Order::lex_prime;
}

Report run(const std::string& cmd, const Flags& f, std::string& label) {
  SuiteOptions opt{f.margin, f.jobs != 1};
  auto span = [](std::pair<int, int> r) {
    return r.first == r.second ? " n=" + std::to_string(r.first)
                               : " n=" + std::to_string(r.first) + ".." + std::to_string(r.second);
  };
  Report rep;
  if (cmd == "ghat") {
    auto r = range_of(f, 1, 12, kCombinatMax, "ghat");
    label += span(r);
    rep = ghat_suite(r.first, r.second);
  } else if (cmd == "toric") {
    auto r = range_of(f, 2, 6, kToricMax, "toric");
    if (f.n) throw UsageError("toric takes --n-max");
    label += span({2, r.second}) + " margin=" + std::to_string(f.margin);
    rep = toric_suite(r.second, opt);
  } else if (cmd == "picard") {
    auto r = range_of(f, 2, 6, kPicardMax, "picard");
    if (f.n) throw UsageError("picard takes --n-max");
    label += span({2, r.second}) + " margin=" + std::to_string(f.margin);
    rep = picard_suite(r.second, opt);
  } else if (cmd == "excoll") {
    auto r = f.n || f.n_max ? range_of(f, 2, 4, kExcollMax, "excoll") : std::pair{4, 4};
    label += span(r) + " order=" + (f.order ? *f.order : "both");
    for (int n = r.first; n <= r.second; ++n) rep.merge(excoll_suite(n, order_of(f), opt));
  } else if (cmd == "windows") {
    auto r = range_of(f, 3, 3, kGitwinMax, "windows");
    label += span(r);
    for (int n = r.first; n <= r.second; ++n) rep.merge(windows_suite(n, opt));
  } else if (cmd == "all") {
    if (f.n) throw UsageError("all takes --n-max");
    int cap = f.n_max ? *f.n_max : kGitwinMax;
    if (cap < 2) throw UsageError("all: --n-max must be at least 2");
    label += " n<=" + std::to_string(cap) + " margin=" + std::to_string(f.margin);
    rep.merge(ghat_suite(1, std::min(cap, 12)));
    rep.merge(toric_suite(std::min(cap, 6), opt));
    rep.merge(picard_suite(std::min(cap, 6), opt));
    for (int n = 2; n <= std::min(cap, 5); ++n) rep.merge(excoll_suite(n, std::nullopt, opt));
    for (int n = 3; n <= cap; ++n) rep.merge(windows_suite(n, opt));
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permucat: certificates for exceptional collections on Losev-Manin spaces"};
  app.require_subcommand(1);
  Flags f;
  const char* names[][2] = {{"ghat", "derangement counts and the structure of Ghat(n)"},
                            {"picard", "divisor class identities, G-bundles and reductions"},
                            {"toric", "LM fans and the toric cohomology oracle"},
                            {"excoll", "exceptionality of Ghat(n) in the chosen order"},
                            {"windows", "window collections on the GIT quotients"},
                            {"all", "every suite"}};
  for (auto& [name, desc] : names) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto* on = sub->add_option("--n", f.n, "single n");
    auto* om = sub->add_option("--n-max", f.n_max, "largest n");
    on->excludes(om);
    sub->add_option("--order", f.order, "order for excoll")
        ->check(CLI::IsMember({"lex", "lexprime"}));
    sub->add_option("--margin", f.margin, "enlargement of the cohomology candidate region")
        ->check(CLI::Range(0, 8));
    sub->add_option("--jobs", f.jobs, "worker threads, 0 for the OpenMP default")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", f.out, "write the report here instead of stdout");
    sub->add_option("--cache", f.cache, "fan cache directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  if (const char* env = std::getenv("PERMUCAT_CACHE")) f.cache = env;
  if (!f.cache.empty()) set_fan_cache_dir(f.cache);
  if (f.jobs > 0) omp_set_num_threads(f.jobs);

  std::string label = cmd;
  Report rep;
  try {
    rep = run(cmd, f, label);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::string text = rep.json(label);
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << f.out << "\n";
      return 2;
    }
    out << text;
    int pass = 0, info = 0;
    for (const auto& c : rep.checks) {
      pass += c.status == Status::pass;
      info += c.status == Status::info;
    }
    std::cout << label << ": " << pass << " passed, " << rep.failures() << " failed, " << info << " info\n";
  }
  for (const auto& c : rep.checks)
    if (c.status == Status::fail) std::cerr << "FAIL " << c.id << ": " << c.witness << "\n";
  return rep.ok() ? 0 : 1;
}
