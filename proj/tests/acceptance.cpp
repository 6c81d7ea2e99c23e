// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "permucat/excoll.hpp"
#include "permucat/gitwin.hpp"
#include "permucat/picard.hpp"
#include "permucat/suites.hpp"
#include "permucat/toric.hpp"

using namespace permucat;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

bool has(const std::string& id, const std::string& part) { return id.find(part) != std::string::npos; }

// every check selected by keep must pass, and at least `need` must be selected
void require_checks(Outcome& o, const Report& r, const std::function<bool(const std::string&)>& keep,
                    int need = 1) {
  int seen = 0;
  for (const auto& c : r.checks) {
    if (!keep(c.id)) continue;
    ++seen;
    if (c.status == Status::fail) o.fail(c.id + ": " + c.witness);
  }
  if (seen < need) o.fail("expected at least " + std::to_string(need) + " checks, saw " + std::to_string(seen));
}

long long fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

long long choose(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// !n by inclusion-exclusion
long long derangement_oracle(int n) {
  long long s = 0;
  for (int k = 0; k <= n; ++k) s += (k % 2 ? -1 : 1) * (fact(n) / fact(k));
  return s;
}

int failures = 0;

void criterion(int k, const std::string& name, double limit, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && secs > limit) o.fail("runtime " + std::to_string(secs) + " s over " + std::to_string(limit) + " s");
  failures += !o.ok;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f s", secs);
  std::cout << "criterion " << k << " " << (o.ok ? "PASS" : "FAIL") << " " << name << " (" << buf << ")";
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  std::cout << std::endl;
}

std::string run_cli(const std::string& args, const std::filesystem::path& out) {
  std::string cmd = "\"" PERMUCAT_BIN "\" " + args + " --out \"" + out.string() + "\" > /dev/null 2>&1";
  // failing checks give exit status 1, the report is still written
  int status = std::system(cmd.c_str());
  if (status == -1) return {};
  std::ifstream in(out, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "derangement counts and identities", 5, [] {
    Outcome o;
    for (int n = 2; n <= 9; ++n) {
      long long got = static_cast<long long>(enumerate_ghat(n).size());
      if (got != derangement_oracle(n)) o.fail("n=" + std::to_string(n) + ": " + std::to_string(got));
    }
    Report r = ghat_suite(1, 12);
    require_checks(o, r, [](const std::string& id) { return has(id, "composition_identity"); }, 12);
    require_checks(o, r, [](const std::string& id) { return has(id, "binomial_recursion"); }, 12);
    require_checks(o, r, [](const std::string&) { return true; });
    return o;
  });

  criterion(2, "toric fans and cohomology self-tests", 180, [] {
    Outcome o;
    Report r = toric_suite(6);
    for (int k = 2; k <= 6; ++k) {
      std::string tag = "toric.lm" + std::to_string(k) + ".";
      require_checks(o, r, [&](const std::string& id) { return id.rfind(tag, 0) == 0; }, 3);
      const ToricVariety& v = lm_variety(k);
      if (v.nrays() != (1 << k) - 2 || static_cast<long long>(v.fan().cones.size()) != fact(k))
        o.fail("LM_" + std::to_string(k) + " shape");
    }
    for (std::string fan : {"p1", "p2", "p1xp1", "lm3", "lm4", "lm5", "lm6"})
      for (std::string part : {"serre", "nef", "euler", "shift"})
        require_checks(o, r, [&](const std::string& id) { return id == "toric.oracle." + fan + "." + part; });
    require_checks(o, r, [](const std::string&) { return true; });
    return o;
  });

  Report picard;

  criterion(3, "G-bundle claims for n <= 6", 0, [&] {
    Outcome o;
    picard = picard_suite(6);
    for (std::string part : {"g_nef", "g_dual_acyclic", "g_difference_acyclic", "psi_g_acyclic"})
      require_checks(o, picard, [&](const std::string& id) { return has(id, "." + part); }, 5);
    return o;
  });

  criterion(4, "acyclicity in the dimension-adjusted range", 0, [&] {
    Outcome o;
    require_checks(o, picard, [](const std::string& id) { return has(id, ".acyclicity"); }, 4);
    return o;
  });

  Report excoll;
  criterion(5, "exceptionality of Ghat(n) in both orders, n <= 5", 180, [&] {
    Outcome o;
    for (int n = 2; n <= 5; ++n) excoll.merge(excoll_suite(n, std::nullopt));
    for (std::string part : {".self_ext", ".lex.pairs", ".lexprime.pairs", ".lex.case_agreement",
                             ".lexprime.case_agreement", ".count"})
      require_checks(o, excoll, [&](const std::string& id) { return has(id, part); }, 4);
    auto pairs = [&](int n) {
      const Check* c = excoll.find("excoll.n" + std::to_string(n) + ".lex.pairs");
      return c ? std::stoll(c->witness) : -1;
    };
    for (int n = 2; n <= 5; ++n) {
      long long k = derangement_oracle(n);
      if (pairs(n) != k * (k - 1) / 2) o.fail("n=" + std::to_string(n) + " pairs " + std::to_string(pairs(n)));
    }
    if (pairs(4) != 36 || pairs(5) != 946) o.fail("pair counts");
    return o;
  });

  criterion(6, "unitriangular Gram matrix and lift independence", 0, [&] {
    Outcome o;
    require_checks(o, excoll, [](const std::string& id) { return has(id, ".gram."); }, 4 * 4);
    return o;
  });

  criterion(7, "B times the Cartan matrix is the identity, n <= 12", 0, [] {
    Outcome o;
    for (int n = 2; n <= 12; ++n) {
      QMatrix c(n - 1, std::vector<mpq_class>(n - 1, 0));
      for (int i = 0; i < n - 1; ++i) {
        c[i][i] = 2;
        if (i + 1 < n - 1) c[i][i + 1] = c[i + 1][i] = -1;
      }
      if (multiply_q(b_matrix(n), c) != identity_q(n - 1)) o.fail("n=" + std::to_string(n));
      require_checks(o, class_identities_check(n), [](const std::string& id) { return has(id, "b_cartan"); });
    }
    return o;
  });

  criterion(8, "pullback decomposition and blow-down compatibility", 0, [&] {
    Outcome o;
    require_checks(o, picard, [](const std::string& id) { return has(id, ".sigma"); }, 4);
    require_checks(o, picard, [](const std::string& id) { return has(id, ".blowdown"); }, 3);
    return o;
  });

  criterion(9, "odd windows n = 3, 5, 7, 9", 120, [] {
    Outcome o;
    for (int n : {3, 5, 7, 9}) {
      WindowCollection w = enum_windows(n);
      long long want = n * choose(n - 1, (n - 1) / 2);
      if (static_cast<long long>(w.size()) != want) o.fail("n=" + std::to_string(n) + " count");
      Report r = windows_suite(n);
      require_checks(o, r, [](const std::string&) { return true; });
      std::string tag = "gitwin.n" + std::to_string(n) + ".";
      for (std::string part : {"descent", "windows", "closure.targets"})
        require_checks(o, r, [&](const std::string& id) { return id == tag + part; });
      if (n <= 7) require_checks(o, r, [&](const std::string& id) { return id == tag + "pairs"; });
    }
    return o;
  });

  criterion(10, "even windows n = 4, 6, 8 and torsion pairs", 120, [] {
    Outcome o;
    for (int n : {4, 6, 8}) {
      int r = n / 2;
      if (static_cast<long long>(enum_windows(n).size()) != r * r * choose(n, r))
        o.fail("n=" + std::to_string(n) + " count");
      std::string tag = "gitwin.n" + std::to_string(n) + ".";
      Report w = windows_check(n);
      for (std::string part : {"count", "descent", "windows"})
        require_checks(o, w, [&](const std::string& id) { return id == tag + part; });
      require_checks(o, alpha_x_suite(n), [](const std::string&) { return true; });
    }
    for (int r = 2; r <= 4; ++r) require_checks(o, torsion_suite(r), [](const std::string&) { return true; });
    return o;
  });

  criterion(11, "two full runs give byte-identical reports", 0, [] {
    Outcome o;
    auto dir = std::filesystem::temp_directory_path() / "permucat_acceptance";
    std::filesystem::create_directories(dir);
    std::string a = run_cli("all --jobs 1", dir / "first.json");
    std::string b = run_cli("all", dir / "second.json");
    if (a.empty()) o.fail("no report written");
    if (a != b) o.fail("reports differ");
    if (o.ok) o.detail = std::to_string(a.size()) + " bytes each";
    return o;
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
