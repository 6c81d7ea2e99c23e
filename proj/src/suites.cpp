#include "permucat/suites.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "permucat/excoll.hpp"
#include "permucat/gitwin.hpp"
#include "permucat/picard.hpp"
#include "permucat/toric.hpp"

namespace permucat {

namespace {

std::string nn(int n) { return "n" + std::to_string(n); }

void check_range(int lo, int hi, int n_min, int n_max, const char* what) {
  if (n_min < lo || n_max > hi || n_min > n_max)
    throw std::invalid_argument(std::string(what) + ": n must lie in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
}

std::multiset<int> block_sizes(const GhatObject& o) {
  std::multiset<int> s;
  for (int i = 0; i < o.t(); ++i) s.insert(o.k(i));
  return s;
}

}  // namespace

Report ghat_suite(int n_min, int n_max) {
  check_range(1, kCombinatMax, n_min, n_max, "ghat");
  Report rep;
  auto rows = derangement_suite(std::min(n_max, 20));
  for (const auto& r : rows) {
    if (r.n < n_min) continue;
    std::string tag = "ghat." + nn(r.n) + ".";
    if (r.enumerated >= 0)
      rep.add(tag + "count", "|Ghat(n)| equals the number of derangements", r.enumerated == r.oracle,
              r.enumerated.get_str() + " objects, !n = " + r.oracle.get_str());
    else
      rep.note(tag + "count", "|Ghat(n)| equals the number of derangements",
               "enumeration skipped above n = " + std::to_string(kEnumerateCap) + "; !n = " +
                   r.oracle.get_str());
    rep.add(tag + "composition_identity", "sum over compositions with parts >= 2 equals !n",
            r.lhs13 == r.oracle, r.lhs13.get_str());
    rep.add(tag + "binomial_recursion", "n! = sum_k C(n,k) !(n-k)", r.recursion33);
  }

  for (int n = std::max(n_min, 2); n <= std::min(n_max, 5); ++n) {
    std::string tag = "ghat." + nn(n) + ".";
    auto objs = enumerate_ghat(n);
    std::set<std::string> keys;
    for (const auto& o : objs) keys.insert(to_text(o));
    std::vector<GroupElement> gens;
    GroupElement swap{false, {}}, cyc{false, {}}, crem{true, {}}, id{false, {}};
    for (int i = 1; i <= n; ++i) {
      swap.perm.push_back(i);
      cyc.perm.push_back(i % n + 1);
    }
    std::swap(swap.perm[0], swap.perm[1]);
    gens = {swap, cyc, crem, compose(swap, crem), compose(cyc, cyc)};
    std::string bad;
    for (const auto& o : objs) {
      if (!(group_act(id, o) == o)) bad = "identity on " + to_text(o);
      for (const auto& g : gens) {
        GhatObject go = group_act(g, o);
        if (!valid(go) || !keys.count(to_text(go))) bad = "image of " + to_text(o);
        for (const auto& h : gens)
          if (!(group_act(compose(g, h), o) == group_act(g, group_act(h, o))))
            bad = "associativity on " + to_text(o);
      }
      GhatObject c = group_act(crem, o);
      if (!(group_act(crem, c) == o) || block_sizes(c) != block_sizes(o)) bad = "Cremona on " + to_text(o);
      if (!bad.empty()) break;
    }
    rep.add(tag + "group_action", "S2 x Sn acts on Ghat(n); Cremona is an involution", bad.empty(), bad);

    bad.clear();
    for (Order ord : {Order::lex, Order::lex_prime}) {
      auto sorted = objs;
      std::sort(sorted.begin(), sorted.end(),
                [&](const GhatObject& a, const GhatObject& b) { return compare(a, b, ord) == Cmp::less; });
      for (std::size_t i = 0; i < sorted.size() && bad.empty(); ++i)
        for (std::size_t j = 0; j < sorted.size() && bad.empty(); ++j) {
          Cmp c = compare(sorted[i], sorted[j], ord);
          Cmp want = i < j ? Cmp::less : i == j ? Cmp::equal : Cmp::greater;
          if (c != want) bad = to_text(sorted[i]) + " vs " + to_text(sorted[j]);
        }
    }
    rep.add(tag + "orders_total", "both orders are total on Ghat(n)", bad.empty(), bad);
  }
  return rep;
}

namespace {

struct TestFan {
  std::string name;
  const ToricVariety* var;
  std::vector<TDivisor> divisors;
  int shifts = 50;
};

std::string tstr(const TDivisor& d) {
  std::string s = "[";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + "]";
}

// all vectors of the given length with entries in [-3, 3]
std::vector<std::vector<long long>> box3(int len) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> v(len, -3);
  while (true) {
    out.push_back(v);
    int i = 0;
    while (i < len && v[i] == 3) v[i++] = -3;
    if (i == len) break;
    ++v[i];
  }
  return out;
}

TDivisor symmetric_class(const Fan& f, int k, const std::vector<long long>& c) {
  std::map<Mask, long long> cls{{0, c[0]}};
  for (Mask j = 1; j < full_mask(k); ++j)
    if (popcnt(j) <= k - 2) cls[j] = -c[popcnt(j)];
  return class_to_tdivisor(f, cls);
}

void oracle_checks(const TestFan& t, const SuiteOptions& opt, std::mt19937_64& rng, Report& rep) {
  const ToricVariety& v = *t.var;
  std::string tag = "toric.oracle." + t.name + ".";
  CohomOptions co{opt.margin, opt.parallel, true, true};
  TDivisor K = v.canonical();
  std::vector<std::string> serre(t.divisors.size()), nef(t.divisors.size()), chi(t.divisors.size());
  int nef_count = 0;
  for (std::size_t i = 0; i < t.divisors.size(); ++i) {
    const TDivisor& d = t.divisors[i];
    CohomologyTable h = v.cohomology(d, co);
    TDivisor kd(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) kd[r] = K[r] - d[r];
    CohomologyTable hk = v.cohomology(kd, co);
    auto rev = hk.h;
    std::reverse(rev.begin(), rev.end());
    if (rev != h.h) serre[i] = tstr(d) + ": " + h.str() + " vs " + hk.str();
    if (!v.nef_violation(d)) {
      ++nef_count;
      bool higher = std::all_of(h.h.begin() + 1, h.h.end(), [](long long x) { return x == 0; });
      if (!higher || h.h[0] != v.lattice_points(d)) nef[i] = tstr(d) + ": " + h.str();
    }
    if (v.euler(d, opt.margin) != h.euler()) chi[i] = tstr(d);
  }
  auto first = [](const std::vector<std::string>& xs) {
    for (const auto& s : xs)
      if (!s.empty()) return s;
    return std::string();
  };
  std::string cnt = std::to_string(t.divisors.size()) + " divisors";
  std::string b = first(serre);
  rep.add(tag + "serre", "Serre duality h^i(D) = h^{d-i}(K-D)", b.empty(), b.empty() ? cnt : b);
  b = first(nef);
  rep.add(tag + "nef", "nef divisors: higher vanishing and h^0 = lattice points", b.empty(),
          b.empty() ? std::to_string(nef_count) + " nef divisors" : b);
  b = first(chi);
  rep.add(tag + "euler", "Euler characteristic matches the alternating sum", b.empty(), b.empty() ? cnt : b);

  std::uniform_int_distribution<std::size_t> pick(0, t.divisors.size() - 1);
  std::uniform_int_distribution<long long> coord(-3, 3);
  b.clear();
  for (int s = 0; s < t.shifts && b.empty(); ++s) {
    const TDivisor& d = t.divisors[pick(rng)];
    std::vector<long long> m(v.dim());
    for (auto& x : m) x = coord(rng);
    TDivisor p = v.principal(m), e(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) e[r] = d[r] + p[r];
    if (!(v.cohomology(e, co) == v.cohomology(d, co))) b = tstr(d) + " shifted by " + tstr(m);
  }
  rep.add(tag + "shift", "cohomology is invariant under principal shifts", b.empty(),
          b.empty() ? std::to_string(t.shifts) + " shifts" : b);

  b.clear();
  for (int s = 0; s < 10 && b.empty(); ++s) {
    const TDivisor& d = t.divisors[pick(rng)];
    CohomOptions c0 = co, c2 = co;
    c0.margin = 0;
    c2.margin = 2;
    if (!(v.cohomology(d, c0) == v.cohomology(d, c2))) b = tstr(d);
  }
  rep.add(tag + "margin", "candidate margin 0 and 2 give the same table", b.empty(), b);
}

}  // namespace

Report toric_suite(int n_max, const SuiteOptions& opt) {
  check_range(2, kToricMax, 2, n_max, "toric");
  Report rep;
  for (int k = 2; k <= n_max; ++k) {
    const ToricVariety& v = lm_variety(k);
    std::string tag = "toric.lm" + std::to_string(k) + ".";
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), k);
    rep.add(tag + "rays", "2^n - 2 rays", v.nrays() == (1 << k) - 2, std::to_string(v.nrays()));
    rep.add(tag + "cones", "maximal cones parametrized by permutations",
            mpz_class(static_cast<long>(v.fan().cones.size())) == fact,
            std::to_string(v.fan().cones.size()));
    FanCheck fc = check_fan(v.fan());
    rep.add(tag + "smooth_complete", "fan is smooth and complete", fc.smooth && fc.complete, fc.witness);
  }

  std::mt19937_64 rng(20240611);
  ToricVariety p1(projective_fan(1)), p2(projective_fan(2)),
      p1p1(product(projective_fan(1), projective_fan(1)));
  std::vector<TestFan> fans;
  fans.push_back({"p1", &p1, box3(2)});
  fans.push_back({"p2", &p2, box3(3)});
  fans.push_back({"p1xp1", &p1p1, box3(4)});
  if (n_max >= 3) {
    const auto& l3 = lm_variety(3);
    std::vector<TDivisor> ds;
    for (const auto& c : box3(4))
      ds.push_back(class_to_tdivisor(l3.fan(), {{0, c[0]}, {1, c[1]}, {2, c[2]}, {4, c[3]}}));
    fans.push_back({"lm3", &l3, ds});
  }
  for (int k = 4; k <= std::min(n_max, 5); ++k) {
    const auto& l = lm_variety(k);
    std::vector<TDivisor> ds;
    for (const auto& c : box3(k - 1)) ds.push_back(symmetric_class(l.fan(), k, c));
    fans.push_back({"lm" + std::to_string(k), &l, ds});
  }
  if (n_max >= 6) {
    const auto& l6 = lm_variety(6);
    std::uniform_int_distribution<long long> c1(-1, 1);
    std::vector<TDivisor> ds;
    for (int s = 0; s < 200; ++s) {
      TDivisor d(l6.nrays());
      for (auto& x : d) x = c1(rng);
      ds.push_back(d);
    }
    fans.push_back({"lm6", &l6, ds});
  }
  for (const auto& t : fans) oracle_checks(t, opt, rng, rep);
  return rep;
}

namespace {

bool acyclic(const DivisorClass& d, const SuiteOptions& opt) {
  return cohomology(d, {opt.margin, opt.parallel, true, true}).acyclic();
}

void g_bundle_checks(int n, const SuiteOptions& opt, Report& rep) {
  Model m = lm(full_mask(n));
  std::string tag = "picard." + nn(n) + ".";
  auto G = [&](int a) { return -g_class(m, a); };
  std::string nef, dual, diff, psi, crem;
  for (int a = 1; a <= n - 1; ++a) {
    if (nef.empty() && !is_nef(G(a))) nef = "G_" + std::to_string(a);
    if (dual.empty() && !acyclic(g_class(m, a), opt)) dual = "G_" + std::to_string(a);
    if (crem.empty() && !(cremona(g_class(m, a)) == g_class(m, n - a))) crem = "G_" + std::to_string(a);
    for (int b = 1; b <= n - 1; ++b) {
      if (a == b) continue;
      std::string ab = std::to_string(a) + "," + std::to_string(b);
      if (diff.empty() && !acyclic(G(b) - G(a), opt)) diff = "G_b - G_a at " + ab;
      if (a < b && psi.empty() && !acyclic(-psi0(m) + G(a) - G(b), opt)) psi = "-psi_0 + G_a - G_b at " + ab;
    }
  }
  rep.add(tag + "g_nef", "every G_a is nef", nef.empty(), nef);
  rep.add(tag + "g_dual_acyclic", "every dual G_a is acyclic", dual.empty(), dual);
  rep.add(tag + "g_difference_acyclic", "G_b - G_a is acyclic for a != b", diff.empty(), diff);
  rep.add(tag + "psi_g_acyclic", "-psi_0 + G_a - G_b is acyclic for a < b", psi.empty(), psi);
  rep.add(tag + "g_cremona", "Cremona sends G_a to G_{n-a}", crem.empty(), crem);
}

void acyclicity_checks(int n, const SuiteOptions& opt, Report& rep) {
  Model m = lm(full_mask(n));
  std::vector<Mask> js;
  for (Mask j = 1; j < full_mask(n); ++j)
    if (m.admissible(j)) js.push_back(j);
  auto build = [&](int d, const std::vector<int>& mult) {
    DivisorClass c = zero_class(m);
    c.add(0, -d);
    for (std::size_t i = 0; i < js.size(); ++i) c.add(js[i], mult[i]);
    return c;
  };
  std::string bad;
  long long tested = 0;
  if (n <= 4) {
    for (int d = 1; d <= n - 1 && bad.empty(); ++d) {
      std::vector<int> mult(js.size(), 0);
      while (bad.empty()) {
        ++tested;
        DivisorClass c = build(d, mult);
        if (!acyclic(c, opt)) bad = c.str();
        std::size_t i = 0;
        while (i < js.size() && mult[i] == n - 1 - popcnt(js[i])) mult[i++] = 0;
        if (i == js.size()) break;
        ++mult[i];
      }
    }
  } else {
    std::mt19937_64 rng(1729 + n);
    for (int s = 0; s < 500 && bad.empty(); ++s) {
      int d = std::uniform_int_distribution<int>(1, n - 1)(rng);
      std::vector<int> mult(js.size());
      for (std::size_t i = 0; i < js.size(); ++i)
        mult[i] = std::uniform_int_distribution<int>(0, n - 1 - popcnt(js[i]))(rng);
      ++tested;
      DivisorClass c = build(d, mult);
      if (!acyclic(c, opt)) bad = c.str();
    }
  }
  rep.add("picard." + nn(n) + ".acyclicity", "-dH + sum m_I E_I is acyclic in the dimension-adjusted range",
          bad.empty(), bad.empty() ? std::to_string(tested) + " divisors" : bad);
}

void reduction_checks(int n, Report& rep) {
  std::string tag = "picard." + nn(n) + ".";
  Mask N = full_mask(n);
  std::string bad;
  int count = 0;
  for (Mask i = 0; i < N; ++i) {
    if (popcnt(i) > n - 2) continue;
    for (int a = 1; a <= n - popcnt(i) - 1; ++a) {
      ++count;
      auto s = sigma_decomposition(n, i, a);
      if (bad.empty() && (!s.identity || !s.violations.empty()))
        bad = mask_str(i) + " a=" + std::to_string(a) +
              (s.violations.empty() ? "" : ": " + s.violations.front());
    }
  }
  rep.add(tag + "sigma", "pullback of G_a splits into psi_0 and two boundary sums with bounded coefficients",
          bad.empty(), bad.empty() ? std::to_string(count) + " cases" : bad);

  bad.clear();
  Model md = lm(N);
  for (Mask i = 1; i < N && bad.empty(); ++i) {
    if (popcnt(i) > n - 2) continue;
    Model t = lm(N & ~i);
    for (int a = 1; a <= t.n() - 1 && bad.empty(); ++a) {
      auto g = g_class(t, a);
      auto p1 = pullback_class(md, i, g), p2 = pullback_toric(md, i, g), p3 = pullback_forgetful(md, i, a);
      if (!(p1 == p2 && p2 == p3)) bad = mask_str(i) + " a=" + std::to_string(a);
      // composition through a further forgetful map
      for (Mask i2 = 1; i2 < N && bad.empty(); ++i2) {
        if ((i2 & i) || popcnt(i | i2) > n - 2) continue;
        Model mid = lm(N & ~i);
        Model tgt = lm(N & ~(i | i2));
        for (int b = 1; b <= tgt.n() - 1 && bad.empty(); ++b) {
          auto two = pullback_class(md, i, pullback_forgetful(mid, i2, b));
          if (!(two == pullback_forgetful(md, i | i2, b)))
            bad = "composition " + mask_str(i) + " then " + mask_str(i2);
        }
      }
    }
  }
  rep.add(tag + "pullback_forms", "class, toric and closed-form pullbacks agree and compose", bad.empty(), bad);

  if (n <= 5) {
    bad.clear();
    std::vector<std::vector<Generator>> gens;
    for (int a = 1; a < n; ++a) gens.push_back({{Generator::g, a, 0, 1}});
    gens.push_back({{Generator::psi0, 0, 0, 1}});
    gens.push_back({{Generator::psi_inf, 0, 0, 1}});
    for (Mask s = 1; s < N; ++s) gens.push_back({{Generator::delta, 0, s, 1}});
    int tot = 0;
    for (Mask a = 1; a < N && bad.empty(); ++a) {
      std::vector<std::vector<Mask>> chains = {{a}};
      for (Mask b = 1; b < N; ++b)
        if ((a & b) == a && a != b) chains.push_back({a, b});
      for (const auto& g : gens)
        for (const auto& ch : chains) {
          ++tot;
          if (bad.empty() && restrict_to_stratum(N, g, ch) != restrict_toric(expand_generators(N, g), ch))
            bad = "chain at " + mask_str(a);
        }
    }
    rep.add(tag + "restriction_rule", "restriction rules agree with the toric star restriction", bad.empty(),
            bad.empty() ? std::to_string(tot) + " cases" : bad);

    bad.clear();
    count = 0;
    for (int r = -1; r <= 1; ++r)
      for (int a = 1; a <= n + r; ++a)
        for (int i = 1; i <= n; ++i) {
          if (n + r < 1) continue;
          ++count;
          auto b = blowdown_compat(n, r, a, i);
          if (bad.empty() && (!b.identity || !b.bounds))
            bad = "r=" + std::to_string(r) + " a=" + std::to_string(a) + " i=" + std::to_string(i) + ": " + b.witness;
        }
    rep.add(tag + "blowdown", "dual G_a pulls back along the blow-down up to a bounded exceptional part",
            bad.empty(), bad.empty() ? std::to_string(count) + " cases" : bad);
  }
}

}  // namespace

Report picard_suite(int n_max, const SuiteOptions& opt) {
  check_range(2, kPicardMax, 2, n_max, "picard");
  Report rep;
  for (int n = 2; n <= n_max; ++n) rep.merge(class_identities_check(n));
  for (int n = 3; n <= std::min(n_max, 9); n += 2) rep.merge(reduction_relations_check(n));
  if (n_max >= 3) rep.merge(comps_check(std::min(n_max, 6)));
  for (int n = 2; n <= std::min(n_max, 6); ++n) g_bundle_checks(n, opt, rep);
  for (int n = 2; n <= std::min(n_max, 5); ++n) acyclicity_checks(n, opt, rep);
  for (int n = 3; n <= std::min(n_max, 6); ++n) reduction_checks(n, rep);
  return rep;
}

Report excoll_suite(int n, std::optional<Order> order, const SuiteOptions& opt) {
  check_range(2, kExcollMax, n, n, "excoll");
  Report rep;
  CollectionOptions co{opt.parallel};
  if (order) rep.merge(verify_collection(n, *order, co));
  else {
    Report a = verify_collection(n, Order::lex, co), b = verify_collection(n, Order::lex_prime, co);
    rep.merge(a);
    // order-independent checks appear in both runs
    for (const auto& c : b.checks)
      if (!rep.find(c.id)) rep.checks.push_back(c);
    rep.attachments.insert(rep.attachments.end(), b.attachments.begin(), b.attachments.end());
  }
  if (n <= 5) rep.merge(gram_check(n, opt.parallel));
  return rep;
}

Report windows_suite(int n, const SuiteOptions& opt) {
  check_range(3, kGitwinMax, n, n, "windows");
  Report rep;
  GitwinOptions go{opt.parallel, true};
  rep.merge(windows_check(n, go));
  rep.merge(dictionary_check(n));
  if (n % 2 == 0) {
    rep.merge(alpha_x_suite(n));
    rep.merge(torsion_suite(n / 2));
  }
  if (n % 2 || n <= 6) rep.merge(closure_fullness(n));
  return rep;
}

}  // namespace permucat
