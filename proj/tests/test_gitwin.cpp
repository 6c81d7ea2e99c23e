#include <set>

#include <doctest.h>

#include "permucat/gitwin.hpp"

using namespace permucat;

namespace {

Mask set_of(std::initializer_list<int> xs) {
  Mask m = 0;
  for (int x : xs) m |= bit(x);
  return m;
}

long long choose(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Laurent polynomial in t as exponent -> coefficient
using Laurent = std::map<int, long long>;

// (1 - t^2) times the signed character of H^*(P^1, O(m))
Laurent times_one_minus_t2(const WeightTable& w) {
  Laurent out;
  for (const auto& [key, d] : w.dim) {
    long long s = key.first % 2 ? -d : d;
    out[key.second] += s;
    out[key.second + 2] -= s;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

TEST_CASE("equivariant cohomology of P1 by localization") {
  // fixed points contribute t^{-m} / (1 - t^2) and t^{m} / (1 - t^{-2})
  for (int m = -6; m <= 6; ++m) {
    Laurent want;
    want[-m] += 1;
    want[m + 2] -= 1;
    std::erase_if(want, [](const auto& kv) { return kv.second == 0; });
    CHECK(times_one_minus_t2(p1_table(m)) == want);
  }
  WeightTable o1 = p1_table(1);
  CHECK(o1.dim.size() == 2);
  CHECK(o1.dim.count({0, -1}));
  CHECK(o1.dim.count({0, 1}));
  WeightTable om2 = p1_table(-2);
  CHECK(om2.dim == std::map<std::pair<int, int>, long long>{{{1, 0}, 1}});
  CHECK(eq_cohomology_p1n({0, 0, 0}).dim == std::map<std::pair<int, int>, long long>{{{0, 0}, 1}});
  // Kunneth: totals multiply
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      CHECK(eq_cohomology_p1n({a, b}).total() == p1_table(a).total() * p1_table(b).total());
}

TEST_CASE("projective totals") {
  for (int d = 1; d <= 5; ++d)
    for (int k = -10; k <= 10; ++k) {
      long long want = k >= 0 ? choose(k + d, d) : k <= -d - 1 ? choose(-k - 1, d) : 0;
      CHECK(projective_h_total(d, k) == want);
    }
}

TEST_CASE("odd windows") {
  auto w3 = enum_windows(3);
  CHECK(w3.size() == 6);
  CHECK(w3.torsion.empty());
  std::set<std::string> seen;
  for (const auto& b : w3.bundles) {
    CHECK(descent_check(b));
    seen.insert(b.str());
  }
  CHECK(seen.size() == 6);
  for (int n : {3, 5, 7, 9}) CHECK(static_cast<long long>(enum_windows(n).size()) == euler_char_odd(n));
  CHECK(euler_char_odd(3) == 6);
  CHECK(euler_char_odd(5) == 5 * choose(4, 2));

  EqLineBundle b = line_bundle(3, full_mask(3), 1);
  CHECK(descent_check(b));
  CHECK_FALSE(descent_check(line_bundle(3, 0, 1)));
  Stratum s12{Stratum::lambda, set_of({1, 2})};
  WindowSpec sp = window_spec(3, s12);
  CHECK(sp.w == 0);
  CHECK(sp.eta == 4);
  CHECK(kn_weight(b, s12) == 2);
  CHECK(window_membership(b, sp));
  Stratum s123{Stratum::lambda, full_mask(3)};
  WindowSpec sp3 = window_spec(3, s123);
  CHECK(sp3.w == 0);
  CHECK(sp3.eta == 6);
  CHECK(kn_weight(b, s123) == 4);
  CHECK(window_membership(b, sp3));
}

TEST_CASE("odd pairs") {
  EqLineBundle l1 = line_bundle(3, set_of({1, 2}), 0);
  EqLineBundle l2 = line_bundle(3, full_mask(3), 1);
  EqLineBundle l3 = line_bundle(3, set_of({1, 3}), 0);
  CHECK(pair_check_odd(l1, l2));
  CHECK(pair_check_odd(l1, l3));
  CHECK(pair_check_odd(l3, l1));
  CHECK_FALSE(pair_check_odd(l1, l1));
  CHECK_THROWS(pair_check_odd(line_bundle(4, 0, 0), line_bundle(4, 0, 0)));
}

TEST_CASE("even windows") {
  auto w4 = enum_windows(4);
  CHECK(w4.bundles.size() == 18);
  CHECK(w4.torsion.size() == 6);
  CHECK(w4.size() == 24);
  CHECK(euler_char_even(4) == 4 * choose(4, 2));
  auto w6 = enum_windows(6);
  CHECK(w6.bundles.size() == 60);
  CHECK(w6.torsion.size() == 120);
  CHECK(euler_char_even(6) == 9 * choose(6, 3));
  CHECK(static_cast<long long>(enum_windows(8).size()) == euler_char_even(8));

  EqLineBundle l = l_bundle(4, set_of({1, 2}), 0);
  Mask t = set_of({1, 2});
  CHECK(x_value(4, set_of({1, 2}), 0, t) == 1);
  CHECK(l.alpha.at(t) == -1);
  Stratum plus{Stratum::plus, t};
  WindowSpec sp = window_spec(4, plus);
  CHECK(sp.w == -4);
  CHECK(sp.eta == 8);
  CHECK(kn_weight(l, plus) == 0);
  CHECK(window_membership(l, sp));
  for (const auto& b : w4.bundles) {
    CHECK(descent_check(b));
    for (const auto& [tt, a] : b.alpha) CHECK((a == -1 || a == 0));
  }
}

TEST_CASE("torsion pairs") {
  auto v = torsion_pair_check(2, 1, 1, 0, 0);
  CHECK(v.criterion == TorsionPair::not_pair);
  CHECK(v.brute == TorsionPair::not_pair);
  auto e = torsion_pair_check(2, 1, 1, 1, 0);
  CHECK(e.criterion == TorsionPair::exceptional_pair);
  CHECK(e.brute == TorsionPair::exceptional_pair);
  CHECK(e.dim == 0);
  auto s = torsion_pair_check(3, 1, 2, 1, 2);
  CHECK(s.criterion == TorsionPair::endo_scalar);
  CHECK(s.dim == 1);
  for (int r = 2; r <= 4; ++r)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int ap = 0; ap < r; ++ap)
          for (int bp = 0; bp < r; ++bp) {
            auto x = torsion_pair_check(r, a, b, ap, bp);
            CHECK(x.criterion == x.brute);
          }
}

TEST_CASE("restriction to the exceptional divisor") {
  EqLineBundle l = l_bundle(4, set_of({1, 2}), 0);
  Mask t = set_of({1, 2});
  CHECK(restrict_to_delta(l, t) == std::pair<int, int>{0, 1});
  // R = L + x_T delta_T with delta_T = O(2 E_T) and x_T = 1
  EqLineBundle r = l;
  r.alpha[t] += 2;
  CHECK(restrict_to_delta(r, t) == std::pair<int, int>{-1, 0});
  EqLineBundle d = line_bundle(4, 0, 0);
  d.alpha[t] = 2;
  CHECK(restrict_to_delta(d, t) == std::pair<int, int>{-1, -1});
}

TEST_CASE("suites") {
  CHECK(windows_check(3).ok());
  CHECK(windows_check(4).ok());
  CHECK(dictionary_check(3).ok());
  CHECK(dictionary_check(4).ok());
  CHECK(torsion_suite(2).ok());
  CHECK(torsion_suite(3).ok());
  CHECK(closure_fullness(5).ok());
  Report a6 = alpha_x_suite(6);
  CHECK(a6.ok());
  Report a4 = alpha_x_suite(4);
  const Check* xb = a4.find("gitwin.n4.alpha.x_bound");
  REQUIRE(xb != nullptr);
  CHECK(xb->status == Status::fail);
  CHECK(a4.find("gitwin.n4.alpha.x_bound_corrected")->status == Status::pass);
}
