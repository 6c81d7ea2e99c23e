#include <doctest.h>

#include "permucat/picard.hpp"

using namespace permucat;

namespace {

Mask set_of(std::initializer_list<int> xs) {
  Mask m = 0;
  for (int x : xs) m |= bit(x);
  return m;
}

DivisorClass sum_e(Model m, int size, Mask must = 0) {
  DivisorClass d = zero_class(m);
  for (Mask j = 1; j <= m.ground; ++j)
    if ((j & m.ground) == j && popcnt(j) == size && (j & must) == must) d += e_class(m, j);
  return d;
}

}  // namespace

TEST_CASE("G classes") {
  Model m3 = lm(full_mask(3));
  CHECK(g_class(m3, 1) == -h_class(m3));
  CHECK(g_class(m3, 2) == h_class(m3) * -2 + sum_e(m3, 1));
  CHECK(g_class(m3, 2) == -psi_inf(m3));
  Model x0{full_mask(3), 0};
  CHECK(g_class(x0, 3) == h_class(x0) * -3 + sum_e(x0, 1) * 2 + sum_e(x0, 2));
  CHECK_THROWS(g_class(m3, 3));
  CHECK_THROWS(g_class(m3, 0));
  for (int n = 2; n <= 6; ++n) {
    Model m = lm(full_mask(n));
    for (int a = 1; a <= n - 1; ++a) {
      CHECK(g_class(m, a).integral());
      CHECK(cohomology(cremona(g_class(m, a))) == cohomology(g_class(m, n - a)));
    }
  }
}

TEST_CASE("B matrix inverts to the Cartan matrix") {
  for (int n = 2; n <= 12; ++n) {
    QMatrix b(n - 1, std::vector<mpq_class>(n - 1));
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        int lo = std::min(i, j), hi = std::max(i, j);
        b[i - 1][j - 1] = mpq_class(lo * (n - hi), n);
        b[i - 1][j - 1].canonicalize();
      }
    CHECK(b_matrix(n) == b);
    QMatrix c(n - 1, std::vector<mpq_class>(n - 1, 0));
    for (int i = 0; i < n - 1; ++i) {
      c[i][i] = 2;
      if (i + 1 < n - 1) c[i][i + 1] = c[i + 1][i] = -1;
    }
    CHECK(cartan_matrix(n) == c);
    CHECK(multiply_q(b, c) == identity_q(n - 1));
  }
  QMatrix b3 = b_matrix(3);
  CHECK(b3[0][0] == mpq_class(2, 3));
  CHECK(b3[0][1] == mpq_class(1, 3));
  for (int n = 2; n <= 8; ++n) CHECK(class_identities_check(n).ok());
}

TEST_CASE("forgetful pullbacks") {
  Model m4 = lm(full_mask(4));
  auto e = [&](std::initializer_list<int> xs) { return e_class(m4, set_of(xs)); };
  DivisorClass want = h_class(m4) * -2 + e({4}) * 2 + e({1}) + e({2}) + e({3}) + e({1, 4}) +
                      e({2, 4}) + e({3, 4});
  CHECK(pullback_forgetful(m4, bit(4), 2) == want);
  for (int a = 1; a <= 3; ++a) CHECK(pullback_forgetful(m4, 0, a) == g_class(m4, a));
  Model m3 = lm(full_mask(3));
  CHECK(pullback_forgetful(m3, bit(3), 1) == -h_class(m3) + e_class(m3, bit(3)));
  CHECK_THROWS(pullback_forgetful(m3, bit(3), 2));
}

TEST_CASE("reductions") {
  Model m3 = lm(full_mask(3));
  CHECK(reduction_pullback(Reduction::psi0, 3) == h_class(m3) - sum_e(m3, 1));
  CHECK(reduction_pullback(Reduction::delta_i0, 3, 1) == e_class(m3, bit(1)));
  Model m5 = lm(full_mask(5));
  CHECK(reduction_pullback(Reduction::delta_i0, 5, 1) == e_class(m5, bit(1)) + sum_e(m5, 2, bit(1)));
  for (int n : {3, 5, 7}) CHECK(reduction_relations_check(n).ok());
}

TEST_CASE("sigma decomposition") {
  auto s3 = sigma_decomposition(3, 0, 1);
  CHECK(s3.identity);
  CHECK(s3.sigma1.is_zero());
  CHECK(s3.sigma2.is_zero());
  auto s5 = sigma_decomposition(5, 0, 1);
  CHECK(s5.identity);
  CHECK(s5.sigma1.is_zero());
  CHECK(s5.sigma2 == sum_e(lm(full_mask(5)), 2));
  for (int n = 3; n <= 6; ++n)
    for (Mask i = 0; i < full_mask(n); ++i) {
      int rest = n - popcnt(i);
      for (int a = 1; a <= rest - 1; ++a) {
        auto s = sigma_decomposition(n, i, a);
        CHECK(s.identity);
        CHECK(s.violations.empty());
      }
    }
}

TEST_CASE("blow-down compatibility") {
  auto b = blowdown_compat(3, -1, 2, 3);
  CHECK(b.identity);
  CHECK(b.f_div == e_class(Model{full_mask(3), -1}, bit(3)));
  auto b1 = blowdown_compat(3, -1, 1, 2);
  CHECK(b1.identity);
  CHECK(b1.f_div.is_zero());
  for (int n = 3; n <= 5; ++n)
    for (int r = -1; r <= 1; ++r)
      for (int a = 1; a <= n + r; ++a)
        for (int i = 1; i <= n; ++i) {
          auto res = blowdown_compat(n, r, a, i);
          CHECK_MESSAGE(res.identity, res.witness);
          CHECK_MESSAGE(res.bounds, res.witness);
        }
}

TEST_CASE("restriction to strata") {
  Mask g = full_mask(4), left = set_of({1, 2}), right = set_of({3, 4});
  std::vector<Mask> chain{left};
  auto g2 = restrict_to_stratum(g, {{Generator::g, 2}}, chain);
  REQUIRE(g2.size() == 2);
  CHECK(g2[0].is_zero());
  CHECK(g2[1].is_zero());
  auto g3 = restrict_to_stratum(g, {{Generator::g, 3}}, chain);
  REQUIRE(g3.size() == 2);
  CHECK(g3[0].is_zero());
  CHECK(g3[1] == -g_class(lm(right), 1));
  Generator d{Generator::delta};
  d.s = left;
  auto self = restrict_to_stratum(g, {d}, chain);
  REQUIRE(self.size() == 2);
  CHECK(self[0] == -psi_inf(lm(left)));
  CHECK(self[1] == -psi0(lm(right)));
  for (auto gens : std::vector<std::vector<Generator>>{{{Generator::g, 1}}, {{Generator::g, 3}}, {d}}) {
    auto sym = restrict_to_stratum(g, gens, chain);
    auto tor = restrict_toric(expand_generators(g, gens), chain);
    REQUIRE(sym.size() == tor.size());
    for (std::size_t i = 0; i < sym.size(); ++i) CHECK(cohomology(sym[i]) == cohomology(tor[i]));
  }
}

TEST_CASE("lifts") {
  Mask a = set_of({1, 2}), b = set_of({3, 4});
  CHECK(lift_bundle({a, b}, {0, 1}) == g_class(lm(full_mask(4)), 3));
  CHECK(lift_bundle({a, b}, {1, 0}) == g_class(lm(full_mask(4)), 1));
  CHECK_THROWS(lift_bundle({a, b}, {0, 0}));
  DivisorClass both = lift_bundle({a, b}, {1, 1});
  auto res = restrict_toric(both, chain_of_blocks({a, b}));
  REQUIRE(res.size() == 2);
  CHECK(cohomology(res[0]) == cohomology(g_class(lm(a), 1)));
  CHECK(cohomology(res[1]) == cohomology(g_class(lm(b), 1)));
  CHECK(cohomology(both).acyclic());
}

TEST_CASE("pullback agrees with the toric pullback") {
  for (int n = 3; n <= 5; ++n) {
    Model m = lm(full_mask(n));
    Mask forgotten = bit(n);
    Model small = lm(full_mask(n - 1));
    for (int a = 1; a <= n - 2; ++a) {
      DivisorClass d = g_class(small, a);
      CHECK(pullback_class(m, forgotten, d) == pullback_toric(m, forgotten, d));
      CHECK(pullback_class(m, forgotten, d) == pullback_forgetful(m, forgotten, a));
    }
  }
}
