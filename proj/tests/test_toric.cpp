#include <filesystem>
#include <random>

#include <doctest.h>

#include "permucat/picard.hpp"
#include "permucat/toric.hpp"

using namespace permucat;

namespace {

long long choose(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// h^i(O(k)) on P^d from the closed formulas
std::vector<long long> projective_oracle(int d, int k) {
  std::vector<long long> h(d + 1, 0);
  if (k >= 0) h[0] = choose(k + d, d);
  if (k <= -d - 1) h[d] = choose(-k - 1, d);
  return h;
}

long long fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

}  // namespace

TEST_CASE("LM fans") {
  for (int n = 2; n <= 6; ++n) {
    Fan f = lm_fan(n);
    CHECK(f.rays.size() == (std::size_t(1) << n) - 2);
    CHECK(static_cast<long long>(f.cones.size()) == fact(n));
    auto c = check_fan(f);
    CHECK(c.smooth);
    CHECK(c.complete);
  }
  CHECK(lm_fan(3).rays.size() == 6);
  CHECK(lm_fan(4).cones.size() == 24);
  CHECK(lm_fan(2).rays.size() == 2);
  Fan f = lm_fan(4);
  CHECK(fan_from_json(fan_to_json(f)).rays == f.rays);
  CHECK(fan_from_json(fan_to_json(f)).cones == f.cones);
}

TEST_CASE("projective spaces against closed formulas") {
  for (int d = 1; d <= 3; ++d) {
    ToricVariety v(projective_fan(d));
    for (int k = -6; k <= 6; ++k) {
      TDivisor div(v.nrays(), 0);
      div[0] = k;
      CHECK(v.cohomology(div).h == projective_oracle(d, k));
    }
  }
  ToricVariety p1(projective_fan(1));
  CHECK(p1.cohomology({-1, 0}).h == std::vector<long long>{0, 0});
  ToricVariety p2(projective_fan(2));
  CHECK(p2.cohomology({-3, 0, 0}).h == std::vector<long long>{0, 0, 1});
}

TEST_CASE("Kunneth on P1 x P1") {
  ToricVariety v(product(projective_fan(1), projective_fan(1)));
  ToricVariety p1(projective_fan(1));
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      TDivisor d{a, 0, b, 0};
      CHECK(v.cohomology(d) == kunneth(p1.cohomology({a, 0}), p1.cohomology({b, 0})));
    }
}

TEST_CASE("LM_3 examples") {
  Model m = lm(full_mask(3));
  DivisorClass g2 = -g_class(m, 2);
  CHECK(cohomology(g2).h == std::vector<long long>{3, 0, 0});
  CHECK(is_nef(g2));
  CHECK_FALSE(is_nef(-e_class(m, bit(1))));
  CHECK(cohomology(h_class(m)).h == std::vector<long long>{3, 0, 0});

  ToricVariety p2(projective_fan(2));
  CHECK_FALSE(p2.nef_violation({1, 0, 0}).has_value());
  CHECK(p2.nef_violation({-1, 0, 0}).has_value());
}

TEST_CASE("Serre duality and serial reference") {
  const ToricVariety& v = lm_variety(4);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(-2, 2);
  TDivisor k = v.canonical();
  for (int trial = 0; trial < 40; ++trial) {
    TDivisor d(v.nrays());
    for (auto& x : d) x = pick(rng);
    TDivisor dual(v.nrays());
    for (int i = 0; i < v.nrays(); ++i) dual[i] = k[i] - d[i];
    auto h = v.cohomology(d), hd = v.cohomology(dual);
    REQUIRE(h.h.size() == hd.h.size());
    for (std::size_t i = 0; i < h.h.size(); ++i) CHECK(h.h[i] == hd.h[h.h.size() - 1 - i]);
    CHECK(h.euler() == v.euler(d));
    CohomOptions serial{1, false, false, false};
    CHECK(v.cohomology(d, serial) == h);
    CohomOptions wide{3, true, true, false};
    CHECK(v.cohomology(d, wide) == h);
    std::vector<long long> m{pick(rng), pick(rng), pick(rng)};
    TDivisor shifted = d;
    auto p = v.principal(m);
    for (int i = 0; i < v.nrays(); ++i) shifted[i] += p[i];
    CHECK(v.cohomology(shifted) == h);
  }
}

TEST_CASE("stars") {
  Fan f = lm_fan(4);
  int r12 = f.ray_of(bit(1) | bit(2));
  REQUIRE(r12 >= 0);
  Fan s = star_fan(f, {r12});
  CHECK(s.dim == 2);
  CHECK(s.rays.size() == 4);
  CHECK(s.cones.size() == 4);
  CHECK(check_fan(s).smooth);

  DivisorClass g2 = -g_class(lm(full_mask(4)), 2);
  auto [sf, sd] = star_restrict(f, {r12}, to_tdivisor(g2));
  ToricVariety sv(sf);
  CHECK(sv.cohomology(sd).h == std::vector<long long>{1, 0, 0});

  Fan pt = star_fan(f, f.cones[0]);
  CHECK(pt.dim == 0);
}

TEST_CASE("fan cache directory") {
  auto dir = std::filesystem::temp_directory_path() / "permucat_test_cache";
  std::filesystem::remove_all(dir);
  set_fan_cache_dir(dir.string());
  const ToricVariety& v = lm_variety(5);
  CHECK(v.nrays() == 30);
  set_fan_cache_dir("");
  std::filesystem::remove_all(dir);
}
