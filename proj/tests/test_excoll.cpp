#include <doctest.h>

#include "permucat/excoll.hpp"

using namespace permucat;

namespace {

GhatObject obj(int n, std::vector<std::vector<int>> blocks, std::vector<int> labels) {
  GhatObject o;
  o.n = n;
  for (auto& b : blocks) {
    Mask m = 0;
    for (int e : b) m |= bit(e);
    o.blocks.push_back(m);
  }
  o.labels = std::move(labels);
  return o;
}

int pairs_of(const Report& r, const std::string& id) {
  const Check* c = r.find(id);
  REQUIRE(c != nullptr);
  return std::stoi(c->witness);
}

}  // namespace

TEST_CASE("pair certificates") {
  auto g2 = obj(4, {{1, 2, 3, 4}}, {2}), g1 = obj(4, {{1, 2, 3, 4}}, {1});
  auto c = pair_vanishing_certificate(g2, g1, Order::lex);
  CHECK(c.ok);
  // distinct G_a are completely orthogonal
  CHECK(pair_vanishing_certificate(g1, g2).ok);
  CHECK_FALSE(pair_vanishing_certificate(g1, g1).ok);

  auto t = obj(4, {{1, 2}, {3, 4}}, {1, 1});
  CHECK(pair_vanishing_certificate(t, g1).ok);
  CHECK(self_ext_certificate(t).ok);

  auto a = obj(5, {{1, 2}, {3, 4, 5}}, {1, 1}), b = obj(5, {{1, 3}, {2, 4, 5}}, {1, 1});
  auto d = pair_vanishing_certificate(a, b);
  CHECK(d.ok);
  CHECK(d.disjoint);
}

TEST_CASE("Euler pairing of line bundles against the toric oracle") {
  for (int n = 3; n <= 5; ++n) {
    Model m = lm(full_mask(n));
    for (int a = 1; a <= n - 1; ++a)
      for (int b = 1; b <= n - 1; ++b) {
        GhatObject x = obj(n, {{}}, {a}), y = obj(n, {{}}, {b});
        x.blocks[0] = y.blocks[0] = full_mask(n);
        // chi(G_a^dual, G_b^dual) = chi(G_b^dual - G_a^dual)
        long long want = cohomology(g_class(m, b) - g_class(m, a)).euler();
        CHECK(euler_pairing(x, y) == want);
      }
  }
}

TEST_CASE("whole collections") {
  Report r2 = verify_collection(2, Order::lex);
  CHECK(r2.ok());
  Report r3 = verify_collection(3, Order::lex);
  CHECK(r3.ok());
  CHECK(pairs_of(r3, "excoll.n3.lex.pairs") == 1);
  for (auto order : {Order::lex, Order::lex_prime}) {
    Report r4 = verify_collection(4, order);
    CHECK(r4.ok());
    CHECK(r4.find("excoll.n4.count")->witness == "9 objects");
    std::string id = std::string("excoll.n4.") + (order == Order::lex ? "lex" : "lexprime") + ".pairs";
    CHECK(pairs_of(r4, id) == 36);
  }
  CHECK_THROWS(verify_collection(7, Order::lex));
}

TEST_CASE("Gram matrix") {
  for (int n = 2; n <= 4; ++n) {
    auto g = euler_pairing_matrix(n);
    for (std::size_t i = 0; i < g.objects.size(); ++i) {
      CHECK(g.m[i][i] == 1);
      for (std::size_t j = 0; j < i; ++j) CHECK(g.m[i][j] == 0);
    }
    CHECK(gram_check(n).ok());
  }
  auto g4 = euler_pairing_matrix(4);
  auto serial = euler_pairing_matrix(4, Order::lex, false);
  CHECK(g4.m == serial.m);
  CHECK(g4.csv() == serial.csv());
}
