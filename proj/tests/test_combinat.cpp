#include <algorithm>
#include <set>

#include <doctest.h>

#include "permucat/combinat.hpp"

using namespace permucat;

namespace {

// !n by inclusion-exclusion
long long derangement_oracle(int n) {
  long long fact = 1, sum = 0;
  for (int i = 1; i <= n; ++i) fact *= i;
  long long term = fact;  // n!/k!
  for (int k = 0; k <= n; ++k) {
    sum += (k % 2 ? -term : term);
    if (k < n) term /= (k + 1);
  }
  return sum;
}

long long fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }

// sum over compositions with parts >= 2 of multinomial times prod (k_i - 1)
long long composition_oracle(int rest, int n) {
  if (rest == 0) return 1;
  long long total = 0;
  for (int k = 2; k <= rest; ++k) {
    long long choose = fact(rest) / (fact(k) * fact(rest - k));
    total += choose * (k - 1) * composition_oracle(rest - k, n);
  }
  return total;
}

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

}  // namespace

TEST_CASE("enumeration matches the derangement count") {
  for (int n = 1; n <= 9; ++n) {
    auto all = enumerate_ghat(n);
    CHECK(static_cast<long long>(all.size()) == derangement_oracle(n));
    CHECK(derangements(n).get_si() == derangement_oracle(n));
    for (const auto& o : all) CHECK(valid(o));
    CHECK(std::is_sorted(all.begin(), all.end(), canonical_less));
  }
  CHECK_THROWS(enumerate_ghat(0));
  CHECK(enumerate_ghat(1).empty());
}

TEST_CASE("small collections") {
  auto two = enumerate_ghat(2);
  REQUIRE(two.size() == 1);
  CHECK(to_text(two[0]) == "1,2;1");

  auto three = enumerate_ghat(3);
  REQUIRE(three.size() == 2);
  CHECK(to_text(three[0]) == "1,2,3;1");
  CHECK(to_text(three[1]) == "1,2,3;2");

  auto four = enumerate_ghat(4);
  int lines = 0, pairs = 0;
  for (const auto& o : four) {
    if (o.is_line_bundle()) ++lines;
    if (o.t() == 2 && o.k(0) == 2 && o.k(1) == 2 && o.labels == std::vector<int>{1, 1}) ++pairs;
  }
  CHECK(lines == 3);
  CHECK(pairs == 6);
}

TEST_CASE("composition formula and recursion") {
  for (int n = 1; n <= 14; ++n) {
    CHECK(eq13_lhs(n).get_si() == composition_oracle(n, n));
    CHECK(eq13_lhs(n).get_si() == derangement_oracle(n));
  }
  CHECK(eq13_lhs(4) == 9);
  CHECK(derangements(5) == 44);
  for (int n = 2; n <= 16; ++n) {
    mpz_class rhs = derangements(n) + 1;
    for (int k = 1; k <= n - 1; ++k) rhs += binomial(n, k) * derangements(n - k);
    mpz_class nf = 1;
    for (int i = 2; i <= n; ++i) nf *= i;
    CHECK(nf == rhs);
  }
  for (const auto& row : derangement_suite(12)) {
    CHECK(row.oracle == row.lhs13);
    CHECK(row.recursion33);
    if (row.enumerated >= 0) CHECK(row.enumerated == row.oracle);
  }
}

TEST_CASE("text round trip") {
  for (const auto& o : enumerate_ghat(6)) CHECK(from_text(6, to_text(o)) == o);
  CHECK_THROWS(from_text(4, "1,2|3;1,1"));
  CHECK_THROWS(from_text(4, "1,2,3,4"));
}

TEST_CASE("group action") {
  GroupElement crem{true, {}};
  CHECK(group_act(crem, obj(3, {{1, 2, 3}}, {1})) == obj(3, {{1, 2, 3}}, {2}));
  GroupElement swap12{false, {2, 1, 3, 4}};
  CHECK(group_act(swap12, obj(4, {{1, 3}, {2, 4}}, {1, 1})) == obj(4, {{2, 3}, {1, 4}}, {1, 1}));

  GroupElement cyc{false, {2, 3, 4, 5, 1}};
  GroupElement mixed{true, {3, 1, 2, 5, 4}};
  std::set<std::string> images;
  for (const auto& o : enumerate_ghat(5)) {
    CHECK(group_act(crem, group_act(crem, o)) == o);
    CHECK(group_act(compose(cyc, mixed), o) == group_act(cyc, group_act(mixed, o)));
    auto c = group_act(crem, o);
    CHECK(valid(c));
    std::vector<int> ko, kc;
    for (int i = 0; i < o.t(); ++i) ko.push_back(o.k(i));
    for (int i = 0; i < c.t(); ++i) kc.push_back(c.k(i));
    std::sort(ko.begin(), ko.end());
    std::sort(kc.begin(), kc.end());
    CHECK(ko == kc);
    images.insert(to_text(c));
  }
  CHECK(images.size() == enumerate_ghat(5).size());
}

TEST_CASE("orders") {
  auto g2 = obj(4, {{1, 2, 3, 4}}, {2}), g1 = obj(4, {{1, 2, 3, 4}}, {1});
  CHECK(compare(g2, g1, Order::lex) == Cmp::greater);
  CHECK(compare(g1, g1, Order::lex) == Cmp::equal);
  CHECK(compare(g1, g1, Order::lex_prime) == Cmp::equal);
  auto t = obj(8, {{1, 2, 3}, {4, 5, 6, 7, 8}}, {1, 3});
  auto tp = obj(8, {{1, 2, 3}, {4, 5}, {6, 7, 8}}, {2, 1, 1});
  CHECK(compare(t, tp, Order::lex) == Cmp::less);
  CHECK(order_key(t, Order::lex) == std::vector<int>{1, -3, 3, -5});
  CHECK_THROWS(compare(g1, obj(3, {{1, 2, 3}}, {1}), Order::lex));

  for (auto kind : {Order::lex, Order::lex_prime}) {
    auto all = enumerate_ghat(5);
    for (const auto& x : all)
      for (const auto& y : all) {
        auto a = compare(x, y, kind), b = compare(y, x, kind);
        CHECK((a == Cmp::less) == (b == Cmp::greater));
      }
  }
}

TEST_CASE("end data criterion") {
  auto t = obj(8, {{1, 2, 3}, {4, 5, 6, 7, 8}}, {1, 3});
  auto tp = obj(8, {{1, 2, 3}, {4, 5}, {6, 7, 8}}, {2, 1, 1});
  CHECK(end_data_decide(tp, t).kind == Decision::vanish);
  CHECK(end_data_decide(t, tp).kind == Decision::inconclusive);

  auto a = obj(7, {{1, 2}, {3, 4, 5}, {6, 7}}, {1, 1, 1});
  auto b = obj(7, {{1, 2}, {3, 4, 5}, {6, 7}}, {1, 2, 1});
  auto d = end_data_decide(a, b);
  REQUIRE(d.kind == Decision::recurse);
  CHECK(d.t.t() == 1);
  CHECK(d.t.labels == std::vector<int>{1});
  CHECK(d.tp.labels == std::vector<int>{2});

  auto c = obj(4, {{1, 2}, {3, 4}}, {1, 1});
  CHECK(end_data_decide(c, c).kind == Decision::inconclusive);
}
