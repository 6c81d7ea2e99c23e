#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace permucat {

using Mask = std::uint32_t;

inline int popcnt(Mask m) { return __builtin_popcount(m); }
inline Mask full_mask(int n) { return n >= 32 ? ~Mask(0) : (Mask(1) << n) - 1; }
// element i (1-based) lives in bit i-1
inline Mask bit(int i) { return Mask(1) << (i - 1); }
std::vector<int> elements(Mask m);
std::string mask_str(Mask m);
// position-wise relabeling between a ground mask and 1..|ground|
Mask compress(Mask m, Mask ground);
Mask expand(Mask local, Mask ground);

struct GhatObject {
  int n = 0;
  std::vector<Mask> blocks;
  std::vector<int> labels;

  int t() const { return static_cast<int>(blocks.size()); }
  int k(int i) const { return popcnt(blocks[i]); }
  bool is_line_bundle() const { return blocks.size() == 1; }
  bool operator==(const GhatObject&) const = default;
};

bool valid(const GhatObject& o);
std::string to_text(const GhatObject& o);
GhatObject from_text(int n, const std::string& s);
// canonical encoding order: blocks as sorted element lists, then labels
bool canonical_less(const GhatObject& x, const GhatObject& y);

void for_each_ghat(int n, const std::function<void(const GhatObject&)>& f);
std::vector<GhatObject> enumerate_ghat(int n);

mpz_class derangements(int n);
mpz_class binomial(int n, int k);
mpz_class eq13_lhs(int n);

struct DerangementRow {
  int n;
  mpz_class oracle;
  mpz_class enumerated;  // -1 when enumeration is beyond the cap
  mpz_class lhs13;
  bool recursion33;
};
inline constexpr int kEnumerateCap = 11;
std::vector<DerangementRow> derangement_suite(int n_max);

struct GroupElement {
  bool cremona = false;
  std::vector<int> perm;  // perm[i-1] = image of i; empty means identity
};
GhatObject group_act(const GroupElement& g, const GhatObject& o);
GroupElement compose(const GroupElement& g, const GroupElement& h);  // g after h

enum class Order { lex, lex_prime };
enum class Cmp { less, equal, greater };
std::vector<int> order_key(const GhatObject& o, Order kind);
Cmp compare(const GhatObject& x, const GhatObject& y, Order kind);

struct EndData {
  int k_first, k_last, b_first, b_last;
};
EndData end_data(const GhatObject& o);

struct Decision {
  enum Kind { vanish, recurse, inconclusive } kind;
  GhatObject t, tp;
  std::string note;
};
Decision end_data_decide(const GhatObject& T, const GhatObject& Tp);

}  // namespace permucat
