#include "permucat/combinat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace permucat {

std::vector<int> elements(Mask m) {
  std::vector<int> out;
  for (int i = 1; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

std::string mask_str(Mask m) {
  std::string s;
  for (int e : elements(m)) {
    if (!s.empty()) s += ',';
    s += std::to_string(e);
  }
  return s;
}

Mask compress(Mask m, Mask ground) {
  Mask out = 0;
  int j = 0;
  for (int i = 0; i < 32; ++i) {
    if (!((ground >> i) & 1)) continue;
    if ((m >> i) & 1) out |= Mask(1) << j;
    ++j;
  }
  return out;
}

Mask expand(Mask local, Mask ground) {
  Mask out = 0;
  int j = 0;
  for (int i = 0; i < 32; ++i) {
    if (!((ground >> i) & 1)) continue;
    if ((local >> j) & 1) out |= Mask(1) << i;
    ++j;
  }
  return out;
}

bool valid(const GhatObject& o) {
  if (o.blocks.empty() || o.blocks.size() != o.labels.size()) return false;
  Mask seen = 0;
  for (int i = 0; i < o.t(); ++i) {
    if (o.blocks[i] & seen) return false;
    seen |= o.blocks[i];
    if (o.k(i) < 2 || o.labels[i] < 1 || o.labels[i] > o.k(i) - 1) return false;
  }
  return seen == full_mask(o.n);
}

std::string to_text(const GhatObject& o) {
  std::string s;
  for (int i = 0; i < o.t(); ++i) {
    if (i) s += '|';
    s += mask_str(o.blocks[i]);
  }
  s += ';';
  for (int i = 0; i < o.t(); ++i) {
    if (i) s += ',';
    s += std::to_string(o.labels[i]);
  }
  return s;
}

GhatObject from_text(int n, const std::string& s) {
  GhatObject o;
  o.n = n;
  auto semi = s.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("missing ';' in " + s);
  std::stringstream bs(s.substr(0, semi)), ls(s.substr(semi + 1));
  std::string tok;
  while (std::getline(bs, tok, '|')) {
    Mask m = 0;
    std::stringstream es(tok);
    std::string e;
    while (std::getline(es, e, ',')) m |= bit(std::stoi(e));
    o.blocks.push_back(m);
  }
  while (std::getline(ls, tok, ',')) o.labels.push_back(std::stoi(tok));
  if (!valid(o)) throw std::invalid_argument("invalid object " + s);
  return o;
}

bool canonical_less(const GhatObject& x, const GhatObject& y) {
  std::size_t t = std::min(x.blocks.size(), y.blocks.size());
  for (std::size_t i = 0; i < t; ++i) {
    if (x.blocks[i] == y.blocks[i]) continue;
    auto ex = elements(x.blocks[i]), ey = elements(y.blocks[i]);
    return ex < ey;
  }
  if (x.blocks.size() != y.blocks.size()) return x.blocks.size() < y.blocks.size();
  return x.labels < y.labels;
}

namespace {

void rec(Mask rest, GhatObject& cur, const std::function<void(const GhatObject&)>& f) {
  if (!rest) {
    f(cur);
    return;
  }
  // enumerate nonempty submasks of rest
  for (Mask b = rest;; b = (b - 1) & rest) {
    if (!b) break;
    int k = popcnt(b);
    Mask left = rest & ~b;
    if (k < 2 || popcnt(left) == 1) continue;
    cur.blocks.push_back(b);
    for (int a = 1; a < k; ++a) {
      cur.labels.push_back(a);
      rec(left, cur, f);
      cur.labels.pop_back();
    }
    cur.blocks.pop_back();
  }
}

}  // namespace

void for_each_ghat(int n, const std::function<void(const GhatObject&)>& f) {
  if (n <= 0) throw std::invalid_argument("undefined ground set");
  if (n > 16) throw std::invalid_argument("n exceeds 16");
  GhatObject cur;
  cur.n = n;
  rec(full_mask(n), cur, f);
}

std::vector<GhatObject> enumerate_ghat(int n) {
  std::vector<GhatObject> out;
  for_each_ghat(n, [&](const GhatObject& o) { out.push_back(o); });
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

mpz_class derangements(int n) {
  mpz_class a = 1, b = 0;  // !0, !1
  if (n == 0) return a;
  for (int i = 2; i <= n; ++i) {
    mpz_class c = (i - 1) * (a + b);
    a = b;
    b = c;
  }
  return b;
}

mpz_class binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class eq13_lhs(int n) {
  // sum over compositions with parts >= 2 of multinomial * prod (k_i - 1)
  std::vector<mpz_class> f(n + 1);
  f[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 2; k <= m; ++k) f[m] += binomial(m, k) * (k - 1) * f[m - k];
  return f[n];
}

std::vector<DerangementRow> derangement_suite(int n_max) {
  if (n_max > 20) throw std::invalid_argument("n_max exceeds 20");
  std::vector<DerangementRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    DerangementRow r{n, derangements(n), -1, eq13_lhs(n), false};
    if (n <= kEnumerateCap) {
      long long c = 0;
      for_each_ghat(n, [&](const GhatObject&) { ++c; });
      r.enumerated = static_cast<long>(c);
    }
    mpz_class fact, rhs = derangements(n) + 1;
    mpz_fac_ui(fact.get_mpz_t(), n);
    for (int k = 1; k <= n - 1; ++k) rhs += binomial(n, k) * derangements(n - k);
    r.recursion33 = fact == rhs;
    rows.push_back(r);
  }
  return rows;
}

GhatObject group_act(const GroupElement& g, const GhatObject& o) {
  GhatObject r = o;
  if (!g.perm.empty()) {
    for (auto& b : r.blocks) {
      Mask m = 0;
      for (int e : elements(b)) m |= bit(g.perm[e - 1]);
      b = m;
    }
  }
  if (g.cremona) {
    std::reverse(r.blocks.begin(), r.blocks.end());
    std::reverse(r.labels.begin(), r.labels.end());
    for (int i = 0; i < r.t(); ++i) r.labels[i] = r.k(i) - r.labels[i];
  }
  return r;
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  GroupElement r;
  r.cremona = g.cremona != h.cremona;
  std::size_t n = std::max(g.perm.size(), h.perm.size());
  if (n) {
    r.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      int x = h.perm.empty() ? int(i) + 1 : h.perm[i];
      r.perm[i] = g.perm.empty() ? x : g.perm[x - 1];
    }
  }
  return r;
}

std::vector<int> order_key(const GhatObject& o, Order kind) {
  std::vector<int> key;
  if (kind == Order::lex) {
    for (int i = 0; i < o.t(); ++i) {
      key.push_back(o.labels[i]);
      key.push_back(-o.k(i));
    }
  } else {
    for (int i = o.t() - 1; i >= 0; --i) {
      key.push_back(o.k(i) - o.labels[i]);
      key.push_back(-o.k(i));
    }
  }
  return key;
}

Cmp compare(const GhatObject& x, const GhatObject& y, Order kind) {
  if (x.n != y.n) throw std::invalid_argument("mismatched ground sets");
  auto kx = order_key(x, kind), ky = order_key(y, kind);
  if (kx != ky) return kx < ky ? Cmp::less : Cmp::greater;
  if (x == y) return Cmp::equal;
  return canonical_less(x, y) ? Cmp::less : Cmp::greater;
}

EndData end_data(const GhatObject& o) {
  int t = o.t();
  return {o.k(0), o.k(t - 1), o.k(0) - o.labels[0], o.labels[t - 1]};
}

Decision end_data_decide(const GhatObject& T, const GhatObject& Tp) {
  if (T.t() < 2 || Tp.t() < 2) throw std::invalid_argument("end data needs torsion objects");
  if (T.n != Tp.n) throw std::invalid_argument("mismatched ground sets");
  EndData e = end_data(T), f = end_data(Tp);
  int lhs1 = e.b_first + e.b_last, rhs1 = f.b_first + f.b_last;
  int lhs2 = e.k_first + e.k_last - lhs1, rhs2 = f.k_first + f.k_last - rhs1;
  Decision d{Decision::inconclusive, {}, {}, {}};
  if (lhs1 <= rhs1 && lhs2 >= rhs2 && (lhs1 < rhs1 || lhs2 > rhs2)) {
    d.kind = Decision::vanish;
    return d;
  }
  if (lhs1 != rhs1 || lhs2 != rhs2) return d;
  int t = T.t(), s = Tp.t();
  bool same = T.blocks[0] == Tp.blocks[0] && T.blocks[t - 1] == Tp.blocks[s - 1] &&
              T.labels[0] == Tp.labels[0] && T.labels[t - 1] == Tp.labels[s - 1];
  if (!same) {
    d.kind = Decision::vanish;
    d.note = "end components differ";
    return d;
  }
  if (t == 2 || s == 2) {
    d.note = "stripped object would be empty";
    return d;
  }
  d.kind = Decision::recurse;
  d.t = T;
  d.tp = Tp;
  for (GhatObject* o : {&d.t, &d.tp}) {
    o->blocks = std::vector<Mask>(o->blocks.begin() + 1, o->blocks.end() - 1);
    o->labels = std::vector<int>(o->labels.begin() + 1, o->labels.end() - 1);
  }
  return d;
}

}  // namespace permucat
