#include "permucat/excoll.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace permucat {

namespace {

std::mutex g_factor_mu;
std::map<std::string, bool> g_factor_cache;
std::mutex g_euler_mu;
std::map<std::string, long long> g_euler_cache;

std::string local_key(const DivisorClass& d) {
  std::ostringstream os;
  os << d.model.n() << ":";
  std::map<Mask, mpq_class> local;
  for (const auto& [j, v] : d.c) local[compress(j, d.model.ground)] = v;
  for (const auto& [j, v] : local) os << j << "=" << v.get_str() << ";";
  return os.str();
}

bool factor_acyclic(const DivisorClass& f) {
  if (f.model.n() < 2) return false;
  std::string key = local_key(f);
  {
    std::lock_guard<std::mutex> lock(g_factor_mu);
    auto it = g_factor_cache.find(key);
    if (it != g_factor_cache.end()) return it->second;
  }
  CohomOptions opt;
  opt.parallel = false;
  bool acyclic = cohomology(f, opt).acyclic();
  std::lock_guard<std::mutex> lock(g_factor_mu);
  g_factor_cache.emplace(key, acyclic);
  return acyclic;
}

long long euler_of(const DivisorClass& d) {
  std::string key = local_key(d);
  {
    std::lock_guard<std::mutex> lock(g_euler_mu);
    auto it = g_euler_cache.find(key);
    if (it != g_euler_cache.end()) return it->second;
  }
  long long chi = lm_variety(d.model.n()).euler(to_tdivisor(d));
  std::lock_guard<std::mutex> lock(g_euler_mu);
  g_euler_cache.emplace(key, chi);
  return chi;
}

bool nested(Mask a, Mask b) { return (a & b) == a || (a & b) == b; }

std::vector<Mask> chain_of(const GhatObject& o) { return chain_of_blocks(o.blocks); }

std::string set_list(const std::vector<Mask>& sets) {
  std::string s;
  for (Mask m : sets) {
    if (!s.empty()) s += "|";
    s += mask_str(m);
  }
  return s;
}

// case of the lex analysis and the factor of W it predicts to vanish
std::pair<int, int> predict_lex(const GhatObject& t, const GhatObject& tp,
                                const std::vector<Mask>& dset) {
  Mask ground = full_mask(t.n), prefix = 0;
  for (int i = 0; i < std::min(t.t(), tp.t()); ++i) {
    int a = t.labels[i], k = t.k(i), ap = tp.labels[i], kp = tp.k(i);
    if (a > ap) return {1, i};
    if (a != ap || k > kp) return {0, -1};
    if (k < kp) return {2, i};
    prefix |= t.blocks[i];
    if (prefix == ground) return {0, -1};
    if (std::find(dset.begin(), dset.end(), prefix) != dset.end()) return {3, i};
  }
  return {0, -1};
}

std::pair<int, int> predict(const GhatObject& t, const GhatObject& tp,
                            const std::vector<Mask>& dset, Order order, int w_factors) {
  if (order == Order::lex) return predict_lex(t, tp, dset);
  GroupElement crem{true, {}};
  Mask ground = full_mask(t.n);
  std::vector<Mask> flipped;
  for (Mask d : dset) flipped.push_back(ground & ~d);
  auto [c, f] = predict_lex(group_act(crem, t), group_act(crem, tp), flipped);
  return {c, f < 0 ? f : w_factors - 1 - f};
}

std::vector<int> vanishing_factors(const FactorizedClass& fc) {
  std::vector<int> out;
  for (std::size_t i = 0; i < fc.size(); ++i)
    if (factor_acyclic(fc[i])) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

std::size_t factor_cache_size() {
  std::lock_guard<std::mutex> lock(g_factor_mu);
  return g_factor_cache.size();
}

DivisorClass lift_of(const GhatObject& t) { return lift_bundle(t.blocks, t.labels); }

DivisorClass toric_lift_of(const GhatObject& t) {
  Mask ground = full_mask(t.n);
  TDivisor d(lm_variety(t.n).nrays(), 0);
  Mask before = 0;
  for (int i = 0; i < t.t(); ++i) {
    Mask b = t.blocks[i];
    TDivisor part = to_tdivisor(g_class(lm(b), t.labels[i]));
    for (Mask s = 1; s < full_mask(popcnt(b)); ++s)
      d[compress(before | expand(s, b), ground) - 1] = part[s - 1];
    before |= b;
  }
  return from_tdivisor(ground, d);
}

VanishingCertificate self_ext_certificate(const GhatObject& t) {
  VanishingCertificate cert;
  cert.t = cert.tp = t;
  Mask ground = full_mask(t.n);
  Model m = lm(ground);
  cert.common = chain_of(t);
  int s = static_cast<int>(cert.common.size());
  auto zero = restrict_toric(zero_class(m), cert.common);
  for (const auto& f : zero) {
    if (f.model.n() < 2) continue;
    auto h = cohomology(f);
    if (h.h.empty() || h.h[0] != 1 || h.total() != 1) {
      cert.ok = false;
      cert.witness = "structure sheaf of the support";
    }
  }
  for (unsigned sub = 1; sub < (1u << s); ++sub) {
    DivisorClass d = zero_class(m);
    for (int i = 0; i < s; ++i)
      if (sub >> i & 1) d += delta0(m, cert.common[i]);
    auto v = vanishing_factors(restrict_toric(d, cert.common));
    FactorRecord r{sub, v.empty() ? -1 : v[0], {}};
    if (v.empty()) {
      cert.ok = false;
      if (cert.witness.empty()) cert.witness = "no acyclic factor for subset " + std::to_string(sub);
    }
    cert.records.push_back(r);
  }
  return cert;
}

VanishingCertificate pair_vanishing_certificate(const GhatObject& t, const GhatObject& tp,
                                                std::optional<Order> order) {
  if (t.n != tp.n) throw std::invalid_argument("mismatched ground sets");
  VanishingCertificate cert;
  cert.t = t;
  cert.tp = tp;
  if (order && compare(t, tp, *order) != Cmp::greater)
    throw std::invalid_argument("pair is not in decreasing order");
  auto c = chain_of(t), cp = chain_of(tp);
  std::vector<Mask> w = c;
  for (Mask x : cp)
    if (std::find(c.begin(), c.end(), x) == c.end()) w.push_back(x);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (!nested(w[i], w[j])) {
        cert.disjoint = true;
        return cert;
      }
  std::sort(w.begin(), w.end(),
            [](Mask a, Mask b) { return popcnt(a) < popcnt(b) || (popcnt(a) == popcnt(b) && a < b); });
  std::vector<Mask> normal;
  for (Mask x : c) {
    if (std::find(cp.begin(), cp.end(), x) != cp.end()) cert.common.push_back(x);
    else normal.push_back(x);
  }
  Model m = lm(full_mask(t.n));
  DivisorClass base = lift_of(tp) - lift_of(t);
  for (Mask x : normal) base += delta0(m, x);
  int s = static_cast<int>(cert.common.size());
  int w_factors = static_cast<int>(w.size()) + 1;
  for (unsigned sub = 0; sub < (1u << s); ++sub) {
    DivisorClass d = base;
    std::vector<Mask> dset;
    for (int i = 0; i < s; ++i)
      if (sub >> i & 1) {
        d += delta0(m, cert.common[i]);
        dset.push_back(cert.common[i]);
      }
    auto fc = restrict_toric(d, w);
    auto v = vanishing_factors(fc);
    FactorRecord r{sub, v.empty() ? -1 : v[0], {}};
    int kase = 0;
    if (order) {
      auto [cs, f] = predict(t, tp, dset, *order, w_factors);
      kase = cs;
      bool hit = cs != 0 && std::find(v.begin(), v.end(), f) != v.end();
      if (hit) r.factor = f;
      if (!hit) {
        cert.case_agrees = false;
        if (cert.witness.empty())
          cert.witness = "case " + std::to_string(cs) + " predicted factor " + std::to_string(f) +
                         " for D={" + set_list(dset) + "}";
      }
    }
    if (r.factor >= 0) r.cls = fc[r.factor].str();
    if (v.empty()) {
      cert.ok = false;
      cert.witness = "no acyclic factor for D={" + set_list(dset) + "}";
    }
    cert.cases.push_back(kase);
    cert.records.push_back(r);
  }
  return cert;
}

namespace {

std::string order_name(Order o) { return o == Order::lex ? "lex" : "lexprime"; }

template <class F>
void run_indexed(std::size_t count, bool parallel, F&& f) {
  long long total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long i = 0; i < total; ++i) f(static_cast<std::size_t>(i));
}

std::vector<GhatObject> sorted_objects(int n, Order order) {
  auto objs = enumerate_ghat(n);
  std::stable_sort(objs.begin(), objs.end(), [&](const GhatObject& x, const GhatObject& y) {
    return compare(x, y, order) == Cmp::less;
  });
  return objs;
}

}  // namespace

Report verify_collection(int n, Order order, const CollectionOptions& opt) {
  if (n < 2 || n > 6) throw std::invalid_argument("excoll supports 2 <= n <= 6");
  Report rep;
  std::string tag = "excoll.n" + std::to_string(n) + ".";
  std::string otag = tag + order_name(order) + ".";
  auto objs = sorted_objects(n, order);
  rep.add(tag + "count", "collection has !n objects", mpz_class(objs.size()) == derangements(n),
          std::to_string(objs.size()) + " objects");

  std::vector<const GhatObject*> torsion, bundles;
  for (const auto& o : objs) (o.t() >= 2 ? torsion : bundles).push_back(&o);

  std::vector<VanishingCertificate> selfs(torsion.size());
  run_indexed(torsion.size(), opt.parallel,
              [&](std::size_t i) { selfs[i] = self_ext_certificate(*torsion[i]); });
  std::string bad;
  for (const auto& c : selfs)
    if (!c.ok && bad.empty()) bad = to_text(c.t) + ": " + c.witness;
  rep.add(tag + "self_ext", "every object is exceptional", bad.empty(),
          bad.empty() ? std::to_string(selfs.size()) + " torsion objects" : bad);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < objs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) pairs.push_back({i, j});
  std::vector<VanishingCertificate> certs(pairs.size());
  run_indexed(pairs.size(), opt.parallel, [&](std::size_t p) {
    certs[p] = pair_vanishing_certificate(objs[pairs[p].first], objs[pairs[p].second], order);
  });
  std::string fail, disagree;
  int disjoint = 0;
  std::array<int, 5> case_count{};
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : certs) {
    if (!c.ok && fail.empty()) fail = to_text(c.t) + " > " + to_text(c.tp) + ": " + c.witness;
    if (!c.case_agrees && disagree.empty())
      disagree = to_text(c.t) + " > " + to_text(c.tp) + ": " + c.witness;
    disjoint += c.disjoint;
    for (int k : c.cases) ++case_count[k];
    nlohmann::ordered_json e;
    e["pair"] = to_text(c.t) + " > " + to_text(c.tp);
    e["order"] = order_name(order);
    e["status"] = c.ok ? (c.disjoint ? "disjoint" : "certified") : "failed";
    auto wf = nlohmann::ordered_json::array(), sd = nlohmann::ordered_json::array();
    for (const auto& r : c.records) {
      wf.push_back(r.factor);
      std::vector<Mask> dset;
      for (std::size_t i = 0; i < c.common.size(); ++i)
        if (r.subset >> i & 1) dset.push_back(c.common[i]);
      sd.push_back(set_list(dset));
    }
    e["witnessFactor"] = wf;
    e["subsetD"] = sd;
    arr.push_back(e);
  }
  rep.attach("certificates.n" + std::to_string(n) + "." + order_name(order), arr.dump());
  std::ostringstream summary;
  summary << pairs.size() << " pairs, " << disjoint << " disjoint; cases";
  for (int k = 1; k <= 4; ++k) summary << " " << k << ":" << case_count[k];
  rep.add(otag + "pairs", "backward Homs vanish in the order", fail.empty(),
          fail.empty() ? summary.str() : fail);
  rep.add(otag + "case_agreement", "case analysis matches the vanishing factor",
          disagree.empty() && case_count[0] == 0, disagree);

  // Cremona carries this order to the other one
  GroupElement crem{true, {}};
  Order other = order == Order::lex ? Order::lex_prime : Order::lex;
  std::string swap_bad;
  int same_direction = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& x = objs[pairs[p].first];
    const auto& y = objs[pairs[p].second];
    // equal keys are only ordered by the tie-break, which Cremona need not respect
    bool tie = order_key(x, order) == order_key(y, order);
    bool ok = tie ? certs[p].disjoint
                  : compare(group_act(crem, x), group_act(crem, y), other) == Cmp::greater;
    if (!ok && swap_bad.empty()) swap_bad = to_text(x) + " > " + to_text(y);
    same_direction += compare(x, y, other) == Cmp::greater;
  }
  rep.add(otag + "cremona_swap", "Cremona exchanges the two orders", swap_bad.empty(), swap_bad);
  rep.note(otag + "orders_agree", "interaction of the two orders",
           std::to_string(same_direction) + " of " + std::to_string(pairs.size()) +
               " pairs ordered the same way by both orders");

  std::vector<std::pair<const GhatObject*, const GhatObject*>> lt;
  for (auto* b : bundles)
    for (auto* t : torsion) lt.push_back({b, t});
  std::vector<char> lt_ok(lt.size(), 0);
  run_indexed(lt.size(), opt.parallel,
              [&](std::size_t p) { lt_ok[p] = pair_vanishing_certificate(*lt[p].first, *lt[p].second).ok; });
  bad.clear();
  for (std::size_t p = 0; p < lt.size(); ++p)
    if (!lt_ok[p] && bad.empty()) bad = to_text(*lt[p].first) + " -> " + to_text(*lt[p].second);
  rep.add(tag + "bundles_right", "line bundles can be placed after torsion sheaves", bad.empty(),
          bad.empty() ? std::to_string(lt.size()) + " pairs" : bad);

  // end-data criterion against brute force
  std::vector<std::pair<const GhatObject*, const GhatObject*>> tt;
  for (auto* a : torsion)
    for (auto* b : torsion)
      if (a != b && end_data_decide(*a, *b).kind == Decision::vanish) tt.push_back({a, b});
  std::vector<char> tt_ok(tt.size(), 0);
  run_indexed(tt.size(), opt.parallel,
              [&](std::size_t p) { tt_ok[p] = pair_vanishing_certificate(*tt[p].first, *tt[p].second).ok; });
  bad.clear();
  for (std::size_t p = 0; p < tt.size(); ++p)
    if (!tt_ok[p] && bad.empty()) bad = to_text(*tt[p].first) + " -> " + to_text(*tt[p].second);
  rep.add(tag + "end_data", "end-data criterion implies vanishing", bad.empty(),
          bad.empty() ? std::to_string(tt.size()) + " pairs decided" : bad);
  return rep;
}

long long euler_pairing(const GhatObject& t, const GhatObject& tp, bool toric_lift_first) {
  Model m = lm(full_mask(t.n));
  auto c = chain_of(t), cp = chain_of(tp);
  DivisorClass base = lift_of(tp) - (toric_lift_first ? toric_lift_of(t) : lift_of(t));
  long long chi = 0;
  for (unsigned i = 0; i < (1u << c.size()); ++i)
    for (unsigned j = 0; j < (1u << cp.size()); ++j) {
      DivisorClass d = base;
      for (std::size_t x = 0; x < c.size(); ++x)
        if (i >> x & 1) d += delta0(m, c[x]);
      for (std::size_t x = 0; x < cp.size(); ++x)
        if (j >> x & 1) d -= delta0(m, cp[x]);
      int sign = (__builtin_popcount(i) + __builtin_popcount(j)) % 2 ? -1 : 1;
      chi += sign * euler_of(d);
    }
  return chi;
}

std::string GramMatrix::csv() const {
  std::ostringstream os;
  os << "object";
  for (const auto& o : objects) os << ",\"" << to_text(o) << "\"";
  os << "\n";
  for (std::size_t i = 0; i < objects.size(); ++i) {
    os << "\"" << to_text(objects[i]) << "\"";
    for (long long v : m[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

GramMatrix euler_pairing_matrix(int n, Order order, bool parallel) {
  GramMatrix g;
  g.objects = sorted_objects(n, order);
  std::size_t k = g.objects.size();
  g.m.assign(k, std::vector<long long>(k, 0));
  run_indexed(k * k, parallel,
              [&](std::size_t p) { g.m[p / k][p % k] = euler_pairing(g.objects[p / k], g.objects[p % k]); });
  return g;
}

Report gram_check(int n, bool parallel) {
  if (n < 2 || n > 6) throw std::invalid_argument("gram supports 2 <= n <= 6");
  Report rep;
  std::string tag = "excoll.n" + std::to_string(n) + ".gram.";
  GramMatrix g = euler_pairing_matrix(n, Order::lex, parallel);
  std::size_t k = g.objects.size();
  std::string diag, lower;
  for (std::size_t i = 0; i < k; ++i) {
    if (g.m[i][i] != 1 && diag.empty()) diag = to_text(g.objects[i]) + ": " + std::to_string(g.m[i][i]);
    for (std::size_t j = 0; j < i; ++j)
      if (g.m[i][j] != 0 && lower.empty())
        lower = "chi(" + to_text(g.objects[i]) + ", " + to_text(g.objects[j]) + ") = " + std::to_string(g.m[i][j]);
  }
  rep.add(tag + "diagonal", "Euler pairing is 1 on the diagonal", diag.empty(), diag);
  rep.add(tag + "lex_triangular", "Euler pairing vanishes backwards in the order", lower.empty(), lower);
  // same matrix reindexed along the other order
  auto primed = sorted_objects(n, Order::lex_prime);
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < k; ++i) idx[to_text(g.objects[i])] = i;
  lower.clear();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      long long v = g.m[idx[to_text(primed[i])]][idx[to_text(primed[j])]];
      if (v != 0 && lower.empty()) lower = to_text(primed[i]) + ", " + to_text(primed[j]);
    }
  rep.add(tag + "lexprime_triangular", "Euler pairing vanishes backwards in the Cremona order",
          lower.empty(), lower);
  QMatrix q(k, std::vector<mpq_class>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) q[i][j] = static_cast<long>(g.m[i][j]);
  rep.add(tag + "independent", "classes are independent in K-theory", rank_q(q) == static_cast<int>(k),
          "rank " + std::to_string(rank_q(q)));

  std::vector<std::size_t> sample;
  for (std::size_t i = 0; i < k && sample.size() < 10; ++i)
    if (g.objects[i].t() >= 2) sample.push_back(i);
  std::string lift_bad;
  for (std::size_t i : sample) {
    const auto& t = g.objects[i];
    auto r1 = restrict_toric(toric_lift_of(t), chain_of(t));
    auto r2 = restrict_toric(lift_of(t), chain_of(t));
    if (r1 != r2) lift_bad = to_text(t) + ": restrictions differ";
    for (std::size_t j = 0; j < k && lift_bad.empty(); ++j) {
      if (euler_pairing(t, g.objects[j], true) != g.m[i][j])
        lift_bad = to_text(t) + " against " + to_text(g.objects[j]);
    }
  }
  rep.add(tag + "lift_independence", "Euler pairing does not depend on the lift", lift_bad.empty(),
          lift_bad.empty() ? std::to_string(sample.size()) + " objects" : lift_bad);
  rep.attach("gram.n" + std::to_string(n) + ".csv", nlohmann::json(g.csv()).dump());
  return rep;
}

}  // namespace permucat
