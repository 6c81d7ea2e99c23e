#include "permucat/picard.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace permucat {

int Model::max_index() const { return std::min(n(), n() + r - 1); }

bool Model::admissible(Mask j) const {
  int s = popcnt(j);
  return j && !(j & ~ground) && s <= max_index();
}

mpq_class DivisorClass::coeff(Mask j) const {
  auto it = c.find(j);
  return it == c.end() ? mpq_class(0) : it->second;
}

void DivisorClass::add(Mask j, const mpq_class& v) {
  if (sgn(v) == 0) return;
  if (j && !model.admissible(j))
    throw std::invalid_argument("not an exceptional index: " + mask_str(j));
  auto& x = c[j];
  x += v;
  if (sgn(x) == 0) c.erase(j);
}

DivisorClass& DivisorClass::operator+=(const DivisorClass& o) {
  if (!(model == o.model)) throw std::invalid_argument("class models differ");
  for (const auto& [j, v] : o.c) add(j, v);
  return *this;
}

DivisorClass& DivisorClass::operator-=(const DivisorClass& o) { return *this += -o; }

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  DivisorClass r = *this;
  return r += o;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const {
  DivisorClass r = *this;
  return r -= o;
}

DivisorClass DivisorClass::operator-() const { return *this * mpq_class(-1); }

DivisorClass DivisorClass::operator*(const mpq_class& s) const {
  DivisorClass r{model, {}};
  if (sgn(s) == 0) return r;
  for (const auto& [j, v] : c) r.c[j] = v * s;
  return r;
}

bool DivisorClass::integral() const {
  return std::all_of(c.begin(), c.end(), [](const auto& kv) { return kv.second.get_den() == 1; });
}

std::map<Mask, long long> DivisorClass::to_int() const {
  if (!integral()) throw std::invalid_argument("class is not integral");
  std::map<Mask, long long> out;
  for (const auto& [j, v] : c) out[j] = v.get_num().get_si();
  return out;
}

std::string DivisorClass::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [j, v] : c) {
    if (!first) os << (sgn(v) < 0 ? " - " : " + ");
    else if (sgn(v) < 0) os << "-";
    first = false;
    mpq_class a = abs(v);
    if (a != 1) os << a.get_str() << "*";
    if (j == 0) os << "H";
    else os << "E{" << mask_str(j) << "}";
  }
  return first ? "0" : os.str();
}

std::string DivisorClass::json() const {
  nlohmann::ordered_json j;
  j["H"] = coeff(0).get_str();
  nlohmann::ordered_json e = nlohmann::ordered_json::object();
  std::vector<std::pair<std::vector<int>, Mask>> keys;
  for (const auto& [m, v] : c)
    if (m) keys.push_back({elements(m), m});
  std::sort(keys.begin(), keys.end());
  for (const auto& [el, m] : keys) e[mask_str(m)] = coeff(m).get_str();
  j["E"] = e;
  return j.dump();
}

DivisorClass zero_class(Model m) { return {m, {}}; }

DivisorClass h_class(Model m) {
  DivisorClass d{m, {}};
  d.add(0, 1);
  return d;
}

DivisorClass e_class(Model m, Mask j) {
  DivisorClass d{m, {}};
  d.add(j, 1);
  return d;
}

DivisorClass g_class(Model m, int a) {
  if (a < 1 || a > m.n() + m.r) throw std::invalid_argument("G index out of range");
  DivisorClass d{m, {}};
  d.add(0, -a);
  for (Mask j = m.ground; j; j = (j - 1) & m.ground)
    if (popcnt(j) < a && m.admissible(j)) d.add(j, a - popcnt(j));
  return d;
}

DivisorClass lambda_class(Model m, Mask s) {
  DivisorClass d = h_class(m);
  for (Mask k = (s - 1) & s; k; k = (k - 1) & s) d.add(k, -1);
  return d;
}

DivisorClass delta0(Model m, Mask s) {
  if (!s || (s & ~m.ground) || s == m.ground) throw std::invalid_argument("not a boundary set");
  if (popcnt(s) <= m.n() - 2) return e_class(m, s);
  return lambda_class(m, s);
}

DivisorClass delta_inf(Model m, Mask s) { return delta0(m, m.ground & ~s); }

DivisorClass psi0(Model m) { return h_class(m); }

DivisorClass psi_inf(Model m) { return -g_class(m, m.n() - 1); }

DivisorClass diagonal(Model m, int i, int j) {
  DivisorClass d = zero_class(m);
  Mask bi = bit(i), bj = bit(j);
  for (Mask s = m.ground; s; s = (s - 1) & m.ground)
    if (s != m.ground && (s & bj) && !(s & bi)) d += delta0(m, s);
  return d;
}

DivisorClass big_delta(Model m, int k) {
  DivisorClass d = zero_class(m);
  for (Mask s = m.ground; s; s = (s - 1) & m.ground)
    if (popcnt(s) == k && s != m.ground) d += delta0(m, s);
  return d;
}

namespace {

void require_lm(const Model& m) {
  if (m.r != -1) throw std::invalid_argument("toric bridge needs a Losev-Manin model");
}

}  // namespace

TDivisor to_tdivisor(const DivisorClass& d) {
  require_lm(d.model);
  Mask g = d.model.ground;
  std::map<Mask, long long> local;
  for (const auto& [j, v] : d.to_int()) local[compress(j, g)] = v;
  return class_to_tdivisor(lm_variety(popcnt(g)).fan(), local);
}

DivisorClass from_tdivisor(Mask ground, const TDivisor& t) {
  DivisorClass d = zero_class(lm(ground));
  for (const auto& [j, v] : tdivisor_to_class(lm_variety(popcnt(ground)).fan(), t))
    d.add(expand(j, ground), static_cast<long>(v));
  return d;
}

CohomologyTable cohomology(const DivisorClass& d, const CohomOptions& opt) {
  return lm_variety(d.model.n()).cohomology(to_tdivisor(d), opt);
}

bool is_nef(const DivisorClass& d) {
  return !lm_variety(d.model.n()).nef_violation(to_tdivisor(d)).has_value();
}

DivisorClass cremona(const DivisorClass& d) {
  TDivisor t = to_tdivisor(d), out(t.size(), 0);
  Mask top = full_mask(d.model.n());
  // ray index is local mask - 1
  for (std::size_t r = 0; r < t.size(); ++r) out[r] = t[(top & ~Mask(r + 1)) - 1];
  return from_tdivisor(d.model.ground, out);
}

DivisorClass pullback_forgetful(Model m, Mask forgotten, int a) {
  Mask rest = m.ground & ~forgotten;
  if (a < 1 || a > popcnt(rest) - 1) throw std::invalid_argument("G index out of range");
  DivisorClass d = zero_class(m);
  d.add(0, -a);
  for (Mask j = m.ground; j; j = (j - 1) & m.ground) {
    int c = popcnt(j & rest);
    if (c < a && m.admissible(j)) d.add(j, a - c);
  }
  return d;
}

DivisorClass pullback_class(Model m, Mask forgotten, const DivisorClass& d) {
  Model target{m.ground & ~forgotten, m.r};
  if (!(d.model == target)) throw std::invalid_argument("class lives on the wrong model");
  DivisorClass out = zero_class(m);
  for (const auto& [j, v] : d.c) {
    if (j == 0) {
      out.add(0, v);
      for (Mask k = forgotten; k; k = (k - 1) & forgotten) out.add(k, -v);
    } else {
      for (Mask k = forgotten;; k = (k - 1) & forgotten) {
        out.add(j | k, v);
        if (!k) break;
      }
    }
  }
  return out;
}

DivisorClass pullback_toric(Model m, Mask forgotten, const DivisorClass& d) {
  require_lm(m);
  Mask rest = m.ground & ~forgotten;
  TDivisor src = to_tdivisor(d);
  int k = m.n();
  TDivisor t(lm_variety(k).nrays(), 0);
  Mask lrest = compress(rest, m.ground);
  for (Mask s = 1; s < full_mask(k); ++s) {
    Mask img = s & lrest;
    if (!img || img == lrest) continue;
    t[s - 1] = src[compress(expand(img, m.ground), rest) - 1];
  }
  return from_tdivisor(m.ground, t);
}

DivisorClass expand_generators(Mask ground, const std::vector<Generator>& gens) {
  Model m = lm(ground);
  DivisorClass d = zero_class(m);
  for (const auto& g : gens) {
    DivisorClass x = zero_class(m);
    switch (g.kind) {
      case Generator::g: x = -g_class(m, g.a); break;
      case Generator::psi0: x = psi0(m); break;
      case Generator::psi_inf: x = psi_inf(m); break;
      case Generator::delta: x = delta0(m, g.s); break;
    }
    d += x * mpq_class(static_cast<long>(g.coef));
  }
  return d;
}

std::vector<Mask> chain_of_blocks(const std::vector<Mask>& blocks) {
  std::vector<Mask> chain;
  Mask s = 0;
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) chain.push_back(s |= blocks[i]);
  return chain;
}

namespace {

std::vector<Mask> blocks_of_chain(Mask ground, const std::vector<Mask>& chain) {
  std::vector<Mask> blocks;
  Mask prev = 0;
  for (Mask c : chain) {
    if ((prev & ~c) || c == prev || (c & ~ground) || c == ground)
      throw std::invalid_argument("not a chain of boundary sets");
    blocks.push_back(c & ~prev);
    prev = c;
  }
  blocks.push_back(ground & ~prev);
  return blocks;
}

// G_a on factor i, or nothing
void restrict_g(FactorizedClass& out, const std::vector<Mask>& blocks, int a, long long coef) {
  int before = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    int k = popcnt(blocks[i]);
    if (before < a && a < before + k)
      out[i] -= g_class(lm(blocks[i]), a - before) * mpq_class(static_cast<long>(coef));
    before += k;
  }
}

}  // namespace

FactorizedClass restrict_to_stratum(Mask ground, const std::vector<Generator>& gens,
                                    const std::vector<Mask>& chain) {
  auto blocks = blocks_of_chain(ground, chain);
  int n = popcnt(ground);
  FactorizedClass out;
  for (Mask b : blocks) out.push_back(zero_class(lm(b)));
  std::vector<Mask> s{0};
  for (Mask c : chain) s.push_back(c);
  s.push_back(ground);
  for (const auto& g : gens) {
    mpq_class coef = static_cast<long>(g.coef);
    switch (g.kind) {
      case Generator::g: restrict_g(out, blocks, g.a, g.coef); break;
      case Generator::psi0: restrict_g(out, blocks, 1, g.coef); break;
      case Generator::psi_inf: restrict_g(out, blocks, n - 1, g.coef); break;
      case Generator::delta: {
        for (std::size_t i = 1; i < s.size(); ++i) {
          Mask lo = s[i - 1], hi = s[i];
          if (g.s == hi && i < s.size() - 1) {
            // node rule: -psi_inf on the left, -psi_0 on the right
            if (popcnt(blocks[i - 1]) >= 2) out[i - 1] += g_class(lm(blocks[i - 1]), popcnt(blocks[i - 1]) - 1) * coef;
            if (popcnt(blocks[i]) >= 2) out[i] += g_class(lm(blocks[i]), 1) * coef;
            break;
          }
          if ((g.s & lo) == lo && !(g.s & ~hi) && g.s != lo && g.s != hi) {
            out[i - 1] += delta0(lm(blocks[i - 1]), g.s & ~lo) * coef;
            break;
          }
        }
        break;
      }
    }
  }
  return out;
}

FactorizedClass restrict_toric(const DivisorClass& d, const std::vector<Mask>& chain) {
  Mask g = d.model.ground;
  std::vector<Mask> local;
  for (Mask c : chain) local.push_back(compress(c, g));
  auto res = star_restrict_chain(lm_variety(d.model.n()).fan(), to_tdivisor(d), local);
  FactorizedClass out;
  for (std::size_t i = 0; i < res.blocks.size(); ++i) {
    Mask b = expand(res.blocks[i], g);
    if (popcnt(b) < 2) out.push_back(zero_class(lm(b)));
    else out.push_back(from_tdivisor(b, res.parts[i]));
  }
  return out;
}

DivisorClass lift_bundle(const std::vector<Mask>& blocks, const std::vector<int>& labels) {
  if (blocks.empty() || blocks.size() != labels.size()) throw std::invalid_argument("bad stratum");
  Mask ground = 0;
  int nontrivial = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    ground |= blocks[i];
    if (labels[i] < 0 || labels[i] >= std::max(popcnt(blocks[i]), 1) ||
        (labels[i] && popcnt(blocks[i]) < 2))
      throw std::invalid_argument("label out of range");
    nontrivial += labels[i] != 0;
  }
  if (!nontrivial) throw std::invalid_argument("all labels trivial");
  Model m = lm(ground);
  if (nontrivial == 1) {
    int before = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (labels[i]) return g_class(m, labels[i] + before);
      before += popcnt(blocks[i]);
    }
  }
  std::vector<Mask> rb(blocks.begin() + 1, blocks.end());
  std::vector<int> rl(labels.begin() + 1, labels.end());
  DivisorClass l = pullback_class(m, blocks[0], lift_bundle(rb, rl));
  if (labels[0]) l += g_class(m, labels[0]);
  return l;
}

QMatrix b_matrix(int n) {
  QMatrix b(n - 1, std::vector<mpq_class>(n - 1));
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      b[i - 1][j - 1] = mpq_class(std::min(i, j) * (n - std::max(i, j)), n);
      b[i - 1][j - 1].canonicalize();
    }
  return b;
}

QMatrix cartan_matrix(int n) {
  QMatrix c(n - 1, std::vector<mpq_class>(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) {
    c[i][i] = 2;
    if (i + 1 < n - 1) c[i][i + 1] = c[i + 1][i] = -1;
  }
  return c;
}

Report class_identities_check(int n) {
  if (n < 2 || n > 12) throw std::invalid_argument("n out of range");
  Report rep;
  std::string tag = "picard.n" + std::to_string(n) + ".";
  Model m = lm(full_mask(n));
  std::vector<DivisorClass> deltas;
  for (int k = 1; k < n; ++k) deltas.push_back(big_delta(m, k));
  QMatrix b = b_matrix(n);
  std::string bad;
  for (int i = 1; i < n; ++i) {
    DivisorClass rhs = zero_class(m);
    for (int j = 1; j < n; ++j) rhs += deltas[j - 1] * b[i - 1][j - 1];
    if (!(-g_class(m, i) == rhs) && bad.empty()) bad = "G_" + std::to_string(i);
  }
  rep.add(tag + "g_in_deltas", "G-classes as symmetric boundary combinations", bad.empty(), bad);
  DivisorClass psi = zero_class(m);
  for (int k = 1; k < n; ++k) {
    mpq_class w(n - k, n);
    w.canonicalize();
    psi += deltas[k - 1] * w;
  }
  rep.add(tag + "psi0_in_deltas", "psi_0 as boundary combination", psi == psi0(m),
          psi == psi0(m) ? "" : psi.str());
  bool psis = psi0(m) == -g_class(m, 1) && psi_inf(m) == -g_class(m, n - 1);
  rep.add(tag + "psi_as_g", "psi_0 = G_1 and psi_inf = G_{n-1}", psis);
  QMatrix prod = multiply_q(b, cartan_matrix(n));
  rep.add(tag + "b_cartan", "B inverse is the Cartan matrix", prod == identity_q(n - 1));
  bad.clear();
  for (Mask s = 1; s < full_mask(n); ++s) {
    if (popcnt(s) != n - 1) continue;
    DivisorClass sum = lambda_class(m, s);
    for (Mask k = (s - 1) & s; k; k = (k - 1) & s) sum.add(k, 1);
    if (!(sum == h_class(m))) bad = mask_str(s);
    if (n <= 7) {
      TDivisor t(lm_variety(n).nrays(), 0);
      t[s - 1] = 1;
      if (!(from_tdivisor(m.ground, t) == lambda_class(m, s))) bad = mask_str(s);
    }
  }
  rep.add(tag + "lambda", "hyperplane through all but one point", bad.empty(), bad);
  return rep;
}

DivisorClass reduction_pullback(Reduction kind, int n, int i, int j) {
  if (n < 2) throw std::invalid_argument("n out of range");
  Model md = lm(full_mask(n));
  int m = (n - 1) / 2;
  DivisorClass d = zero_class(md);
  auto small = [&](Mask s) { return popcnt(s) >= 1 && popcnt(s) <= m; };
  for (Mask s = md.ground; s; s = (s - 1) & md.ground) {
    if (!small(s)) continue;
    switch (kind) {
      case Reduction::psi0: d -= delta0(md, s); break;
      case Reduction::psi_i:
        if (s & bit(i)) d -= delta0(md, s) + delta_inf(md, s);
        break;
      case Reduction::delta_i0:
        if (s & bit(i)) d += delta0(md, s);
        break;
      case Reduction::delta_ij:
        if ((s & bit(i)) && (s & bit(j))) d += delta0(md, s) + delta_inf(md, s);
        break;
    }
  }
  if (kind == Reduction::psi0) d += psi0(md);
  if (kind == Reduction::delta_ij) d += diagonal(md, i, j);
  return d;
}

namespace {

DivisorClass reduction_inf(bool psi, int n, int i) {
  Model md = lm(full_mask(n));
  int m = (n - 1) / 2;
  DivisorClass d = psi ? psi_inf(md) : zero_class(md);
  for (Mask s = md.ground; s; s = (s - 1) & md.ground) {
    if (popcnt(s) > m) continue;
    if (psi) d -= delta_inf(md, s);
    else if (s & bit(i)) d += delta_inf(md, s);
  }
  return d;
}

}  // namespace

Report reduction_relations_check(int n) {
  Report rep;
  std::string tag = "picard.n" + std::to_string(n) + ".reduction.";
  if (n % 2 == 0 || n < 3) {
    rep.note(tag + "skipped", "relations on the reduced space", "only odd n carry a P1-bundle");
    return rep;
  }
  DivisorClass p0 = reduction_pullback(Reduction::psi0, n);
  DivisorClass pinf = reduction_inf(true, n, 0);
  std::string bad;
  if (!(p0 == -pinf)) bad = "psi_0 != -psi_inf";
  if (n <= 7 && !(cremona(p0) == pinf)) bad = "swap of 0 and infinity";
  for (int i = 1; i <= n && bad.empty(); ++i) {
    DivisorClass d0 = reduction_pullback(Reduction::delta_i0, n, i);
    DivisorClass dinf = reduction_inf(false, n, i);
    if (!(p0 == dinf - d0)) bad = "psi_0 at i=" + std::to_string(i);
    DivisorClass pi = reduction_pullback(Reduction::psi_i, n, i);
    if (!(pi == -d0 - dinf)) bad = "psi_i at i=" + std::to_string(i);
    for (int j = i + 1; j <= n && bad.empty(); ++j) {
      DivisorClass pj = reduction_pullback(Reduction::psi_i, n, j);
      DivisorClass dij = reduction_pullback(Reduction::delta_ij, n, i, j);
      if (!(pi + pj == dij * mpq_class(-2)))
        bad = "psi_i+psi_j at " + std::to_string(i) + "," + std::to_string(j);
    }
  }
  rep.add(tag + "p1_bundle", "P1-bundle relations pulled back", bad.empty(), bad);
  return rep;
}

SigmaDecomposition sigma_decomposition(int n, Mask forgotten, int a) {
  Model md = lm(full_mask(n));
  Mask rest = md.ground & ~forgotten;
  if ((forgotten & ~md.ground) || popcnt(forgotten) > n - 2 || a < 1 || a > popcnt(rest) - 1)
    throw std::invalid_argument("invalid forgotten set or index");
  int m = (n - 1) / 2;
  SigmaDecomposition out{pullback_forgetful(md, forgotten, a),
                         reduction_pullback(Reduction::psi0, n) * mpq_class(-a),
                         zero_class(md), zero_class(md), false, {}, {}};
  for (int j : elements(rest)) out.pstar -= reduction_pullback(Reduction::delta_i0, n, j);
  for (Mask j = md.ground; j; j = (j - 1) & md.ground) {
    if (!md.admissible(j)) continue;
    int sz = popcnt(j), c = popcnt(j & rest);
    if (sz > m && c < a) {
      out.sigma1.add(j, a - c);
      if (n - sz <= m) {
        if (a - c > n - 1 - sz) out.violations.push_back("sigma1 " + mask_str(j));
      } else {
        out.residue.push_back(j);
      }
    }
    if (sz <= m && c > a) {
      out.sigma2.add(j, c - a);
      if (c - a > sz - 1) out.violations.push_back("sigma2 " + mask_str(j));
    }
  }
  out.identity = out.pullback == out.pstar + out.sigma1 + out.sigma2;
  return out;
}

BlowdownResult blowdown_compat(int n, int r, int a, int i) {
  Model x{full_mask(n), r};
  Mask bi = bit(i);
  Model y{x.ground & ~bi, r + 1};
  if (i < 1 || i > n || a < 1 || a > n + r) throw std::invalid_argument("invalid blow-down data");
  BlowdownResult res{zero_class(x), false, false, {}};
  DivisorClass pulled = zero_class(x);
  for (const auto& [j, v] : g_class(y, a).c) pulled.add(j, v);  // proper transforms
  res.bounds = true;
  for (Mask j = x.ground; j; j = (j - 1) & x.ground) {
    if (!(j & bi) || !x.admissible(j) || popcnt(j) >= a) continue;
    int c = a - popcnt(j);
    res.f_div.add(j, c);
    if (!(1 <= c && c < n + r - popcnt(j) + 1)) {
      res.bounds = false;
      if (res.witness.empty()) res.witness = "E{" + mask_str(j) + "}";
    }
  }
  res.identity = g_class(x, a) == pulled + res.f_div;
  if (!res.identity && res.witness.empty()) res.witness = "class identity";
  return res;
}

Report comps_check(int n_max) {
  Report rep;
  for (int n = 3; n <= n_max; ++n) {
    Model md = lm(full_mask(n));
    std::string bad2, bad1, bad4;
    for (int i = 1; i <= n; ++i) {
      Mask bi = bit(i);
      for (Mask iset = md.ground; iset; iset = (iset - 1) & md.ground) {
        if (!(iset & bi) || popcnt(iset) < 2 || popcnt(iset) > n - 2) continue;
        int s = popcnt(iset) - 1;
        DivisorClass f = zero_class(md);
        for (Mask k = md.ground; k; k = (k - 1) & md.ground)
          if ((k & bi) && popcnt(k) <= s) f.add(k, 1);
        auto res = restrict_toric(f, {iset});
        if (!(res[0] == -g_class(lm(iset), s)) || !res[1].is_zero())
          bad2 = mask_str(iset) + " i=" + std::to_string(i);
      }
      for (int a = 2; a <= n - 1; ++a)
        for (int k = 1; k <= a - 1; ++k) {
          DivisorClass hk = g_class(md, a);
          for (Mask j = md.ground; j; j = (j - 1) & md.ground)
            if ((j & bi) && md.admissible(j) && popcnt(j) < a)
              hk.add(j, mpq_class(std::max(0, k - popcnt(j) + 1)) - (a - popcnt(j)));
          DivisorClass pk = pullback_forgetful(md, bi, k);
          auto r4 = restrict_toric(hk, {bi});
          if (!(r4[1] == g_class(lm(md.ground & ~bi), k)))
            bad4 = "a=" + std::to_string(a) + " k=" + std::to_string(k);
          for (Mask iset = md.ground; iset; iset = (iset - 1) & md.ground) {
            int s = popcnt(iset) - 1;
            if (!(iset & bi) || s < 1 || s > k - 1) continue;
            auto r1 = restrict_toric(hk, {iset});
            auto rp = restrict_toric(pk, {iset});
            DivisorClass want = g_class(lm(md.ground & ~iset), k - s);
            if (!r1[0].is_zero() || !(r1[1] == want) || !(rp == r1))
              bad1 = "a=" + std::to_string(a) + " k=" + std::to_string(k) + " I=" + mask_str(iset);
          }
        }
    }
    std::string tag = "picard.n" + std::to_string(n) + ".comps.";
    rep.add(tag + "f_restriction", "restriction of F_s to E_I is psi_x", bad2.empty(), bad2);
    rep.add(tag + "h_restriction", "restriction of H_{k+1} to E_I", bad1.empty(), bad1);
    rep.add(tag + "h_on_point_divisor", "restriction of H_{k+1} to E_i", bad4.empty(), bad4);
  }
  return rep;
}

}  // namespace permucat
