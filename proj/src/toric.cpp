#include "permucat/toric.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "permucat/linalg.hpp"

namespace permucat {

int Fan::ray_of(Mask s) const {
  if (ground && s && !(s & ~ground) && s != ground) {
    int i = static_cast<int>(compress(s, ground)) - 1;
    if (i < static_cast<int>(tags.size()) && tags[i] == s) return i;
  }
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == s) return static_cast<int>(i);
  return -1;
}

Fan point_fan() {
  Fan f;
  f.cones = {{}};
  return f;
}

Fan projective_fan(int d) {
  Fan f;
  f.dim = d;
  for (int i = 0; i < d; ++i) {
    std::vector<int> v(d, 0);
    v[i] = 1;
    f.rays.push_back(v);
  }
  f.rays.push_back(std::vector<int>(d, -1));
  for (int skip = 0; skip <= d; ++skip) {
    std::vector<int> c;
    for (int i = 0; i <= d; ++i)
      if (i != skip) c.push_back(i);
    f.cones.push_back(c);
  }
  std::sort(f.cones.begin(), f.cones.end());
  return f;
}

Fan lm_fan(Mask ground) {
  int k = popcnt(ground);
  if (k < 1) throw std::invalid_argument("empty ground set");
  Fan f;
  f.ground = ground;
  f.dim = k - 1;
  if (k == 1) {
    f.cones = {{}};
    return f;
  }
  Mask top = full_mask(k);
  // ray index = local mask - 1
  for (Mask s = 1; s < top; ++s) {
    std::vector<int> v(k - 1);
    int last = (s >> (k - 1)) & 1;
    for (int i = 0; i < k - 1; ++i) v[i] = int((s >> i) & 1) - last;
    f.rays.push_back(v);
    f.tags.push_back(expand(s, ground));
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> c;
    Mask s = 0;
    for (int j = 0; j + 1 < k; ++j) {
      s |= Mask(1) << perm[j];
      c.push_back(static_cast<int>(s) - 1);
    }
    std::sort(c.begin(), c.end());
    f.cones.push_back(c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(f.cones.begin(), f.cones.end());
  return f;
}

Fan product(const Fan& a, const Fan& b) {
  Fan f;
  f.dim = a.dim + b.dim;
  for (const auto& r : a.rays) {
    auto v = r;
    v.resize(f.dim, 0);
    f.rays.push_back(v);
  }
  for (const auto& r : b.rays) {
    std::vector<int> v(a.dim, 0);
    v.insert(v.end(), r.begin(), r.end());
    f.rays.push_back(v);
  }
  int off = static_cast<int>(a.rays.size());
  for (const auto& ca : a.cones)
    for (const auto& cb : b.cones) {
      auto c = ca;
      for (int x : cb) c.push_back(x + off);
      f.cones.push_back(c);
    }
  std::sort(f.cones.begin(), f.cones.end());
  return f;
}

namespace {

QMatrix cone_matrix(const Fan& f, const std::vector<int>& cone) {
  QMatrix m;
  for (int r : cone) {
    std::vector<mpq_class> row;
    for (int x : f.rays[r]) row.emplace_back(x);
    m.push_back(row);
  }
  return m;
}

}  // namespace

FanCheck check_fan(const Fan& f) {
  FanCheck out;
  std::map<std::vector<int>, int> facets;
  for (std::size_t c = 0; c < f.cones.size(); ++c) {
    const auto& cone = f.cones[c];
    if (static_cast<int>(cone.size()) != f.dim) {
      out.smooth = false;
      out.witness = "cone " + std::to_string(c) + " has wrong size";
      return out;
    }
    if (f.dim > 0) {
      mpq_class det = det_q(cone_matrix(f, cone));
      if (abs(det) != 1) {
        out.smooth = false;
        out.witness = "cone " + std::to_string(c) + " det " + det.get_str();
      }
    }
    for (std::size_t j = 0; j < cone.size(); ++j) {
      auto fac = cone;
      fac.erase(fac.begin() + j);
      facets[fac]++;
    }
  }
  for (const auto& [fac, cnt] : facets)
    if (cnt != 2) {
      out.complete = false;
      if (out.witness.empty()) out.witness = "facet in " + std::to_string(cnt) + " cones";
    }
  return out;
}

long long CohomologyTable::euler() const {
  long long e = 0;
  for (std::size_t i = 0; i < h.size(); ++i) e += (i % 2 ? -1 : 1) * h[i];
  return e;
}

long long CohomologyTable::total() const { return std::accumulate(h.begin(), h.end(), 0LL); }

std::string CohomologyTable::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + std::to_string(h[i]);
  return s + ")";
}

CohomologyTable kunneth(const CohomologyTable& a, const CohomologyTable& b) {
  CohomologyTable c;
  c.h.assign(a.h.size() + b.h.size() - 1, 0);
  for (std::size_t i = 0; i < a.h.size(); ++i)
    for (std::size_t j = 0; j < b.h.size(); ++j) c.h[i + j] += a.h[i] * b.h[j];
  return c;
}

ToricVariety::ToricVariety(Fan f) : fan_(std::move(f)) {
  FanCheck chk = check_fan(fan_);
  if (!chk.smooth || !chk.complete)
    throw std::invalid_argument("fan is not smooth and complete: " + chk.witness);
  int d = fan_.dim;
  std::set<RayMask> faces;
  for (const auto& cone : fan_.cones) {
    RayMask m;
    for (int r : cone) m.set(r);
    cone_masks_.push_back(m);
    std::vector<std::vector<long long>> inv(d, std::vector<long long>(d));
    if (d > 0) {
      QMatrix qi = inverse_q(cone_matrix(fan_, cone));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv[i][j] = qi[i][j].get_num().get_si();
    }
    inverses_.push_back(inv);
    for (unsigned sub = 1; sub < (1u << cone.size()); ++sub) {
      RayMask fm;
      for (std::size_t j = 0; j < cone.size(); ++j)
        if ((sub >> j) & 1) fm.set(cone[j]);
      faces.insert(fm);
    }
  }
  faces_by_dim_.assign(d + 1, {});
  for (const auto& fm : faces) faces_by_dim_[fm.count() - 1].push_back(fm);

  neighbors_.assign(fan_.rays.size(), RayMask{});
  for (const auto& cone : fan_.cones)
    for (int a : cone)
      for (int b : cone)
        if (a != b) neighbors_[a].set(b);
  flag_ = true;
  for (const auto& fm : faces) {
    RayMask common{~0ULL, ~0ULL};
    for (int r = 0; r < nrays(); ++r)
      if (fm.test(r)) common = common & neighbors_[r];
    for (int r = 0; r < nrays() && flag_; ++r)
      if (common.test(r)) {
        RayMask g = fm;
        g.set(r);
        flag_ = faces.count(g) > 0;
      }
    if (!flag_) break;
  }

  std::map<std::vector<int>, std::vector<std::pair<int, int>>> facet_owner;
  for (std::size_t c = 0; c < fan_.cones.size(); ++c)
    for (int j = 0; j < d; ++j) {
      auto fac = fan_.cones[c];
      fac.erase(fac.begin() + j);
      facet_owner[fac].push_back({int(c), fan_.cones[c][j]});
    }
  for (const auto& [fac, owners] : facet_owner) {
    auto [c, r] = owners[0];
    auto [c2, r2] = owners[1];
    // v_r2 in the basis of cone c: row vector times inverse
    const auto& inv = inverses_[c];
    const auto& cone = fan_.cones[c];
    std::vector<long long> coef(d, 0);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) coef[j] += fan_.rays[r2][i] * inv[i][j];
    Wall w{c, r, c2, r2, {{r, 1}, {r2, 1}}};
    for (int j = 0; j < d; ++j)
      if (cone[j] != r && coef[j] != 0) w.coeffs.push_back({cone[j], -coef[j]});
    walls_.push_back(w);
  }
}

std::vector<std::vector<long long>> ToricVariety::cone_characters(const TDivisor& a) const {
  int d = fan_.dim;
  std::vector<std::vector<long long>> out;
  for (std::size_t c = 0; c < fan_.cones.size(); ++c) {
    std::vector<long long> m(d, 0);
    const auto& cone = fan_.cones[c];
    // B m = -a_sigma with B rows the cone rays
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i] += inverses_[c][i][j] * -a[cone[j]];
    out.push_back(m);
  }
  return out;
}

TDivisor ToricVariety::principal(const std::vector<long long>& m) const {
  TDivisor out(fan_.rays.size(), 0);
  for (std::size_t r = 0; r < fan_.rays.size(); ++r)
    for (int i = 0; i < fan_.dim; ++i) out[r] += m[i] * fan_.rays[r][i];
  return out;
}

TDivisor ToricVariety::canonical() const { return TDivisor(fan_.rays.size(), -1); }

std::optional<Wall> ToricVariety::nef_violation(const TDivisor& a) const {
  for (const auto& w : walls_) {
    long long deg = 0;
    for (auto [r, c] : w.coeffs) deg += c * a[r];
    if (deg < 0) return w;
  }
  return std::nullopt;
}

ToricVariety::Box ToricVariety::candidate_box(const TDivisor& a, int margin) const {
  int d = fan_.dim;
  Box b{std::vector<long long>(d, 0), std::vector<long long>(d, 0)};
  auto ms = cone_characters(a);
  for (int i = 0; i < d; ++i) {
    long long lo = ms[0][i], hi = ms[0][i];
    for (const auto& m : ms) {
      lo = std::min(lo, m[i]);
      hi = std::max(hi, m[i]);
    }
    b.lo[i] = lo - margin;
    b.hi[i] = hi + margin;
  }
  return b;
}

long long ToricVariety::lattice_points(const TDivisor& a) const {
  // direct count of {m : <m, v> >= -a} over the box of cone characters
  Box b = candidate_box(a, 0);
  int d = fan_.dim;
  std::vector<long long> m = b.lo;
  long long count = 0;
  while (true) {
    bool ok = true;
    for (std::size_t r = 0; r < fan_.rays.size() && ok; ++r) {
      long long s = 0;
      for (int i = 0; i < d; ++i) s += m[i] * fan_.rays[r][i];
      ok = s >= -a[r];
    }
    count += ok;
    int i = 0;
    for (; i < d; ++i) {
      if (++m[i] <= b.hi[i]) break;
      m[i] = b.lo[i];
    }
    if (i == d) break;
  }
  return count;
}

template <class F>
void ToricVariety::scan(const TDivisor& a, int margin, bool parallel, F&& sink) const {
  int d = fan_.dim;
  int R = nrays();
  if (static_cast<int>(a.size()) != R) throw std::invalid_argument("divisor length mismatch");
  if (d == 0) {
    sink(RayMask{}, 1LL);
    return;
  }
  Box b = candidate_box(a, margin);
  long long outer = 1;
  for (int i = 0; i + 1 < d; ++i) outer *= b.hi[i] - b.lo[i] + 1;
  long long inner_lo = b.lo[d - 1], inner_hi = b.hi[d - 1];

  auto work = [&](long long idx, std::unordered_map<RayMask, long long, RayMaskHash>& local) {
    std::vector<long long> m(d);
    for (int i = 0; i + 1 < d; ++i) {
      long long w = b.hi[i] - b.lo[i] + 1;
      m[i] = b.lo[i] + idx % w;
      idx /= w;
    }
    m[d - 1] = inner_lo;
    std::vector<long long> val(R);
    for (int r = 0; r < R; ++r) {
      long long s = a[r];
      for (int i = 0; i < d; ++i) s += m[i] * fan_.rays[r][i];
      val[r] = s;
    }
    for (long long x = inner_lo; x <= inner_hi; ++x) {
      RayMask v;
      for (int r = 0; r < R; ++r)
        if (val[r] < 0) v.set(r);
      local[v]++;
      for (int r = 0; r < R; ++r) val[r] += fan_.rays[r][d - 1];
    }
  };

  std::unordered_map<RayMask, long long, RayMaskHash> total;
  if (parallel) {
#pragma omp parallel
    {
      std::unordered_map<RayMask, long long, RayMaskHash> local;
#pragma omp for schedule(dynamic, 16)
      for (long long idx = 0; idx < outer; ++idx) work(idx, local);
#pragma omp critical
      for (const auto& [k, c] : local) total[k] += c;
    }
  } else {
    for (long long idx = 0; idx < outer; ++idx) work(idx, total);
  }
  std::vector<std::pair<RayMask, long long>> sorted(total.begin(), total.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [k, c] : sorted) sink(k, c);
}

namespace {

std::vector<RayMask> maximalize(std::vector<RayMask> faces) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  std::sort(faces.begin(), faces.end(),
            [](const RayMask& x, const RayMask& y) { return x.count() > y.count(); });
  std::vector<RayMask> out;
  for (const auto& f : faces) {
    bool dominated = false;
    for (const auto& g : out)
      if (f.subset_of(g)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(f);
  }
  return out;
}

std::vector<int> bits_of(const RayMask& m) {
  std::vector<int> out;
  for (std::uint64_t w = m.lo; w; w &= w - 1) out.push_back(__builtin_ctzll(w));
  for (std::uint64_t w = m.hi; w; w &= w - 1) out.push_back(64 + __builtin_ctzll(w));
  return out;
}

}  // namespace

std::vector<long long> ToricVariety::reduced_betti(const RayMask& v0, bool collapse) const {
  int d = fan_.dim;
  std::vector<long long> betti(d + 1, 0);
  if (v0.empty()) {
    betti[0] = 1;
    return betti;
  }
  RayMask v = v0;
  if (collapse && flag_) {
    // clique complex: x is dominated by a neighbour y when N(x) lies in N[y]
    bool changed = true;
    while (changed && v.count() > 1) {
      changed = false;
      for (int x : bits_of(v)) {
        RayMask nx = neighbors_[x] & v;
        for (int y : bits_of(nx)) {
          RayMask rest = nx;
          rest.reset(y);
          if (rest.subset_of(neighbors_[y])) {
            v.reset(x);
            changed = true;
            break;
          }
        }
        if (v.count() == 1) break;
      }
    }
    if (v.count() == 1) return betti;
  }
  std::vector<RayMask> faces;
  for (const auto& c : cone_masks_) faces.push_back(c & v);
  faces = maximalize(faces);

  if (collapse) {
    // strong collapses: drop a vertex whose facets all share a second vertex;
    // a non-maximal face list only makes the test stricter
    bool fresh = true;
    while (v.count() > 1) {
      bool changed = false;
      for (int x : bits_of(v)) {
        if (v.count() == 1) break;
        RayMask inter{~0ULL, ~0ULL};
        for (const auto& f : faces)
          if (f.test(x)) inter = inter & f;
        inter.reset(x);
        if (!inter.empty()) {
          v.reset(x);
          for (auto& f : faces) f.reset(x);
          changed = true;
        }
      }
      if (changed) fresh = false;
      else if (fresh) break;
      faces = maximalize(faces);
      fresh = true;
    }
    if (v.count() == 1) return betti;
  }

  // all faces of the complex, grouped by size; the empty face augments
  std::vector<std::vector<RayMask>> by_size(d + 1);
  by_size[0].push_back(RayMask{});
  {
    std::set<RayMask> all;
    for (const auto& f : faces) {
      auto bs = bits_of(f);
      for (unsigned sub = 1; sub < (1u << bs.size()); ++sub) {
        RayMask s;
        for (std::size_t j = 0; j < bs.size(); ++j)
          if ((sub >> j) & 1) s.set(bs[j]);
        all.insert(s);
      }
    }
    for (const auto& s : all) by_size[s.count()].push_back(s);
  }
  // rank of boundary from size q+1 faces to size q faces
  std::vector<int> rank(d + 2, 0);
  for (int q = 0; q + 1 <= d; ++q) {
    const auto& hi = by_size[q + 1];
    const auto& lo = by_size[q];
    if (hi.empty() || lo.empty()) continue;
    std::map<RayMask, int> index;
    for (std::size_t i = 0; i < lo.size(); ++i) index[lo[i]] = static_cast<int>(i);
    QMatrix m(hi.size(), std::vector<mpq_class>(lo.size(), 0));
    for (std::size_t i = 0; i < hi.size(); ++i) {
      auto bs = bits_of(hi[i]);
      for (std::size_t j = 0; j < bs.size(); ++j) {
        RayMask sub = hi[i];
        sub.reset(bs[j]);
        m[i][index.at(sub)] = (j % 2) ? -1 : 1;
      }
    }
    rank[q + 1] = rank_q(std::move(m));
  }
  // reduced degree q corresponds to faces of size q+1
  for (int q = -1; q <= d - 1; ++q) {
    long long cq = static_cast<long long>(by_size[q + 1].size());
    betti[q + 1] = cq - rank[q + 1] - (q + 2 <= d ? rank[q + 2] : 0);
  }
  return betti;
}

long long ToricVariety::reduced_euler(const RayMask& v) const {
  long long chi = -1;
  for (std::size_t k = 0; k < faces_by_dim_.size(); ++k) {
    long long cnt = 0;
    for (const auto& f : faces_by_dim_[k])
      if (f.subset_of(v)) ++cnt;
    chi += (k % 2 ? -cnt : cnt);
  }
  return chi;
}

CohomologyTable ToricVariety::cohomology(const TDivisor& a, const CohomOptions& opt) const {
  int d = fan_.dim;
  std::vector<std::pair<RayMask, long long>> items;
  scan(a, opt.margin, opt.parallel, [&](const RayMask& v, long long c) { items.push_back({v, c}); });

  std::vector<std::vector<long long>> betti(items.size());
  std::vector<std::size_t> todo;
  if (opt.cache) {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto it = betti_cache_.find(items[i].first);
      if (it != betti_cache_.end())
        betti[i] = it->second;
      else
        todo.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) todo.push_back(i);
  }
  long long nt = static_cast<long long>(todo.size());
  if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long j = 0; j < nt; ++j) {
      auto i = todo[j];
      betti[i] = reduced_betti(items[i].first, opt.collapse);
    }
  } else {
    for (long long j = 0; j < nt; ++j) {
      auto i = todo[j];
      betti[i] = reduced_betti(items[i].first, opt.collapse);
    }
  }
  if (opt.cache) {
    std::lock_guard<std::mutex> lock(mu_);
    for (auto i : todo) betti_cache_.emplace(items[i].first, betti[i]);
  }
  CohomologyTable t;
  t.h.assign(d + 1, 0);
  for (std::size_t i = 0; i < items.size(); ++i)
    for (int p = 0; p <= d; ++p) t.h[p] += items[i].second * betti[i][p];
  return t;
}

long long ToricVariety::euler(const TDivisor& a, int margin) const {
  std::vector<std::pair<RayMask, long long>> items;
  scan(a, margin, false, [&](const RayMask& v, long long c) { items.push_back({v, c}); });
  long long chi = 0;
  for (const auto& [v, c] : items) {
    long long e;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = chi_cache_.find(v);
      if (it != chi_cache_.end()) {
        chi += c * it->second;
        continue;
      }
    }
    e = -reduced_euler(v);
    {
      std::lock_guard<std::mutex> lock(mu_);
      chi_cache_.emplace(v, e);
    }
    chi += c * e;
  }
  return chi;
}

std::size_t ToricVariety::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return betti_cache_.size();
}

namespace {

std::mutex g_lm_mu;
std::map<int, std::unique_ptr<ToricVariety>> g_lm;
std::string g_cache_dir;

}  // namespace

void set_fan_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(g_lm_mu);
  g_cache_dir = dir;
}

const ToricVariety& lm_variety(int k) {
  std::lock_guard<std::mutex> lock(g_lm_mu);
  auto it = g_lm.find(k);
  if (it != g_lm.end()) return *it->second;
  Fan f;
  bool loaded = false;
  std::filesystem::path file;
  if (!g_cache_dir.empty()) {
    file = std::filesystem::path(g_cache_dir) / ("lm" + std::to_string(k) + ".json");
    std::ifstream in(file);
    if (in) {
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        f = fan_from_json(ss.str());
        loaded = f.ground == full_mask(k);
      } catch (const std::exception&) {
        loaded = false;
      }
    }
  }
  if (!loaded) {
    f = lm_fan(k);
    if (!g_cache_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(g_cache_dir, ec);
      std::ofstream out(file);
      if (out) out << fan_to_json(f);
    }
  }
  auto v = std::make_unique<ToricVariety>(std::move(f));
  const ToricVariety& ref = *v;
  g_lm.emplace(k, std::move(v));
  return ref;
}

std::map<Mask, long long> tdivisor_to_class(const Fan& lm, const TDivisor& d) {
  std::map<Mask, long long> cls;
  int k = popcnt(lm.ground);
  for (std::size_t r = 0; r < lm.tags.size(); ++r) {
    long long a = d[r];
    if (!a) continue;
    Mask s = lm.tags[r];
    if (popcnt(s) <= k - 2) {
      cls[s] += a;
    } else {
      // boundary divisor through all but one point: H minus the spanned exceptionals
      cls[0] += a;
      for (Mask sub = (s - 1) & s; sub; sub = (sub - 1) & s) cls[sub] -= a;
    }
  }
  std::erase_if(cls, [](const auto& kv) { return kv.second == 0; });
  return cls;
}

TDivisor class_to_tdivisor(const Fan& lm, const std::map<Mask, long long>& cls) {
  TDivisor d(lm.rays.size(), 0);
  int k = popcnt(lm.ground);
  Mask last = lm.ground ? Mask(1) << (31 - __builtin_clz(lm.ground)) : 0;
  for (const auto& [j, c] : cls) {
    if (j == 0) {
      for (std::size_t r = 0; r < lm.tags.size(); ++r)
        if (!(lm.tags[r] & last)) d[r] += c;
    } else {
      if (popcnt(j) > k - 2 || (j & ~lm.ground)) throw std::invalid_argument("not a basis index");
      d[lm.ray_of(j)] += c;
    }
  }
  return d;
}

ChainRestriction star_restrict_chain(const Fan& lm, const TDivisor& d,
                                     const std::vector<Mask>& chain) {
  Mask ground = lm.ground;
  std::vector<Mask> s{0};
  for (Mask c : chain) s.push_back(c);
  s.push_back(ground);
  int t = static_cast<int>(s.size()) - 1;
  auto coeff = [&](Mask m) -> long long {
    if (m == 0 || m == ground) return 0;
    int r = lm.ray_of(m);
    if (r < 0) throw std::invalid_argument("chain element is not a ray");
    return d[r];
  };
  ChainRestriction out;
  std::vector<long long> mu(t + 1, 0);
  std::vector<Mask> rep(t + 1, 0);
  for (int i = 1; i <= t; ++i) {
    Mask block = s[i] & ~s[i - 1];
    if (!block || (s[i - 1] & ~s[i])) throw std::invalid_argument("not a chain");
    out.blocks.push_back(block);
    rep[i] = block & (~block + 1);
    mu[i] = -coeff(s[i]) + coeff(s[i - 1]);
    int k = popcnt(block);
    out.parts.push_back(TDivisor(k >= 2 ? (std::size_t(1) << k) - 2 : 0, 0));
  }
  for (std::size_t r = 0; r < lm.tags.size(); ++r) {
    Mask S = lm.tags[r];
    for (int i = 1; i <= t; ++i) {
      if ((S & s[i - 1]) != s[i - 1] || (S & ~s[i]) || S == s[i - 1] || S == s[i]) continue;
      long long val = d[r] - coeff(s[i - 1]) + ((S & rep[i]) ? mu[i] : 0);
      Mask local = compress(S & ~s[i - 1], out.blocks[i - 1]);
      out.parts[i - 1][local - 1] += val;
      break;
    }
  }
  return out;
}

Fan star_fan(const Fan& f, const std::vector<int>& cone_rays) {
  return star_restrict(f, cone_rays, TDivisor(f.rays.size(), 0)).first;
}

std::pair<Fan, TDivisor> star_restrict(const Fan& f, const std::vector<int>& tau,
                                       const TDivisor& a) {
  std::set<int> ts(tau.begin(), tau.end());
  int base = -1;
  for (std::size_t c = 0; c < f.cones.size(); ++c)
    if (std::includes(f.cones[c].begin(), f.cones[c].end(), ts.begin(), ts.end())) {
      base = static_cast<int>(c);
      break;
    }
  if (base < 0) throw std::invalid_argument("rays do not span a cone of the fan");
  int d = f.dim;
  const auto& cone = f.cones[base];
  QMatrix inv = d ? inverse_q(cone_matrix(f, cone)) : QMatrix{};
  // character killing the coefficients on tau
  std::vector<mpq_class> target(d, 0);
  for (int j = 0; j < d; ++j)
    if (ts.count(cone[j])) target[j] = static_cast<long>(-a[cone[j]]);
  std::vector<mpq_class> m(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i] += inv[i][j] * target[j];
  std::vector<int> keep;
  for (int j = 0; j < d; ++j)
    if (!ts.count(cone[j])) keep.push_back(j);

  Fan out;
  out.dim = d - static_cast<int>(ts.size());
  std::map<int, int> newidx;
  TDivisor na;
  std::vector<std::vector<int>> cones;
  for (const auto& c : f.cones) {
    if (!std::includes(c.begin(), c.end(), ts.begin(), ts.end())) continue;
    std::vector<int> nc;
    for (int r : c) {
      if (ts.count(r)) continue;
      if (!newidx.count(r)) {
        int id = static_cast<int>(out.rays.size());
        newidx[r] = id;
        std::vector<int> coords;
        for (int j : keep) {
          mpq_class s = 0;
          for (int i = 0; i < d; ++i) s += f.rays[r][i] * inv[i][j];
          coords.push_back(static_cast<int>(s.get_num().get_si()));
        }
        out.rays.push_back(coords);
        mpq_class val = static_cast<long>(a[r]);
        for (int i = 0; i < d; ++i) val += m[i] * f.rays[r][i];
        na.push_back(val.get_num().get_si());
        if (!f.tags.empty()) out.tags.push_back(f.tags[r]);
      }
      nc.push_back(newidx[r]);
    }
    std::sort(nc.begin(), nc.end());
    cones.push_back(nc);
  }
  std::sort(cones.begin(), cones.end());
  out.cones = cones;
  return {out, na};
}

std::string fan_to_json(const Fan& f) {
  nlohmann::ordered_json j;
  j["rank"] = f.dim;
  j["ground"] = f.ground;
  j["rays"] = f.rays;
  j["cones"] = f.cones;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < f.tags.size(); ++i) tags[std::to_string(i)] = elements(f.tags[i]);
  j["tags"] = tags;
  return j.dump();
}

Fan fan_from_json(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  Fan f;
  f.dim = j.at("rank").get<int>();
  f.ground = j.value("ground", Mask(0));
  f.rays = j.at("rays").get<std::vector<std::vector<int>>>();
  f.cones = j.at("cones").get<std::vector<std::vector<int>>>();
  f.tags.assign(f.rays.size(), 0);
  for (auto& [k, v] : j.at("tags").items()) {
    Mask m = 0;
    for (int e : v.get<std::vector<int>>()) m |= bit(e);
    f.tags.at(std::stoul(k)) = m;
  }
  if (j.at("tags").empty()) f.tags.clear();
  return f;
}

}  // namespace permucat
