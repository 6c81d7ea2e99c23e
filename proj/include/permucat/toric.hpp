#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "permucat/combinat.hpp"

namespace permucat {

// subset of rays, up to 128 of them
struct RayMask {
  std::uint64_t lo = 0, hi = 0;
  void set(int i) { (i < 64 ? lo : hi) |= std::uint64_t(1) << (i & 63); }
  bool test(int i) const { return ((i < 64 ? lo : hi) >> (i & 63)) & 1; }
  void reset(int i) { (i < 64 ? lo : hi) &= ~(std::uint64_t(1) << (i & 63)); }
  int count() const { return __builtin_popcountll(lo) + __builtin_popcountll(hi); }
  bool empty() const { return !lo && !hi; }
  bool subset_of(const RayMask& o) const { return !(lo & ~o.lo) && !(hi & ~o.hi); }
  RayMask operator&(const RayMask& o) const { return {lo & o.lo, hi & o.hi}; }
  RayMask operator|(const RayMask& o) const { return {lo | o.lo, hi | o.hi}; }
  bool operator==(const RayMask&) const = default;
  auto operator<=>(const RayMask&) const = default;
};

struct RayMaskHash {
  std::size_t operator()(const RayMask& m) const {
    return std::hash<std::uint64_t>()(m.lo * 0x9e3779b97f4a7c15ULL ^ m.hi);
  }
};

struct Fan {
  int dim = 0;
  std::vector<std::vector<int>> rays;
  std::vector<std::vector<int>> cones;  // maximal cones, sorted ray indices
  std::vector<Mask> tags;               // LM fans: subset S of ray e_S
  Mask ground = 0;                      // LM fans: ground set

  int ray_of(Mask s) const;  // -1 if absent
};

Fan point_fan();
Fan projective_fan(int d);
Fan lm_fan(Mask ground);
inline Fan lm_fan(int n) { return lm_fan(full_mask(n)); }
Fan product(const Fan& a, const Fan& b);

struct FanCheck {
  bool smooth = true, complete = true;
  std::string witness;
};
FanCheck check_fan(const Fan& f);

using TDivisor = std::vector<long long>;

struct CohomologyTable {
  std::vector<long long> h;
  long long euler() const;
  long long total() const;
  bool acyclic() const { return total() == 0; }
  bool operator==(const CohomologyTable&) const = default;
  std::string str() const;
};

struct CohomOptions {
  int margin = 1;
  bool parallel = true;
  bool collapse = true;
  bool cache = true;
};

struct Wall {
  int cone, ray, other_cone, other_ray;
  std::vector<std::pair<int, long long>> coeffs;  // D.C = sum coeff * a_ray
};

// A smooth complete fan with precomputed cone data and a Betti cache.
class ToricVariety {
 public:
  explicit ToricVariety(Fan f);
  const Fan& fan() const { return fan_; }
  int dim() const { return fan_.dim; }
  int nrays() const { return static_cast<int>(fan_.rays.size()); }

  CohomologyTable cohomology(const TDivisor& d, const CohomOptions& opt = {}) const;
  long long euler(const TDivisor& d, int margin = 1) const;
  // character m_sigma of every maximal cone
  std::vector<std::vector<long long>> cone_characters(const TDivisor& d) const;
  TDivisor principal(const std::vector<long long>& m) const;
  TDivisor canonical() const;
  std::optional<Wall> nef_violation(const TDivisor& d) const;
  const std::vector<Wall>& walls() const { return walls_; }
  long long lattice_points(const TDivisor& d) const;
  // reduced Betti numbers of the full subcomplex on v, index q+1 for degree q
  std::vector<long long> reduced_betti(const RayMask& v, bool collapse = true) const;

  std::size_t cache_size() const;

 private:
  Fan fan_;
  std::vector<RayMask> cone_masks_;
  std::vector<std::vector<std::vector<long long>>> inverses_;
  std::vector<std::vector<RayMask>> faces_by_dim_;
  std::vector<RayMask> neighbors_;
  bool flag_ = false;  // every set of pairwise adjacent rays spans a cone
  std::vector<Wall> walls_;
  mutable std::mutex mu_;
  mutable std::unordered_map<RayMask, std::vector<long long>, RayMaskHash> betti_cache_;
  mutable std::unordered_map<RayMask, long long, RayMaskHash> chi_cache_;

  struct Box {
    std::vector<long long> lo, hi;
  };
  Box candidate_box(const TDivisor& d, int margin) const;
  template <class F>
  void scan(const TDivisor& d, int margin, bool parallel, F&& sink) const;
  long long reduced_euler(const RayMask& v) const;
};

// Fans and varieties are memoized per ground size; LM_K for |K| = k uses LM_k.
const ToricVariety& lm_variety(int k);
void set_fan_cache_dir(const std::string& dir);

// Inverse of the class map: T-divisor on LM_K to Kapranov-basis coefficients.
// Key 0 is H, key J is E_J (J a subset of the ground set).
std::map<Mask, long long> tdivisor_to_class(const Fan& lm, const TDivisor& d);
TDivisor class_to_tdivisor(const Fan& lm, const std::map<Mask, long long>& cls);

// Restriction of a T-divisor on LM_K to the orbit closure of the chain of
// rays S_1 < ... < S_{t-1}; returns one T-divisor per block (points give empty).
struct ChainRestriction {
  std::vector<Mask> blocks;
  std::vector<TDivisor> parts;
};
ChainRestriction star_restrict_chain(const Fan& lm, const TDivisor& d,
                                     const std::vector<Mask>& chain);

// Star fan of a cone spanned by rays (general, for checks on small fans).
Fan star_fan(const Fan& f, const std::vector<int>& cone_rays);
std::pair<Fan, TDivisor> star_restrict(const Fan& f, const std::vector<int>& cone_rays,
                                       const TDivisor& d);
CohomologyTable kunneth(const CohomologyTable& a, const CohomologyTable& b);

std::string fan_to_json(const Fan& f);
Fan fan_from_json(const std::string& s);

}  // namespace permucat
