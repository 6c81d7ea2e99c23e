#pragma once

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "permucat/combinat.hpp"
#include "permucat/linalg.hpp"
#include "permucat/report.hpp"
#include "permucat/toric.hpp"

namespace permucat {

// X^r_N; r = -1 is the Losev-Manin space itself
struct Model {
  Mask ground = 0;
  int r = -1;
  int n() const { return popcnt(ground); }
  int max_index() const;  // largest admissible |J|
  bool admissible(Mask j) const;
  bool operator==(const Model&) const = default;
};
inline Model lm(Mask ground) { return {ground, -1}; }

// Kapranov-basis coefficients; key 0 is H, key J is E_J
struct DivisorClass {
  Model model;
  std::map<Mask, mpq_class> c;

  mpq_class coeff(Mask j) const;
  void add(Mask j, const mpq_class& v);
  DivisorClass& operator+=(const DivisorClass& o);
  DivisorClass& operator-=(const DivisorClass& o);
  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator-() const;
  DivisorClass operator*(const mpq_class& s) const;
  bool operator==(const DivisorClass& o) const { return model == o.model && c == o.c; }
  bool is_zero() const { return c.empty(); }
  bool integral() const;
  std::map<Mask, long long> to_int() const;
  std::string str() const;
  std::string json() const;
};

DivisorClass zero_class(Model m);
DivisorClass h_class(Model m);
DivisorClass e_class(Model m, Mask j);
DivisorClass g_class(Model m, int a);  // (G_a^r)^dual
DivisorClass lambda_class(Model m, Mask s);  // H minus the exceptionals spanned by s
DivisorClass delta0(Model m, Mask s);        // boundary with s on the 0 side
DivisorClass delta_inf(Model m, Mask s);     // boundary with s on the infinity side
DivisorClass psi0(Model m);
DivisorClass psi_inf(Model m);
DivisorClass diagonal(Model m, int i, int j);  // class of the locus z_i = z_j
DivisorClass big_delta(Model m, int k);
// relabel through the 0/infinity swap, via the toric involution e_S -> e_{S^c}
DivisorClass cremona(const DivisorClass& d);

// bridging to the toric oracle (Losev-Manin models only)
TDivisor to_tdivisor(const DivisorClass& d);
DivisorClass from_tdivisor(Mask ground, const TDivisor& t);
CohomologyTable cohomology(const DivisorClass& d, const CohomOptions& opt = {});
bool is_nef(const DivisorClass& d);

// pullbacks along forgetful maps pi_I : LM_N -> LM_{N \ I}
DivisorClass pullback_forgetful(Model m, Mask forgotten, int a);
DivisorClass pullback_class(Model m, Mask forgotten, const DivisorClass& d);
DivisorClass pullback_toric(Model m, Mask forgotten, const DivisorClass& d);

// symbolic generators, restricted by rules rather than by coordinates
struct Generator {
  enum Kind { g, psi0, psi_inf, delta } kind;
  int a = 0;     // g
  Mask s = 0;    // delta: 0-side set
  long long coef = 1;
};
DivisorClass expand_generators(Mask ground, const std::vector<Generator>& gens);
using FactorizedClass = std::vector<DivisorClass>;
// chain S_1 < ... < S_{t-1}; factor i lives on S_i \ S_{i-1}
FactorizedClass restrict_to_stratum(Mask ground, const std::vector<Generator>& gens,
                                    const std::vector<Mask>& chain);
FactorizedClass restrict_toric(const DivisorClass& d, const std::vector<Mask>& chain);
std::vector<Mask> chain_of_blocks(const std::vector<Mask>& blocks);

// lift of a box product of labels (0 = trivial) on consecutive blocks
DivisorClass lift_bundle(const std::vector<Mask>& blocks, const std::vector<int>& labels);

Report class_identities_check(int n);
QMatrix b_matrix(int n);
QMatrix cartan_matrix(int n);

enum class Reduction { psi0, psi_i, delta_i0, delta_ij };
DivisorClass reduction_pullback(Reduction kind, int n, int i = 0, int j = 0);
Report reduction_relations_check(int n);

struct SigmaDecomposition {
  DivisorClass pullback, pstar, sigma1, sigma2;
  bool identity = false;
  std::vector<std::string> violations;
  std::vector<Mask> residue;  // sigma1 terms not covered by the codimension bound
};
SigmaDecomposition sigma_decomposition(int n, Mask forgotten, int a);

struct BlowdownResult {
  DivisorClass f_div;
  bool identity = false, bounds = false;
  std::string witness;
};
BlowdownResult blowdown_compat(int n, int r, int a, int i);

Report comps_check(int n_max);

}  // namespace permucat
