#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "permucat/combinat.hpp"
#include "permucat/report.hpp"

namespace permucat {

// O(j) (sum alpha_T E_T) (x) z^p; alpha keyed by the size-r set T sitting at infinity
struct EqLineBundle {
  std::vector<int> j;
  int p = 0;
  std::map<Mask, int> alpha;

  int n() const { return static_cast<int>(j.size()); }
  Mask minus_ones() const;  // E
  bool operator==(const EqLineBundle&) const = default;
  EqLineBundle operator+(const EqLineBundle& o) const;
  EqLineBundle operator-(const EqLineBundle& o) const;
  EqLineBundle operator*(int s) const;
  std::string str() const;
};

// O(-a,-b) on the divisor over p_T, i.e. P^{r-1} x P^{r-1} with infinity on the first factor
struct Torsion {
  Mask t = 0;
  int a = 0, b = 0;
  bool operator==(const Torsion&) const = default;
};

struct WindowCollection {
  int n = 0;
  std::vector<Torsion> torsion;       // precede the line bundles
  std::vector<EqLineBundle> bundles;  // decreasing number of -1 entries
  std::size_t size() const { return torsion.size() + bundles.size(); }
  std::string json() const;
};

struct GridType {
  int s = 0, p = 0;
  auto operator<=>(const GridType&) const = default;
};

// floor(r/2) for both parities
int window_m(int n);
long long euler_char_odd(int n);   // n C(n-1, (n-1)/2)
long long euler_char_even(int n);  // r^2 C(n, r)

EqLineBundle line_bundle(int n, Mask e, int p);  // -1 on e
// L_{E,p}: alpha_T = -|x_T|
EqLineBundle l_bundle(int n, Mask e, int p);
int x_value(int n, Mask e, int p, Mask t);  // (p + |E cap T| - |E cap T^c|) / 2

WindowCollection enum_windows(int n);

struct Stratum {
  enum Kind { lambda, lambda_prime, plus, minus } kind = lambda;
  Mask set = 0;  // I for point strata, T for blow-up strata
};
struct WindowSpec {
  Stratum stratum;
  int w = 0, eta = 0;
};
std::vector<Stratum> unstable_strata(int n);
WindowSpec window_spec(int n, const Stratum& s);
int kn_weight(const EqLineBundle& b, const Stratum& s);
bool window_membership(const EqLineBundle& b, const WindowSpec& spec);

// (degree, weight) -> dimension
struct WeightTable {
  std::map<std::pair<int, int>, long long> dim;
  long long weight_part(int w) const;
  long long total() const;
  std::string str() const;
};
WeightTable p1_table(int m);
WeightTable convolve(const WeightTable& a, const WeightTable& b);
WeightTable eq_cohomology_p1n(const std::vector<int>& j);

bool descent_check(const EqLineBundle& b);
// true when RHom(lp, l) = 0
bool pair_check_odd(const EqLineBundle& lp, const EqLineBundle& l);
// true when RHom(lp, l) = 0; requires |E| >= |E'|
bool pair_check_even(const EqLineBundle& lp, const EqLineBundle& l);

long long projective_h_total(int d, int k);  // total cohomology of O(k) on P^d
enum class TorsionPair { exceptional_pair, not_pair, endo_scalar };
std::string to_string(TorsionPair t);
struct TorsionVerdict {
  TorsionPair criterion, brute;
  long long dim = 0;  // total dimension of RHom(O(-a',-b'), O(-a,-b))
};
TorsionVerdict torsion_pair_check(int r, int a, int b, int ap, int bp);
// total dimension of RHom(L, O_delta(-a,-b)) with L given by its restriction O(u, v)
long long line_to_torsion_dim(int r, int u, int v, int a, int b);
// restriction of a linearized bundle on the blow-up to the divisor over p_T
std::pair<int, int> restrict_to_delta(const EqLineBundle& b, Mask t);

struct GitwinOptions {
  bool parallel = true;
  bool pairs = true;
};
Report windows_check(int n, const GitwinOptions& opt = {});
Report dictionary_check(int n);
Report alpha_x_suite(int n);
Report torsion_suite(int r);
Report closure_fullness(int n);

}  // namespace permucat
