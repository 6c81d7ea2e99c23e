#pragma once

#include <optional>
#include <string>
#include <vector>

#include "permucat/combinat.hpp"
#include "permucat/picard.hpp"
#include "permucat/report.hpp"

namespace permucat {

struct FactorRecord {
  unsigned subset = 0;  // bits index into the common divisors
  int factor = -1;      // index of a vanishing factor, -1 if none
  std::string cls;      // class of that factor
};

struct VanishingCertificate {
  GhatObject t, tp;
  bool disjoint = false;
  bool ok = true;
  std::vector<Mask> common;  // divisors containing both supports
  std::vector<FactorRecord> records;
  // closed-form case analysis (only with an order)
  bool case_agrees = true;
  std::vector<int> cases;  // per record: 1..4, 0 when not predicted
  std::string witness;
};

// lift of the label bundle of T to the whole space
DivisorClass lift_of(const GhatObject& t);
// second lift: factor T-divisors placed on the rays above each block
DivisorClass toric_lift_of(const GhatObject& t);

VanishingCertificate self_ext_certificate(const GhatObject& t);
// certifies RHom(T, T') = 0; with an order, also runs the case analysis
VanishingCertificate pair_vanishing_certificate(const GhatObject& t, const GhatObject& tp,
                                                std::optional<Order> order = std::nullopt);

struct CollectionOptions {
  bool parallel = true;
};
Report verify_collection(int n, Order order, const CollectionOptions& opt = {});

struct GramMatrix {
  std::vector<GhatObject> objects;  // ascending in the chosen order
  std::vector<std::vector<long long>> m;
  std::string csv() const;
};
long long euler_pairing(const GhatObject& t, const GhatObject& tp, bool toric_lift_first = false);
GramMatrix euler_pairing_matrix(int n, Order order = Order::lex, bool parallel = true);
Report gram_check(int n, bool parallel = true);

std::size_t factor_cache_size();

}  // namespace permucat
