#pragma once

#include <optional>

#include "permucat/combinat.hpp"
#include "permucat/report.hpp"

namespace permucat {

// hard ceilings on n per module
inline constexpr int kCombinatMax = 16;
inline constexpr int kToricMax = 7;
inline constexpr int kExcollMax = 6;
inline constexpr int kGitwinMax = 9;
inline constexpr int kPicardMax = 12;

struct SuiteOptions {
  int margin = 1;
  bool parallel = true;
};

// counts of Ghat(n) against the recursion, the two identities, group action and orders
Report ghat_suite(int n_min, int n_max);
// LM fans up to n_max plus the cohomology self-tests on the small test fans
Report toric_suite(int n_max, const SuiteOptions& opt = {});
Report picard_suite(int n_max, const SuiteOptions& opt = {});
// one order, or both when empty; the Gram check runs for n <= 5
Report excoll_suite(int n, std::optional<Order> order, const SuiteOptions& opt = {});
Report windows_suite(int n, const SuiteOptions& opt = {});

}  // namespace permucat
