// Exact desk-scale hard-core computations: enumeration of independent sets,
// partition functions with integer coefficients, and the 1 x n strip
// recurrence.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hc2/rational.hpp"
#include "hc2/region.hpp"

namespace hc2 {

struct GibbsParams {
  double lambda = 1.0;
};

inline constexpr int kDefaultEnumerationCap = 36;  // cells

// Visits every independent set of the region exactly once, in a fixed
// deterministic order (binary counting over per-row masks, bottom row least
// significant).  Throws resource_cap_error when the region exceeds the cap.
void for_each_independent_set(const Region& r,
                              const std::function<void(std::uint64_t)>& fn,
                              int cell_cap = kDefaultEnumerationCap);

std::vector<Configuration> enumerate_configurations(
    const Region& r, int cell_cap = kDefaultEnumerationCap);

// Z as a polynomial in the activity: coefficient k counts the independent
// sets of size k.  Exact by construction.
struct PartitionPolynomial {
  std::vector<std::uint64_t> size_counts;

  double value(double lambda) const;
  Rational value(const Rational& lambda) const;
  std::uint64_t total_sets() const;
};

PartitionPolynomial partition_function_exact(
    const Region& r, int cell_cap = kDefaultEnumerationCap);

// T_n with T_0 = 1, T_1 = 1 + lambda, T_n = T_{n-1} + lambda T_{n-2}.
double strip_partition_function(int n, const GibbsParams& p);
Rational strip_partition_function_exact(int n, const Rational& lambda);

// Per-site growth rate of the strip recurrence: (1 + sqrt(1 + 4 lambda))/2.
double strip_growth_rate(double lambda);

}  // namespace hc2
