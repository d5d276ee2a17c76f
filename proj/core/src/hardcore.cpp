#include "hc2/hardcore.hpp"

#include <cmath>
#include <stdexcept>

#include "hc2/errors.hpp"

namespace hc2 {

namespace {

inline std::uint64_t width_mask(int w) {
  return w >= 64 ? ~0ull : ((1ull << w) - 1);
}

// Independent row masks in increasing numeric order, honoring horizontal
// wraparound on the torus.
std::vector<std::uint64_t> row_masks(const Region& r) {
  std::vector<std::uint64_t> masks;
  const std::uint64_t full = width_mask(r.width);
  for (std::uint64_t m = 0;; ++m) {
    bool ok = (m & (m >> 1)) == 0;
    if (ok && r.toroidal() && r.width > 1) {
      std::uint64_t rot = ((m << 1) | (m >> (r.width - 1))) & full;
      ok = (m & rot) == 0;
    }
    if (ok) masks.push_back(m);
    if (m == full) break;
  }
  return masks;
}

}  // namespace

void for_each_independent_set(const Region& r,
                              const std::function<void(std::uint64_t)>& fn,
                              int cell_cap) {
  if (r.cells() > cell_cap)
    throw resource_cap_error("region exceeds the enumeration cell cap");
  std::vector<std::uint64_t> masks = row_masks(r);
  const int h = r.height;
  const bool wrap = r.toroidal() && h > 1;
  const std::uint64_t full = width_mask(r.width);

  // DFS over rows, bottom-up; row y contributes bits [y*width, (y+1)*width).
  std::vector<std::size_t> choice(static_cast<std::size_t>(h), 0);
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(h) + 1, 0);
  int y = 0;
  while (true) {
    if (choice[static_cast<std::size_t>(y)] == masks.size()) {
      choice[static_cast<std::size_t>(y)] = 0;
      if (--y < 0) break;
      ++choice[static_cast<std::size_t>(y)];
      continue;
    }
    std::uint64_t m = masks[choice[static_cast<std::size_t>(y)]];
    bool ok = true;
    if (y > 0) {
      std::uint64_t below =
          (acc[static_cast<std::size_t>(y)] >> ((y - 1) * r.width)) & full;
      ok = (m & below) == 0;
    }
    if (ok && y == h - 1 && wrap) {
      std::uint64_t bottom = acc[1] & full;
      ok = (m & bottom) == 0;
    }
    if (!ok) {
      ++choice[static_cast<std::size_t>(y)];
      continue;
    }
    acc[static_cast<std::size_t>(y) + 1] =
        acc[static_cast<std::size_t>(y)] | (m << (y * r.width));
    if (y == h - 1) {
      fn(acc[static_cast<std::size_t>(h)]);
      ++choice[static_cast<std::size_t>(y)];
    } else {
      ++y;
    }
  }
}

std::vector<Configuration> enumerate_configurations(const Region& r,
                                                    int cell_cap) {
  std::vector<Configuration> out;
  for_each_independent_set(
      r,
      [&](std::uint64_t mask) {
        Configuration c(r);
        c.mask = mask;
        out.push_back(c);
      },
      cell_cap);
  return out;
}

double PartitionPolynomial::value(double lambda) const {
  double z = 0;
  double p = 1;
  for (std::uint64_t c : size_counts) {
    z += static_cast<double>(c) * p;
    p *= lambda;
  }
  return z;
}

Rational PartitionPolynomial::value(const Rational& lambda) const {
  Rational z = 0;
  Rational p = 1;
  for (std::uint64_t c : size_counts) {
    z += Rational(BigInt(c)) * p;
    p *= lambda;
  }
  return z;
}

std::uint64_t PartitionPolynomial::total_sets() const {
  std::uint64_t t = 0;
  for (std::uint64_t c : size_counts) t += c;
  return t;
}

PartitionPolynomial partition_function_exact(const Region& r, int cell_cap) {
  PartitionPolynomial poly;
  poly.size_counts.assign(static_cast<std::size_t>(r.cells()) + 1, 0);
  for_each_independent_set(
      r,
      [&](std::uint64_t mask) {
        poly.size_counts[static_cast<std::size_t>(__builtin_popcountll(mask))]++;
      },
      cell_cap);
  while (poly.size_counts.size() > 1 && poly.size_counts.back() == 0)
    poly.size_counts.pop_back();
  return poly;
}

double strip_partition_function(int n, const GibbsParams& p) {
  if (n < 0) throw std::invalid_argument("strip length must be >= 0");
  double prev2 = 1.0;            // T_0
  double prev1 = 1.0 + p.lambda;  // T_1
  if (n == 0) return prev2;
  if (n == 1) return prev1;
  for (int i = 2; i <= n; ++i) {
    double t = prev1 + p.lambda * prev2;
    prev2 = prev1;
    prev1 = t;
  }
  return prev1;
}

Rational strip_partition_function_exact(int n, const Rational& lambda) {
  if (n < 0) throw std::invalid_argument("strip length must be >= 0");
  Rational prev2 = 1;
  Rational prev1 = Rational(1) + lambda;
  if (n == 0) return prev2;
  if (n == 1) return prev1;
  for (int i = 2; i <= n; ++i) {
    Rational t = prev1 + lambda * prev2;
    prev2 = prev1;
    prev1 = t;
  }
  return prev1;
}

double strip_growth_rate(double lambda) {
  return (1.0 + std::sqrt(1.0 + 4.0 * lambda)) / 2.0;
}

}  // namespace hc2
