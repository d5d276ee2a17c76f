// Rigorous bounds on the taxi-walk connective constant and the activity
// thresholds they imply: Fekete (subadditivity) upper bounds, bridge lower
// bounds, the prefix/suffix-classified count matrix with a certified
// top-eigenvalue enclosure, and the contour-sum cutoff.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hc2/enumerate.hpp"

namespace hc2 {

// Relative inflation applied to certified quantities to absorb floating
// point rounding; 2^-40 dwarfs the actual error at the supported sizes.
inline constexpr double kRoundingSlop = 9.094947017729282e-13;  // 2^-40

struct AlmMatrix {
  int m = 0;    // classifying segment length
  int n = 0;    // walk length
  int dim = 0;  // number of canonical length-m walks
  // CSR over rows: entry (i, j) counts length-n walks that start with
  // canonical walk i and end with canonical walk j (terminal segment
  // transported to the origin).
  std::vector<std::size_t> row_start;
  std::vector<int> col;
  std::vector<std::uint64_t> value;

  std::uint64_t total() const;
  std::vector<std::uint64_t> row_sums() const;

  // Text triplet dump: header `dim m n`, then one `i j count` per entry.
  void save(const std::string& path) const;
  static AlmMatrix load(const std::string& path);
};

// Builds A(m, n) by streaming the length-n enumeration.  m = 0 collapses to
// the 1x1 matrix holding c_n.  `max_bytes` caps the builder's working
// memory (0 = unlimited).
AlmMatrix build_alm_matrix(int m, int n, std::size_t max_bytes = 0);

struct EigenEnclosure {
  double lower = 0;
  double upper = 0;
  double rayleigh = 0;  // quotient of the final iterate; always enclosed
  int iterations = 0;
  bool converged = true;

  double width() const { return upper - lower; }
};

// Collatz-Wielandt enclosure of the largest eigenvalue of a nonnegative
// matrix: iterates v <- (M + I) v from the all-ones vector and returns
// [min_i (Mv)_i / v_i, max_i (Mv)_i / v_i] shifted back by one, the ends
// inflated outward by kRoundingSlop.  The +I shift keeps the iterate
// strictly positive, so both ratio bounds hold for any nonnegative M.
// `tol` is the relative enclosure width at which iteration stops; it cannot
// go below twice the inflation slop.
EigenEnclosure certified_top_eigenvalue(const AlmMatrix& m, double tol,
                                        int max_iterations = 10000);

// c_n^{1/n}: upper bound on the connective constant by subadditivity.
double fekete_upper(const WalkTable& table, int n);

// b_n^{1/n}: lower bound via bridge supermultiplicativity.
double bridge_lower(const WalkTable& table, int n);

// lambda_1(A(m,n))^{1/(n-m)}: the matrix-method upper bound.
double alm_upper(int m, int n, std::size_t max_bytes = 0);
double alm_upper(const AlmMatrix& matrix);

// Phase-coexistence threshold on the torus: mu^4 - 1.
double lambda_torus(double mu);

// Slow-mixing threshold with free boundary: the smallest lambda* such that
// both  lambda > mu^4 - 1  and  2(1+lambda) > mu^2 (1 + sqrt(1+4 lambda))
// hold for every lambda > lambda*.  The second condition is the quadratic
// lambda^2 + (2 - mu^2 - mu^4) lambda + (1 - mu^2) > 0.
double lambda_box(double mu);

// Smallest m with  sum_{l >= start(m)} 68 m^2 l (mu^4/(1+lambda))^l <= 1/3,
// evaluated in closed form.  `quarter_start` selects start(m) = ceil(m/4)
// instead of the default start(m) = m; both readings of the contour sum are
// supported.
long long peierls_cutoff(double lambda, double mu, bool quarter_start = false);

struct BoundsReport {
  int m = -1;  // -1 when the Fekete route was used
  int n = 0;
  double mu_upper = 0;
  double mu_lower = 0;  // NaN when no bridge data
  double lambda_torus = 0;
  double lambda_box = 0;
  std::string method;
  double eig_tol = 0;
  double rounding_slop = kRoundingSlop;

  std::string to_json() const;
};

}  // namespace hc2
