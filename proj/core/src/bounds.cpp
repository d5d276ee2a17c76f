#include "hc2/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "hc2/errors.hpp"

namespace hc2 {

namespace {

std::uint64_t encode_steps(std::span<const Dir> steps) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < steps.size(); ++i)
    code |= static_cast<std::uint64_t>(steps[i]) << (2 * i);
  return code;
}

}  // namespace

std::uint64_t AlmMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t v : value) sum = checked_add(sum, v);
  return sum;
}

std::vector<std::uint64_t> AlmMatrix::row_sums() const {
  std::vector<std::uint64_t> sums(static_cast<std::size_t>(dim), 0);
  for (int i = 0; i < dim; ++i)
    for (std::size_t k = row_start[static_cast<std::size_t>(i)];
         k < row_start[static_cast<std::size_t>(i) + 1]; ++k)
      sums[static_cast<std::size_t>(i)] =
          checked_add(sums[static_cast<std::size_t>(i)], value[k]);
  return sums;
}

void AlmMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "dim " << dim << ' ' << m << ' ' << n << '\n';
  for (int i = 0; i < dim; ++i)
    for (std::size_t k = row_start[static_cast<std::size_t>(i)];
         k < row_start[static_cast<std::size_t>(i) + 1]; ++k)
      out << i << ' ' << col[k] << ' ' << value[k] << '\n';
}

AlmMatrix AlmMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string tag;
  AlmMatrix a;
  if (!(in >> tag >> a.dim >> a.m >> a.n) || tag != "dim")
    throw format_error(path + ": bad matrix header");
  std::map<std::pair<int, int>, std::uint64_t> entries;
  int i, j;
  std::uint64_t v;
  while (in >> i >> j >> v) entries[{i, j}] = v;
  a.row_start.assign(static_cast<std::size_t>(a.dim) + 1, 0);
  for (const auto& [key, val] : entries) {
    (void)val;
    a.row_start[static_cast<std::size_t>(key.first) + 1]++;
  }
  for (int r = 0; r < a.dim; ++r)
    a.row_start[static_cast<std::size_t>(r) + 1] +=
        a.row_start[static_cast<std::size_t>(r)];
  a.col.reserve(entries.size());
  a.value.reserve(entries.size());
  for (const auto& [key, val] : entries) {
    a.col.push_back(key.second);
    a.value.push_back(val);
  }
  return a;
}

AlmMatrix build_alm_matrix(int m, int n, std::size_t max_bytes) {
  if (m < 0 || m >= n) throw std::invalid_argument("need 0 <= m < n");
  if (n > kMaxWalkLength)
    throw std::invalid_argument("n exceeds the validated 64-step envelope");

  AlmMatrix a;
  a.m = m;
  a.n = n;

  if (m == 0) {
    // Single class: the empty walk.  The matrix collapses to (c_n).
    CountOptions opts;
    opts.n_max = n;
    CountResult r = run_enumeration(opts);
    a.dim = 1;
    a.row_start = {0, 1};
    a.col = {0};
    a.value = {r.counts[static_cast<std::size_t>(n - 1)]};
    return a;
  }

  // Canonical ordering of length-m walks = lexicographic visit order.
  std::unordered_map<std::uint64_t, int> rank;
  enumerate_with_visitor(m, [&](const WalkView& w) {
    int r = static_cast<int>(rank.size());
    rank.emplace(encode_steps(w.steps), r);
  });
  a.dim = static_cast<int>(rank.size());

  const std::size_t dense_bytes =
      static_cast<std::size_t>(a.dim) * static_cast<std::size_t>(a.dim) * 8;
  const bool dense = a.dim <= 4096 && (max_bytes == 0 || dense_bytes <= max_bytes);
  if (!dense && max_bytes != 0) {
    // Sparse accumulation costs roughly 48 bytes per distinct entry; assume
    // the worst case up front rather than aborting midway.
    std::size_t worst = static_cast<std::size_t>(a.dim) *
                        static_cast<std::size_t>(a.dim) * 48;
    if (worst > max_bytes && dense_bytes > max_bytes)
      throw resource_cap_error("alm matrix exceeds the configured memory cap");
  }

  std::vector<std::uint64_t> dense_acc;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_acc;
  if (dense)
    dense_acc.assign(static_cast<std::size_t>(a.dim) *
                         static_cast<std::size_t>(a.dim),
                     0);

  std::vector<Dir> terminal(static_cast<std::size_t>(m));
  enumerate_with_visitor(n, [&](const WalkView& w) {
    std::uint64_t pcode = encode_steps(w.steps.subspan(0, static_cast<std::size_t>(m)));
    int i = rank.at(pcode);
    LatticePoint v = w.vertices[static_cast<std::size_t>(n - m)];
    for (int k = 0; k < m; ++k)
      terminal[static_cast<std::size_t>(k)] =
          transport_dir(w.steps[static_cast<std::size_t>(n - m + k)], v);
    // The transported terminal segment is itself a taxi walk.
    int j = rank.at(encode_steps(terminal));
    std::uint64_t key = static_cast<std::uint64_t>(i) *
                            static_cast<std::uint64_t>(a.dim) +
                        static_cast<std::uint64_t>(j);
    if (dense) {
      if (++dense_acc[key] == 0)
        throw std::overflow_error("alm entry overflowed 64 bits");
    } else {
      if (++sparse_acc[key] == 0)
        throw std::overflow_error("alm entry overflowed 64 bits");
    }
  });

  // Compact to CSR in (i, j) order.
  a.row_start.assign(static_cast<std::size_t>(a.dim) + 1, 0);
  if (dense) {
    for (std::uint64_t key = 0; key < dense_acc.size(); ++key)
      if (dense_acc[key] != 0)
        a.row_start[key / static_cast<std::uint64_t>(a.dim) + 1]++;
    for (int r = 0; r < a.dim; ++r)
      a.row_start[static_cast<std::size_t>(r) + 1] +=
          a.row_start[static_cast<std::size_t>(r)];
    a.col.reserve(a.row_start.back());
    a.value.reserve(a.row_start.back());
    for (std::uint64_t key = 0; key < dense_acc.size(); ++key)
      if (dense_acc[key] != 0) {
        a.col.push_back(static_cast<int>(key % static_cast<std::uint64_t>(a.dim)));
        a.value.push_back(dense_acc[key]);
      }
  } else {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> items(
        sparse_acc.begin(), sparse_acc.end());
    std::sort(items.begin(), items.end());
    for (const auto& [key, val] : items) {
      (void)val;
      a.row_start[key / static_cast<std::uint64_t>(a.dim) + 1]++;
    }
    for (int r = 0; r < a.dim; ++r)
      a.row_start[static_cast<std::size_t>(r) + 1] +=
          a.row_start[static_cast<std::size_t>(r)];
    a.col.reserve(items.size());
    a.value.reserve(items.size());
    for (const auto& [key, val] : items) {
      a.col.push_back(static_cast<int>(key % static_cast<std::uint64_t>(a.dim)));
      a.value.push_back(val);
    }
  }
  return a;
}

EigenEnclosure certified_top_eigenvalue(const AlmMatrix& m, double tol,
                                        int max_iterations) {
  const int d = m.dim;
  if (d <= 0) throw std::invalid_argument("empty matrix");
  // The +I shift keeps the iterate strictly positive (so the ratio bounds
  // apply verbatim) and moves every eigenvalue by exactly one.
  std::vector<double> v(static_cast<std::size_t>(d), 1.0);
  std::vector<double> w(static_cast<std::size_t>(d), 0.0);
  EigenEnclosure enc;
  enc.converged = false;
  for (int it = 1; it <= max_iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double vmax = 0.0;
    double rq_num = 0.0;
    double rq_den = 0.0;
    for (int i = 0; i < d; ++i) {
      // Neumaier-compensated row sum: the enclosure must not depend on
      // summation order.
      double sum = v[static_cast<std::size_t>(i)];  // the +I term
      double comp = 0.0;
      for (std::size_t k = m.row_start[static_cast<std::size_t>(i)];
           k < m.row_start[static_cast<std::size_t>(i) + 1]; ++k) {
        double term = static_cast<double>(m.value[k]) *
                      v[static_cast<std::size_t>(m.col[k])];
        double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
          comp += (sum - t) + term;
        else
          comp += (term - t) + sum;
        sum = t;
      }
      sum += comp;
      w[static_cast<std::size_t>(i)] = sum;
      double r = sum / v[static_cast<std::size_t>(i)];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      vmax = std::max(vmax, sum);
      rq_num += v[static_cast<std::size_t>(i)] * sum;
      rq_den += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
    enc.iterations = it;
    enc.rayleigh = rq_num / rq_den - 1.0;
    enc.lower = (lo - 1.0) * (1.0 - kRoundingSlop);
    enc.upper = (hi - 1.0) * (1.0 + kRoundingSlop);
    // Relative width: the inflation slop alone keeps the absolute width
    // near 2^-39 * lambda_1, so an absolute target would be unreachable.
    if (enc.upper - enc.lower <= tol * std::max(1.0, std::abs(enc.upper))) {
      enc.converged = true;
      break;
    }
    for (int i = 0; i < d; ++i)
      v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / vmax;
  }
  return enc;
}

double fekete_upper(const WalkTable& table, int n) {
  std::uint64_t c = table.walks(n);
  return std::pow(static_cast<double>(c), 1.0 / n) * (1.0 + kRoundingSlop);
}

double bridge_lower(const WalkTable& table, int n) {
  std::uint64_t b = table.bridges(n);
  return std::pow(static_cast<double>(b), 1.0 / n) * (1.0 - kRoundingSlop);
}

double alm_upper(const AlmMatrix& matrix) {
  if (matrix.m == 0) {
    return std::pow(static_cast<double>(matrix.value.at(0)), 1.0 / matrix.n) *
           (1.0 + kRoundingSlop);
  }
  EigenEnclosure enc = certified_top_eigenvalue(matrix, 1e-10);
  return std::pow(enc.upper, 1.0 / (matrix.n - matrix.m)) *
         (1.0 + kRoundingSlop);
}

double alm_upper(int m, int n, std::size_t max_bytes) {
  return alm_upper(build_alm_matrix(m, n, max_bytes));
}

double lambda_torus(double mu) {
  if (mu < 1.0) throw std::invalid_argument("mu must be >= 1");
  return mu * mu * mu * mu - 1.0;
}

double lambda_box(double mu) {
  if (mu < 1.0) throw std::invalid_argument("mu must be >= 1");
  double mu2 = mu * mu;
  double mu4 = mu2 * mu2;
  double b = 2.0 - mu2 - mu4;
  double c = 1.0 - mu2;
  double disc = b * b - 4.0 * c;
  double root = (-b + std::sqrt(disc)) / 2.0;
  return std::max(mu4 - 1.0, root);
}

namespace {

// log of  68 m^2 sum_{l >= s} l q^l  =  68 m^2 q^s (s - (s-1) q) / (1-q)^2.
double log_tail(long long m, long long s, double log_q, double q) {
  double linear = static_cast<double>(s) - (static_cast<double>(s) - 1.0) * q;
  return std::log(68.0) + 2.0 * std::log(static_cast<double>(m)) +
         static_cast<double>(s) * log_q + std::log(linear) -
         2.0 * std::log1p(-q);
}

}  // namespace

long long peierls_cutoff(double lambda, double mu, bool quarter_start) {
  if (mu < 1.0) throw std::invalid_argument("mu must be >= 1");
  double mu4 = mu * mu * mu * mu;
  if (!(lambda > mu4 - 1.0))
    throw std::invalid_argument(
        "no finite cutoff: lambda must exceed mu^4 - 1");
  const double q = mu4 / (1.0 + lambda);
  const double log_q = std::log(q);
  const double target = std::log(1.0 / 3.0);
  auto start = [&](long long m) {
    return quarter_start ? (m + 3) / 4 : m;
  };
  auto ok = [&](long long m) {
    return log_tail(m, start(m), log_q, q) <= target;
  };

  // Direct scan over the head, where the sum need not be monotone.
  const long long scan_cap = 4096;
  for (long long m = 1; m <= scan_cap; ++m)
    if (ok(m)) return m;

  // log S(m) is concave in m, so beyond any point where S > 1/3 the
  // feasible set is a suffix; exponential then binary search.
  long long lo = scan_cap;  // S(lo) > 1/3
  long long hi = scan_cap * 2;
  while (!ok(hi)) {
    lo = hi;
    if (hi > (1ll << 56)) throw std::runtime_error("cutoff search overflow");
    hi *= 2;
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::string BoundsReport::to_json() const {
  nlohmann::json j;
  if (m >= 0) j["m"] = m;
  j["n"] = n;
  j["mu_upper"] = mu_upper;
  if (!std::isnan(mu_lower)) j["mu_lower"] = mu_lower;
  j["lambda_torus"] = lambda_torus;
  j["lambda_box"] = lambda_box;
  j["method"] = method;
  j["tolerances"] = {{"eig_tol", eig_tol}, {"rounding_slop", rounding_slop}};
  return j.dump(2);
}

}  // namespace hc2
