#include "hc2/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hc2/errors.hpp"

namespace hc2 {

ChainState make_chain(const Region& r, std::uint64_t seed,
                      std::optional<Configuration> start) {
  ChainState s;
  s.config = start ? *start : Configuration(r);
  if (start && !(start->region == r))
    throw std::invalid_argument("make_chain: start region mismatch");
  if (!is_independent(s.config))
    throw std::invalid_argument("make_chain: start is not independent");
  s.rng = CounterRng{seed};
  s.step = 0;
  return s;
}

void transition_step(ChainState& s, const GibbsParams& p) {
  const Region& r = s.config.region;
  int v = s.rng.below(2 * s.step, r.cells());
  double u = s.rng.uniform(2 * s.step + 1);
  ++s.step;
  if (s.config.occupied(v)) {
    double accept = p.lambda >= 1.0 ? 1.0 / p.lambda : 1.0;
    if (u < accept) s.config.clear(v);
    return;
  }
  bool blocked = false;
  r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
    blocked |= s.config.occupied(nx, ny);
  });
  if (blocked) return;
  double accept = p.lambda >= 1.0 ? 1.0 : p.lambda;
  if (u < accept) s.config.set(v);
}

int ExactChain::index_of(std::uint64_t mask) const {
  auto it = std::lower_bound(states.begin(), states.end(), mask);
  if (it == states.end() || *it != mask)
    throw std::invalid_argument("state not in chain");
  return static_cast<int>(it - states.begin());
}

ExactChain exact_transition_matrix(const Region& r, const Rational& lambda,
                                   int state_cap) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  ExactChain chain;
  chain.region = r;
  chain.lambda = lambda;
  for_each_independent_set(
      r,
      [&](std::uint64_t mask) {
        if (static_cast<int>(chain.states.size()) >= state_cap)
          throw resource_cap_error("state space exceeds the configured cap");
        chain.states.push_back(mask);
      },
      r.cells());
  std::sort(chain.states.begin(), chain.states.end());

  const int n = chain.state_count();
  const int cells = r.cells();
  Rational z = 0;
  chain.pi.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    chain.pi[static_cast<std::size_t>(i)] = rational_pow(
        lambda, __builtin_popcountll(chain.states[static_cast<std::size_t>(i)]));
    z += chain.pi[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i) chain.pi[static_cast<std::size_t>(i)] /= z;

  const Rational per_vertex(1, cells);
  const Rational lambda_inv = Rational(1) / lambda;
  chain.offdiag.resize(static_cast<std::size_t>(n));
  chain.diag.assign(static_cast<std::size_t>(n), Rational(1));
  Configuration scratch(r);
  for (int i = 0; i < n; ++i) {
    scratch.mask = chain.states[static_cast<std::size_t>(i)];
    for (int v = 0; v < cells; ++v) {
      Configuration next = scratch;
      next.toggle(v);
      if (!scratch.occupied(v) && !is_independent(next)) continue;
      Rational accept = 1;
      if (scratch.occupied(v)) {
        if (lambda > 1) accept = lambda_inv;  // removal
      } else {
        if (lambda < 1) accept = lambda;  // insertion
      }
      Rational p = per_vertex * accept;
      int j = chain.index_of(next.mask);
      chain.offdiag[static_cast<std::size_t>(i)].push_back({j, p});
      chain.diag[static_cast<std::size_t>(i)] -= p;
    }
  }
  return chain;
}

namespace {

Rational cut_flow(const ExactChain& chain, const std::vector<char>& in_s) {
  Rational q = 0;
  for (int i = 0; i < chain.state_count(); ++i) {
    if (!in_s[static_cast<std::size_t>(i)]) continue;
    for (const auto& [j, p] : chain.offdiag[static_cast<std::size_t>(i)])
      if (!in_s[static_cast<std::size_t>(j)])
        q += chain.pi[static_cast<std::size_t>(i)] * p;
  }
  return q;
}

// Q(S, S^c) / min(pi(S), pi(S^c)); infinity when one side is empty.
std::optional<Rational> cut_conductance(const ExactChain& chain,
                                        const std::vector<char>& in_s) {
  Rational pi_s = 0, pi_total = 0;
  for (int i = 0; i < chain.state_count(); ++i) {
    pi_total += chain.pi[static_cast<std::size_t>(i)];
    if (in_s[static_cast<std::size_t>(i)])
      pi_s += chain.pi[static_cast<std::size_t>(i)];
  }
  Rational other = pi_total - pi_s;
  if (pi_s == 0 || other == 0) return std::nullopt;
  Rational denom = pi_s < other ? pi_s : other;
  return cut_flow(chain, in_s) / denom;
}

}  // namespace

TopoClass coarse_class(const Configuration& c) {
  std::optional<int> parity = cross_parity_of(c);
  if (!parity) return TopoClass::FaultLine;
  return *parity == 0 ? TopoClass::EvenCross : TopoClass::OddCross;
}

ClassHistogram class_histogram(const Region& r, int cell_cap) {
  ClassHistogram h;
  for (auto& v : h.by_class)
    v.assign(static_cast<std::size_t>(r.cells()) + 1, 0);
  Configuration scratch(r);
  for_each_independent_set(
      r,
      [&](std::uint64_t mask) {
        scratch.mask = mask;
        int k = __builtin_popcountll(mask);
        h.by_class[static_cast<std::size_t>(coarse_class(scratch))]
                  [static_cast<std::size_t>(k)]++;
      },
      cell_cap);
  return h;
}

ClassHistogram::Weights ClassHistogram::weights(const Rational& lambda) const {
  Weights w{0, 0, 0, 0};
  Rational p = 1;
  for (std::size_t k = 0; k < by_class[0].size(); ++k) {
    w.fault += Rational(BigInt(by_class[0][k])) * p;
    w.even += Rational(BigInt(by_class[1][k])) * p;
    w.odd += Rational(BigInt(by_class[2][k])) * p;
    p *= lambda;
  }
  w.total = w.fault + w.even + w.odd;
  return w;
}

ClassHistogram::Weights class_weights(const Region& r, const Rational& lambda,
                                      int cell_cap) {
  return class_histogram(r, cell_cap).weights(lambda);
}

ConductanceReport spectral_gap_and_conductance(const Region& r,
                                               const Rational& lambda,
                                               int state_cap) {
  ExactChain chain = exact_transition_matrix(r, lambda, state_cap);
  const int n = chain.state_count();

  ConductanceReport rep;
  rep.region = r.to_string();
  rep.lambda = static_cast<double>(lambda);
  rep.states = n;

  // Classes and partition weights.
  std::vector<char> in_even(static_cast<std::size_t>(n), 0);
  Rational pi_f = 0, pi_e = 0, pi_o = 0;
  Configuration scratch(r);
  for (int i = 0; i < n; ++i) {
    scratch.mask = chain.states[static_cast<std::size_t>(i)];
    switch (coarse_class(scratch)) {
      case TopoClass::FaultLine:
        pi_f += chain.pi[static_cast<std::size_t>(i)];
        break;
      case TopoClass::EvenCross:
        pi_e += chain.pi[static_cast<std::size_t>(i)];
        in_even[static_cast<std::size_t>(i)] = 1;
        break;
      case TopoClass::OddCross:
        pi_o += chain.pi[static_cast<std::size_t>(i)];
        break;
    }
  }
  rep.pi_fault = static_cast<double>(pi_f);
  rep.pi_even = static_cast<double>(pi_e);
  rep.pi_odd = static_cast<double>(pi_o);

  // Symmetrized transition matrix and its spectrum.
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> sqrt_pi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sqrt_pi[static_cast<std::size_t>(i)] =
        std::sqrt(static_cast<double>(chain.pi[static_cast<std::size_t>(i)]));
  for (int i = 0; i < n; ++i) {
    sym(i, i) = static_cast<double>(chain.diag[static_cast<std::size_t>(i)]);
    for (const auto& [j, p] : chain.offdiag[static_cast<std::size_t>(i)])
      sym(i, j) = static_cast<double>(p) * sqrt_pi[static_cast<std::size_t>(i)] /
                  sqrt_pi[static_cast<std::size_t>(j)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  const auto& ev = solver.eigenvalues();
  rep.top_eigenvalue = ev(n - 1);
  rep.gap = 1.0 - ev(n - 2);

  // Candidate cuts: the even-cross class and every sweep cut of the second
  // eigenvector (in chain coordinates); the sweep family certifies the
  // Cheeger direction phi^2/2 <= gap.
  double phi_best = std::numeric_limits<double>::infinity();
  bool upper_ok = true;
  auto consider = [&](const std::vector<char>& cut) -> std::optional<double> {
    auto phi = cut_conductance(chain, cut);
    if (!phi) return std::nullopt;
    double val = static_cast<double>(*phi);
    phi_best = std::min(phi_best, val);
    if (rep.gap > 2 * val + 1e-10) upper_ok = false;
    return val;
  };

  if (auto v = consider(in_even)) rep.phi_omega0 = *v;

  Eigen::VectorXd u2 = solver.eigenvectors().col(n - 2);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    f[static_cast<std::size_t>(i)] = u2(i) / sqrt_pi[static_cast<std::size_t>(i)];
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return f[static_cast<std::size_t>(a)] <
                                       f[static_cast<std::size_t>(b)]; });
  std::vector<char> sweep(static_cast<std::size_t>(n), 0);
  for (int k = 0; k + 1 < n; ++k) {
    sweep[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
    consider(sweep);
  }

  rep.phi_best = phi_best;
  rep.sandwich_lower_ok = phi_best * phi_best / 2.0 <= rep.gap + 1e-10;
  rep.sandwich_upper_ok = upper_ok;
  if (pi_e > 0) {
    rep.fault_to_even_ratio = static_cast<double>(pi_f / pi_e);
    // Flow out of the even-cross class only enters the fault class, so the
    // class cut is bounded by pi(fault)/pi(even).
    Rational flow = cut_flow(chain, in_even);
    rep.chain_bound_ok = flow <= pi_f && rep.phi_omega0 <= rep.fault_to_even_ratio + 1e-12;
  }
  return rep;
}

std::string ConductanceReport::to_json() const {
  nlohmann::json j;
  j["region"] = region;
  j["lambda"] = lambda;
  j["states"] = states;
  j["cut"] = "even_cross_class";
  j["gap"] = gap;
  j["top_eigenvalue"] = top_eigenvalue;
  j["phi_omega0"] = phi_omega0;
  j["phi_best"] = phi_best;
  j["pi_fault"] = pi_fault;
  j["pi_even"] = pi_even;
  j["pi_odd"] = pi_odd;
  j["fault_to_even_ratio"] = fault_to_even_ratio;
  j["sandwich_lower_ok"] = sandwich_lower_ok;
  j["sandwich_upper_ok"] = sandwich_upper_ok;
  j["chain_bound_ok"] = chain_bound_ok;
  return j.dump(2);
}

EscapeResult escape_time_experiment(const Region& r, const GibbsParams& p,
                                    const Configuration& start,
                                    TopoClass target, std::uint64_t seed,
                                    std::uint64_t max_steps, int check_every) {
  ChainState s = make_chain(r, seed, start);
  if (coarse_class(s.config) == target) return {0, true};
  while (s.step < max_steps) {
    transition_step(s, p);
    if (s.step % static_cast<std::uint64_t>(check_every) == 0 ||
        s.step == max_steps) {
      if (coarse_class(s.config) == target) return {s.step, true};
    }
  }
  return {max_steps, false};
}

}  // namespace hc2
