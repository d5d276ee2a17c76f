// Metropolis Glauber dynamics for the hard-core model, exact
// spectral/conductance computations at tiny sizes, and seeded escape-time
// experiments.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hc2/hardcore.hpp"
#include "hc2/rng.hpp"
#include "hc2/topology.hpp"

namespace hc2 {

struct ChainState {
  Configuration config;
  CounterRng rng;
  std::uint64_t step = 0;
};

ChainState make_chain(const Region& r, std::uint64_t seed,
                      std::optional<Configuration> start = std::nullopt);

// One Metropolis update: a uniformly random vertex is toggled with
// acceptance min(1, lambda^{delta}); adds that violate independence are
// rejected.  The configuration stays independent.
void transition_step(ChainState& s, const GibbsParams& p);

inline constexpr int kDefaultStateCap = 20000;

struct ExactChain {
  Region region{1, 1, Boundary::Free};
  Rational lambda;
  std::vector<std::uint64_t> states;  // masks in enumeration order
  std::vector<Rational> pi;           // stationary distribution
  // Off-diagonal transition entries (j, P(i,j)) per row, plus the diagonal.
  std::vector<std::vector<std::pair<int, Rational>>> offdiag;
  std::vector<Rational> diag;

  int state_count() const { return static_cast<int>(states.size()); }
  int index_of(std::uint64_t mask) const;
};

ExactChain exact_transition_matrix(const Region& r, const Rational& lambda,
                                   int state_cap = kDefaultStateCap);

struct ConductanceReport {
  std::string region;
  double lambda = 0;
  int states = 0;
  double gap = 0;            // 1 - second eigenvalue
  double top_eigenvalue = 0; // spectral check; 1 for a stochastic matrix
  double phi_omega0 = 0;     // conductance of the even-cross cut
  double phi_best = 0;       // smallest conductance among candidate cuts
  double pi_fault = 0;
  double pi_even = 0;
  double pi_odd = 0;
  double fault_to_even_ratio = 0;  // pi(fault) / pi(even cross)
  bool sandwich_lower_ok = false;  // phi_best^2/2 <= gap
  bool sandwich_upper_ok = false;  // gap <= 2 phi_S for every candidate S
  bool chain_bound_ok = false;     // phi_omega0 <= pi(fault)/pi(even)

  std::string to_json() const;
};

// Exact chain analysis with the even-cross cut and an eigenvector sweep
// family of candidate cuts.  Conductances are exact rationals; the gap is a
// dense symmetric eigensolve.
ConductanceReport spectral_gap_and_conductance(const Region& r,
                                               const Rational& lambda,
                                               int state_cap = kDefaultStateCap);

// Independent-set counts per (class, occupancy), by cross detection over
// the full enumeration (a configuration has a fault exactly when it has no
// cross).  One pass supports exact weights at any activity.
struct ClassHistogram {
  // [0] fault, [1] even cross, [2] odd cross; index = set size.
  std::array<std::vector<std::uint64_t>, 3> by_class;

  struct Weights {
    Rational fault, even, odd, total;
  };
  Weights weights(const Rational& lambda) const;
};

ClassHistogram class_histogram(const Region& r,
                               int cell_cap = kDefaultEnumerationCap);

ClassHistogram::Weights class_weights(const Region& r, const Rational& lambda,
                                      int cell_cap = kDefaultEnumerationCap);

struct EscapeResult {
  std::uint64_t steps = 0;
  bool hit = false;
};

// Runs the chain from `start` until its class matches `target` (checked
// every `check_every` steps via cross detection) or max_steps elapse.
EscapeResult escape_time_experiment(const Region& r, const GibbsParams& p,
                                    const Configuration& start,
                                    TopoClass target, std::uint64_t seed,
                                    std::uint64_t max_steps,
                                    int check_every = 16);

// Current class of a configuration by cross parity; fault-class means no
// cross of either parity.
TopoClass coarse_class(const Configuration& c);

}  // namespace hc2
