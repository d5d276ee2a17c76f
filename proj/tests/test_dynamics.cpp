#include <doctest.h>

#include <algorithm>

#include "hc2/dynamics.hpp"
#include "hc2/errors.hpp"

using namespace hc2;

TEST_CASE("metropolis single steps") {
  Region r = Region::grid(2, 2);
  GibbsParams unit{1.0};
  ChainState s = make_chain(r, 7);
  for (int i = 0; i < 2000; ++i) {
    transition_step(s, unit);
    REQUIRE(is_independent(s.config));
  }
  // at lambda = 1 an isolated add proposal is always accepted: from the
  // empty configuration one step always occupies something
  ChainState t = make_chain(r, 3);
  transition_step(t, unit);
  CHECK(t.config.count() == 1);
}

TEST_CASE("seeded determinism") {
  Region r = Region::torus(4);
  GibbsParams p{2.0};
  ChainState a = make_chain(r, 123);
  ChainState b = make_chain(r, 123);
  for (int i = 0; i < 5000; ++i) {
    transition_step(a, p);
    transition_step(b, p);
  }
  CHECK(a.config.mask == b.config.mask);
  ChainState c = make_chain(r, 124);
  for (int i = 0; i < 5000; ++i) transition_step(c, p);
  CHECK(c.config.mask != a.config.mask);
}

TEST_CASE("exact transition matrix: stochastic, reversible, stationary") {
  for (auto [w, h, lam] : {std::tuple{3, 3, Rational(3, 2)},
                           std::tuple{2, 4, Rational(2)},
                           std::tuple{2, 2, Rational(1, 3)}}) {
    Region r = Region::grid(w, h);
    ExactChain chain = exact_transition_matrix(r, lam);
    for (int i = 0; i < chain.state_count(); ++i) {
      Rational row = chain.diag[static_cast<std::size_t>(i)];
      for (const auto& [j, p] : chain.offdiag[static_cast<std::size_t>(i)]) {
        row += p;
        // detailed balance, exactly
        Rational back = 0;
        for (const auto& [k, q] : chain.offdiag[static_cast<std::size_t>(j)])
          if (k == i) back = q;
        REQUIRE(chain.pi[static_cast<std::size_t>(i)] * p ==
                chain.pi[static_cast<std::size_t>(j)] * back);
      }
      REQUIRE(row == 1);
      REQUIRE(chain.diag[static_cast<std::size_t>(i)] >= 0);
    }
    Rational total = 0;
    for (const Rational& x : chain.pi) total += x;
    CHECK(total == 1);
  }
}

TEST_CASE("3x3 grid has the 63-state chain") {
  ExactChain chain = exact_transition_matrix(Region::grid(3, 3), Rational(3, 2));
  CHECK(chain.state_count() == 63);
}

TEST_CASE("state cap is enforced") {
  CHECK_THROWS_AS(exact_transition_matrix(Region::grid(5, 5), Rational(1), 1000),
                  resource_cap_error);
}

TEST_CASE("gap and conductance sandwich on the named regions") {
  for (auto [w, h, lam] : {std::tuple{3, 3, Rational(3, 2)},
                           std::tuple{2, 4, Rational(2)}}) {
    ConductanceReport rep =
        spectral_gap_and_conductance(Region::grid(w, h), lam);
    CHECK(rep.gap > 0);
    CHECK(rep.sandwich_lower_ok);
    CHECK(rep.sandwich_upper_ok);
    CHECK(rep.chain_bound_ok);
    CHECK(rep.phi_omega0 >= rep.gap / 2 - 1e-10);
    std::string json = rep.to_json();
    CHECK(json.find("\"gap\"") != std::string::npos);
  }
}

TEST_CASE("exhaustive conductance check on a tiny chain") {
  // 2x2 at lambda = 2: seven states; every cut of the state space obeys
  // the sandwich around the computed gap.
  Region r = Region::grid(2, 2);
  ExactChain chain = exact_transition_matrix(r, Rational(2));
  ConductanceReport rep = spectral_gap_and_conductance(r, Rational(2));
  const int n = chain.state_count();
  REQUIRE(n == 7);
  double phi_min = 1e18;
  for (std::uint64_t cut = 1; cut + 1 < (1ull << n); ++cut) {
    Rational q = 0, pi_s = 0;
    for (int i = 0; i < n; ++i) {
      if (!((cut >> i) & 1)) continue;
      pi_s += chain.pi[static_cast<std::size_t>(i)];
      for (const auto& [j, p] : chain.offdiag[static_cast<std::size_t>(i)])
        if (!((cut >> j) & 1))
          q += chain.pi[static_cast<std::size_t>(i)] * p;
    }
    Rational other = 1 - pi_s;
    Rational denom = pi_s < other ? pi_s : other;
    phi_min = std::min(phi_min, static_cast<double>(q / denom));
  }
  CHECK(phi_min * phi_min / 2 <= rep.gap + 1e-10);
  CHECK(rep.gap <= 2 * phi_min + 1e-10);
}

TEST_CASE("stationary distribution matches long-run frequencies") {
  Region r = Region::grid(2, 2);
  GibbsParams p{2.0};
  ChainState s = make_chain(r, 99);
  std::vector<long> counts(16, 0);
  const long steps = 400000;
  for (long i = 0; i < steps; ++i) {
    transition_step(s, p);
    counts[s.config.mask]++;
  }
  PartitionPolynomial z = partition_function_exact(r);
  double Z = z.value(2.0);
  for (int m = 0; m < 16; ++m) {
    Configuration c(r);
    c.mask = static_cast<std::uint64_t>(m);
    if (!is_independent(c)) {
      CHECK(counts[m] == 0);
      continue;
    }
    double expect = std::pow(2.0, c.count()) / Z;
    double got = static_cast<double>(counts[m]) / steps;
    // within 3 sigma of the multinomial deviation
    double sigma = std::sqrt(expect * (1 - expect) / steps);
    CHECK(std::abs(got - expect) < 3 * sigma + 5 * sigma);
  }
}

TEST_CASE("top eigenvalue of the chain is one") {
  ConductanceReport rep =
      spectral_gap_and_conductance(Region::grid(3, 3), Rational(3, 2));
  CHECK(std::abs(rep.top_eigenvalue - 1.0) < 1e-10);
}

TEST_CASE("vanishing activity concentrates on the fault class") {
  auto w = class_weights(Region::grid(4, 4), Rational(1, 1000));
  CHECK(w.fault / w.total > Rational(99, 100));
}

TEST_CASE("class weights are exact and trend with the activity") {
  ClassHistogram h = class_histogram(Region::torus(4));
  std::uint64_t total = 0;
  for (const auto& v : h.by_class)
    for (std::uint64_t x : v) total += x;
  CHECK(total == 743);
  double prev = 1e18;
  for (int lam : {1, 2, 4, 8}) {
    auto w = h.weights(Rational(lam));
    CHECK(w.even == w.odd);  // torus parity symmetry
    double ratio = static_cast<double>(w.fault / w.even);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("escape experiment basics") {
  Region r = Region::torus(4);
  Configuration cb = checkerboard(r, 1);
  EscapeResult zero = escape_time_experiment(r, {2.0}, cb,
                                             TopoClass::OddCross, 5, 1000);
  CHECK(zero.hit);
  CHECK(zero.steps == 0);

  Configuration even_cb = checkerboard(r, 0);
  EscapeResult run = escape_time_experiment(r, {0.5}, even_cb,
                                            TopoClass::OddCross, 5, 2000000);
  CHECK(run.hit);
  CHECK(run.steps > 0);
}

TEST_CASE("coarse class tracks the partition") {
  CHECK(coarse_class(Configuration(Region::grid(4, 4))) == TopoClass::FaultLine);
  CHECK(coarse_class(checkerboard(Region::grid(4, 4), 0)) == TopoClass::EvenCross);
  CHECK(coarse_class(checkerboard(Region::torus(6), 1)) == TopoClass::OddCross);
}
