#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "hc2/enumerate.hpp"
#include "hc2/walk.hpp"

using namespace hc2;

namespace {

std::vector<Dir> steps(const char* s) {
  return TaxiWalk::from_string(s).steps;
}

}  // namespace

TEST_CASE("taxi walk oracle accepts and rejects by definition") {
  CHECK(is_taxi_walk(steps("E")));
  CHECK(is_taxi_walk(steps("N")));
  CHECK_FALSE(is_taxi_walk(steps("W")));
  CHECK_FALSE(is_taxi_walk(steps("ENE")));   // N is not oriented out of (1,0)
  CHECK_FALSE(is_taxi_walk(steps("ESES")));  // E not oriented at (1,-1)
  CHECK(is_taxi_walk(steps("ESS")));
  CHECK_FALSE(is_taxi_walk(steps("EW")));  // reversal revisits the origin
}

TEST_CASE("small counts match hand enumeration") {
  WalkTable t = count_taxi_walks(3);
  CHECK(t.walks(1) == 2);
  CHECK(t.walks(2) == 4);
  CHECK(t.walks(3) == 6);
  CHECK(t.walks(0) == 1);
}

TEST_CASE("optimized counts equal the brute-force oracle up to length 10") {
  WalkTable t = count_taxi_walks(10);
  for (int n = 1; n <= 10; ++n) CHECK(t.walks(n) == brute_force_walk_count(n));
}

TEST_CASE("length 20 count is exact") {
  WalkTable t = count_taxi_walks(20);
  CHECK(t.walks(20) == 20114);
}

TEST_CASE("counts are independent of worker count and resumable") {
  WalkTable serial = count_taxi_walks(18, 1);
  WalkTable parallel = count_taxi_walks(18, 4);
  for (int n = 1; n <= 18; ++n) CHECK(serial.walks(n) == parallel.walks(n));

  // Interrupt a checkpointed run, then resume it.
  std::string path = "walks18.checkpoint.json";
  std::remove(path.c_str());
  CountOptions opts;
  opts.n_max = 18;
  opts.workers = 2;
  opts.checkpoint_path = path;
  opts.checkpoint_every = 1;
  opts.stop_after_entries = 5;
  CountResult partial = run_enumeration(opts);
  CHECK_FALSE(partial.complete);

  opts.stop_after_entries = -1;
  opts.workers = 3;
  CountResult resumed = run_enumeration(opts);
  CHECK(resumed.complete);
  for (int n = 1; n <= 18; ++n)
    CHECK(resumed.counts[static_cast<std::size_t>(n - 1)] == serial.walks(n));
  std::remove(path.c_str());
}

TEST_CASE("checkpoint kind and bounds are validated") {
  std::string path = "bad.checkpoint.json";
  CountOptions opts;
  opts.n_max = 16;
  opts.workers = 2;
  opts.checkpoint_path = path;
  opts.stop_after_entries = 2;
  std::remove(path.c_str());
  run_enumeration(opts);

  CountOptions other = opts;
  other.n_max = 17;
  other.stop_after_entries = -1;
  CHECK_THROWS(run_enumeration(other));

  CountOptions bridges = opts;
  bridges.bridges = true;
  CHECK_THROWS(run_enumeration(bridges));
  std::remove(path.c_str());
}

TEST_CASE("bridge counts: base cases and the published tail conditions") {
  WalkTable t = count_walks_and_bridges(16);
  CHECK(t.bridges(1) == 1);
  // Brute-force bridge filter for small n.
  for (int n = 1; n <= 10; ++n) {
    std::uint64_t expect = 0;
    std::uint64_t total = 1ull << (2 * n);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<Dir> s(static_cast<std::size_t>(n));
      std::uint64_t c = code;
      for (int i = 0; i < n; ++i) {
        s[static_cast<std::size_t>(i)] = static_cast<Dir>(c & 3);
        c >>= 2;
      }
      if (!is_taxi_walk(s)) continue;
      if (s[0] != Dir::East) continue;
      LatticePoint p{0, 0};
      int maxx = 0;
      bool off_axis = true;
      for (Dir d : s) {
        p = p.step(d);
        maxx = std::max(maxx, p.x);
        if (p.x < 1) off_axis = false;
      }
      if (off_axis && s.back() == Dir::East && p.x == maxx) ++expect;
    }
    CHECK(t.bridges(n) == expect);
  }
}

TEST_CASE("walk table invariants: bounds and multiplicativity") {
  const int n_max = 24;
  WalkTable t = count_walks_and_bridges(n_max);
  std::vector<std::uint64_t> fib = turn_string_counts(n_max);
  for (int n = 1; n <= n_max; ++n) {
    CHECK(t.walks(n) <= fib[static_cast<std::size_t>(n)]);
    CHECK(t.bridges(n) <= t.walks(n));
    // 2^{n/2} < c_n < 4 * 3^{n-1}
    double lo = std::pow(2.0, n / 2.0);
    double hi = 4.0 * std::pow(3.0, n - 1);
    CHECK(static_cast<double>(t.walks(n)) > lo);
    CHECK(static_cast<double>(t.walks(n)) < hi);
    for (int i = 1; i < n; ++i) {
      CHECK(t.walks(n) <= t.walks(i) * t.walks(n - i));
      CHECK(t.bridges(n) >= t.bridges(i) * t.bridges(n - i));
    }
  }
}

TEST_CASE("visitor enumerates in lexicographic order") {
  std::vector<std::string> seen;
  std::uint64_t count = enumerate_with_visitor(3, [&](const WalkView& w) {
    TaxiWalk walk{std::vector<Dir>(w.steps.begin(), w.steps.end())};
    seen.push_back(walk.to_string());
    CHECK(w.vertices.size() == w.steps.size() + 1);
    CHECK(w.vertices[0] == LatticePoint{0, 0});
  });
  CHECK(count == 6);
  std::vector<std::string> sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  CHECK(seen == sorted);
  CHECK(seen.front() == "EEE");
}

TEST_CASE("single-step visitor order is E then N") {
  std::vector<std::string> seen;
  enumerate_with_visitor(1, [&](const WalkView& w) {
    seen.push_back(std::string(1, dir_char(w.steps[0])));
  });
  CHECK(seen == std::vector<std::string>{"E", "N"});
}

TEST_CASE("split_walk produces taxi walks and inverts exactly") {
  // The parity-reflection transport keeps orientation: the suffix of [E,S]
  // split at 1 must become a legal walk out of the origin.
  TaxiWalk w = TaxiWalk::from_string("ES");
  auto [prefix, suffix] = split_walk(w, 1);
  CHECK(prefix.to_string() == "E");
  CHECK(is_taxi_walk(suffix.steps));
  CHECK(suffix.to_string() == "N");
  CHECK(unsplit_walk(prefix, suffix) == w);

  CHECK_THROWS_AS(split_walk(w, 0), std::out_of_range);
  CHECK_THROWS_AS(split_walk(w, 2), std::out_of_range);
}

TEST_CASE("split_walk is total on all walks up to length 12") {
  for (int n = 2; n <= 12; ++n) {
    enumerate_with_visitor(n, [&](const WalkView& view) {
      TaxiWalk w{std::vector<Dir>(view.steps.begin(), view.steps.end())};
      for (std::size_t i = 1; i < w.length(); ++i) {
        auto [a, b] = split_walk(w, i);
        CHECK(is_taxi_walk(a.steps));
        CHECK(is_taxi_walk(b.steps));
        CHECK(unsplit_walk(a, b) == w);
      }
    });
  }
}

TEST_CASE("counts CSV round-trips") {
  WalkTable t = count_walks_and_bridges(8);
  t.save_csv("counts8.csv");
  WalkTable back = WalkTable::load_csv("counts8.csv");
  REQUIRE(back.max_n() == 8);
  for (int n = 1; n <= 8; ++n) {
    CHECK(back.walks(n) == t.walks(n));
    CHECK(back.bridges(n) == t.bridges(n));
  }
  std::remove("counts8.csv");
}

TEST_CASE("turn-string counts satisfy the two-term recurrence") {
  std::vector<std::uint64_t> t = turn_string_counts(12);
  CHECK(t[1] == 2);
  CHECK(t[2] == 4);
  for (int n = 3; n <= 12; ++n)
    CHECK(t[static_cast<std::size_t>(n)] ==
          t[static_cast<std::size_t>(n - 1)] + t[static_cast<std::size_t>(n - 2)]);
}

TEST_CASE("self-avoidance first binds at length 12") {
  // Below the minimum closed-cycle length the turn-string recurrence counts
  // walks exactly; the first trapped strings appear at n = 12.
  WalkTable t = count_taxi_walks(14);
  std::vector<std::uint64_t> fib = turn_string_counts(14);
  for (int n = 1; n <= 11; ++n)
    CHECK(t.walks(n) == fib[static_cast<std::size_t>(n)]);
  CHECK(t.walks(12) == 460);
  CHECK(fib[12] == 466);
  CHECK(t.walks(13) < fib[13]);
}

TEST_CASE("visitor invocation count at length 20") {
  std::uint64_t calls = 0;
  std::uint64_t total = enumerate_with_visitor(20, [&](const WalkView&) { ++calls; });
  CHECK(total == 20114);
  CHECK(calls == 20114);
}
