// Exact enumeration of taxi walks and bridges: depth-first backtracking over
// a bitboard arena, prefix-partitioned parallelism, and resumable
// checkpoints.  Counts are checked 64-bit and deterministic for any worker
// count.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hc2/walk.hpp"

namespace hc2 {

inline constexpr int kMaxWalkLength = 64;  // validated overflow envelope

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

struct WalkTable {
  struct Row {
    int n = 0;
    std::uint64_t walks = 0;
    std::optional<std::uint64_t> bridges;
  };
  std::vector<Row> rows;  // rows[k] has n == k+1

  static constexpr std::uint64_t kEmptyWalkCount = 1;  // c_0

  std::uint64_t walks(int n) const;
  std::uint64_t bridges(int n) const;
  bool has_bridges(int n) const;
  int max_n() const { return static_cast<int>(rows.size()); }

  // CSV with header `n,c_n,b_n`; empty b_n field when bridges are absent.
  void save_csv(const std::string& path) const;
  static WalkTable load_csv(const std::string& path);
};

// Versioned resume state for a partially completed enumeration.  The
// frontier entries partition the search space below the prefix depth
// exactly once.
struct EnumCheckpoint {
  int version = 1;
  std::string kind;  // "walks" or "bridges"
  int n_max = 0;
  int prefix_depth = 0;
  // Counts for lengths 1..prefix_depth, fully accumulated at creation.
  std::vector<std::uint64_t> base_counts;
  struct Entry {
    std::string prefix;
    bool done = false;
    // Counts for lengths prefix_depth+1..n_max within this subtree.
    std::vector<std::uint64_t> counts;
  };
  std::vector<Entry> entries;

  void save(const std::string& path) const;
  static EnumCheckpoint load(const std::string& path);
};

struct CountOptions {
  int n_max = 0;
  int workers = 1;
  bool bridges = false;
  std::string checkpoint_path;  // persist progress here when non-empty
  int checkpoint_every = 64;    // entries between checkpoint writes
  int prefix_depth = 12;
  // Test hook: stop (checkpointing if enabled) after this many entries.
  long stop_after_entries = -1;
};

struct CountResult {
  std::vector<std::uint64_t> counts;  // counts[k] = count at length k+1
  bool complete = true;
};

CountResult run_enumeration(const CountOptions& opts);

// Exact c_n for 1 <= n <= n_max.
WalkTable count_taxi_walks(int n_max, int workers = 1);

// Adds exact b_n for 1 <= n <= n_max to an existing table.
void count_bridges_into(WalkTable& table, int n_max, int workers = 1);

WalkTable count_walks_and_bridges(int n_max, int workers = 1);

struct WalkView {
  std::span<const Dir> steps;
  std::span<const LatticePoint> vertices;  // steps.size() + 1 entries
};

// Invokes the visitor once per taxi walk of length exactly n, in
// lexicographic step order (E < N < W < S).  Returns the walk count.
// The visitor is always invoked sequentially.
std::uint64_t enumerate_with_visitor(
    int n, const std::function<void(const WalkView&)>& visitor);

// Direction strings legal under orientation and the turn rule only
// (self-avoidance ignored): t_1 = 2, t_2 = 4, t_n = t_{n-1} + t_{n-2}.
std::vector<std::uint64_t> turn_string_counts(int n_max);

// Brute-force oracle: number of all 4^n direction strings accepted by
// is_taxi_walk.  Independent of the optimized enumerator.
std::uint64_t brute_force_walk_count(int n);

}  // namespace hc2
