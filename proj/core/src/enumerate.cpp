#include "hc2/enumerate.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace hc2 {

namespace {

// Outgoing directions by (y parity, x parity), already in E<N<W<S order.
constexpr Dir kOut[2][2][2] = {
    {{Dir::East, Dir::North}, {Dir::East, Dir::South}},
    {{Dir::North, Dir::West}, {Dir::West, Dir::South}}};

struct Arena {
  int radius;
  int stride;
  std::vector<std::uint64_t> bits;

  explicit Arena(int n)
      : radius(n), stride(2 * n + 1),
        bits((static_cast<std::size_t>(stride) * stride + 63) / 64, 0) {}

  int index(int x, int y) const {
    return (y + radius) * stride + (x + radius);
  }
  bool test(int i) const {
    return (bits[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1;
  }
  void set(int i) { bits[static_cast<std::size_t>(i) >> 6] |= 1ull << (i & 63); }
  void clear(int i) {
    bits[static_cast<std::size_t>(i) >> 6] &= ~(1ull << (i & 63));
  }
};

inline void bump(std::uint64_t& c) {
  if (++c == 0) throw std::overflow_error("walk count overflowed 64 bits");
}

// One depth-first enumeration pass.  Counts walks (or bridges) of every
// length in [count_from, n_max] that extend the current stack.
class Dfs {
 public:
  Dfs(int n_max, bool bridges)
      : n_max_(n_max), bridges_(bridges), arena_(n_max) {}

  // counts is 1-indexed by walk length (size n_max + 1).
  void run(const std::vector<Dir>& prefix, int count_from,
           std::vector<std::uint64_t>& counts) {
    counts_ = &counts;
    count_from_ = count_from;
    int x = 0, y = 0, maxx = 0;
    arena_.set(arena_.index(0, 0));
    bool turned = false;
    Dir prev = Dir::East;
    bool have_prev = false;
    for (Dir d : prefix) {
      if (have_prev) turned = ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
      x += dx(d);
      y += dy(d);
      maxx = std::max(maxx, x);
      arena_.set(arena_.index(x, y));
      prev = d;
      have_prev = true;
    }
    int depth = static_cast<int>(prefix.size());
    if (depth == 0) {
      descend(x, y, Dir::East, false, 0, 0, true);
    } else {
      descend(x, y, prev, turned, depth, maxx, false);
    }
    // Reset arena for reuse.
    arena_.clear(arena_.index(0, 0));
    int cx = 0, cy = 0;
    for (Dir d : prefix) {
      cx += dx(d);
      cy += dy(d);
      arena_.clear(arena_.index(cx, cy));
    }
  }

 private:
  void descend(int x, int y, Dir prev, bool turned, int depth, int maxx,
               bool first) {
    const Dir* cand = kOut[y & 1][x & 1];
    for (int k = 0; k < 2; ++k) {
      Dir d = cand[k];
      if (!first) {
        bool t = ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
        if (t && turned) continue;
      }
      int nx = x + dx(d);
      int ny = y + dy(d);
      if (bridges_ && nx < 1) continue;
      int idx = arena_.index(nx, ny);
      if (arena_.test(idx)) continue;
      int nd = depth + 1;
      int nmaxx = maxx > nx ? maxx : nx;
      if (nd >= count_from_) {
        if (!bridges_) {
          bump((*counts_)[static_cast<std::size_t>(nd)]);
        } else if (d == Dir::East && nx == nmaxx) {
          bump((*counts_)[static_cast<std::size_t>(nd)]);
        }
      }
      if (nd < n_max_) {
        bool t = first ? false
                       : ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
        arena_.set(idx);
        descend(nx, ny, d, t, nd, nmaxx, false);
        arena_.clear(idx);
      }
    }
  }

  int n_max_;
  bool bridges_;
  Arena arena_;
  std::vector<std::uint64_t>* counts_ = nullptr;
  int count_from_ = 1;
};

// Enumerates the walks (or bridge prefixes) of length exactly `depth`,
// recording their step strings; shorter completions are counted into
// base_counts along the way.
class PrefixCollector {
 public:
  PrefixCollector(int depth, bool bridges, int n_max)
      : depth_(depth), bridges_(bridges), arena_(n_max),
        base_counts_(static_cast<std::size_t>(depth) + 1, 0) {}

  void collect() {
    arena_.set(arena_.index(0, 0));
    steps_.clear();
    descend(0, 0, Dir::East, false, 0, 0, true);
    arena_.clear(arena_.index(0, 0));
  }

  std::vector<std::string>& prefixes() { return prefixes_; }
  std::vector<std::uint64_t>& base_counts() { return base_counts_; }

 private:
  void descend(int x, int y, Dir prev, bool turned, int depth, int maxx,
               bool first) {
    const Dir* cand = kOut[y & 1][x & 1];
    for (int k = 0; k < 2; ++k) {
      Dir d = cand[k];
      if (!first) {
        bool t = ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
        if (t && turned) continue;
      }
      int nx = x + dx(d);
      int ny = y + dy(d);
      if (bridges_ && nx < 1) continue;
      int idx = arena_.index(nx, ny);
      if (arena_.test(idx)) continue;
      int nd = depth + 1;
      int nmaxx = maxx > nx ? maxx : nx;
      if (!bridges_) {
        bump(base_counts_[static_cast<std::size_t>(nd)]);
      } else if (d == Dir::East && nx == nmaxx) {
        bump(base_counts_[static_cast<std::size_t>(nd)]);
      }
      steps_.push_back(dir_char(d));
      if (nd == depth_) {
        prefixes_.push_back(steps_);
      } else {
        bool t = first ? false
                       : ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
        arena_.set(idx);
        descend(nx, ny, d, t, nd, nmaxx, false);
        arena_.clear(idx);
      }
      steps_.pop_back();
    }
  }

  int depth_;
  bool bridges_;
  Arena arena_;
  std::vector<std::uint64_t> base_counts_;
  std::vector<std::string> prefixes_;
  std::string steps_;
};

std::vector<Dir> parse_steps(const std::string& s) {
  std::vector<Dir> out;
  out.reserve(s.size());
  for (char c : s) out.push_back(dir_from_char(c));
  return out;
}

}  // namespace

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("count addition overflowed 64 bits");
  return r;
}

std::uint64_t WalkTable::walks(int n) const {
  if (n == 0) return kEmptyWalkCount;
  if (n < 1 || n > max_n()) throw std::out_of_range("WalkTable: missing c_n");
  return rows[static_cast<std::size_t>(n - 1)].walks;
}

bool WalkTable::has_bridges(int n) const {
  return n >= 1 && n <= max_n() &&
         rows[static_cast<std::size_t>(n - 1)].bridges.has_value();
}

std::uint64_t WalkTable::bridges(int n) const {
  if (!has_bridges(n)) throw std::out_of_range("WalkTable: missing b_n");
  return *rows[static_cast<std::size_t>(n - 1)].bridges;
}

void WalkTable::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "n,c_n,b_n\n";
  for (const Row& r : rows) {
    out << r.n << ',' << r.walks << ',';
    if (r.bridges) out << *r.bridges;
    out << '\n';
  }
}

WalkTable WalkTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "n,c_n,b_n")
    throw std::runtime_error(path + ": bad counts header");
  WalkTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    Row row;
    if (!std::getline(ss, field, ',')) break;
    row.n = std::stoi(field);
    if (!std::getline(ss, field, ','))
      throw std::runtime_error(path + ": missing c_n");
    row.walks = std::stoull(field);
    if (std::getline(ss, field, ',') && !field.empty())
      row.bridges = std::stoull(field);
    if (row.n != static_cast<int>(t.rows.size()) + 1)
      throw std::runtime_error(path + ": rows must be consecutive from 1");
    t.rows.push_back(row);
  }
  return t;
}

void EnumCheckpoint::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "hc2-checkpoint";
  j["version"] = version;
  j["kind"] = kind;
  j["n_max"] = n_max;
  j["prefix_depth"] = prefix_depth;
  j["base_counts"] = base_counts;
  nlohmann::json arr = nlohmann::json::array();
  for (const Entry& e : entries) {
    arr.push_back({{"prefix", e.prefix}, {"done", e.done}, {"counts", e.counts}});
  }
  j["entries"] = arr;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << j.dump();
  }
  std::rename(tmp.c_str(), path.c_str());
}

EnumCheckpoint EnumCheckpoint::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": not a valid checkpoint: " + e.what());
  }
  if (j.value("format", "") != "hc2-checkpoint" || j.value("version", 0) != 1)
    throw std::runtime_error(path + ": unsupported checkpoint version");
  EnumCheckpoint cp;
  cp.version = j["version"].get<int>();
  cp.kind = j["kind"].get<std::string>();
  cp.n_max = j["n_max"].get<int>();
  cp.prefix_depth = j["prefix_depth"].get<int>();
  cp.base_counts = j["base_counts"].get<std::vector<std::uint64_t>>();
  for (const auto& e : j["entries"]) {
    EnumCheckpoint::Entry entry;
    entry.prefix = e["prefix"].get<std::string>();
    entry.done = e["done"].get<bool>();
    entry.counts = e["counts"].get<std::vector<std::uint64_t>>();
    cp.entries.push_back(std::move(entry));
  }
  return cp;
}

CountResult run_enumeration(const CountOptions& opts) {
  if (opts.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (opts.n_max > kMaxWalkLength)
    throw std::invalid_argument("n_max exceeds the validated 64-step envelope");
  const int n = opts.n_max;
  const std::string kind = opts.bridges ? "bridges" : "walks";

  // Short runs and single-length runs go straight through one DFS.
  int d0 = std::min(opts.prefix_depth, n - 1);
  if (d0 < 1) d0 = 1;
  if (n <= 2 || (opts.workers <= 1 && opts.checkpoint_path.empty() &&
                 opts.stop_after_entries < 0)) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
    Dfs dfs(n, opts.bridges);
    std::vector<Dir> prefix;
    if (opts.bridges) {
      prefix.push_back(Dir::East);
      counts[1] = 1;  // the single-step bridge
    }
    dfs.run(prefix, 1, counts);
    counts.erase(counts.begin());
    return {std::move(counts), true};
  }

  EnumCheckpoint cp;
  bool resumed = false;
  if (!opts.checkpoint_path.empty()) {
    std::ifstream probe(opts.checkpoint_path);
    if (probe.good()) {
      cp = EnumCheckpoint::load(opts.checkpoint_path);
      if (cp.kind != kind)
        throw std::runtime_error("checkpoint kind mismatch: expected " + kind);
      if (cp.n_max != n)
        throw std::runtime_error("checkpoint n_max mismatch");
      resumed = true;
      d0 = cp.prefix_depth;
    }
  }

  if (!resumed) {
    PrefixCollector pc(d0, opts.bridges, n);
    if (opts.bridges) {
      // Bridge walks all start with the forced step East.
      pc.base_counts()[1] = 0;
    }
    pc.collect();
    cp.kind = kind;
    cp.n_max = n;
    cp.prefix_depth = d0;
    cp.base_counts = pc.base_counts();
    for (std::string& p : pc.prefixes())
      cp.entries.push_back({std::move(p), false, {}});
  }

  // Work queue over unfinished entries; results land in per-entry slots so
  // the final reduction is independent of scheduling.
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cp.entries.size(); ++i)
    if (!cp.entries[i].done) todo.push_back(i);
  long limit = opts.stop_after_entries >= 0 ? opts.stop_after_entries
                                            : static_cast<long>(todo.size());

  std::atomic<std::size_t> next{0};
  std::atomic<long> completed{0};
  std::mutex cp_mutex;
  long since_save = 0;

  auto worker_fn = [&]() {
    Dfs dfs(n, opts.bridges);
    for (;;) {
      std::size_t slot = next.fetch_add(1);
      if (slot >= todo.size()) break;
      if (static_cast<long>(slot) >= limit) break;
      EnumCheckpoint::Entry& e = cp.entries[todo[slot]];
      std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
      dfs.run(parse_steps(e.prefix), d0 + 1, counts);
      e.counts.assign(counts.begin() + d0 + 1, counts.end());
      e.done = true;
      completed.fetch_add(1);
      if (!opts.checkpoint_path.empty()) {
        std::lock_guard<std::mutex> lock(cp_mutex);
        if (++since_save >= opts.checkpoint_every) {
          since_save = 0;
          cp.save(opts.checkpoint_path);
        }
      }
    }
  };

  int nworkers = std::max(1, opts.workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nworkers));
  for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker_fn);
  for (auto& t : pool) t.join();

  if (!opts.checkpoint_path.empty()) cp.save(opts.checkpoint_path);

  bool complete = true;
  for (const auto& e : cp.entries)
    if (!e.done) complete = false;

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 1; k <= d0; ++k)
    counts[static_cast<std::size_t>(k)] = cp.base_counts[static_cast<std::size_t>(k)];
  for (const auto& e : cp.entries) {
    if (!e.done) continue;
    for (int k = d0 + 1; k <= n; ++k)
      counts[static_cast<std::size_t>(k)] =
          checked_add(counts[static_cast<std::size_t>(k)],
                      e.counts[static_cast<std::size_t>(k - d0 - 1)]);
  }
  counts.erase(counts.begin());
  return {std::move(counts), complete};
}

WalkTable count_taxi_walks(int n_max, int workers) {
  CountOptions opts;
  opts.n_max = n_max;
  opts.workers = workers;
  CountResult r = run_enumeration(opts);
  WalkTable t;
  for (int k = 1; k <= n_max; ++k)
    t.rows.push_back({k, r.counts[static_cast<std::size_t>(k - 1)], std::nullopt});
  return t;
}

void count_bridges_into(WalkTable& table, int n_max, int workers) {
  if (table.max_n() < n_max)
    throw std::invalid_argument("bridge range exceeds walk table");
  CountOptions opts;
  opts.n_max = n_max;
  opts.workers = workers;
  opts.bridges = true;
  CountResult r = run_enumeration(opts);
  for (int k = 1; k <= n_max; ++k)
    table.rows[static_cast<std::size_t>(k - 1)].bridges =
        r.counts[static_cast<std::size_t>(k - 1)];
}

WalkTable count_walks_and_bridges(int n_max, int workers) {
  WalkTable t = count_taxi_walks(n_max, workers);
  count_bridges_into(t, n_max, workers);
  return t;
}

namespace {

class VisitorDfs {
 public:
  VisitorDfs(int n, const std::function<void(const WalkView&)>& visitor)
      : n_(n), visitor_(visitor), arena_(n) {
    steps_.reserve(static_cast<std::size_t>(n));
    vertices_.reserve(static_cast<std::size_t>(n) + 1);
    vertices_.push_back({0, 0});
  }

  std::uint64_t run() {
    arena_.set(arena_.index(0, 0));
    descend(0, 0, Dir::East, false, 0, true);
    return count_;
  }

 private:
  void descend(int x, int y, Dir prev, bool turned, int depth, bool first) {
    const Dir* cand = kOut[y & 1][x & 1];
    for (int k = 0; k < 2; ++k) {
      Dir d = cand[k];
      bool t = false;
      if (!first) {
        t = ((static_cast<int>(prev) ^ static_cast<int>(d)) & 1) != 0;
        if (t && turned) continue;
      }
      int nx = x + dx(d);
      int ny = y + dy(d);
      int idx = arena_.index(nx, ny);
      if (arena_.test(idx)) continue;
      steps_.push_back(d);
      vertices_.push_back({nx, ny});
      if (depth + 1 == n_) {
        bump(count_);
        visitor_(WalkView{steps_, vertices_});
      } else {
        arena_.set(idx);
        descend(nx, ny, d, t, depth + 1, false);
        arena_.clear(idx);
      }
      steps_.pop_back();
      vertices_.pop_back();
    }
  }

  int n_;
  const std::function<void(const WalkView&)>& visitor_;
  Arena arena_;
  std::vector<Dir> steps_;
  std::vector<LatticePoint> vertices_;
  std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t enumerate_with_visitor(
    int n, const std::function<void(const WalkView&)>& visitor) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > kMaxWalkLength)
    throw std::invalid_argument("n exceeds the validated 64-step envelope");
  VisitorDfs dfs(n, visitor);
  return dfs.run();
}

std::vector<std::uint64_t> turn_string_counts(int n_max) {
  std::vector<std::uint64_t> t(static_cast<std::size_t>(n_max) + 1, 0);
  if (n_max >= 1) t[1] = 2;
  if (n_max >= 2) t[2] = 4;
  for (int k = 3; k <= n_max; ++k)
    t[static_cast<std::size_t>(k)] =
        checked_add(t[static_cast<std::size_t>(k - 1)],
                    t[static_cast<std::size_t>(k - 2)]);
  return t;
}

std::uint64_t brute_force_walk_count(int n) {
  if (n < 1 || n > 16)
    throw std::invalid_argument("brute force oracle supports 1 <= n <= 16");
  std::uint64_t total = 1ull << (2 * n);
  std::uint64_t accepted = 0;
  std::vector<Dir> steps(static_cast<std::size_t>(n));
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      steps[static_cast<std::size_t>(i)] = static_cast<Dir>(c & 3);
      c >>= 2;
    }
    if (is_taxi_walk(steps)) ++accepted;
  }
  return accepted;
}

}  // namespace hc2
