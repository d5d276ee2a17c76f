#include "hc2/topology.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hc2/walk.hpp"

namespace hc2 {

namespace {

std::vector<char> free_mask(const DiamondGraph& dg, const Configuration& c) {
  std::vector<char> free(static_cast<std::size_t>(dg.id_bound()), 0);
  for (int X = 0; X < dg.span_x(); ++X)
    for (int Y = 0; Y < dg.span_y(); ++Y)
      if (dg.valid(X, Y)) {
        int id = dg.id(X, Y);
        free[static_cast<std::size_t>(id)] = dg.free_in(id, c) ? 1 : 0;
      }
  return free;
}

struct Bfs {
  std::vector<int> dist;
  std::vector<int> parent;
};

// Multi-source BFS over free midpoints following the orientation (along) or
// its reverse.  Deterministic: sources and neighbors expand in id order.
Bfs directed_bfs(const DiamondGraph& dg, const std::vector<char>& free,
                 const std::vector<int>& sources, bool along) {
  Bfs b;
  b.dist.assign(static_cast<std::size_t>(dg.id_bound()), -1);
  b.parent.assign(static_cast<std::size_t>(dg.id_bound()), -1);
  std::deque<int> q;
  for (int s : sources) {
    if (!free[static_cast<std::size_t>(s)]) continue;
    if (b.dist[static_cast<std::size_t>(s)] >= 0) continue;
    b.dist[static_cast<std::size_t>(s)] = 0;
    q.push_back(s);
  }
  int nb[4];
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    int n = dg.neighbors(v, nb);
    for (int i = 0; i < n; ++i) {
      int u = nb[i];
      if (!free[static_cast<std::size_t>(u)]) continue;
      if (b.dist[static_cast<std::size_t>(u)] >= 0) continue;
      if (dg.arrow(v, u) != along) continue;
      b.dist[static_cast<std::size_t>(u)] = b.dist[static_cast<std::size_t>(v)] + 1;
      b.parent[static_cast<std::size_t>(u)] = v;
      q.push_back(u);
    }
  }
  return b;
}

std::vector<int> tree_path_to_root(const Bfs& b, int from) {
  std::vector<int> out;
  for (int v = from; v >= 0; v = b.parent[static_cast<std::size_t>(v)])
    out.push_back(v);
  return out;
}

// Transversal row crossings of a vertical spanning path: horizontal-edge
// midpoints where the path passes from one side of the row to the other
// (touch points at an alternation are not crossings).  This is the fault
// length in the n + 2l bookkeeping.
int count_perpendicular(const DiamondGraph& dg,
                        const std::vector<DiamondVertex>& path,
                        bool vertical) {
  int n = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const DiamondVertex& v = path[i];
    bool h_mid = (v.X & 1) != 0;
    if (h_mid != vertical) continue;
    if (i == 0 || i + 1 == path.size()) {
      ++n;  // spanning endpoints continue past the boundary
      continue;
    }
    int before = vertical ? path[i - 1].Y : path[i - 1].X;
    int after = vertical ? path[i + 1].Y : path[i + 1].X;
    if (before != after) ++n;
  }
  (void)dg;
  return n;
}

// Shortest vertical spanning witness on the free diamond graph, over the
// orientation cases enabled in case_mask: bit 0 = directed top->bottom,
// bit 1 = directed bottom->top, bits 2/3 = the single-alternation
// concatenations (head-to-head, tail-to-tail).
std::optional<FaultWitness> vertical_fault_bfs(const DiamondGraph& dg,
                                               const std::vector<char>& free,
                                               unsigned case_mask = 0xF) {
  std::vector<int> S, T;
  for (int s : dg.top_mids())
    if (free[static_cast<std::size_t>(s)]) S.push_back(s);
  for (int t : dg.bottom_mids())
    if (free[static_cast<std::size_t>(t)]) T.push_back(t);
  if (S.empty() || T.empty()) return std::nullopt;

  Bfs fS = directed_bfs(dg, free, S, true);
  Bfs fT = directed_bfs(dg, free, T, true);
  Bfs bS = directed_bfs(dg, free, S, false);
  Bfs bT = directed_bfs(dg, free, T, false);

  constexpr int kInf = 1 << 29;
  int best_len = kInf;
  int best_case = -1;
  int best_at = -1;

  auto consider = [&](int len, int c, int at) {
    if (len < best_len) {
      best_len = len;
      best_case = c;
      best_at = at;
    }
  };
  if (case_mask & 1u)
    for (int t : T)
      if (fS.dist[static_cast<std::size_t>(t)] >= 0)
        consider(fS.dist[static_cast<std::size_t>(t)], 0, t);
  if (case_mask & 2u)
    for (int s : S)
      if (fT.dist[static_cast<std::size_t>(s)] >= 0)
        consider(fT.dist[static_cast<std::size_t>(s)], 1, s);
  for (int x = 0; x < dg.id_bound(); ++x) {
    if (!free[static_cast<std::size_t>(x)]) continue;
    if ((case_mask & 4u) && fS.dist[static_cast<std::size_t>(x)] >= 0 &&
        fT.dist[static_cast<std::size_t>(x)] >= 0)
      consider(fS.dist[static_cast<std::size_t>(x)] +
                   fT.dist[static_cast<std::size_t>(x)],
               2, x);
    if ((case_mask & 8u) && bS.dist[static_cast<std::size_t>(x)] >= 0 &&
        bT.dist[static_cast<std::size_t>(x)] >= 0)
      consider(bS.dist[static_cast<std::size_t>(x)] +
                   bT.dist[static_cast<std::size_t>(x)],
               3, x);
  }
  if (best_case < 0) return std::nullopt;

  FaultWitness w;
  w.vertical = true;
  std::vector<int> ids;
  if (best_case == 0) {
    ids = tree_path_to_root(fS, best_at);  // bottom..top
    std::reverse(ids.begin(), ids.end());  // top..bottom
    w.alternations = 0;
  } else if (best_case == 1) {
    ids = tree_path_to_root(fT, best_at);  // top..bottom
    w.alternations = 0;
  } else if (best_case == 2) {
    std::vector<int> p1 = tree_path_to_root(fS, best_at);  // x..topsource
    std::reverse(p1.begin(), p1.end());                    // top..x
    std::vector<int> p2 = tree_path_to_root(fT, best_at);  // x..bottomsource
    ids = p1;
    ids.insert(ids.end(), p2.begin() + 1, p2.end());
    w.alternations = 1;
    w.alternation_index = static_cast<int>(p1.size()) - 1;
  } else {
    std::vector<int> p1 = tree_path_to_root(bS, best_at);  // x..topsource
    std::reverse(p1.begin(), p1.end());
    std::vector<int> p2 = tree_path_to_root(bT, best_at);
    ids = p1;
    ids.insert(ids.end(), p2.begin() + 1, p2.end());
    w.alternations = 1;
    w.alternation_index = static_cast<int>(p1.size()) - 1;
  }
  for (int id : ids) w.path.push_back(dg.vertex(id));
  w.length = count_perpendicular(dg, w.path, true);
  w.orientation_consistent = true;
  return w;
}

// --- rotation by 90 degrees -------------------------------------------------

Configuration rotate_config(const Configuration& c) {
  const Region& r = c.region;
  Configuration out(Region(r.height, r.width, r.boundary));
  for (int x = 0; x < r.height; ++x)
    for (int y = 0; y < r.width; ++y)
      if (c.occupied(y, r.height - 1 - x)) out.set(x, y);
  return out;
}

// Inverse of the rotation on doubled (diamond) coordinates.
DiamondVertex unrotate_diamond(DiamondVertex v, const Region& original) {
  return {v.Y, 2 * (original.height - 1) - v.X};
}

FaultWitness unrotate_witness(const FaultWitness& rw, const Region& original) {
  FaultWitness w = rw;
  w.vertical = false;
  for (std::size_t i = 0; i < rw.path.size(); ++i)
    w.path[i] = unrotate_diamond(rw.path[i], original);
  // List horizontal faults from the left end.
  if (!w.path.empty() && w.path.front().X > w.path.back().X) {
    std::reverse(w.path.begin(), w.path.end());
    if (w.alternations == 1)
      w.alternation_index =
          static_cast<int>(w.path.size()) - 1 - w.alternation_index;
  }
  return w;
}

// --- torus fault pairs ------------------------------------------------------

struct TorusCycle {
  std::vector<int> ids;
  long wind_x = 0;
  long wind_y = 0;
};

// Diagonal displacement of the step a -> b, wrap-normalized to {-1, +1}.
std::pair<int, int> diamond_step(const DiamondGraph& dg, int a, int b) {
  DiamondVertex va = dg.vertex(a);
  DiamondVertex vb = dg.vertex(b);
  int dx = vb.X - va.X;
  int dy = vb.Y - va.Y;
  if (dg.region().toroidal()) {
    dx = ((dx % dg.span_x()) + dg.span_x()) % dg.span_x();
    if (dx == dg.span_x() - 1) dx = -1;
    dy = ((dy % dg.span_y()) + dg.span_y()) % dg.span_y();
    if (dy == dg.span_y() - 1) dy = -1;
  }
  return {dx, dy};
}

class TorusCycleSearch {
 public:
  TorusCycleSearch(const DiamondGraph& dg, const std::vector<char>& free,
                   const std::vector<char>& banned)
      : dg_(dg), free_(free), banned_(banned),
        visited_(static_cast<std::size_t>(dg.id_bound()), 0) {}

  // Enumerates directed non-contractible free cycles of taxi shape (no two
  // consecutive turns, cyclically) whose least vertex is `start`, in
  // lexicographic sequence order.  The callback returns true to stop.
  bool enumerate(int start, const std::function<bool(const TorusCycle&)>& cb) {
    start_ = start;
    cb_ = &cb;
    stopped_ = false;
    path_.clear();
    path_.push_back(start);
    visited_[static_cast<std::size_t>(start)] = 1;
    dfs(start, 0, 0);
    visited_[static_cast<std::size_t>(start)] = 0;
    return stopped_;
  }

  // Cyclic taxi-shape check: no two consecutive perpendicular steps.
  bool cycle_is_taxi(const std::vector<int>& ids) const {
    std::size_t n = ids.size();
    if (n < 3) return false;
    std::vector<std::pair<int, int>> steps(n);
    for (std::size_t i = 0; i < n; ++i)
      steps[i] = diamond_step(dg_, ids[i], ids[(i + 1) % n]);
    for (std::size_t i = 0; i < n; ++i) {
      auto [ax, ay] = steps[i];
      auto [bx, by] = steps[(i + 1) % n];
      auto [cx, cy] = steps[(i + 2) % n];
      if (ax * bx + ay * by == 0 && bx * cx + by * cy == 0) return false;
    }
    return true;
  }

 private:
  bool usable(int u) const {
    return u > start_ && free_[static_cast<std::size_t>(u)] &&
           !banned_[static_cast<std::size_t>(u)] &&
           !visited_[static_cast<std::size_t>(u)];
  }

  // Connectivity prune: some continuation must be able to close the cycle.
  bool can_reach_start(int from) {
    std::vector<char> seen(static_cast<std::size_t>(dg_.id_bound()), 0);
    std::deque<int> q{from};
    seen[static_cast<std::size_t>(from)] = 1;
    int nb[4];
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      int n = dg_.neighbors(v, nb);
      for (int i = 0; i < n; ++i) {
        int u = nb[i];
        if (u == start_) return true;
        if (!usable(u) || seen[static_cast<std::size_t>(u)]) continue;
        seen[static_cast<std::size_t>(u)] = 1;
        q.push_back(u);
      }
    }
    return false;
  }

  void dfs(int v, long dX, long dY) {
    if (stopped_) return;
    int nb[4];
    int n = dg_.neighbors(v, nb);
    for (int i = 0; i < n && !stopped_; ++i) {
      int u = nb[i];
      if (!dg_.arrow(v, u)) continue;
      auto [sx, sy] = diamond_step(dg_, v, u);
      if (u == start_) {
        long tX = dX + sx;
        long tY = dY + sy;
        if ((tX != 0 || tY != 0) && cycle_is_taxi(path_)) {
          TorusCycle cyc;
          cyc.ids = path_;
          assert(tX % dg_.span_x() == 0 && tY % dg_.span_y() == 0);
          cyc.wind_x = tX / dg_.span_x();
          cyc.wind_y = tY / dg_.span_y();
          if ((*cb_)(cyc)) stopped_ = true;
        }
        continue;
      }
      if (!usable(u)) continue;
      // Linear taxi-shape prune; the cyclic wrap is checked at closure.
      if (path_.size() >= 2) {
        auto [px, py] = diamond_step(dg_, path_[path_.size() - 2],
                                     path_[path_.size() - 1]);
        if (px * sx + py * sy == 0 && path_.size() >= 3) {
          auto [qx, qy] = diamond_step(dg_, path_[path_.size() - 3],
                                       path_[path_.size() - 2]);
          if (qx * px + qy * py == 0) continue;  // double turn
        }
      }
      visited_[static_cast<std::size_t>(u)] = 1;
      path_.push_back(u);
      if (can_reach_start(u)) dfs(u, dX + sx, dY + sy);
      path_.pop_back();
      visited_[static_cast<std::size_t>(u)] = 0;
    }
  }

  const DiamondGraph& dg_;
  const std::vector<char>& free_;
  const std::vector<char>& banned_;
  std::vector<char> visited_;
  std::vector<int> path_;
  int start_ = 0;
  const std::function<bool(const TorusCycle&)>* cb_ = nullptr;
  bool stopped_ = false;
};

// Enumerates disjoint-from-`banned` cycles in lexicographic order until the
// callback accepts one.
bool enumerate_cycles(const DiamondGraph& dg, const std::vector<char>& free,
                      const std::vector<char>& banned,
                      const std::function<bool(const TorusCycle&)>& cb) {
  for (int v = 0; v < dg.id_bound(); ++v) {
    if (!free[static_cast<std::size_t>(v)] ||
        banned[static_cast<std::size_t>(v)])
      continue;
    if (!dg.valid(dg.vertex(v).X, dg.vertex(v).Y)) continue;
    TorusCycleSearch search(dg, free, banned);
    if (search.enumerate(v, cb)) return true;
  }
  return false;
}

// First fault pair in lexicographic order, optionally restricted by an
// acceptance predicate on the candidate pair (the shift machinery needs
// non-interleaved pairs).
std::optional<std::pair<TorusCycle, TorusCycle>> find_torus_fault_pair(
    const DiamondGraph& dg, const std::vector<char>& free,
    const std::function<bool(const TorusCycle&, const TorusCycle&)>* accept =
        nullptr) {
  std::vector<char> no_ban(static_cast<std::size_t>(dg.id_bound()), 0);
  std::optional<std::pair<TorusCycle, TorusCycle>> result;
  enumerate_cycles(dg, free, no_ban, [&](const TorusCycle& c1) {
    std::vector<char> banned(static_cast<std::size_t>(dg.id_bound()), 0);
    for (int id : c1.ids) banned[static_cast<std::size_t>(id)] = 1;
    enumerate_cycles(dg, free, banned, [&](const TorusCycle& c2) {
      // Disjoint non-contractible cycles on a torus wind in parallel.
      assert(c1.wind_x * c2.wind_y - c1.wind_y * c2.wind_x == 0);
      if (accept && !(*accept)(c1, c2)) return false;
      result = std::make_pair(c1, c2);
      return true;
    });
    return result.has_value();
  });
  return result;
}

// --- crosses ----------------------------------------------------------------

constexpr int kParityStepCount = 8;
constexpr int kParityDX[kParityStepCount] = {1, 1, -1, -1, 2, -2, 0, 0};
constexpr int kParityDY[kParityStepCount] = {1, -1, 1, -1, 0, 0, 2, -2};

// Grid: BFS over occupied same-parity vertices.  A bridge reaches within
// one unit of each side: that is exactly what blocks a width-two free
// corridor along the wall.
std::optional<std::vector<int>> grid_bridge(const Configuration& c, int parity,
                                            bool left_right) {
  const Region& r = c.region;
  std::vector<int> parent(static_cast<std::size_t>(r.cells()), -2);
  std::deque<int> q;
  for (int v = 0; v < r.cells(); ++v) {
    bool on_start = left_right ? (r.x_of(v) <= 1) : (r.y_of(v) <= 1);
    if (on_start && c.occupied(v) && r.parity(v) == parity) {
      parent[static_cast<std::size_t>(v)] = -1;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    bool at_end = left_right ? (r.x_of(v) >= r.width - 2)
                             : (r.y_of(v) >= r.height - 2);
    if (at_end) {
      std::vector<int> path;
      for (int u = v; u >= 0; u = parent[static_cast<std::size_t>(u)])
        path.push_back(u);
      std::reverse(path.begin(), path.end());
      return path;
    }
    int x = r.x_of(v), y = r.y_of(v);
    for (int k = 0; k < kParityStepCount; ++k) {
      int nx = x + kParityDX[k];
      int ny = y + kParityDY[k];
      if (!r.contains(nx, ny)) continue;
      int u = r.index(nx, ny);
      if (!c.occupied(u) || parent[static_cast<std::size_t>(u)] != -2) continue;
      parent[static_cast<std::size_t>(u)] = v;
      q.push_back(u);
    }
  }
  return std::nullopt;
}

std::optional<CrossWitness> grid_cross(const Configuration& c, int parity) {
  auto lr = grid_bridge(c, parity, true);
  if (!lr) return std::nullopt;
  auto tb = grid_bridge(c, parity, false);
  if (!tb) return std::nullopt;
  CrossWitness w;
  w.parity = parity;
  w.bridge_lr = *lr;
  w.bridge_tb = *tb;
  return w;
}

struct TorusLift {
  std::vector<int> parent;       // -2 unvisited, -1 root
  std::vector<long> lx, ly;      // universal-cover coordinates
};

// Winding generators of the occupied parity subgraph: lifted BFS; every
// non-tree edge whose lift mismatch is nonzero yields a winding vector.
struct WindingGen {
  long wx = 0, wy = 0;
  int u = -1, v = -1;  // the non-tree edge (v -> u)
  int step = -1;
};

void torus_lift_bfs(const Configuration& c, int parity, TorusLift& lift,
                    std::vector<WindingGen>* gens) {
  const Region& r = c.region;
  lift.parent.assign(static_cast<std::size_t>(r.cells()), -2);
  lift.lx.assign(static_cast<std::size_t>(r.cells()), 0);
  lift.ly.assign(static_cast<std::size_t>(r.cells()), 0);
  for (int root = 0; root < r.cells(); ++root) {
    if (!c.occupied(root) || r.parity(root) != parity) continue;
    if (lift.parent[static_cast<std::size_t>(root)] != -2) continue;
    lift.parent[static_cast<std::size_t>(root)] = -1;
    std::deque<int> q{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      int x = r.x_of(v), y = r.y_of(v);
      for (int k = 0; k < kParityStepCount; ++k) {
        int nx = (x + kParityDX[k] + 2 * r.width) % r.width;
        int ny = (y + kParityDY[k] + 2 * r.height) % r.height;
        int u = r.index(nx, ny);
        if (!c.occupied(u) || r.parity(u) != parity) continue;
        long ulx = lift.lx[static_cast<std::size_t>(v)] + kParityDX[k];
        long uly = lift.ly[static_cast<std::size_t>(v)] + kParityDY[k];
        if (lift.parent[static_cast<std::size_t>(u)] == -2) {
          lift.parent[static_cast<std::size_t>(u)] = v;
          lift.lx[static_cast<std::size_t>(u)] = ulx;
          lift.ly[static_cast<std::size_t>(u)] = uly;
          q.push_back(u);
        } else if (gens) {
          long dx = ulx - lift.lx[static_cast<std::size_t>(u)];
          long dy = uly - lift.ly[static_cast<std::size_t>(u)];
          if (dx != 0 || dy != 0) {
            assert(dx % r.width == 0 && dy % r.height == 0);
            gens->push_back({dx / r.width, dy / r.height, u, v, k});
          }
        }
      }
    }
  }
}

std::vector<int> tree_cycle(const TorusLift& lift, int v, int u) {
  // Simple cycle: tree path u .. v, closed by the edge (v, u).
  std::vector<int> au, av;
  for (int w = u; w >= 0; w = lift.parent[static_cast<std::size_t>(w)])
    au.push_back(w);
  for (int w = v; w >= 0; w = lift.parent[static_cast<std::size_t>(w)])
    av.push_back(w);
  // Trim the common tail above the meeting point.
  while (au.size() >= 2 && av.size() >= 2 &&
         au[au.size() - 1] == av[av.size() - 1] &&
         au[au.size() - 2] == av[av.size() - 2]) {
    au.pop_back();
    av.pop_back();
  }
  std::vector<int> cycle = au;  // u .. lca
  for (std::size_t i = av.size() - 1; i-- > 0;) cycle.push_back(av[i]);
  return cycle;  // u .. lca .. v
}

bool torus_cross_rank2(const Configuration& c, int parity) {
  TorusLift lift;
  std::vector<WindingGen> gens;
  torus_lift_bfs(c, parity, lift, &gens);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (gens[i].wx * gens[j].wy - gens[i].wy * gens[j].wx != 0) return true;
  return false;
}

std::optional<CrossWitness> torus_cross(const Configuration& c, int parity) {
  TorusLift lift;
  std::vector<WindingGen> gens;
  torus_lift_bfs(c, parity, lift, &gens);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (gens[i].wx * gens[j].wy - gens[i].wy * gens[j].wx == 0) continue;
      CrossWitness w;
      w.parity = parity;
      w.cycle_a = tree_cycle(lift, gens[i].v, gens[i].u);
      w.cycle_b = tree_cycle(lift, gens[j].v, gens[j].u);
      w.wind_a[0] = gens[i].wx;
      w.wind_a[1] = gens[i].wy;
      w.wind_b[0] = gens[j].wx;
      w.wind_b[1] = gens[j].wy;
      return w;
    }
  return std::nullopt;
}

// --- lexicographic first fault (grid) ----------------------------------------

class LexFaultSearch {
 public:
  LexFaultSearch(const DiamondGraph& dg, const std::vector<char>& free)
      : dg_(dg), free_(free),
        visited_(static_cast<std::size_t>(dg.id_bound()), 0),
        in_target_(static_cast<std::size_t>(dg.id_bound()), 0) {}

  std::optional<FaultWitness> run() {
    std::vector<int> starts;
    for (int s : dg_.bottom_mids())
      if (free_[static_cast<std::size_t>(s)]) starts.push_back(s);
    for (int s : dg_.top_mids())
      if (free_[static_cast<std::size_t>(s)]) starts.push_back(s);
    std::sort(starts.begin(), starts.end());
    for (int s : starts) {
      std::fill(in_target_.begin(), in_target_.end(), 0);
      bool s_on_top = false;
      for (int t : dg_.top_mids())
        if (t == s) s_on_top = true;
      const std::vector<int>& target = s_on_top ? dg_.bottom_mids() : dg_.top_mids();
      for (int t : target)
        if (free_[static_cast<std::size_t>(t)])
          in_target_[static_cast<std::size_t>(t)] = 1;
      start_ = s;
      path_.clear();
      path_.push_back(s);
      visited_[static_cast<std::size_t>(s)] = 1;
      alt_index_ = -1;
      found_ = false;
      dfs(s, 0, 0, 0, false);
      visited_[static_cast<std::size_t>(s)] = 0;
      if (found_) {
        FaultWitness w;
        w.vertical = true;
        for (int id : path_) w.path.push_back(dg_.vertex(id));
        w.alternations = alt_index_ >= 0 ? 1 : 0;
        w.alternation_index = alt_index_;
        w.length = count_perpendicular(dg_, w.path, true);
        w.orientation_consistent = true;
        return w;
      }
    }
    return std::nullopt;
  }

 private:
  // phase: 0 none, 1 along, 2 against, 3 along->against, 4 against->along.
  // The witness family is restricted to per-segment taxi shape: no two
  // consecutive turns within an alternation-free segment (the shift
  // machinery depends on the diagonal strip this guarantees).
  void dfs(int v, int phase, int last_dx, int last_dy, bool turned) {
    if (found_) return;
    int nb[4];
    int n = dg_.neighbors(v, nb);
    for (int i = 0; i < n && !found_; ++i) {
      int u = nb[i];
      if (!free_[static_cast<std::size_t>(u)] ||
          visited_[static_cast<std::size_t>(u)])
        continue;
      bool along = dg_.arrow(v, u);
      int next_phase;
      int new_alt = -1;
      if (phase == 0) {
        next_phase = along ? 1 : 2;
      } else if (phase == 1) {
        next_phase = along ? 1 : 3;
        if (!along) new_alt = static_cast<int>(path_.size()) - 1;
      } else if (phase == 2) {
        next_phase = along ? 4 : 2;
        if (along) new_alt = static_cast<int>(path_.size()) - 1;
      } else if (phase == 3) {
        if (along) continue;
        next_phase = 3;
      } else {
        if (!along) continue;
        next_phase = 4;
      }
      DiamondVertex vv = dg_.vertex(v);
      DiamondVertex vu = dg_.vertex(u);
      int dx = vu.X - vv.X;
      int dy = vu.Y - vv.Y;
      bool turn = false;
      bool next_turned;
      if (new_alt >= 0 || phase == 0) {
        next_turned = false;  // a new segment starts; no previous step
      } else {
        turn = (last_dx * dx + last_dy * dy) == 0;
        if (turn && turned) continue;  // double turn
        next_turned = turn;
      }
      if (in_target_[static_cast<std::size_t>(u)] && u > start_) {
        path_.push_back(u);
        if (new_alt >= 0) alt_index_ = new_alt;
        found_ = true;
        return;
      }
      if (!reaches_target(u)) continue;
      visited_[static_cast<std::size_t>(u)] = 1;
      path_.push_back(u);
      int saved_alt = alt_index_;
      if (new_alt >= 0) alt_index_ = new_alt;
      dfs(u, next_phase, dx, dy, next_turned);
      if (!found_) {
        alt_index_ = saved_alt;
        path_.pop_back();
        visited_[static_cast<std::size_t>(u)] = 0;
      }
    }
  }

  // Sound overapproximation: undirected reachability to an acceptable
  // endpoint through unvisited free midpoints.
  bool reaches_target(int from) {
    if (in_target_[static_cast<std::size_t>(from)] && from > start_)
      return true;
    std::vector<char> seen(static_cast<std::size_t>(dg_.id_bound()), 0);
    std::deque<int> q{from};
    seen[static_cast<std::size_t>(from)] = 1;
    int nb[4];
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      int n = dg_.neighbors(v, nb);
      for (int i = 0; i < n; ++i) {
        int u = nb[i];
        if (!free_[static_cast<std::size_t>(u)] ||
            visited_[static_cast<std::size_t>(u)] ||
            seen[static_cast<std::size_t>(u)])
          continue;
        if (in_target_[static_cast<std::size_t>(u)] && u > start_) return true;
        seen[static_cast<std::size_t>(u)] = 1;
        q.push_back(u);
      }
    }
    return false;
  }

  const DiamondGraph& dg_;
  const std::vector<char>& free_;
  std::vector<char> visited_;
  std::vector<char> in_target_;
  std::vector<int> path_;
  int start_ = -1;
  int alt_index_ = -1;
  bool found_ = false;
};

FaultWitness torus_pair_witness(const DiamondGraph& dg,
                                const std::pair<TorusCycle, TorusCycle>& pair) {
  FaultWitness w;
  w.torus_pair = true;
  for (int id : pair.first.ids) w.path.push_back(dg.vertex(id));
  for (int id : pair.second.ids) w.second.push_back(dg.vertex(id));
  w.alternations = 0;
  w.length = static_cast<int>(pair.first.ids.size() + pair.second.ids.size());
  w.orientation_consistent = true;
  return w;
}

}  // namespace

const char* to_string(TopoClass c) {
  switch (c) {
    case TopoClass::FaultLine: return "fault_line";
    case TopoClass::EvenCross: return "even_cross";
    case TopoClass::OddCross: return "odd_cross";
  }
  return "?";
}

std::optional<int> cross_parity_of(const Configuration& c) {
  if (c.region.toroidal()) {
    if (torus_cross_rank2(c, 0)) return 0;
    if (torus_cross_rank2(c, 1)) return 1;
    return std::nullopt;
  }
  for (int parity = 0; parity < 2; ++parity) {
    if (grid_bridge(c, parity, true) && grid_bridge(c, parity, false))
      return parity;
  }
  return std::nullopt;
}

std::optional<FaultWitness> find_fault(const Configuration& c,
                                       const DiamondGraph& dg) {
  std::vector<char> free = free_mask(dg, c);
  if (c.region.toroidal()) {
    auto pair = find_torus_fault_pair(dg, free);
    if (!pair) return std::nullopt;
    return torus_pair_witness(dg, *pair);
  }
  auto w = vertical_fault_bfs(dg, free);
  if (w) return w;
  Configuration rc = rotate_config(c);
  DiamondGraph rdg(rc.region);
  std::vector<char> rfree = free_mask(rdg, rc);
  auto rw = vertical_fault_bfs(rdg, rfree);
  if (!rw) return std::nullopt;
  return unrotate_witness(*rw, c.region);
}

TopologyClass classify(const Configuration& c, const DiamondGraph& dg) {
  if (!is_independent(c))
    throw std::invalid_argument("classify: configuration is not independent");
  TopologyClass out;
  if (c.region.toroidal()) {
    for (int parity = 0; parity < 2; ++parity) {
      auto w = torus_cross(c, parity);
      if (w) {
        out.cls = parity == 0 ? TopoClass::EvenCross : TopoClass::OddCross;
        out.cross = std::move(w);
        return out;
      }
    }
  } else {
    for (int parity = 0; parity < 2; ++parity) {
      auto w = grid_cross(c, parity);
      if (w) {
        out.cls = parity == 0 ? TopoClass::EvenCross : TopoClass::OddCross;
        out.cross = std::move(w);
        return out;
      }
    }
  }
  auto fw = find_fault(c, dg);
  if (!fw)
    throw std::logic_error(
        "classify: configuration has neither a cross nor a fault");
  out.cls = TopoClass::FaultLine;
  out.fault = std::move(fw);
  return out;
}

TopologyClass classify(const Configuration& c) {
  DiamondGraph dg(c.region);
  return classify(c, dg);
}

FaultWitness find_first_fault(const Configuration& c, const DiamondGraph& dg) {
  std::vector<char> free = free_mask(dg, c);
  if (c.region.toroidal()) {
    auto pair = find_torus_fault_pair(dg, free);
    if (!pair) throw std::invalid_argument("configuration has no fault");
    return torus_pair_witness(dg, *pair);
  }
  LexFaultSearch vertical(dg, free);
  auto w = vertical.run();
  if (w) return *w;
  Configuration rc = rotate_config(c);
  DiamondGraph rdg(rc.region);
  std::vector<char> rfree = free_mask(rdg, rc);
  LexFaultSearch horizontal(rdg, rfree);
  auto rw = horizontal.run();
  if (!rw) throw std::invalid_argument("configuration has no fault");
  return unrotate_witness(*rw, c.region);
}

FaultWitness find_first_fault(const Configuration& c) {
  DiamondGraph dg(c.region);
  return find_first_fault(c, dg);
}

std::vector<std::vector<DiamondVertex>> fault_segments(const FaultWitness& w) {
  std::vector<std::vector<DiamondVertex>> segs;
  if (w.torus_pair) {
    segs.push_back(w.path);
    segs.push_back(w.second);
    return segs;
  }
  if (w.alternations == 0 || w.alternation_index < 0) {
    segs.push_back(w.path);
    return segs;
  }
  std::size_t ai = static_cast<std::size_t>(w.alternation_index);
  segs.emplace_back(w.path.begin(), w.path.begin() + static_cast<long>(ai) + 1);
  segs.emplace_back(w.path.begin() + static_cast<long>(ai), w.path.end());
  return segs;
}

std::vector<Dir> fault_segment_taxi_steps(const DiamondGraph& dg,
                                          std::span<const DiamondVertex> seg) {
  std::vector<DiamondVertex> vs(seg.begin(), seg.end());
  if (vs.size() >= 2) {
    // Orient the segment along the arrows so the transported string is an
    // oriented walk.
    if (!dg.arrow(dg.id(vs[0]), dg.id(vs[1])))
      std::reverse(vs.begin(), vs.end());
  }
  std::vector<LatticePoint> pts = dg.to_taxi_coords(vs);
  return taxi_steps_of(pts);
}

bool validate_fault(const Configuration& c, const FaultWitness& w) {
  DiamondGraph dg(c.region);
  auto valid_path = [&](const std::vector<DiamondVertex>& p, bool cycle,
                        int* alternations) -> bool {
    if (p.empty()) return false;
    std::vector<char> seen(static_cast<std::size_t>(dg.id_bound()), 0);
    for (const DiamondVertex& v : p) {
      if (!dg.valid(v.X, v.Y)) return false;
      int id = dg.id(v);
      if (!dg.free_in(id, c)) return false;
      if (seen[static_cast<std::size_t>(id)]) return false;
      seen[static_cast<std::size_t>(id)] = 1;
    }
    int switches = 0;
    int prev_dir = -1;  // 1 along, 0 against
    std::size_t count = cycle ? p.size() : p.size() - 1;
    for (std::size_t i = 0; i < count; ++i) {
      int a = dg.id(p[i]);
      int b = dg.id(p[(i + 1) % p.size()]);
      int nb[4];
      int n = dg.neighbors(a, nb);
      bool adjacent = false;
      for (int k = 0; k < n; ++k) adjacent |= (nb[k] == b);
      if (!adjacent) return false;
      int along = dg.arrow(a, b) ? 1 : 0;
      if (prev_dir >= 0 && along != prev_dir) ++switches;
      prev_dir = along;
    }
    if (alternations) *alternations = switches;
    return true;
  };

  if (w.torus_pair) {
    if (!c.region.toroidal()) return false;
    int alt1 = 0, alt2 = 0;
    if (!valid_path(w.path, true, &alt1)) return false;
    if (!valid_path(w.second, true, &alt2)) return false;
    if (alt1 != 0 || alt2 != 0) return false;  // uniformly oriented cycles
    // Vertex-disjoint.
    std::vector<char> seen(static_cast<std::size_t>(dg.id_bound()), 0);
    for (const DiamondVertex& v : w.path) seen[static_cast<std::size_t>(dg.id(v))] = 1;
    for (const DiamondVertex& v : w.second)
      if (seen[static_cast<std::size_t>(dg.id(v))]) return false;
    // Non-contractible windings.
    for (const auto* cyc : {&w.path, &w.second}) {
      long dX = 0, dY = 0;
      for (std::size_t i = 0; i < cyc->size(); ++i) {
        int a = dg.id((*cyc)[i]);
        int b = dg.id((*cyc)[(i + 1) % cyc->size()]);
        auto [sx, sy] = diamond_step(dg, a, b);
        dX += sx;
        dY += sy;
      }
      if (dX == 0 && dY == 0) return false;
    }
    return true;
  }

  int alternations = 0;
  if (!valid_path(w.path, false, &alternations)) return false;
  if (alternations > 1 || alternations != w.alternations) return false;
  // Spanning endpoints: horizontal-edge midpoints in the boundary rows for
  // vertical faults, vertical-edge midpoints in the boundary columns for
  // horizontal ones.
  const DiamondVertex& first = w.path.front();
  const DiamondVertex& last = w.path.back();
  if (w.vertical) {
    int top_y = 2 * (c.region.height - 1);
    auto on_top = [&](const DiamondVertex& v) {
      return (v.X & 1) != 0 && v.Y == top_y;
    };
    auto on_bottom = [&](const DiamondVertex& v) {
      return (v.X & 1) != 0 && v.Y == 0;
    };
    return (on_top(first) && on_bottom(last)) ||
           (on_bottom(first) && on_top(last));
  }
  int right_x = 2 * (c.region.width - 1);
  auto on_left = [&](const DiamondVertex& v) {
    return (v.Y & 1) != 0 && v.X == 0;
  };
  auto on_right = [&](const DiamondVertex& v) {
    return (v.Y & 1) != 0 && v.X == right_x;
  };
  return (on_left(first) && on_right(last)) ||
         (on_right(first) && on_left(last));
}

bool validate_cross(const Configuration& c, const CrossWitness& w) {
  const Region& r = c.region;
  auto occupied_parity_path = [&](const std::vector<int>& p, bool cycle) {
    if (p.empty()) return false;
    for (int v : p)
      if (v < 0 || v >= r.cells() || !c.occupied(v) ||
          r.parity(v) != w.parity)
        return false;
    std::size_t count = cycle ? p.size() : p.size() - 1;
    for (std::size_t i = 0; i < count; ++i) {
      int a = p[i];
      int b = p[(i + 1) % p.size()];
      int dx0 = r.x_of(b) - r.x_of(a);
      int dy0 = r.y_of(b) - r.y_of(a);
      bool ok = false;
      for (int k = 0; k < kParityStepCount; ++k) {
        int dx = kParityDX[k];
        int dy = kParityDY[k];
        if (r.toroidal()) {
          if (((dx0 - dx) % r.width + r.width) % r.width == 0 &&
              ((dy0 - dy) % r.height + r.height) % r.height == 0)
            ok = true;
        } else if (dx0 == dx && dy0 == dy) {
          ok = true;
        }
      }
      if (!ok) return false;
    }
    return true;
  };

  if (r.toroidal()) {
    if (!occupied_parity_path(w.cycle_a, true)) return false;
    if (!occupied_parity_path(w.cycle_b, true)) return false;
    return w.wind_a[0] * w.wind_b[1] - w.wind_a[1] * w.wind_b[0] != 0;
  }
  if (!occupied_parity_path(w.bridge_lr, false)) return false;
  if (!occupied_parity_path(w.bridge_tb, false)) return false;
  if (r.x_of(w.bridge_lr.front()) > 1 ||
      r.x_of(w.bridge_lr.back()) < r.width - 2)
    return false;
  if (r.y_of(w.bridge_tb.front()) > 1 ||
      r.y_of(w.bridge_tb.back()) < r.height - 2)
    return false;
  return true;
}

FaultWitness taxi_normalize_fault(const Configuration& c,
                                  const FaultWitness& w) {
  if (w.torus_pair) return w;  // torus cycles are already uniformly oriented

  // Fixed point: an alternation-free witness whose transported string is
  // already a taxi walk is returned unchanged.
  DiamondGraph dg0(c.region);
  if (w.alternations == 0) {
    std::vector<Dir> steps = fault_segment_taxi_steps(dg0, w.path);
    if (is_taxi_walk(steps)) return w;
  }

  // An alternation-free witness must stay alternation-free (the result is a
  // single taxi walk); a one-alternation witness may normalize to any case.
  unsigned case_mask = w.alternations == 0 ? 0x3u : 0xFu;
  const Configuration* target = &c;
  Configuration rotated;
  if (!w.vertical) {
    rotated = rotate_config(c);
    target = &rotated;
  }
  DiamondGraph dg(target->region);
  std::vector<char> free = free_mask(dg, *target);
  auto nw = vertical_fault_bfs(dg, free, case_mask);
  if (!nw)
    throw std::invalid_argument("taxi_normalize_fault: witness is not a fault");
  if (!w.vertical) return unrotate_witness(*nw, c.region);
  return *nw;
}

std::string TopologyClass::to_json(const Configuration& c) const {
  nlohmann::json j;
  j["class"] = to_string(cls);
  DiamondGraph dg(c.region);
  if (fault) {
    nlohmann::json path = nlohmann::json::array();
    for (const DiamondVertex& v : fault->path) path.push_back(dg.id(v));
    j["path"] = path;
    if (fault->torus_pair) {
      nlohmann::json second = nlohmann::json::array();
      for (const DiamondVertex& v : fault->second) second.push_back(dg.id(v));
      j["second_cycle"] = second;
    }
    j["alternations"] = fault->alternations;
    j["vertical"] = fault->vertical;
    j["length"] = fault->length;
  }
  if (cross) {
    j["parity"] = cross->parity;
    if (c.region.toroidal()) {
      j["cycles"] = {cross->cycle_a, cross->cycle_b};
      j["windings"] = {{cross->wind_a[0], cross->wind_a[1]},
                       {cross->wind_b[0], cross->wind_b[1]}};
    } else {
      j["bridge_lr"] = cross->bridge_lr;
      j["bridge_tb"] = cross->bridge_tb;
    }
  }
  return j.dump(2);
}

}  // namespace hc2
