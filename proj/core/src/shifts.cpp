#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

#include "hc2/topology.hpp"

namespace hc2 {

namespace {

// Side of a lattice vertex relative to a vertical spanning path, by crossing
// parity: count the path's transversal horizontal-edge midpoints strictly
// west of the vertex on its own row.  Odd count = right side.
class SideOfFault {
 public:
  SideOfFault(const Region& r, const std::vector<DiamondVertex>& path)
      : region_(r) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const DiamondVertex& v = path[i];
      if ((v.X & 1) == 0) continue;  // vertical-edge midpoints cross columns
      bool transversal;
      if (i == 0 || i + 1 == path.size()) {
        transversal = true;  // spanning endpoints continue past the boundary
      } else {
        transversal = path[i - 1].Y != path[i + 1].Y;
      }
      if (transversal) crossings_.push_back({v.X, v.Y});
    }
  }

  bool right(int x, int y) const {
    if (x < 0) return false;
    int count = 0;
    for (const auto& [cx, cy] : crossings_)
      if (cy == 2 * y && cx < 2 * x) ++count;
    return (count & 1) != 0;
  }

 private:
  Region region_;
  std::vector<std::pair<int, int>> crossings_;
};

// Torus: sides relative to the fault pair by crossing parity.  Crossing
// parity against the union of two parallel non-contractible cycles is
// well-defined (every closed loop meets the pair an even number of times),
// and it also classifies strip vertices that the cut edges isolate
// entirely.  Side 0 holds the anchor endpoint of the least cycle vertex.
std::vector<char> torus_piece_mask(const Configuration& c,
                                   const DiamondGraph& dg,
                                   const FaultWitness& w, int* anchor_out) {
  const Region& r = c.region;
  std::vector<char> cut_h(static_cast<std::size_t>(r.cells()), 0);
  std::vector<char> cut_v(static_cast<std::size_t>(r.cells()), 0);
  int least_mid = -1;
  auto mark = [&](const std::vector<DiamondVertex>& cyc) {
    for (const DiamondVertex& m : cyc) {
      int id = dg.id(m);
      if (least_mid < 0 || id < least_mid) least_mid = id;
      // Record the cut edge at its west/south endpoint.
      if (m.X & 1) {
        int x = ((m.X - 1) / 2) % r.width;
        cut_h[static_cast<std::size_t>(r.index(x, m.Y / 2))] = 1;
      } else {
        int y = ((m.Y - 1) / 2) % r.height;
        cut_v[static_cast<std::size_t>(r.index(m.X / 2, y))] = 1;
      }
    }
  };
  mark(w.path);
  mark(w.second);

  auto [anchor, anchor_other] = dg.edge_endpoints(least_mid);
  (void)anchor_other;
  std::vector<char> piece(static_cast<std::size_t>(r.cells()), -1);
  piece[static_cast<std::size_t>(anchor)] = 0;
  std::deque<int> q{anchor};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    int x = r.x_of(v), y = r.y_of(v);
    struct Step {
      int nx, ny, cut_x, cut_y;
      bool horizontal;
    };
    Step steps[4] = {
        {(x + 1) % r.width, y, x, y, true},
        {(x - 1 + r.width) % r.width, y, (x - 1 + r.width) % r.width, y, true},
        {x, (y + 1) % r.height, x, y, false},
        {x, (y - 1 + r.height) % r.height, x, (y - 1 + r.height) % r.height,
         false},
    };
    for (const Step& st : steps) {
      const std::vector<char>& cut = st.horizontal ? cut_h : cut_v;
      char flip =
          cut[static_cast<std::size_t>(r.index(st.cut_x, st.cut_y))] ? 1 : 0;
      int u = r.index(st.nx, st.ny);
      char label = piece[static_cast<std::size_t>(v)] ^ flip;
      if (piece[static_cast<std::size_t>(u)] == -1) {
        piece[static_cast<std::size_t>(u)] = label;
        q.push_back(u);
      } else if (piece[static_cast<std::size_t>(u)] != label) {
        throw std::logic_error(
            "shift_across_fault: inconsistent crossing parity");
      }
    }
  }
  *anchor_out = anchor;
  return piece;
}

int wrap_add(int v, int delta, int mod) { return ((v + delta) % mod + mod) % mod; }

}  // namespace

namespace {

// The shift machinery needs taxi-shaped witnesses: within each
// alternation-free segment (or cyclically, on the torus) no two consecutive
// turns.  Only then is the vacated strip pairwise non-adjacent.
bool witness_is_taxi_shaped(const FaultWitness& w) {
  auto no_double_turn = [](std::span<const DiamondVertex> seg, bool cyclic) {
    std::size_t n = seg.size();
    std::size_t steps = cyclic ? n : n - 1;
    if (n < 3) return true;
    auto step = [&](std::size_t i) {
      const DiamondVertex& a = seg[i % n];
      const DiamondVertex& b = seg[(i + 1) % n];
      int dx = b.X - a.X;
      int dy = b.Y - a.Y;
      // Wrap-normalize for torus coordinates; spans are even, offsets odd.
      if (dx > 1) dx -= ((dx + 1) / 2) * 2;
      if (dx < -1) dx += ((-dx + 1) / 2) * 2;
      if (dy > 1) dy -= ((dy + 1) / 2) * 2;
      if (dy < -1) dy += ((-dy + 1) / 2) * 2;
      return std::pair<int, int>{dx, dy};
    };
    for (std::size_t i = 0; i + 2 <= steps; ++i) {
      auto [ax, ay] = step(i);
      auto [bx, by] = step(i + 1);
      if (ax * bx + ay * by != 0) continue;
      if (i + 2 == steps && !cyclic) break;
      auto [cx, cy] = step(i + 2);
      if (bx * cx + by * cy == 0) return false;
    }
    if (cyclic) {
      auto [ax, ay] = step(n - 1);
      auto [bx, by] = step(0);
      auto [cx, cy] = step(1);
      if (ax * bx + ay * by == 0 && bx * cx + by * cy == 0) return false;
    }
    return true;
  };
  if (w.torus_pair)
    return no_double_turn(w.path, true) && no_double_turn(w.second, true);
  if (w.alternations == 0) return no_double_turn(w.path, false);
  std::size_t ai = static_cast<std::size_t>(w.alternation_index);
  return no_double_turn(std::span<const DiamondVertex>(w.path.data(), ai + 1),
                        false) &&
         no_double_turn(std::span<const DiamondVertex>(w.path.data() + ai,
                                                       w.path.size() - ai),
                        false);
}

}  // namespace

ShiftResult shift_across_fault(const Configuration& c, const FaultWitness& w) {
  if (!validate_fault(c, w))
    throw std::invalid_argument("shift_across_fault: invalid fault witness");
  if (!witness_is_taxi_shaped(w))
    throw std::invalid_argument(
        "shift_across_fault: witness must be taxi-normalized");
  const Region& r = c.region;
  ShiftResult out;
  out.shifted = Configuration(r);

  if (w.torus_pair) {
    DiamondGraph dg(r);
    int anchor = -1;
    std::vector<char> piece = torus_piece_mask(c, dg, w, &anchor);
    const char moving = 0;  // the anchor side
    // Shift transverse to the winding.
    long wy = 0;
    for (std::size_t i = 0; i < w.path.size(); ++i) {
      const DiamondVertex& a = w.path[i];
      const DiamondVertex& b = w.path[(i + 1) % w.path.size()];
      int dy = b.Y - a.Y;
      dy = ((dy % (2 * r.height)) + 2 * r.height) % (2 * r.height);
      wy += (dy == 1) ? 1 : -1;
    }
    out.dir = (wy != 0) ? Dir::East : Dir::North;
    int ddx = dx(out.dir), ddy = dy(out.dir);
    for (int v = 0; v < r.cells(); ++v) {
      if (!c.occupied(v)) continue;
      if (piece[static_cast<std::size_t>(v)] == moving) {
        int nx = wrap_add(r.x_of(v), ddx, r.width);
        int ny = wrap_add(r.y_of(v), ddy, r.height);
        out.shifted.set(nx, ny);
      } else {
        out.shifted.set(v);
      }
    }
    // Vacated strip: vertices whose piece label differs from the label one
    // shift-step back.
    for (int v = 0; v < r.cells(); ++v) {
      int px = wrap_add(r.x_of(v), -ddx, r.width);
      int py = wrap_add(r.y_of(v), -ddy, r.height);
      char here = piece[static_cast<std::size_t>(v)] == moving ? 1 : 0;
      char back = piece[static_cast<std::size_t>(r.index(px, py))] == moving ? 1 : 0;
      if (here != back) out.between.push_back(v);
    }
    // For a well-separated pair the whole strip is pairwise non-adjacent and
    // individually free, matching the n+l count.  Interleaved pairs pinch
    // the strip; the canonical addable set is the greedy (by vertex id)
    // maximal subset that keeps every r-selection independent.  Injectivity
    // only needs addable to lie inside the always-vacated strip.
    for (int v : out.between) {
      bool ok = true;
      r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
        if (out.shifted.occupied(nx, ny)) ok = false;
        int u = r.index(nx, ny);
        for (int a : out.addable)
          if (a == u) ok = false;
      });
      if (ok) out.addable.push_back(v);
    }
    return out;
  }

  if (!w.vertical)
    throw std::invalid_argument(
        "shift_across_fault: rotate the configuration; grid shifts expect a "
        "vertical fault");
  SideOfFault side(r, w.path);
  out.dir = Dir::East;
  for (int v = 0; v < r.cells(); ++v) {
    if (!c.occupied(v)) continue;
    int x = r.x_of(v), y = r.y_of(v);
    if (side.right(x, y)) {
      if (x + 1 < r.width) out.shifted.set(x + 1, y);
      // occupants shifted past the east edge fall off
    } else {
      out.shifted.set(v);
    }
  }
  for (int v = 0; v < r.cells(); ++v) {
    int x = r.x_of(v), y = r.y_of(v);
    if (side.right(x, y) && !side.right(x - 1, y)) out.between.push_back(v);
  }
  out.addable = out.between;
  if (w.alternations == 1 && w.alternation_index >= 0) {
    // The shifted fault's alternation point pinches the vacated strip; the
    // odd endpoint of its bisected edge is the one excluded vertex.
    DiamondGraph dg(r);
    DiamondVertex a = w.path[static_cast<std::size_t>(w.alternation_index)];
    if (dg.valid(a.X + 2, a.Y)) {
      auto [even_end, odd_end] = dg.edge_endpoints(dg.id(a.X + 2, a.Y));
      (void)even_end;
      out.addable.erase(
          std::remove(out.addable.begin(), out.addable.end(), odd_end),
          out.addable.end());
    }
  }
  return out;
}

Configuration phi_injection(const Configuration& c, const FaultWitness& w,
                            const std::vector<bool>& r,
                            const std::optional<std::uint64_t>& last_column) {
  const Region& reg = c.region;
  Configuration base = c;
  if (!w.torus_pair) {
    // Grid variant: delete the last column first.
    std::uint64_t col = 0;
    for (int y = 0; y < reg.height; ++y)
      if (c.occupied(reg.width - 1, y)) col |= 1ull << y;
    if (last_column && *last_column != col)
      throw std::invalid_argument(
          "phi_injection: last_column does not match the configuration");
    for (int y = 0; y < reg.height; ++y)
      if (c.occupied(reg.width - 1, y)) base.clear(reg.index(reg.width - 1, y));
  }

  ShiftResult s = shift_across_fault(base, w);
  if (r.size() > s.addable.size())
    throw std::invalid_argument("phi_injection: r longer than the addable strip");
  Configuration out = s.shifted;
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k]) out.set(s.addable[k]);
  return out;
}

Contour odd_contour(const Configuration& c, int seed) {
  const Region& r = c.region;
  if (r.toroidal())
    throw std::invalid_argument("odd_contour: contours live on free boxes");
  if (!is_independent(c))
    throw std::invalid_argument("odd_contour: configuration not independent");
  if (seed < 0 || seed >= r.cells() || !c.occupied(seed) ||
      r.parity(seed) != 1)
    throw std::invalid_argument("odd_contour: seed must be an occupied odd vertex");

  // Closure of the odd-occupied vertices: themselves plus all neighbors.
  std::vector<char> closure(static_cast<std::size_t>(r.cells()), 0);
  for (int v = 0; v < r.cells(); ++v) {
    if (!c.occupied(v) || r.parity(v) != 1) continue;
    closure[static_cast<std::size_t>(v)] = 1;
    r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
      closure[static_cast<std::size_t>(r.index(nx, ny))] = 1;
    });
  }

  // Component of the seed within the closure.
  std::vector<char> comp(static_cast<std::size_t>(r.cells()), 0);
  std::deque<int> q{seed};
  comp[static_cast<std::size_t>(seed)] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
      int u = r.index(nx, ny);
      if (!closure[static_cast<std::size_t>(u)] ||
          comp[static_cast<std::size_t>(u)])
        return;
      comp[static_cast<std::size_t>(u)] = 1;
      q.push_back(u);
    });
  }
  for (int v = 0; v < r.cells(); ++v) {
    if (!comp[static_cast<std::size_t>(v)]) continue;
    int x = r.x_of(v), y = r.y_of(v);
    if (x == 0 || y == 0 || x == r.width - 1 || y == r.height - 1)
      throw std::invalid_argument("odd_contour: component touches the boundary");
  }

  // Exterior: flood from the boundary through the complement; the interior
  // is everything else (the component with its holes filled).
  std::vector<char> exterior(static_cast<std::size_t>(r.cells()), 0);
  for (int v = 0; v < r.cells(); ++v) {
    int x = r.x_of(v), y = r.y_of(v);
    bool on_boundary =
        x == 0 || y == 0 || x == r.width - 1 || y == r.height - 1;
    if (!on_boundary || comp[static_cast<std::size_t>(v)]) continue;
    if (exterior[static_cast<std::size_t>(v)]) continue;
    exterior[static_cast<std::size_t>(v)] = 1;
    std::deque<int> fq{v};
    while (!fq.empty()) {
      int u = fq.front();
      fq.pop_front();
      r.for_each_neighbor(r.x_of(u), r.y_of(u), [&](int nx, int ny) {
        int t = r.index(nx, ny);
        if (comp[static_cast<std::size_t>(t)] ||
            exterior[static_cast<std::size_t>(t)])
          return;
        exterior[static_cast<std::size_t>(t)] = 1;
        fq.push_back(t);
      });
    }
  }

  Contour k;
  k.interior.assign(static_cast<std::size_t>(r.cells()), 0);
  int evens = 0, odds = 0;
  for (int v = 0; v < r.cells(); ++v) {
    if (exterior[static_cast<std::size_t>(v)]) continue;
    k.interior[static_cast<std::size_t>(v)] = 1;
    if (r.parity(v) == 0)
      ++evens;
    else
      ++odds;
  }
  k.even_minus_odd = evens - odds;

  for (int v = 0; v < r.cells(); ++v) {
    if (!k.interior[static_cast<std::size_t>(v)]) continue;
    r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
      int u = r.index(nx, ny);
      if (!exterior[static_cast<std::size_t>(u)]) return;
      k.gamma.push_back({v, u});
      assert(r.parity(v) == 0 && !c.occupied(v));
      assert(r.parity(u) == 1 && !c.occupied(u));
    });
  }
  std::sort(k.gamma.begin(), k.gamma.end());

  // The cut edges' midpoints induce a single uniformly oriented cycle.
  DiamondGraph dg(r);
  std::vector<int> mids;
  for (const auto& [a, b] : k.gamma) {
    int X = r.x_of(a) + r.x_of(b);
    int Y = r.y_of(a) + r.y_of(b);
    mids.push_back(dg.id(X, Y));
  }
  std::sort(mids.begin(), mids.end());
  std::vector<char> in_cut(static_cast<std::size_t>(dg.id_bound()), 0);
  for (int m : mids) in_cut[static_cast<std::size_t>(m)] = 1;

  int nb[4];
  auto cut_neighbors = [&](int m, int out[2]) {
    int n = dg.neighbors(m, nb);
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (in_cut[static_cast<std::size_t>(nb[i])]) {
        if (cnt < 2) out[cnt] = nb[i];
        ++cnt;
      }
    return cnt;
  };
  int two[2];
  for (int m : mids)
    if (cut_neighbors(m, two) != 2)
      throw std::logic_error("odd_contour: cut midpoints do not form a cycle");

  int start = mids.front();
  int prev = -1;
  int cur = start;
  do {
    k.cycle.push_back(dg.vertex(cur));
    cut_neighbors(cur, two);
    int next = (two[0] == prev) ? two[1] : two[0];
    // Follow the orientation from the start.
    if (prev == -1) next = dg.arrow(cur, two[0]) ? two[0] : two[1];
    prev = cur;
    cur = next;
  } while (cur != start);
  if (k.cycle.size() != k.gamma.size())
    throw std::logic_error("odd_contour: cut cycle does not cover the cutset");
  return k;
}

InteriorShift shift_interior(const Configuration& c, const Contour& k,
                             Dir dir) {
  const Region& r = c.region;
  if (k.interior.size() != static_cast<std::size_t>(r.cells()))
    throw std::invalid_argument("shift_interior: contour does not match region");
  InteriorShift out;
  out.shifted = Configuration(r);
  for (int v = 0; v < r.cells(); ++v) {
    if (!c.occupied(v)) continue;
    if (k.interior[static_cast<std::size_t>(v)]) {
      int nx = r.x_of(v) + dx(dir);
      int ny = r.y_of(v) + dy(dir);
      if (!r.contains(nx, ny))
        throw std::invalid_argument("shift_interior: shift leaves the region");
      out.shifted.set(nx, ny);
    } else {
      out.shifted.set(v);
    }
  }
  for (int v = 0; v < r.cells(); ++v) {
    if (!k.interior[static_cast<std::size_t>(v)]) continue;
    int px = r.x_of(v) - dx(dir);
    int py = r.y_of(v) - dy(dir);
    if (!r.contains(px, py)) continue;
    if (!k.interior[static_cast<std::size_t>(r.index(px, py))])
      out.freed.push_back(v);
  }
  return out;
}

}  // namespace hc2
