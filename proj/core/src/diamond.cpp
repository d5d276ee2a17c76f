#include "hc2/diamond.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace hc2 {

DiamondGraph::DiamondGraph(Region r) : region_(r) {
  if (r.toroidal()) {
    span_x_ = 2 * r.width;
    span_y_ = 2 * r.height;
  } else {
    span_x_ = 2 * r.width - 1;
    span_y_ = 2 * r.height - 1;
  }
  if (r.toroidal()) return;  // spanning sets are a grid notion
  // Vertical spanning paths run between midpoints of horizontal edges in
  // the boundary rows; the complementary crossing chains reach within one
  // unit of the sides.
  int top_y = 2 * (r.height - 1);
  for (int X = 1; X < span_x_; X += 2) {
    if (valid(X, 0)) bottom_mids_.push_back(id(X, 0));
    if (valid(X, top_y)) top_mids_.push_back(id(X, top_y));
  }
}

bool DiamondGraph::valid(int X, int Y) const {
  if (X < 0 || Y < 0 || X >= span_x_ || Y >= span_y_) return false;
  return ((X ^ Y) & 1) != 0;
}

std::pair<int, int> DiamondGraph::edge_endpoints(int id) const {
  DiamondVertex v = vertex(id);
  const Region& r = region_;
  int ax, ay, bx, by;
  if (v.X & 1) {  // horizontal edge
    ax = (v.X - 1) / 2;
    ay = v.Y / 2;
    bx = (v.X + 1) / 2;
    by = ay;
    if (r.toroidal()) bx %= r.width;
  } else {
    ax = v.X / 2;
    ay = (v.Y - 1) / 2;
    bx = ax;
    by = (v.Y + 1) / 2;
    if (r.toroidal()) by %= r.height;
  }
  int a = r.index(ax, ay);
  int b = r.index(bx, by);
  if (((ax + ay) & 1) == 0) return {a, b};
  return {b, a};
}

bool DiamondGraph::free_in(int id, const Configuration& c) const {
  auto [a, b] = edge_endpoints(id);
  return !c.occupied(a) && !c.occupied(b);
}

int DiamondGraph::neighbors(int m, int out[4]) const {
  DiamondVertex v = vertex(m);
  int n = 0;
  // Candidate order chosen so emitted ids are increasing.
  static constexpr int kDX[4] = {-1, -1, +1, +1};
  static constexpr int kDY[4] = {-1, +1, -1, +1};
  int tmp[4];
  for (int k = 0; k < 4; ++k) {
    int X = v.X + kDX[k];
    int Y = v.Y + kDY[k];
    if (region_.toroidal()) {
      X = (X + span_x_) % span_x_;
      Y = (Y + span_y_) % span_y_;
    }
    if (!valid(X, Y)) continue;
    tmp[n++] = id(X, Y);
  }
  for (int i = 0; i < n; ++i) out[i] = tmp[i];
  // Wrapping can break the natural order; sort the handful of entries.
  for (int i = 1; i < n; ++i)
    for (int j = i; j > 0 && out[j - 1] > out[j]; --j)
      std::swap(out[j - 1], out[j]);
  return n;
}

bool DiamondGraph::arrow(int a, int b) const {
  DiamondVertex va = vertex(a);
  DiamondVertex vb = vertex(b);
  // Shared lattice vertex: the even coordinates of the pair.
  int wx = (va.X & 1) ? vb.X : va.X;
  int wy = (va.Y & 1) ? vb.Y : va.Y;
  auto rel = [&](DiamondVertex m) {
    int rx = m.X - wx;
    int ry = m.Y - wy;
    if (region_.toroidal()) {
      rx = ((rx % span_x_) + span_x_) % span_x_;
      if (rx == span_x_ - 1) rx = -1;
      ry = ((ry % span_y_) + span_y_) % span_y_;
      if (ry == span_y_ - 1) ry = -1;
    }
    if (rx == 1 && ry == 0) return 0;   // east of w
    if (rx == 0 && ry == 1) return 1;   // north
    if (rx == -1 && ry == 0) return 2;  // west
    if (rx == 0 && ry == -1) return 3;  // south
    assert(false && "diamond vertices are not adjacent");
    return -1;
  };
  int pa = rel(va);
  int pb = rel(vb);
  bool ccw = pb == ((pa + 1) & 3);
  assert(ccw || pa == ((pb + 1) & 3));
  int w_parity = ((wx + wy) / 2) & 1;
  return ccw ? (w_parity == 1) : (w_parity == 0);
}

std::vector<LatticePoint> DiamondGraph::to_taxi_coords(
    const std::vector<DiamondVertex>& path) const {
  std::vector<LatticePoint> out;
  out.reserve(path.size());
  if (path.empty()) return out;
  // Unroll in the universal cover: accumulate raw diagonal steps.
  int X = path[0].X;
  int Y = path[0].Y;
  out.push_back({(X + Y - 1) / 2, (X - Y + 1) / 2});
  for (std::size_t i = 1; i < path.size(); ++i) {
    int dx = path[i].X - path[i - 1].X;
    int dy = path[i].Y - path[i - 1].Y;
    if (region_.toroidal()) {
      dx = ((dx % span_x_) + span_x_) % span_x_;
      if (dx == span_x_ - 1) dx = -1;
      dy = ((dy % span_y_) + span_y_) % span_y_;
      if (dy == span_y_ - 1) dy = -1;
    }
    assert(dx * dx == 1 && dy * dy == 1);
    X += dx;
    Y += dy;
    out.push_back({(X + Y - 1) / 2, (X - Y + 1) / 2});
  }
  return out;
}

std::vector<Dir> taxi_steps_of(const std::vector<LatticePoint>& pts) {
  std::vector<Dir> steps;
  if (pts.size() < 2) return steps;
  steps.reserve(pts.size() - 1);
  LatticePoint start = pts[0];
  for (std::size_t i = 1; i < pts.size(); ++i) {
    int dx = pts[i].x - pts[i - 1].x;
    int dy = pts[i].y - pts[i - 1].y;
    Dir d;
    if (dx == 1 && dy == 0)
      d = Dir::East;
    else if (dx == -1 && dy == 0)
      d = Dir::West;
    else if (dx == 0 && dy == 1)
      d = Dir::North;
    else if (dx == 0 && dy == -1)
      d = Dir::South;
    else
      throw std::invalid_argument("not a unit-step lattice path");
    steps.push_back(transport_dir(d, start));
  }
  return steps;
}

}  // namespace hc2
