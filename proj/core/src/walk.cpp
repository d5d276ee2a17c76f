#include "hc2/walk.hpp"

#include <algorithm>
#include <cstdlib>

namespace hc2 {

namespace {

// Stamped visited board so repeated oracle calls do not allocate.
struct VisitBoard {
  std::vector<std::uint32_t> stamp;
  std::uint32_t now = 0;
  int radius = 0;
  int stride = 0;

  void reset(int needed_radius) {
    if (needed_radius > radius || stamp.empty()) {
      radius = std::max(needed_radius, 64);
      stride = 2 * radius + 1;
      stamp.assign(static_cast<std::size_t>(stride) * stride, 0);
      now = 0;
    }
    ++now;
  }

  bool visit(int x, int y) {
    std::size_t i = static_cast<std::size_t>((y + radius) * stride + (x + radius));
    if (stamp[i] == now) return false;
    stamp[i] = now;
    return true;
  }
};

}  // namespace

bool is_taxi_walk(const std::vector<Dir>& steps) {
  thread_local VisitBoard board;
  board.reset(static_cast<int>(steps.size()) + 1);
  LatticePoint p{0, 0};
  board.visit(0, 0);
  bool turned_prev = false;
  bool have_prev = false;
  Dir prev = Dir::East;
  for (Dir d : steps) {
    if (!outgoing_directions(p).contains(d)) return false;
    if (have_prev) {
      bool turned = is_turn(prev, d);
      if (turned && turned_prev) return false;
      turned_prev = turned;
    }
    prev = d;
    have_prev = true;
    p = p.step(d);
    if (!board.visit(p.x, p.y)) return false;
  }
  return true;
}

std::vector<Dir> transport_steps(const std::vector<Dir>& steps,
                                 LatticePoint v) {
  std::vector<Dir> out;
  out.reserve(steps.size());
  for (Dir d : steps) out.push_back(transport_dir(d, v));
  return out;
}

std::pair<TaxiWalk, TaxiWalk> split_walk(const TaxiWalk& w, std::size_t i) {
  if (i < 1 || i >= w.length())
    throw std::out_of_range("split_walk: index out of range");
  TaxiWalk prefix{std::vector<Dir>(w.steps.begin(),
                                   w.steps.begin() + static_cast<long>(i))};
  LatticePoint v = w.vertex(i);
  std::vector<Dir> tail(w.steps.begin() + static_cast<long>(i),
                        w.steps.end());
  TaxiWalk suffix{transport_steps(tail, v)};
  return {std::move(prefix), std::move(suffix)};
}

TaxiWalk unsplit_walk(const TaxiWalk& prefix, const TaxiWalk& suffix) {
  LatticePoint v = prefix.vertex(prefix.length());
  TaxiWalk w = prefix;
  // transport is an involution on direction strings
  for (Dir d : transport_steps(suffix.steps, v)) w.steps.push_back(d);
  return w;
}

}  // namespace hc2
