// Taxi walks: the oriented, self-avoiding, no-double-turn paths on the
// Manhattan lattice, plus the parity-reflection transport map used by walk
// splitting and by prefix/suffix classification.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hc2/lattice.hpp"

namespace hc2 {

struct TaxiWalk {
  std::vector<Dir> steps;

  std::size_t length() const { return steps.size(); }

  // Vertex i of the walk, starting from the origin.
  LatticePoint vertex(std::size_t i) const {
    LatticePoint p{0, 0};
    for (std::size_t k = 0; k < i; ++k) p = p.step(steps[k]);
    return p;
  }

  std::vector<LatticePoint> vertices() const {
    std::vector<LatticePoint> out;
    out.reserve(steps.size() + 1);
    LatticePoint p{0, 0};
    out.push_back(p);
    for (Dir d : steps) {
      p = p.step(d);
      out.push_back(p);
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(steps.size());
    for (Dir d : steps) s.push_back(dir_char(d));
    return s;
  }

  static TaxiWalk from_string(const std::string& s) {
    TaxiWalk w;
    w.steps.reserve(s.size());
    for (char c : s) w.steps.push_back(dir_from_char(c));
    return w;
  }

  friend bool operator==(const TaxiWalk&, const TaxiWalk&) = default;
};

// Definitional oracle: orientation-legal, self-avoiding, no two consecutive
// turns.  Deliberately simple; the optimized enumerator is validated
// against it.
bool is_taxi_walk(const std::vector<Dir>& steps);

// The orientation-preserving map that transports a walk segment starting at
// v back to the origin: translate v to the origin, mirror across the
// horizontal axis (N<->S) iff v.x is odd, and across the vertical axis
// (E<->W) iff v.y is odd.  Self-inverse on direction strings.
inline Dir transport_dir(Dir d, LatticePoint v) {
  bool flip_ns = ((v.x % 2) + 2) % 2 == 1;
  bool flip_ew = ((v.y % 2) + 2) % 2 == 1;
  if (flip_ns && !is_street(d)) d = reverse(d);
  if (flip_ew && is_street(d)) d = reverse(d);
  return d;
}

// Coordinate form of the same map.
inline LatticePoint transport_point(LatticePoint q, LatticePoint v) {
  int sx = (((v.y % 2) + 2) % 2 == 1) ? -1 : 1;
  int sy = (((v.x % 2) + 2) % 2 == 1) ? -1 : 1;
  return {sx * (q.x - v.x), sy * (q.y - v.y)};
}

std::vector<Dir> transport_steps(const std::vector<Dir>& steps,
                                 LatticePoint v);

// Splits w at vertex i: the initial segment of length i, and the final
// segment transported to the origin.  Both parts are taxi walks; the pair is
// invertible given the split vertex.
std::pair<TaxiWalk, TaxiWalk> split_walk(const TaxiWalk& w, std::size_t i);

// Inverse of split_walk: re-attaches a transported suffix to a prefix.
TaxiWalk unsplit_walk(const TaxiWalk& prefix, const TaxiWalk& suffix);

}  // namespace hc2
