// Finite rectangular regions of the lattice (free or toroidal boundary) and
// occupancy configurations on them.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hc2/lattice.hpp"

namespace hc2 {

enum class Boundary { Free, Toroidal };

struct Region {
  int width = 0;
  int height = 0;
  Boundary boundary = Boundary::Free;

  Region() = default;
  Region(int w, int h, Boundary b);

  static Region grid(int w, int h) { return {w, h, Boundary::Free}; }
  static Region torus(int n) { return {n, n, Boundary::Toroidal}; }

  bool toroidal() const { return boundary == Boundary::Toroidal; }
  int cells() const { return width * height; }

  // Row-major from (0,0) at the bottom-left.
  int index(int x, int y) const { return y * width + x; }
  int x_of(int v) const { return v % width; }
  int y_of(int v) const { return v / width; }
  int parity(int v) const { return (x_of(v) + y_of(v)) & 1; }

  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }

  // Visits the lattice neighbors of (x, y), wrapping iff toroidal.
  template <typename Fn>
  void for_each_neighbor(int x, int y, Fn&& fn) const {
    for (Dir d : kAllDirs) {
      int nx = x + dx(d);
      int ny = y + dy(d);
      if (toroidal()) {
        nx = (nx + width) % width;
        ny = (ny + height) % height;
      } else if (!contains(nx, ny)) {
        continue;
      }
      fn(nx, ny);
    }
  }

  friend bool operator==(const Region&, const Region&) = default;

  // "grid:WxH" or "torus:N"
  static Region parse(const std::string& spec);
  std::string to_string() const;
};

// Occupancy assignment over a region of at most 64 cells.
struct Configuration {
  Region region;
  std::uint64_t mask = 0;

  Configuration() = default;
  explicit Configuration(Region r);

  bool occupied(int v) const { return (mask >> v) & 1; }
  bool occupied(int x, int y) const { return occupied(region.index(x, y)); }
  void set(int v) { mask |= 1ull << v; }
  void set(int x, int y) { set(region.index(x, y)); }
  void clear(int v) { mask &= ~(1ull << v); }
  void toggle(int v) { mask ^= 1ull << v; }
  int count() const { return __builtin_popcountll(mask); }

  friend bool operator==(const Configuration&, const Configuration&) = default;

  // Text grid of '.' and 'o' rows, top row first.
  std::string to_grid() const;
  static Configuration from_grid(const std::string& text,
                                 Boundary boundary = Boundary::Free);
};

bool is_independent(const Configuration& c);

// Even (parity 0) and odd checkerboards.
Configuration checkerboard(Region r, int parity);

}  // namespace hc2
