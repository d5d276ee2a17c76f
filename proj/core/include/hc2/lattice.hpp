// Oriented Manhattan lattice: step directions, the street/avenue
// orientation rule, and the turn predicate shared by every other module.
#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hc2 {

// Fixed order E < N < W < S; this order defines every lexicographic
// enumeration downstream.
enum class Dir : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

constexpr std::array<Dir, 4> kAllDirs = {Dir::East, Dir::North, Dir::West,
                                         Dir::South};

constexpr Dir reverse(Dir d) {
  return static_cast<Dir>((static_cast<int>(d) + 2) & 3);
}

constexpr bool is_street(Dir d) { return d == Dir::East || d == Dir::West; }

constexpr int dx(Dir d) {
  return d == Dir::East ? 1 : (d == Dir::West ? -1 : 0);
}
constexpr int dy(Dir d) {
  return d == Dir::North ? 1 : (d == Dir::South ? -1 : 0);
}

inline char dir_char(Dir d) {
  switch (d) {
    case Dir::East: return 'E';
    case Dir::North: return 'N';
    case Dir::West: return 'W';
    case Dir::South: return 'S';
  }
  return '?';
}

inline Dir dir_from_char(char c) {
  switch (c) {
    case 'E': return Dir::East;
    case 'N': return Dir::North;
    case 'W': return Dir::West;
    case 'S': return Dir::South;
    default: throw std::invalid_argument(std::string("bad direction: ") + c);
  }
}

struct LatticePoint {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(LatticePoint, LatticePoint) = default;

  constexpr LatticePoint step(Dir d) const { return {x + dx(d), y + dy(d)}; }

  // 0 = even, 1 = odd.
  constexpr int parity() const { return ((x + y) % 2 + 2) % 2; }
};

// Street through y runs East iff y is even; avenue through x runs North iff
// x is even.  Every vertex has exactly two outgoing edges, one of each kind.
constexpr Dir street_direction(int y) {
  return (((y % 2) + 2) % 2 == 0) ? Dir::East : Dir::West;
}
constexpr Dir avenue_direction(int x) {
  return (((x % 2) + 2) % 2 == 0) ? Dir::North : Dir::South;
}

struct OutgoingPair {
  Dir a;  // smaller under the E<N<W<S order
  Dir b;

  constexpr bool contains(Dir d) const { return d == a || d == b; }
};

inline OutgoingPair outgoing_directions(LatticePoint p) {
  Dir s = street_direction(p.y);
  Dir v = avenue_direction(p.x);
  if (static_cast<int>(s) < static_cast<int>(v)) return {s, v};
  return {v, s};
}

// True iff consecutive steps are perpendicular.  Reversals cannot occur on
// an oriented walk and are rejected as contract violations.
inline bool is_turn(Dir d_prev, Dir d_next) {
  if (d_next == reverse(d_prev))
    throw std::invalid_argument("is_turn: reversal is not a legal step pair");
  return ((static_cast<int>(d_prev) ^ static_cast<int>(d_next)) & 1) != 0;
}

struct DirSet {
  std::array<Dir, 2> dirs{};
  int count = 0;

  void add(Dir d) { dirs[static_cast<std::size_t>(count++)] = d; }
  bool contains(Dir d) const {
    for (int i = 0; i < count; ++i)
      if (dirs[static_cast<std::size_t>(i)] == d) return true;
    return false;
  }
};

// Outgoing directions at p minus any second-consecutive turn.  Self-avoidance
// is a walk-level concern and is not checked here.
inline DirSet legal_extensions(LatticePoint p, const Dir* d_prev,
                               bool turned_prev) {
  OutgoingPair out = outgoing_directions(p);
  DirSet set;
  if (d_prev == nullptr || !turned_prev) {
    set.add(out.a);
    set.add(out.b);
    return set;
  }
  // Exactly one of the two outgoing directions continues straight.
  Dir straight = is_street(*d_prev) ? street_direction(p.y)
                                    : avenue_direction(p.x);
  assert(straight == *d_prev);
  set.add(straight);
  return set;
}

}  // namespace hc2
