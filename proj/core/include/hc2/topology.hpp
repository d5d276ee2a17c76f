// Structural classification of hard-core configurations: the fault-line /
// even-cross / odd-cross trichotomy with verifiable witnesses, fault-shift
// injections, and contour extraction around odd-phase components.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hc2/diamond.hpp"
#include "hc2/region.hpp"

namespace hc2 {

enum class TopoClass { FaultLine, EvenCross, OddCross };

const char* to_string(TopoClass c);

// A spanning free path in the diamond graph (grid) or a pair of disjoint
// non-contractible free cycles (torus).  Grid paths are listed from the top
// (resp. left) boundary; every bisected edge has both endpoints unoccupied.
struct FaultWitness {
  std::vector<DiamondVertex> path;
  std::vector<DiamondVertex> second;  // second cycle on the torus
  bool torus_pair = false;
  bool vertical = true;  // grid: spans top-to-bottom (else left-to-right)
  int alternations = 0;
  int alternation_index = -1;  // path position of the color switch
  bool orientation_consistent = false;
  // Grid: number of perpendicular crossings (horizontal-edge midpoints of a
  // vertical fault).  Torus: total edge count over both cycles.
  int length = 0;
};

struct CrossWitness {
  int parity = 0;  // 0 even, 1 odd
  // Grid: occupied paths in the parity subgraph spanning each direction.
  std::vector<int> bridge_lr;
  std::vector<int> bridge_tb;
  // Torus: two occupied non-contractible cycles with independent windings.
  std::vector<int> cycle_a;
  std::vector<int> cycle_b;
  long wind_a[2] = {0, 0};
  long wind_b[2] = {0, 0};
};

struct TopologyClass {
  TopoClass cls = TopoClass::FaultLine;
  std::optional<FaultWitness> fault;
  std::optional<CrossWitness> cross;

  std::string to_json(const Configuration& c) const;
};

// Exactly one class per independent configuration (grid: free 2D region;
// torus: even side lengths).  Throws on non-independent input.
TopologyClass classify(const Configuration& c);
TopologyClass classify(const Configuration& c, const DiamondGraph& dg);

// Cross parity alone (no fault search): nullopt exactly for fault-class
// configurations, since every independent set has a fault or a cross.
std::optional<int> cross_parity_of(const Configuration& c);

// Shortest fault witness, or nullopt when the configuration has a cross.
// Deterministic but not lexicographically minimal; the cheap search used by
// classify and by the exhaustive partition checks.
std::optional<FaultWitness> find_fault(const Configuration& c,
                                       const DiamondGraph& dg);

// Lexicographically least fault witness under the column-major-then-row
// diamond vertex order; witness sequences are canonicalized to start at
// their smaller endpoint.  Vertical faults precede horizontal ones.
FaultWitness find_first_fault(const Configuration& c);
FaultWitness find_first_fault(const Configuration& c, const DiamondGraph& dg);

// Independent witness checkers (used by tests and by classify asserts).
bool validate_fault(const Configuration& c, const FaultWitness& w);
bool validate_cross(const Configuration& c, const CrossWitness& w);

// Shortest equivalent witness in the same orientation class; the result's
// alternation-free segments, transported to the origin, are taxi walks.
FaultWitness taxi_normalize_fault(const Configuration& c,
                                  const FaultWitness& w);

// Direction string of one alternation-free segment, transported to the
// origin (ready for the taxi-walk oracle).
std::vector<Dir> fault_segment_taxi_steps(const DiamondGraph& dg,
                                          std::span<const DiamondVertex> seg);

// Splits the witness path into its alternation-free segments (1 or 2).
std::vector<std::vector<DiamondVertex>> fault_segments(const FaultWitness& w);

struct ShiftResult {
  Configuration shifted;
  Dir dir = Dir::East;
  std::vector<int> between;  // region vertex ids in the vacated strip
  std::vector<int> addable;  // between minus the alternation-adjacent odd vertex
};

// sigma(c, F): shifts the one-side part of the configuration one unit across
// the fault.  Grid faults must be vertical (rotate otherwise).
ShiftResult shift_across_fault(const Configuration& c, const FaultWitness& w);

// The weight-increasing injection: delete the last column (grid variant
// only), shift across the fault, then add the vertices selected by r from
// the addable strip.  last_column, when given, must equal the configuration
// restricted to its last column.
Configuration phi_injection(const Configuration& c, const FaultWitness& w,
                            const std::vector<bool>& r,
                            const std::optional<std::uint64_t>& last_column);

struct Contour {
  // Cut edges as (interior vertex, exterior vertex); the interior endpoint
  // is always even and unoccupied, the exterior one odd and unoccupied.
  std::vector<std::pair<int, int>> gamma;
  std::vector<DiamondVertex> cycle;  // directed diamond cycle through gamma
  std::vector<char> interior;        // cell mask of the filled-in region
  int even_minus_odd = 0;            // interior even minus odd vertex count
};

// Extracts the minimal edge cutset around the odd-occupied component of
// `seed` (its closure must not touch the region boundary; free grids only).
Contour odd_contour(const Configuration& c, int seed);

struct InteriorShift {
  Configuration shifted;
  std::vector<int> freed;
};

// Shifts the contour interior one unit; frees exactly |gamma|/4 vertices,
// any subset of which may be added while preserving independence.
InteriorShift shift_interior(const Configuration& c, const Contour& k,
                             Dir dir);

}  // namespace hc2
