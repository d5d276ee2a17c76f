// The diamond graph of a region: vertices are midpoints of lattice edges,
// joined when their edges are incident and perpendicular.  Midpoints live in
// doubled coordinates (lattice vertex (x,y) sits at (2x,2y)), so a midpoint
// has exactly one odd coordinate.  Each diamond edge is oriented clockwise
// around its shared lattice vertex when that vertex is even and
// counterclockwise when odd; under a 45-degree rotation this is exactly the
// Manhattan orientation.
#pragma once

#include <utility>
#include <vector>

#include "hc2/region.hpp"
#include "hc2/walk.hpp"

namespace hc2 {

struct DiamondVertex {
  int X = 0;
  int Y = 0;
  friend bool operator==(DiamondVertex, DiamondVertex) = default;
};

class DiamondGraph {
 public:
  explicit DiamondGraph(Region r);

  const Region& region() const { return region_; }
  int span_x() const { return span_x_; }  // doubled X range
  int span_y() const { return span_y_; }

  bool valid(int X, int Y) const;
  // Column-major then row: id = X * span_y + Y over valid midpoints.
  int id(int X, int Y) const { return X * span_y_ + Y; }
  int id(DiamondVertex v) const { return id(v.X, v.Y); }
  DiamondVertex vertex(int id) const { return {id / span_y_, id % span_y_}; }
  int id_bound() const { return span_x_ * span_y_; }

  // Endpoints of the bisected lattice edge (region vertex indices).  The
  // first endpoint is the even one.
  std::pair<int, int> edge_endpoints(int id) const;

  bool horizontal_edge(int id) const { return (vertex(id).X & 1) != 0; }

  // Both endpoints of the bisected edge unoccupied.
  bool free_in(int id, const Configuration& c) const;

  // Diagonal neighbors (wrapped on the torus); returns the count written
  // into out, in increasing id order.
  int neighbors(int id, int out[4]) const;

  // True iff the oriented diamond edge runs a -> b.
  bool arrow(int a, int b) const;

  // Midpoints of horizontal edges in the top/bottom vertex rows; the
  // admissible endpoints of a vertical (top-to-bottom) spanning path.
  const std::vector<int>& top_mids() const { return top_mids_; }
  const std::vector<int>& bottom_mids() const { return bottom_mids_; }

  // Map a diamond path to taxi-lattice coordinates: rotated coordinates
  // (U, V) = ((X+Y-1)/2, (X-Y+1)/2) identify the oriented diamond graph
  // with the Manhattan lattice.  Input must be consecutive-adjacent; for
  // torus paths the coordinates are unrolled in the universal cover.
  std::vector<LatticePoint> to_taxi_coords(
      const std::vector<DiamondVertex>& path) const;

 private:
  Region region_;
  int span_x_ = 0;
  int span_y_ = 0;
  std::vector<int> top_mids_;
  std::vector<int> bottom_mids_;
};

// Direction string of a taxi-coordinate path, transported to the origin by
// the parity-reflection map at its first vertex.
std::vector<Dir> taxi_steps_of(const std::vector<LatticePoint>& pts);

}  // namespace hc2
