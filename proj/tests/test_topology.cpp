#include <doctest.h>

#include <map>
#include <set>

#include "hc2/hardcore.hpp"
#include "hc2/rng.hpp"
#include "hc2/topology.hpp"
#include "hc2/walk.hpp"

using namespace hc2;

namespace {

Configuration grid_of(const char* text) {
  return Configuration::from_grid(text);
}

}  // namespace

TEST_CASE("classify named examples") {
  Configuration empty(Region::grid(4, 4));
  TopologyClass t = classify(empty);
  CHECK(t.cls == TopoClass::FaultLine);
  REQUIRE(t.fault);
  CHECK(validate_fault(empty, *t.fault));
  CHECK(t.fault->alternations <= 1);

  Configuration cb = checkerboard(Region::grid(4, 4), 0);
  TopologyClass tc = classify(cb);
  CHECK(tc.cls == TopoClass::EvenCross);
  REQUIRE(tc.cross);
  CHECK(validate_cross(cb, *tc.cross));

  Configuration odd_cb = checkerboard(Region::torus(4), 1);
  CHECK(classify(odd_cb).cls == TopoClass::OddCross);

  Configuration empty_torus(Region::torus(4));
  TopologyClass tf = classify(empty_torus);
  CHECK(tf.cls == TopoClass::FaultLine);
  REQUIRE(tf.fault);
  CHECK(tf.fault->torus_pair);
  CHECK(validate_fault(empty_torus, *tf.fault));

  Configuration dep(Region::grid(3, 3));
  dep.set(0, 0);
  dep.set(0, 1);
  CHECK_THROWS_AS(classify(dep), std::invalid_argument);
}

TEST_CASE("diagonal neighbors within one unit of both walls form a cross") {
  // No width-two free corridor passes a chain that comes within one unit of
  // each side; this is the distance-one boundary convention.
  Configuration c = grid_of(
      "....\n"
      "...o\n"
      "..o.\n"
      ".o..\n");
  // occupied (1,0),(2,1),(3,2): even chain touching x=1..3, y=0..2
  TopologyClass t = classify(c);
  CHECK(t.cls == TopoClass::OddCross);
}

TEST_CASE("exhaustive partition on the free 4x4 grid") {
  Region r = Region::grid(4, 4);
  DiamondGraph dg(r);
  Configuration c(r);
  int nf = 0, ne = 0, no = 0;
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    auto cross = cross_parity_of(c);
    auto fault = find_fault(c, dg);
    int kinds = (fault ? 1 : 0) + (cross ? 1 : 0);
    REQUIRE(kinds == 1);
    if (fault) {
      ++nf;
      CHECK(validate_fault(c, *fault));
    } else {
      *cross == 0 ? ++ne : ++no;
    }
  });
  CHECK(nf == 704);
  CHECK(ne == 265);
  CHECK(no == 265);
}

TEST_CASE("exhaustive partition on the 4x4 torus") {
  Region r = Region::torus(4);
  DiamondGraph dg(r);
  Configuration c(r);
  int nf = 0, ne = 0, no = 0;
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    auto cross = cross_parity_of(c);
    auto fault = find_fault(c, dg);
    REQUIRE((fault ? 1 : 0) + (cross ? 1 : 0) == 1);
    if (fault) {
      ++nf;
      CHECK(validate_fault(c, *fault));
    } else {
      *cross == 0 ? ++ne : ++no;
    }
  });
  CHECK(nf == 441);
  CHECK(ne == no);  // parity symmetry
  CHECK(nf + ne + no == 743);
}

TEST_CASE("first fault is deterministic and lexicographically stable") {
  Configuration empty(Region::grid(4, 4));
  DiamondGraph dg(empty.region);
  FaultWitness a = find_first_fault(empty, dg);
  FaultWitness b = find_first_fault(empty, dg);
  CHECK(a.path == b.path);
  CHECK(a.vertical);
  CHECK(validate_fault(empty, a));
  // the leftmost spanning witness starts at the bottom-left boundary mid
  CHECK(a.path.front() == DiamondVertex{1, 0});

  Configuration empty_torus(Region::torus(4));
  FaultWitness t = find_first_fault(empty_torus);
  CHECK(t.torus_pair);
  CHECK(validate_fault(empty_torus, t));

  Configuration cb = checkerboard(Region::grid(4, 4), 0);
  CHECK_THROWS_AS(find_first_fault(cb), std::invalid_argument);
}

TEST_CASE("first fault avoids blocked edges and stays minimal-valid") {
  // single occupied center vertex on 5x5
  Configuration c(Region::grid(5, 5));
  c.set(2, 2);
  FaultWitness w = find_first_fault(c);
  CHECK(validate_fault(c, w));
  DiamondGraph dg(c.region);
  for (const DiamondVertex& v : w.path) {
    auto [a, b] = dg.edge_endpoints(dg.id(v));
    CHECK_FALSE(c.occupied(a));
    CHECK_FALSE(c.occupied(b));
  }
}

TEST_CASE("taxi normalization on every 4x4 fault configuration") {
  Region r = Region::grid(4, 4);
  DiamondGraph dg(r);
  Configuration c(r);
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    auto fault = find_fault(c, dg);
    if (!fault) return;
    FaultWitness nw = taxi_normalize_fault(c, *fault);
    CHECK(validate_fault(c, nw));
    CHECK(nw.path.size() <= fault->path.size());
    for (auto& seg : fault_segments(nw)) {
      std::vector<Dir> steps = fault_segment_taxi_steps(dg, seg);
      CHECK(is_taxi_walk(steps));
    }
  });
}

TEST_CASE("normalization fixes a witness and is a fixed point on straight ones") {
  Configuration empty(Region::grid(4, 4));
  DiamondGraph dg(empty.region);
  auto w = find_fault(empty, dg);
  REQUIRE(w);
  FaultWitness n1 = taxi_normalize_fault(empty, *w);
  FaultWitness n2 = taxi_normalize_fault(empty, n1);
  CHECK(n1.path == n2.path);
}

TEST_CASE("single flips never join the two cross classes") {
  for (Region r : {Region::grid(4, 4), Region::torus(4)}) {
    Configuration c(r);
    std::map<std::uint64_t, int> cls;
    for_each_independent_set(r, [&](std::uint64_t mask) {
      c.mask = mask;
      auto cross = cross_parity_of(c);
      cls[mask] = cross ? (*cross == 0 ? 1 : 2) : 0;
    });
    for (const auto& [mask, k] : cls) {
      if (k != 1) continue;
      for (int v = 0; v < r.cells(); ++v) {
        auto it = cls.find(mask ^ (1ull << v));
        if (it != cls.end()) CHECK(it->second != 2);
      }
    }
  }
}

TEST_CASE("shift across the fault: strip size and additions (grid)") {
  Region r = Region::grid(4, 4);
  DiamondGraph dg(r);
  Configuration c(r);
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    if (cross_parity_of(c)) return;
    FaultWitness w = find_first_fault(c, dg);
    if (!w.vertical) return;
    ShiftResult s = shift_across_fault(c, w);
    CHECK(2 * static_cast<int>(s.between.size()) == r.height + w.length);
    CHECK(is_independent(s.shifted));
    Configuration full = s.shifted;
    for (int v : s.addable) full.set(v);
    CHECK(is_independent(full));
  });
}

TEST_CASE("shift across the fault pair (torus), sigma keeps both faults") {
  Configuration empty(Region::torus(4));
  FaultWitness w = find_first_fault(empty);
  ShiftResult s = shift_across_fault(empty, w);
  CHECK(is_independent(s.shifted));
  CHECK(2 * static_cast<int>(s.between.size()) == w.length);
  CHECK(validate_fault(s.shifted, w));

  Configuration dep(Region::grid(4, 4));
  FaultWitness bad = w;
  CHECK_THROWS_AS(shift_across_fault(dep, bad), std::invalid_argument);
}

TEST_CASE("phi injection torus: exhaustive injectivity and weights") {
  Region r = Region::torus(4);
  DiamondGraph dg(r);
  Configuration c(r);
  std::map<std::string, std::set<std::uint64_t>> images;
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    if (cross_parity_of(c)) return;
    FaultWitness w = find_first_fault(c, dg);
    ShiftResult s = shift_across_fault(c, w);
    std::string key;
    for (const DiamondVertex& v : w.path) key += std::to_string(dg.id(v)) + ",";
    key += ";";
    for (const DiamondVertex& v : w.second) key += std::to_string(dg.id(v)) + ",";
    int nr = static_cast<int>(s.addable.size());
    for (std::uint64_t rbits = 0; rbits < (1ull << nr); ++rbits) {
      std::vector<bool> bits(static_cast<std::size_t>(nr));
      for (int k = 0; k < nr; ++k) bits[static_cast<std::size_t>(k)] = (rbits >> k) & 1;
      Configuration phi = phi_injection(c, w, bits, std::nullopt);
      REQUIRE(is_independent(phi));
      REQUIRE(phi.count() == c.count() + __builtin_popcountll(rbits));
      REQUIRE(images[key].insert(phi.mask).second);
    }
  });
}

TEST_CASE("phi injection grid: deletes the last column, exhaustive") {
  Region r = Region::grid(4, 4);
  DiamondGraph dg(r);
  Configuration c(r);
  std::map<std::string, std::set<std::uint64_t>> images;
  for_each_independent_set(r, [&](std::uint64_t mask) {
    c.mask = mask;
    if (cross_parity_of(c)) return;
    FaultWitness w = find_first_fault(c, dg);
    if (!w.vertical) return;
    std::uint64_t col = 0;
    for (int y = 0; y < r.height; ++y)
      if (c.occupied(r.width - 1, y)) col |= 1ull << y;
    ShiftResult s = shift_across_fault(c, w);
    std::string key;
    for (const DiamondVertex& v : w.path) key += std::to_string(dg.id(v)) + ",";
    key += "|" + std::to_string(col);
    int nr = static_cast<int>(s.addable.size());
    for (std::uint64_t rbits = 0; rbits < (1ull << nr); ++rbits) {
      std::vector<bool> bits(static_cast<std::size_t>(nr));
      for (int k = 0; k < nr; ++k) bits[static_cast<std::size_t>(k)] = (rbits >> k) & 1;
      Configuration phi = phi_injection(c, w, bits, col);
      REQUIRE(is_independent(phi));
      REQUIRE(phi.count() ==
              c.count() - __builtin_popcountll(col) + __builtin_popcountll(rbits));
      REQUIRE(images[key].insert(phi.mask).second);
    }
  });
  // a wrong last-column hint is rejected
  Configuration empty(r);
  FaultWitness w = find_first_fault(empty, dg);
  CHECK_THROWS_AS(phi_injection(empty, w, {}, 0b1111ull), std::invalid_argument);
}

TEST_CASE("odd contour around a single odd vertex") {
  Region r = Region::grid(7, 7);
  Configuration c(r);
  c.set(3, 2);
  Contour k = odd_contour(c, r.index(3, 2));
  CHECK(k.gamma.size() == 12);
  CHECK(k.cycle.size() == 12);
  CHECK(k.even_minus_odd == 3);
  DiamondGraph dg(r);
  for (std::size_t drop = 0; drop < k.cycle.size(); ++drop) {
    std::vector<DiamondVertex> path;
    for (std::size_t i = 1; i <= k.cycle.size(); ++i)
      path.push_back(k.cycle[(drop + i) % k.cycle.size()]);
    CHECK(is_taxi_walk(fault_segment_taxi_steps(dg, path)));
  }
  for (Dir d : kAllDirs) {
    InteriorShift s = shift_interior(c, k, d);
    CHECK(s.freed.size() == 3);
    CHECK(is_independent(s.shifted));
    Configuration full = s.shifted;
    for (int v : s.freed) full.set(v);
    CHECK(is_independent(full));
  }
}

TEST_CASE("odd contour error paths") {
  Region r = Region::grid(5, 5);
  Configuration c(r);
  c.set(2, 2);  // even vertex
  CHECK_THROWS_AS(odd_contour(c, r.index(2, 2)), std::invalid_argument);
  Configuration edge(r);
  edge.set(0, 1);  // odd component touching the boundary
  CHECK_THROWS_AS(odd_contour(edge, r.index(0, 1)), std::invalid_argument);
}

TEST_CASE("random contours satisfy the counting laws") {
  Region r = Region::grid(8, 8);
  CounterRng rng{4242};
  std::uint64_t draw = 0;
  int checked = 0;
  while (checked < 60) {
    Configuration cfg(r);
    for (int y = 2; y < 6; ++y)
      for (int x = 2; x < 6; ++x)
        if (rng.uniform(draw++) < 0.35) {
          bool blocked = false;
          r.for_each_neighbor(x, y, [&](int nx, int ny) {
            blocked |= cfg.occupied(nx, ny);
          });
          if (!blocked) cfg.set(x, y);
        }
    int seed = -1;
    for (int v = 0; v < r.cells() && seed < 0; ++v)
      if (cfg.occupied(v) && r.parity(v) == 1) seed = v;
    if (seed < 0) continue;
    ++checked;
    Contour k = odd_contour(cfg, seed);
    CHECK(k.gamma.size() % 4 == 0);
    CHECK(k.gamma.size() >= 12);
    CHECK(static_cast<int>(k.gamma.size()) == 4 * k.even_minus_odd);
    // minimal cutset: dropping any single edge reconnects the two sides
    for (std::size_t e = 0; e < k.gamma.size(); e += 5) {
      std::vector<char> seen(static_cast<std::size_t>(r.cells()), 0);
      std::vector<int> q{k.gamma[e].second};
      seen[static_cast<std::size_t>(k.gamma[e].second)] = 1;
      bool reached = false;
      while (!q.empty() && !reached) {
        int v = q.back();
        q.pop_back();
        if (k.interior[static_cast<std::size_t>(v)]) reached = true;
        r.for_each_neighbor(r.x_of(v), r.y_of(v), [&](int nx, int ny) {
          int u = r.index(nx, ny);
          bool cut = false;
          for (std::size_t ge = 0; ge < k.gamma.size(); ++ge) {
            if (ge == e) continue;
            auto [a, b] = k.gamma[ge];
            if ((a == v && b == u) || (a == u && b == v)) cut = true;
          }
          if (!cut && !seen[static_cast<std::size_t>(u)]) {
            seen[static_cast<std::size_t>(u)] = 1;
            q.push_back(u);
          }
        });
      }
      CHECK(reached);
    }
    for (Dir d : kAllDirs) {
      InteriorShift s = shift_interior(cfg, k, d);
      CHECK(s.freed.size() == k.gamma.size() / 4);
      CHECK(is_independent(s.shifted));
      Configuration full = s.shifted;
      for (int v : s.freed) full.set(v);
      CHECK(is_independent(full));
      for (int v = 0; v < r.cells(); ++v)
        if (!k.interior[static_cast<std::size_t>(v)])
          CHECK(s.shifted.occupied(v) == cfg.occupied(v));
    }
  }
}

TEST_CASE("witness JSON carries the class and the index lists") {
  Configuration empty(Region::grid(4, 4));
  TopologyClass t = classify(empty);
  std::string json = t.to_json(empty);
  CHECK(json.find("fault_line") != std::string::npos);
  CHECK(json.find("\"path\"") != std::string::npos);

  Configuration cb = checkerboard(Region::grid(4, 4), 0);
  std::string cj = classify(cb).to_json(cb);
  CHECK(cj.find("even_cross") != std::string::npos);
  CHECK(cj.find("\"bridge_lr\"") != std::string::npos);
}
