#include <doctest.h>

#include "hc2/errors.hpp"
#include "hc2/hardcore.hpp"

using namespace hc2;

TEST_CASE("independence checks") {
  Configuration empty(Region::grid(3, 3));
  CHECK(is_independent(empty));

  Configuration pair(Region::grid(3, 3));
  pair.set(0, 0);
  pair.set(1, 0);
  CHECK_FALSE(is_independent(pair));

  CHECK(is_independent(checkerboard(Region::grid(4, 4), 0)));
  CHECK(is_independent(checkerboard(Region::torus(4), 0)));
  CHECK(is_independent(checkerboard(Region::torus(4), 1)));

  // Torus wrap catches seam pairs.
  Configuration seam(Region::torus(4));
  seam.set(0, 1);
  seam.set(3, 1);
  CHECK_FALSE(is_independent(seam));
}

TEST_CASE("toroidal regions need even sides") {
  CHECK_THROWS_AS(Region(3, 4, Boundary::Toroidal), std::invalid_argument);
  CHECK_NOTHROW(Region(4, 4, Boundary::Toroidal));
}

TEST_CASE("grid literals round-trip, top row first") {
  Configuration c = Configuration::from_grid("o..\n..o\n...\n");
  CHECK(c.region.width == 3);
  CHECK(c.region.height == 3);
  CHECK(c.occupied(0, 2));
  CHECK(c.occupied(2, 1));
  CHECK(c.count() == 2);
  CHECK(Configuration::from_grid(c.to_grid()) == c);
  CHECK_THROWS_AS(Configuration::from_grid("ox\n..\n"), format_error);
  CHECK_THROWS_AS(Configuration::from_grid("o.\n...\n"), format_error);
}

TEST_CASE("independent set counts match known values") {
  CHECK(enumerate_configurations(Region::grid(1, 1)).size() == 2);
  CHECK(enumerate_configurations(Region::grid(2, 2)).size() == 7);
  CHECK(enumerate_configurations(Region::grid(3, 3)).size() == 63);
  CHECK(partition_function_exact(Region::grid(4, 4)).total_sets() == 1234);
  CHECK(partition_function_exact(Region::grid(5, 5)).total_sets() == 55447);
}

TEST_CASE("enumeration is deterministic and lists each set once") {
  auto a = enumerate_configurations(Region::grid(3, 2));
  auto b = enumerate_configurations(Region::grid(3, 2));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(is_independent(a[i]));
    for (std::size_t j = i + 1; j < a.size(); ++j)
      CHECK(a[i].mask != a[j].mask);
  }
}

TEST_CASE("enumeration cap is enforced") {
  CHECK_THROWS_AS(enumerate_configurations(Region::grid(8, 8), 36),
                  resource_cap_error);
}

TEST_CASE("partition polynomials of tiny regions") {
  PartitionPolynomial z1 = partition_function_exact(Region::grid(1, 1));
  REQUIRE(z1.size_counts.size() == 2);
  CHECK(z1.size_counts[0] == 1);
  CHECK(z1.size_counts[1] == 1);  // Z = 1 + x

  PartitionPolynomial z12 = partition_function_exact(Region::grid(2, 1));
  REQUIRE(z12.size_counts.size() == 2);
  CHECK(z12.size_counts[1] == 2);  // Z = 1 + 2x

  PartitionPolynomial z22 = partition_function_exact(Region::grid(2, 2));
  REQUIRE(z22.size_counts.size() == 3);
  CHECK(z22.size_counts[0] == 1);
  CHECK(z22.size_counts[1] == 4);
  CHECK(z22.size_counts[2] == 2);  // Z = 1 + 4x + 2x^2

  CHECK(z22.value(Rational(1)) == Rational(7));
  CHECK(z22.value(2.0) == doctest::Approx(17.0));
}

TEST_CASE("Z is monotone in the activity and Z(0) = 1") {
  PartitionPolynomial z = partition_function_exact(Region::grid(4, 3));
  CHECK(z.value(0.0) == 1.0);
  double prev = 1.0;
  for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double cur = z.value(lam);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("torus occupancy histogram is parity symmetric at the top") {
  Region t = Region::torus(4);
  PartitionPolynomial z = partition_function_exact(t);
  // the two checkerboards are the only maximum-occupancy sets
  REQUIRE(z.size_counts.size() == static_cast<std::size_t>(t.cells()) / 2 + 1);
  CHECK(z.size_counts.back() == 2);
}

TEST_CASE("strip recurrence base cases and closed form") {
  GibbsParams p{0.7};
  CHECK(strip_partition_function(0, p) == doctest::Approx(1.0));
  CHECK(strip_partition_function(1, p) == doctest::Approx(1.7));
  CHECK(strip_partition_function(2, p) == doctest::Approx(1.0 + 2 * 0.7));
  CHECK(strip_growth_rate(2.0) == doctest::Approx((1.0 + 3.0) / 2.0));
}

TEST_CASE("strip recurrence equals brute force on 1 x n") {
  for (const Rational& lam : {Rational(1), Rational(1, 3), Rational(5, 2)}) {
    for (int n = 1; n <= 12; ++n) {
      PartitionPolynomial z = partition_function_exact(Region::grid(n, 1));
      CHECK(strip_partition_function_exact(n, lam) == z.value(lam));
    }
  }
}
