#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "cfgeom/cfgeom.hpp"
#include "oracles.hpp"

using namespace cfgeom;

TEST_CASE("integer length counts lattice points, one cell at a time") {
  std::mt19937 rng(510u);
  std::uniform_int_distribution<int> coord(-20, 20);
  int done = 0;
  while (done < 200) {
    const LatticePoint a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    if (a == b) continue;
    ++done;
    CAPTURE(a.x.str(), a.y.str(), b.x.str(), b.y.str());
    CHECK(integer_length(a, b) == Int(oracle::count_integer_length(a, b)));
  }
  CHECK_THROWS_AS(integer_length({1, 1}, {1, 1}), std::domain_error);
}

TEST_CASE("integer sine equals the parallelogram point count") {
  std::mt19937 rng(511u);
  std::uniform_int_distribution<int> coord(-12, 12);
  int done = 0;
  while (done < 120) {
    const LatticePoint o{coord(rng), coord(rng)};
    const LatticePoint a{coord(rng), coord(rng)}, c{coord(rng), coord(rng)};
    const Int ux = a.x - o.x, uy = a.y - o.y, vx = c.x - o.x, vy = c.y - o.y;
    if ((a == o) || (c == o) || ux * vy == uy * vx) continue;
    ++done;
    // The sine is defined on the primitive directions, so the brute count
    // runs over the parallelogram they span.
    const Int gu = boost::multiprecision::gcd(boost::multiprecision::abs(ux),
                                              boost::multiprecision::abs(uy));
    const Int gv = boost::multiprecision::gcd(boost::multiprecision::abs(vx),
                                              boost::multiprecision::abs(vy));
    const LatticePoint pu{ux / gu, uy / gu}, pv{vx / gv, vy / gv};
    CAPTURE(pu.x.str(), pu.y.str(), pv.x.str(), pv.y.str());
    CHECK(integer_sine(a, o, c) == Int(oracle::count_parallelogram(pu, pv)));
  }
  CHECK_THROWS_AS(integer_sine({2, 2}, {0, 0}, {3, 3}), std::domain_error);
  CHECK_THROWS_AS(integer_sine({1, 1}, {1, 1}, {2, 0}), std::domain_error);
}

TEST_CASE("sail of 7/5 is the three-vertex figure") {
  const SailResult s = sail(ConeSpec{Rat(7, 5)});
  REQUIRE(s.vertices.size() == 3);
  CHECK(s.vertices[0] == LatticePoint{1, 0});
  CHECK(s.vertices[1] == LatticePoint{1, 1});
  CHECK(s.vertices[2] == LatticePoint{5, 7});
  CHECK(s.lls == CFSequence<Rat>{Rat(1), Rat(2), Rat(2)});
}

TEST_CASE("sail matches the brute-force hull") {
  std::mt19937 rng(512u);
  std::uniform_int_distribution<int> qd(1, 40);
  // A few fixed shapes first: boundary rays, integers, near-1 slopes.
  std::vector<std::pair<long, long>> cases{{1, 1}, {2, 1}, {9, 1},  {3, 2},
                                           {7, 5}, {11, 4}, {19, 7}, {40, 39}};
  while (cases.size() < 28) {
    const long q = qd(rng);
    std::uniform_int_distribution<long> pd(q, 40);
    cases.emplace_back(pd(rng), q);
  }
  for (const auto& [pp, qq] : cases) {
    const long g = std::gcd(pp, qq);
    const long p = pp / g, q = qq / g;
    const SailResult s = sail(ConeSpec{Rat(p, q)});
    const auto want = oracle::brute_sail(p, q);
    CAPTURE(p, q);
    REQUIRE(s.vertices.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
      CHECK(s.vertices[i].x == want[i].first);
      CHECK(s.vertices[i].y == want[i].second);
    }
  }
}

TEST_CASE("sail LLS evaluates back to the slope and matches the odd expansion") {
  std::mt19937 rng(513u);
  std::uniform_int_distribution<int> qd(1, 400);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = qd(rng);
    std::uniform_int_distribution<int> pd(q, std::min(400, 20 * q - 1));
    const int p = pd(rng);
    const Rat alpha(p, q);
    const SailResult s = sail(ConeSpec{alpha});
    CAPTURE(p, q);
    CHECK(eval_cf(s.lls) == ProjectiveRatio(alpha));
    CHECK(lls_of_sail(s) == s.lls);
    CHECK(s.lls == to_rational_sequence(expand_rational(alpha, Parity::odd)));
  }
}

TEST_CASE("sail endpoints read off the slope in lowest terms") {
  const SailResult s = sail(ConeSpec{Rat(14, 10)});  // reduces to 7/5
  REQUIRE(s.vertices.size() == 3);
  CHECK(s.vertices.back() == LatticePoint{5, 7});
  CHECK(s.vertices.front() == LatticePoint{1, 0});
}

TEST_CASE("sail rejects slopes below one") {
  CHECK_THROWS_AS(sail(ConeSpec{Rat(1, 2)}), std::domain_error);
  CHECK_THROWS_AS(sail(ConeSpec{Rat(0)}), std::domain_error);
  CHECK_THROWS_AS(sail(ConeSpec{Rat(-3, 2)}), std::domain_error);
}

TEST_CASE("integer sails are a single edge") {
  const SailResult s = sail(ConeSpec{Rat(4)});
  REQUIRE(s.vertices.size() == 2);
  CHECK(s.vertices[0] == LatticePoint{1, 0});
  CHECK(s.vertices[1] == LatticePoint{1, 4});
  CHECK(s.lls == CFSequence<Rat>{Rat(4)});
  CHECK(eval_cf(s.lls) == ProjectiveRatio(Int(4), Int(1)));
}
