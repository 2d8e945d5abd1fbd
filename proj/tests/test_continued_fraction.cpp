#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cfgeom/cfgeom.hpp"
#include "oracles.hpp"

using namespace cfgeom;

namespace {

Rat random_rat(std::mt19937& rng, int num_lo, int num_hi, int den_hi) {
  std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, den_hi);
  return Rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("worked evaluations with mixed-sign and rational elements") {
  const CFSequence<Rat> a{Rat(2), Rat(-1), Rat(3), Rat(-2), Rat(1)};
  CHECK(eval_cf(a) == ProjectiveRatio(Int(0), Int(1)));

  const CFSequence<Rat> b{Rat(1), Rat(-2), Rat(2), Rat(-1, 2), Rat(-4)};
  CHECK(eval_cf(b) == ProjectiveRatio(Int(-1), Int(1)));
}

TEST_CASE("continuant table of the closing sequence") {
  const CFSequence<Rat> seq{Rat(2), Rat(-1), Rat(3), Rat(-2), Rat(1)};
  const auto pairs = continuants(seq);
  REQUIRE(pairs.size() == 5);
  const std::vector<int> want_p{2, -1, -1, 1, 0}, want_q{1, -1, -2, 3, 1};
  for (size_t k = 0; k < 5; ++k) {
    CHECK(pairs[k].p == Rat(want_p[k]));
    CHECK(pairs[k].q == Rat(want_q[k]));
  }
  CHECK(final_continuant(seq) == pairs.back());
}

TEST_CASE("bottom-up fold agrees with the continuant evaluation") {
  std::mt19937 rng(20260815u);
  std::uniform_int_distribution<int> len_dist(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = len_dist(rng);
    CFSequence<Rat> seq;
    for (int i = 0; i < len; ++i) seq.push_back(random_rat(rng, -6, 6, 4));
    const auto [num, den] = oracle::fold_cf(seq);
    CAPTURE(trial, len);
    CHECK(eval_cf(seq) == ProjectiveRatio::from_pair(num, den));
  }
}

TEST_CASE("determinant identity holds for arbitrary elements, zeros included") {
  std::mt19937 rng(77u);
  std::uniform_int_distribution<int> len_dist(2, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = len_dist(rng);
    CFSequence<Rat> seq;
    for (int i = 0; i < len; ++i) seq.push_back(random_rat(rng, -5, 5, 3));
    const auto pairs = continuants(seq);
    // k = 0 against the seeds (P_{-1}, Q_{-1}) = (1, 0).
    CHECK(pairs[0].p * Rat(0) - Rat(1) * pairs[0].q == Rat(-1));
    for (size_t k = 1; k < pairs.size(); ++k) {
      const Rat det = pairs[k].p * pairs[k - 1].q - pairs[k - 1].p * pairs[k].q;
      CAPTURE(trial, k);
      CHECK(det == (k % 2 == 0 ? Rat(-1) : Rat(1)));
    }
  }
}

TEST_CASE("prefix ending in infinity still evaluates") {
  // [2, 1, 0]: the tail [1, 0] evaluates to 1 + 1/0 = infinity, and
  // 2 + 1/infinity folds back to 2.
  const CFSequence<Rat> seq{Rat(2), Rat(1), Rat(0)};
  CHECK(eval_cf(seq) == ProjectiveRatio(Int(2), Int(1)));
  // [1, -1]: 1 + 1/(-1) ... the full value is 1 - 1 = 0's reciprocal
  // structure: P = -1*1+... check against the oracle fold instead of hand
  // arithmetic.
  const CFSequence<Rat> inf_val{Rat(1), Rat(-1), Rat(1)};
  const auto [num, den] = oracle::fold_cf(inf_val);
  CHECK(eval_cf(inf_val) == ProjectiveRatio::from_pair(num, den));
}

TEST_CASE("empty sequences are rejected") {
  CHECK_THROWS_AS(continuants(CFSequence<Rat>{}), std::domain_error);
  CHECK_THROWS_AS(final_continuant(CFSequence<Rat>{}), std::domain_error);
  CHECK_THROWS_AS(eval_cf_approx(CFSequence<double>{}), std::domain_error);
}

TEST_CASE("ordinary expansions round-trip with both parities") {
  std::mt19937 rng(4242u);
  std::uniform_int_distribution<int> num(-10000, 10000), den(1, 500);
  for (int trial = 0; trial < 500; ++trial) {
    const Rat x(num(rng), den(rng));
    for (Parity parity : {Parity::odd, Parity::even}) {
      const std::vector<Int> terms = expand_rational(x, parity);
      const bool want_odd = parity == Parity::odd;
      CAPTURE(trial, format_scalar(x), want_odd);
      CHECK((terms.size() % 2 == 1) == want_odd);
      for (size_t i = 1; i < terms.size(); ++i) CHECK(terms[i] >= 1);
      CHECK(eval_cf(to_rational_sequence(terms)) == ProjectiveRatio(x));
    }
  }
}

TEST_CASE("expansion of 7/5 matches the sail reading") {
  const std::vector<Int> odd = expand_rational(Rat(7, 5), Parity::odd);
  REQUIRE(odd.size() == 3);
  CHECK((odd[0] == 1 && odd[1] == 2 && odd[2] == 2));
  const std::vector<Int> even = expand_rational(Rat(7, 5), Parity::even);
  REQUIRE(even.size() == 4);
  CHECK((even[0] == 1 && even[1] == 2 && even[2] == 1 && even[3] == 1));
}

TEST_CASE("integer inputs expand to both parities") {
  const std::vector<Int> odd = expand_rational(Rat(4), Parity::odd);
  REQUIRE(odd.size() == 1);
  CHECK(odd[0] == 4);
  const std::vector<Int> even = expand_rational(Rat(4), Parity::even);
  REQUIRE(even.size() == 2);
  CHECK((even[0] == 3 && even[1] == 1));
  CHECK(eval_cf(to_rational_sequence(even)) == ProjectiveRatio(Int(4), Int(1)));
}

TEST_CASE("real expansion recovers familiar prefixes") {
  const double pi = std::acos(-1.0);
  const std::vector<Int> terms = expand_real(pi, 5, 1e-12);
  REQUIRE(terms.size() >= 4);
  CHECK(terms[0] == 3);
  CHECK(terms[1] == 7);
  CHECK(terms[2] == 15);
  CHECK(terms[3] == 1);
  const auto [p, q] = eval_cf_approx(to_double_sequence(terms));
  CHECK(std::fabs(p / q - pi) < 1e-8);

  // Values that are integers up to roundoff must not spawn huge tails.
  const std::vector<Int> t2 = expand_real(1.0 / 0.4, 10, 1e-9);
  REQUIRE(t2.size() <= 3);
  const auto [p2, q2] = eval_cf_approx(to_double_sequence(t2));
  CHECK(std::fabs(p2 / q2 - 2.5) < 1e-8);
}

TEST_CASE("floating evaluation tracks the exact one") {
  std::mt19937 rng(99u);
  std::uniform_int_distribution<int> elem(-8, 8);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    CFSequence<Rat> exact;
    CFSequence<double> approx;
    std::uniform_int_distribution<int> len_dist(1, 12);
    const int len = len_dist(rng);
    for (int i = 0; i < len; ++i) {
      const int a = elem(rng);
      exact.push_back(Rat(a));
      approx.push_back(a);
    }
    const ProjectiveRatio want = eval_cf(exact);
    const auto [p, q] = eval_cf_approx(approx);
    if (want.is_infinite() || std::fabs(q) < 1e-9) continue;  // compare finite values only
    ++compared;
    CHECK(std::fabs(p / q - to_double(want.value())) <=
          1e-9 * std::max(1.0, std::fabs(p / q)));
  }
  CHECK(compared > 100);
}

TEST_CASE("floating evaluation survives huge intermediate growth") {
  CFSequence<double> seq(400, 6.0);
  const auto [p, q] = eval_cf_approx(seq);
  REQUIRE(std::isfinite(p));
  REQUIRE(std::isfinite(q));
  // Value of the periodic fraction [6; 6, 6, ...] = 3 + sqrt(10).
  CHECK(std::fabs(p / q - (3.0 + std::sqrt(10.0))) < 1e-12);
}
