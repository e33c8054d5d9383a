#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "vanet/analysis.hpp"
#include "vanet/errors.hpp"

using namespace vanet;
using namespace vanet::analysis;

TEST_CASE("the both-sides probability has known fixed points") {
  CHECK(prob_both_sides_closed_form(1) == 0.0);
  CHECK(prob_both_sides_closed_form(2) == doctest::Approx(0.5));
  CHECK(prob_both_sides_closed_form(3) == doctest::Approx(0.75));
  CHECK(prob_both_sides_closed_form(15) == doctest::Approx(0.99993896484375));
  // Rounded to five places for reporting.
  CHECK(std::round(prob_both_sides_closed_form(15) * 1e5) / 1e5 == 0.99994);
  CHECK_THROWS_AS(prob_both_sides_closed_form(0), ConfigError);
}

TEST_CASE("the both-sides probability increases strictly towards one") {
  double prev = -1.0;
  for (int n = 1; n <= 40; ++n) {
    double p = prob_both_sides_closed_form(n);
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
}

TEST_CASE("monte carlo estimates agree with the closed form") {
  for (int n : {1, 2, 3, 5, 10, 15}) {
    ProbResult r = prob_both_sides(n, 200'000, 99 + n);
    CHECK(r.n == n);
    CHECK(r.trials == 200'000);
    CHECK(r.within_4_sigma);
    CHECK(std::abs(r.monte_carlo - r.closed_form) < 0.01);
  }
}

TEST_CASE("degenerate neighborhoods give exact empirical extremes") {
  // One neighbor can never cover both sides; the estimator must say so
  // exactly, including its zero-variance edge.
  ProbResult one = prob_both_sides(1, 10'000, 5);
  CHECK(one.monte_carlo == 0.0);
  CHECK(one.mc_stderr == 0.0);
  CHECK(one.within_4_sigma);
}

TEST_CASE("estimator inputs are validated") {
  CHECK_THROWS_AS(prob_both_sides(0, 100, 1), ConfigError);
  CHECK_THROWS_AS(prob_both_sides(3, 0, 1), ConfigError);
}

TEST_CASE("exact verifier counts match the rank-order formulas") {
  for (int k = 1; k <= 12; ++k) {
    for (int p = 1; p <= 6; ++p) {
      CHECK(exact_verifier_count(k, p, obu::ElectionStrategy::p_nearest) ==
            std::min(p, k));
      CHECK(exact_verifier_count(k, p, obu::ElectionStrategy::paper_rule) ==
            (k < p ? k : k - p + 1));
    }
  }
  CHECK_THROWS_AS(exact_verifier_count(0, 5, obu::ElectionStrategy::p_nearest),
                  ConfigError);
  CHECK_THROWS_AS(exact_verifier_count(5, 0, obu::ElectionStrategy::p_nearest),
                  ConfigError);
}

TEST_CASE("random rosters always elect the deterministic count") {
  // The verifier count depends only on distance ranks, so the sampled
  // histogram collapses to a point mass at the exact count.
  for (int k : {1, 4, 9}) {
    for (int p : {1, 5}) {
      for (auto strategy : {obu::ElectionStrategy::p_nearest,
                            obu::ElectionStrategy::paper_rule}) {
        auto hist = sample_verifier_counts(k, p, strategy, 2'000, 17);
        REQUIRE(hist.size() == 1);
        CHECK(hist.begin()->first == exact_verifier_count(k, p, strategy));
        CHECK(hist.begin()->second == 2'000);
      }
    }
  }
}

TEST_CASE("sampling inputs are validated") {
  CHECK_THROWS_AS(
      sample_verifier_counts(0, 5, obu::ElectionStrategy::p_nearest, 10, 1),
      ConfigError);
  CHECK_THROWS_AS(
      sample_verifier_counts(5, 5, obu::ElectionStrategy::p_nearest, 0, 1),
      ConfigError);
}
