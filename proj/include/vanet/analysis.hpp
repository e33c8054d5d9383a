#pragma once

#include <cstdint>
#include <map>

#include "vanet/obu.hpp"

namespace vanet::analysis {

// Probability that a sender with n neighbors of i.i.d. random ids has at
// least one neighbor on each side of its own id:
//   p(n) = 1 - 2 * (1/2)^n   (n >= 1)
// Each neighbor falls on either side with probability 1/2; subtract the
// all-above and all-below events.
double prob_both_sides_closed_form(int n);

struct ProbResult {
  int n = 0;
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  std::uint64_t trials = 0;
  double mc_stderr = 0.0;    // empirical binomial standard error
  bool within_4_sigma = false;  // against the closed-form variance
};

// Monte Carlo estimate with `trials` independent neighborhoods.
// Throws ConfigError when n < 1 or trials == 0.
ProbResult prob_both_sides(int n, std::uint64_t trials, std::uint64_t seed);

// Number of receivers that elect themselves verifier when all k candidates
// share full knowledge of the same mutual-neighbor set (distinct distances
// from the sender). Independent of the concrete ids.
int exact_verifier_count(int k, int p, obu::ElectionStrategy strategy);

// Histogram of verifier counts over random id draws: `trials` neighborhoods
// of k candidates with uniformly random distinct ids.
std::map<int, std::uint64_t> sample_verifier_counts(
    int k, int p, obu::ElectionStrategy strategy, std::uint64_t trials,
    std::uint64_t seed);

}  // namespace vanet::analysis
