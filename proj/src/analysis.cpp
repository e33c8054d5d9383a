#include "vanet/analysis.hpp"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/rng.hpp"

namespace vanet::analysis {

double prob_both_sides_closed_form(int n) {
  if (n < 1) throw ConfigError("neighbor count must be at least 1");
  return 1.0 - 2.0 * std::pow(0.5, n);
}

ProbResult prob_both_sides(int n, std::uint64_t trials, std::uint64_t seed) {
  if (n < 1) throw ConfigError("neighbor count must be at least 1");
  if (trials == 0) throw ConfigError("trials must be positive");
  std::mt19937_64 rng(seed);
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool above = false, below = false;
    for (int i = 0; i < n && !(above && below); ++i) {
      if (bounded(rng, 2) == 0)
        below = true;
      else
        above = true;
    }
    if (above && below) ++successes;
  }
  ProbResult r;
  r.n = n;
  r.trials = trials;
  r.closed_form = prob_both_sides_closed_form(n);
  r.monte_carlo = static_cast<double>(successes) / static_cast<double>(trials);
  r.mc_stderr =
      std::sqrt(r.monte_carlo * (1.0 - r.monte_carlo) / static_cast<double>(trials));
  // Tolerance uses the closed-form variance: under the hypothesis the
  // estimator deviates by more than 4 sigma with probability < 1e-4.
  double sigma =
      std::sqrt(r.closed_form * (1.0 - r.closed_form) / static_cast<double>(trials));
  r.within_4_sigma = std::abs(r.monte_carlo - r.closed_form) <= 4.0 * sigma;
  return r;
}

namespace {

int count_verifiers(std::uint64_t sender,
                    const std::vector<std::uint64_t>& candidates, int p,
                    obu::ElectionStrategy strategy) {
  int verifiers = 0;
  for (std::uint64_t self : candidates)
    if (obu::is_verifier(self, sender, candidates, p, strategy)) ++verifiers;
  return verifiers;
}

}  // namespace

int exact_verifier_count(int k, int p, obu::ElectionStrategy strategy) {
  if (k < 1) throw ConfigError("candidate count must be at least 1");
  if (p < 1) throw ConfigError("p must be at least 1");
  // Fixed ids with distinct distances; the count depends only on the rank
  // order of distances, alternating candidates across both sides of the
  // sender to exercise the absolute-difference handling.
  const std::uint64_t sender = 1ULL << 63;
  std::vector<std::uint64_t> candidates;
  candidates.reserve(k);
  for (int j = 1; j <= k; ++j) {
    std::uint64_t off = static_cast<std::uint64_t>(j) * 1000;
    candidates.push_back(j % 2 == 0 ? sender + off : sender - off);
  }
  return count_verifiers(sender, candidates, p, strategy);
}

std::map<int, std::uint64_t> sample_verifier_counts(
    int k, int p, obu::ElectionStrategy strategy, std::uint64_t trials,
    std::uint64_t seed) {
  if (k < 1) throw ConfigError("candidate count must be at least 1");
  if (p < 1) throw ConfigError("p must be at least 1");
  if (trials == 0) throw ConfigError("trials must be positive");
  std::mt19937_64 rng(seed);
  std::map<int, std::uint64_t> histogram;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::set<std::uint64_t> ids;
    std::uint64_t sender = rng();
    ids.insert(sender);
    std::vector<std::uint64_t> candidates;
    candidates.reserve(k);
    while (candidates.size() < static_cast<std::size_t>(k)) {
      std::uint64_t id = rng();
      if (ids.insert(id).second) candidates.push_back(id);
    }
    ++histogram[count_verifiers(sender, candidates, p, strategy)];
  }
  return histogram;
}

}  // namespace vanet::analysis
