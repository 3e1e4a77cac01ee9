#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridplan/instance.hpp"

namespace gridplan {

// Line availability over the horizon; z(l,t) = 1 means line l works in t.
struct ContingencyScenario {
  int lines = 0;
  int periods = 0;
  std::vector<std::uint8_t> bits;  // line-major: bits[l * periods + t]

  ContingencyScenario() = default;
  ContingencyScenario(int lines_, int periods_, std::uint8_t fill = 1)
      : lines(lines_), periods(periods_),
        bits(static_cast<std::size_t>(lines_) * periods_, fill) {}

  std::uint8_t z(int l, int t) const { return bits[l * periods + t]; }
  void set(int l, int t, std::uint8_t v) { bits[l * periods + t] = v; }
  // Flattened bit-string; doubles as identity for pool deduplication.
  std::string key() const;
  int failures_in_period(int t) const;
  bool operator==(const ContingencyScenario& o) const { return bits == o.bits; }

  static ContingencyScenario all_ones(const NetworkInstance& inst);
};

struct AmbiguitySet {
  std::vector<std::vector<double>> mu_max;  // [line][period]
  int n_z = 0;                              // mirrors the support budget
  std::vector<int> tau_rst;                 // mirrors per-line restoration time

  static AmbiguitySet from_instance(const NetworkInstance& inst);
  double mu(int l, int t) const { return mu_max[l][t]; }
};

struct FiniteDistribution {
  std::vector<ContingencyScenario> support;
  std::vector<double> probs;
};

bool is_admissible(const ContingencyScenario& z, const NetworkInstance& inst);

// Counting pass over the admissible set; cheap compared to materializing.
std::uint64_t count_scenarios(const NetworkInstance& inst,
                              std::uint64_t limit = UINT64_MAX);

struct EnumerationError : std::runtime_error {
  std::uint64_t count;
  EnumerationError(const std::string& what, std::uint64_t count_)
      : std::runtime_error(what), count(count_) {}
};

// Every admissible scenario exactly once, ascending lexicographic order of
// the flattened bit-string. Throws EnumerationError when count > limit.
std::vector<ContingencyScenario> enumerate_scenarios(
    const NetworkInstance& inst, std::uint64_t limit = 20000);

// Empirical distribution of `draws` independent-Bernoulli samples repaired
// into the support (failure cap, restoration coupling) and thinned until the
// empirical moments respect mu_max. Member of the ambiguity set by
// construction.
FiniteDistribution sample_distribution(const AmbiguitySet& ambiguity,
                                       const NetworkInstance& inst,
                                       std::uint64_t seed, int draws = 200);

ContingencyScenario sample_scenario(const FiniteDistribution& dist,
                                    std::uint64_t seed);
ContingencyScenario sample_scenario(const FiniteDistribution& dist,
                                    std::mt19937_64& rng);

// E[1 - z] per (line, period).
std::vector<std::vector<double>> failure_moments(const FiniteDistribution& dist);

}  // namespace gridplan
