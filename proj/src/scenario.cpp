#include "gridplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace gridplan {

std::string ContingencyScenario::key() const {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? '1' : '0';
  return out;
}

int ContingencyScenario::failures_in_period(int t) const {
  int count = 0;
  for (int l = 0; l < lines; ++l) count += z(l, t) == 0;
  return count;
}

ContingencyScenario ContingencyScenario::all_ones(const NetworkInstance& inst) {
  return ContingencyScenario(static_cast<int>(inst.lines.size()),
                             inst.periods, 1);
}

AmbiguitySet AmbiguitySet::from_instance(const NetworkInstance& inst) {
  AmbiguitySet a;
  a.n_z = inst.n_z;
  for (const auto& l : inst.lines) {
    a.mu_max.push_back(l.mu_max);
    a.tau_rst.push_back(l.tau_rst);
  }
  return a;
}

bool is_admissible(const ContingencyScenario& z, const NetworkInstance& inst) {
  const int L = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  if (z.lines != L || z.periods != T)
    throw std::invalid_argument("scenario dimensions mismatch instance");
  for (int t = 0; t < T; ++t)
    if (z.failures_in_period(t) > inst.n_z) return false;
  for (int l = 0; l < L; ++l) {
    const int tau = inst.lines[l].tau_rst;
    for (int t = 0; t < T; ++t) {
      if (z.z(l, t) != 0) continue;
      for (int d = 1; d <= tau && t + d < T; ++d)
        if (z.z(l, t + d) != 0) return false;
    }
  }
  return true;
}

namespace {

// Failures are sticky: a line failed in t-1 with tau >= 1 is still failed in
// t, and nothing else is forced (earlier failures inside their restoration
// window already forced t-1 to be failed).
std::vector<int> forced_next(const NetworkInstance& inst,
                             const std::vector<int>& failed_now) {
  std::vector<int> out;
  for (int l : failed_now)
    if (inst.lines[l].tau_rst >= 1) out.push_back(l);
  return out;
}

template <typename Fn>
void combos_rec(const std::vector<int>& free_lines, std::size_t start,
                int remaining, std::vector<int>& chosen,
                const std::vector<int>& forced, Fn& fn) {
  std::vector<int> s = forced;
  s.insert(s.end(), chosen.begin(), chosen.end());
  std::sort(s.begin(), s.end());
  fn(s);
  if (remaining == 0) return;
  for (std::size_t i = start; i < free_lines.size(); ++i) {
    chosen.push_back(free_lines[i]);
    combos_rec(free_lines, i + 1, remaining - 1, chosen, forced, fn);
    chosen.pop_back();
  }
}

// Every failure set containing `forced` with at most max_extra additions,
// each exactly once, ascending free-line indices.
template <typename Fn>
void for_each_failure_set(int num_lines, const std::vector<int>& forced,
                          int max_extra, Fn&& fn) {
  std::vector<std::uint8_t> in_forced(num_lines, 0);
  for (int l : forced) in_forced[l] = 1;
  std::vector<int> free_lines;
  for (int l = 0; l < num_lines; ++l)
    if (!in_forced[l]) free_lines.push_back(l);
  std::vector<int> chosen;
  combos_rec(free_lines, 0,
             std::min<int>(max_extra, static_cast<int>(free_lines.size())),
             chosen, forced, fn);
}

struct DfsDriver {
  const NetworkInstance& inst;
  std::uint64_t limit;
  bool collect;
  std::uint64_t count = 0;
  bool capped = false;
  std::vector<ContingencyScenario> out;
  ContingencyScenario work;

  DfsDriver(const NetworkInstance& inst_, std::uint64_t limit_, bool collect_)
      : inst(inst_), limit(limit_), collect(collect_),
        work(static_cast<int>(inst_.lines.size()), inst_.periods, 1) {}

  void run() { recurse(0, {}); }

  void recurse(int t, const std::vector<int>& forced) {
    if (capped) return;
    if (t == inst.periods) {
      ++count;
      if (count > limit) {
        capped = true;
        return;
      }
      if (collect) out.push_back(work);
      return;
    }
    const int L = static_cast<int>(inst.lines.size());
    for_each_failure_set(
        L, forced, inst.n_z - static_cast<int>(forced.size()),
        [&](const std::vector<int>& failed) {
          if (capped) return;
          for (int l = 0; l < L; ++l) work.set(l, t, 1);
          for (int l : failed) work.set(l, t, 0);
          recurse(t + 1, forced_next(inst, failed));
        });
    for (int l = 0; l < L; ++l) work.set(l, t, 1);
  }
};

}  // namespace

std::uint64_t count_scenarios(const NetworkInstance& inst,
                              std::uint64_t limit) {
  DfsDriver d(inst, limit, false);
  d.run();
  return d.count;  // limit+1 means "more than limit"
}

std::vector<ContingencyScenario> enumerate_scenarios(
    const NetworkInstance& inst, std::uint64_t limit) {
  std::uint64_t count = count_scenarios(inst, limit);
  if (count > limit)
    throw EnumerationError("admissible scenario count exceeds limit " +
                               std::to_string(limit) + " (at least " +
                               std::to_string(count) + ")",
                           count);
  DfsDriver d(inst, limit, true);
  d.run();
  std::sort(d.out.begin(), d.out.end(),
            [](const ContingencyScenario& a, const ContingencyScenario& b) {
              return a.bits < b.bits;
            });
  return d.out;
}

namespace {

// Maximal consecutive failed block of line l containing t flips back to
// working; keeps coupling intact and only lowers per-period failure counts.
void remove_outage_run(ContingencyScenario& z, int l, int t) {
  int a = t;
  while (a > 0 && z.z(l, a - 1) == 0) --a;
  int b = t;
  while (b + 1 < z.periods && z.z(l, b + 1) == 0) ++b;
  for (int u = a; u <= b; ++u) z.set(l, u, 1);
}

}  // namespace

FiniteDistribution sample_distribution(const AmbiguitySet& ambiguity,
                                       const NetworkInstance& inst,
                                       std::uint64_t seed, int draws) {
  const int L = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // the "true" per-line-period failure probabilities of this distribution
  std::vector<std::vector<double>> rho(L, std::vector<double>(T));
  for (int l = 0; l < L; ++l)
    for (int t = 0; t < T; ++t) rho[l][t] = u01(rng) * ambiguity.mu(l, t);

  std::vector<ContingencyScenario> samples;
  samples.reserve(draws);
  for (int s = 0; s < draws; ++s) {
    ContingencyScenario z(L, T, 1);
    std::vector<int> failed_prev;
    for (int t = 0; t < T; ++t) {
      std::vector<int> forced = forced_next(inst, failed_prev);
      std::vector<std::pair<double, int>> fresh;  // (rho, line)
      for (int l = 0; l < L; ++l) {
        if (std::find(forced.begin(), forced.end(), l) != forced.end())
          continue;
        if (u01(rng) < rho[l][t]) fresh.emplace_back(rho[l][t], l);
      }
      // budget repair: keep the largest-probability fresh failures
      int room = inst.n_z - static_cast<int>(forced.size());
      if (static_cast<int>(fresh.size()) > room) {
        std::stable_sort(fresh.begin(), fresh.end(),
                         [](const auto& a, const auto& b) {
                           return a.first > b.first;
                         });
        fresh.resize(room);
      }
      std::vector<int> failed = forced;
      for (const auto& [r, l] : fresh) failed.push_back(l);
      for (int l : failed) z.set(l, t, 0);
      failed_prev = std::move(failed);
    }
    samples.push_back(std::move(z));
  }

  // moment repair: thin whole outage runs until the empirical marginals sit
  // inside mu_max
  const double n = static_cast<double>(draws);
  for (int l = 0; l < L; ++l) {
    for (int t = 0; t < T; ++t) {
      int fails = 0;
      for (const auto& z : samples) fails += z.z(l, t) == 0;
      int allowed = static_cast<int>(std::floor(ambiguity.mu(l, t) * n + 1e-9));
      int excess = fails - allowed;
      for (int s = 0; s < draws && excess > 0; ++s)
        if (samples[s].z(l, t) == 0) {
          remove_outage_run(samples[s], l, t);
          --excess;
        }
    }
  }

  std::map<std::string, std::pair<ContingencyScenario, int>> dedup;
  for (auto& z : samples) {
    auto key = z.key();
    auto it = dedup.find(key);
    if (it == dedup.end())
      dedup.emplace(key, std::make_pair(std::move(z), 1));
    else
      ++it->second.second;
  }
  FiniteDistribution dist;
  for (auto& [key, entry] : dedup) {
    dist.support.push_back(std::move(entry.first));
    dist.probs.push_back(entry.second / n);
  }
  return dist;
}

ContingencyScenario sample_scenario(const FiniteDistribution& dist,
                                    std::mt19937_64& rng) {
  if (dist.support.empty())
    throw std::invalid_argument("empty distribution");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double u = u01(rng), acc = 0.0;
  for (std::size_t j = 0; j < dist.support.size(); ++j) {
    acc += dist.probs[j];
    if (u < acc) return dist.support[j];
  }
  return dist.support.back();
}

ContingencyScenario sample_scenario(const FiniteDistribution& dist,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_scenario(dist, rng);
}

std::vector<std::vector<double>> failure_moments(
    const FiniteDistribution& dist) {
  if (dist.support.empty()) return {};
  const int L = dist.support[0].lines;
  const int T = dist.support[0].periods;
  std::vector<std::vector<double>> mu(L, std::vector<double>(T, 0.0));
  for (std::size_t j = 0; j < dist.support.size(); ++j)
    for (int l = 0; l < L; ++l)
      for (int t = 0; t < T; ++t)
        if (dist.support[j].z(l, t) == 0) mu[l][t] += dist.probs[j];
  return mu;
}

}  // namespace gridplan
