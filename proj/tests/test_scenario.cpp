#include <set>

#include "doctest.h"
#include "gridplan/scenario.hpp"

using namespace gridplan;

namespace {

NetworkInstance bench(int num_lines, int periods, int n_z, int tau) {
  // star of loads around one substation; only scenario machinery matters
  NetworkInstance inst;
  inst.periods = periods;
  for (int i = 1; i <= num_lines + 1; ++i) {
    NodeSpec n;
    n.id = i;
    n.is_substation = (i == 1);
    n.load_p.assign(periods, n.is_substation ? 0.0 : 10.0);
    n.load_q.assign(periods, 0.0);
    n.cap_p = n.is_substation ? 1000.0 : 0.0;
    inst.nodes.push_back(n);
  }
  for (int l = 0; l < num_lines; ++l) {
    LineSpec ln;
    ln.from = 1;
    ln.to = l + 2;
    ln.cost = 1.0;
    ln.resistance = 0.01;
    ln.reactance = 0.01;
    ln.cap_p = 100.0;
    ln.cap_q = 100.0;
    ln.mu_max.assign(periods, 0.2);
    ln.tau_rst = tau;
    inst.lines.push_back(ln);
  }
  inst.budget_cost = 100.0;
  inst.n_z = n_z;
  inst.v_ref = 1000.0;
  return inst;
}

std::uint64_t brute_count(const NetworkInstance& inst) {
  const int L = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  const int bits = L * T;
  REQUIRE(bits <= 20);
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask) {
    ContingencyScenario z(L, T, 1);
    for (int b = 0; b < bits; ++b)
      if (mask & (1ull << b)) z.bits[b] = 0;
    if (is_admissible(z, inst)) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("admissibility basics") {
  auto inst = bench(3, 2, 1, 0);
  auto ones = ContingencyScenario::all_ones(inst);
  CHECK(is_admissible(ones, inst));

  auto two_fail = ones;
  two_fail.set(0, 0, 0);
  two_fail.set(1, 0, 0);
  CHECK(!is_admissible(two_fail, inst));  // two outages, N_z = 1

  auto inst_tau = bench(1, 2, 1, 2);
  auto recovers = ContingencyScenario::all_ones(inst_tau);
  recovers.set(0, 0, 0);  // fails at t=0, works at t=1
  CHECK(!is_admissible(recovers, inst_tau));
  auto stays = recovers;
  stays.set(0, 1, 0);
  CHECK(is_admissible(stays, inst_tau));

  ContingencyScenario wrong(5, 1, 1);
  CHECK_THROWS(is_admissible(wrong, inst));
}

TEST_CASE("enumerate: 3 lines, 1 period, N_z = 1 gives 4") {
  auto inst = bench(3, 1, 1, 0);
  auto zs = enumerate_scenarios(inst);
  CHECK(zs.size() == 4);  // no-failure plus 3 singletons
  std::set<std::string> keys;
  for (const auto& z : zs) {
    CHECK(is_admissible(z, inst));
    keys.insert(z.key());
  }
  CHECK(keys.size() == zs.size());
}

TEST_CASE("enumerate: 2 lines, 2 periods, N_z = 2, tau 0 gives 16") {
  auto inst = bench(2, 2, 2, 0);
  auto zs = enumerate_scenarios(inst);
  CHECK(zs.size() == 16);  // every bitmask admissible
}

TEST_CASE("enumerate: restoration coupling prunes recovery") {
  auto inst = bench(1, 2, 1, 1);
  auto zs = enumerate_scenarios(inst);
  REQUIRE(zs.size() == 3);  // (1,1),(0,0),(1,0); (0,1) violates coupling
  std::set<std::string> keys;
  for (const auto& z : zs) keys.insert(z.key());
  CHECK(keys.count("11"));
  CHECK(keys.count("00"));
  CHECK(keys.count("10"));
}

TEST_CASE("enumeration matches brute force and counting formula") {
  for (int tau : {0, 1, 2}) {
    auto inst = bench(3, 3, 2, tau);
    auto zs = enumerate_scenarios(inst);
    CHECK(zs.size() == brute_count(inst));
    CHECK(count_scenarios(inst) == zs.size());
    std::set<std::string> keys;
    for (const auto& z : zs) {
      CHECK(is_admissible(z, inst));
      keys.insert(z.key());
    }
    CHECK(keys.size() == zs.size());  // exactly once
    CHECK(std::is_sorted(zs.begin(), zs.end(),
                         [](const auto& a, const auto& b) {
                           return a.bits < b.bits;
                         }));
  }
}

TEST_CASE("tau 0 count equals per-period product formula") {
  auto choose = [](int n, int k) {
    double c = 1;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return static_cast<std::uint64_t>(c + 0.5);
  };
  for (int L : {2, 4}) {
    for (int T : {1, 2, 3}) {
      auto inst = bench(L, T, 2, 0);
      std::uint64_t per_period = 0;
      for (int k = 0; k <= 2; ++k) per_period += choose(L, k);
      std::uint64_t expect = 1;
      for (int t = 0; t < T; ++t) expect *= per_period;
      CHECK(count_scenarios(inst) == expect);
    }
  }
}

TEST_CASE("enumeration explosion reports") {
  auto inst = bench(4, 4, 2, 0);  // 11^4 = 14641
  CHECK_THROWS_AS((void)enumerate_scenarios(inst, 100), EnumerationError);
  try {
    (void)enumerate_scenarios(inst, 100);
  } catch (const EnumerationError& e) {
    CHECK(e.count == 101);  // capped counting pass
  }
  CHECK(enumerate_scenarios(inst, 20000).size() == 14641);
}

TEST_CASE("sampled distribution is a member of the ambiguity set") {
  auto inst = bench(4, 3, 2, 1);
  for (auto& l : inst.lines) l.mu_max.assign(3, 0.15);
  auto amb = AmbiguitySet::from_instance(inst);
  auto dist = sample_distribution(amb, inst, 42, 300);
  REQUIRE(!dist.support.empty());
  double total = 0.0;
  for (double p : dist.probs) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& z : dist.support) CHECK(is_admissible(z, inst));
  auto mu = failure_moments(dist);
  for (std::size_t l = 0; l < inst.lines.size(); ++l)
    for (int t = 0; t < inst.periods; ++t)
      CHECK(mu[l][t] <= amb.mu(static_cast<int>(l), t) + 1e-9);
}

TEST_CASE("mu zero forces point mass on all-ones") {
  auto inst = bench(3, 2, 2, 0);
  for (auto& l : inst.lines) l.mu_max.assign(2, 0.0);
  auto amb = AmbiguitySet::from_instance(inst);
  auto dist = sample_distribution(amb, inst, 5, 100);
  REQUIRE(dist.support.size() == 1);
  CHECK(dist.probs[0] == doctest::Approx(1.0));
  CHECK(dist.support[0].key() == ContingencyScenario::all_ones(inst).key());
}

TEST_CASE("sampling is deterministic in the seed") {
  auto inst = bench(4, 2, 2, 1);
  auto amb = AmbiguitySet::from_instance(inst);
  auto a = sample_distribution(amb, inst, 7, 200);
  auto b = sample_distribution(amb, inst, 7, 200);
  REQUIRE(a.support.size() == b.support.size());
  for (std::size_t j = 0; j < a.support.size(); ++j) {
    CHECK(a.support[j].key() == b.support[j].key());
    CHECK(a.probs[j] == b.probs[j]);
  }
}

TEST_CASE("scenario draws follow the distribution") {
  FiniteDistribution dist;
  ContingencyScenario z0(2, 1, 1), z1(2, 1, 1);
  z1.set(0, 0, 0);
  dist.support = {z0, z1};
  dist.probs = {0.5, 0.5};
  std::mt19937_64 rng(123);
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (sample_scenario(dist, rng) == z0) ++hits;
  CHECK(std::abs(hits / double(draws) - 0.5) < 0.01);

  FiniteDistribution point;
  point.support = {z1
  };
  point.probs = {1.0};
  CHECK(sample_scenario(point, 9).key() == z1.key());
}
