#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mpc/families.hpp"
#include "mpc/hc_engine.hpp"
#include "mpc/powmath.hpp"
#include "test_support.hpp"

using namespace mpc;

TEST_CASE("share plans for the worked examples") {
  // triangle at p=8: uniform cover gives a 2x2x2 grid
  Query c3 = make_cycle_query(3);
  SharePlan plan = make_share_plan(c3, optimal_cover(c3), 8, 1);
  CHECK(plan.exponents == std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});
  CHECK(plan.shares == std::vector<std::uint32_t>{2, 2, 2});
  CHECK(plan.p_used == 8);

  // star at p=5: everything rides on the center variable
  Query t3 = make_star_query(3);
  SharePlan tplan = make_share_plan(t3, optimal_cover(t3), 5, 1);
  CHECK(tplan.shares == std::vector<std::uint32_t>{5, 1, 1, 1});

  // p=1 degenerates to a single server
  SharePlan one = make_share_plan(c3, optimal_cover(c3), 1, 1);
  CHECK(one.shares == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(one.p_used == 1);

  // two-way join at p=4 puts the whole grid on the join variable
  Query l2 = make_path_query(2);
  SharePlan lplan = make_share_plan(l2, optimal_cover(l2), 4, 1);
  CHECK(lplan.shares == std::vector<std::uint32_t>{1, 4, 1});

  CHECK_THROWS_AS(make_share_plan(c3, optimal_cover(c3), 0, 1), std::invalid_argument);
}

TEST_CASE("greedy integer shares stay within p") {
  SplitMix rng(77);
  for (int i = 0; i < 30; ++i) {
    Query q = mpc::testsupport::random_connected_query(rng, 5, 5, 3);
    std::uint64_t p = 1 + rng.below(100);
    SharePlan plan = make_share_plan(q, optimal_cover(q), p, i);
    std::uint64_t prod = 1;
    for (auto s : plan.shares) {
      CHECK(s >= 1);
      prod *= s;
    }
    CHECK(prod == plan.p_used);
    CHECK(prod <= p);
  }
}

TEST_CASE("routing fixes atom coordinates and ranges over the rest") {
  Query c3 = make_cycle_query(3);
  SharePlan plan = make_share_plan(c3, optimal_cover(c3), 8, 42);

  std::vector<std::uint32_t> tuple{5, 9};
  auto dests = route_tuple(plan, c3.atoms[0], tuple);  // S1(x1,x2): x3 free
  CHECK(dests.size() == 2);
  std::set<std::uint64_t> unique(dests.begin(), dests.end());
  CHECK(unique.size() == 2);

  // an atom containing every variable routes to exactly one server
  Query all = parse_query("Q(x,y) :- S(x,y)");
  SharePlan aplan = make_share_plan(all, optimal_cover(all), 4, 1);
  std::vector<std::uint32_t> t2{1, 2};
  CHECK(route_tuple(aplan, all.atoms[0], t2).size() == 1);

  // star: absent variables all have share 1, so one destination
  Query t3 = make_star_query(3);
  SharePlan tplan = make_share_plan(t3, optimal_cover(t3), 5, 1);
  std::vector<std::uint32_t> t3t{4, 2};
  CHECK(route_tuple(tplan, t3.atoms[0], t3t).size() == 1);
}

TEST_CASE("replication count matches the free-dimension product") {
  SplitMix rng(5);
  Query c4 = make_cycle_query(4);
  SharePlan plan = make_share_plan(c4, optimal_cover(c4), 16, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::uint32_t> tuple{static_cast<std::uint32_t>(1 + rng.below(100)),
                                     static_cast<std::uint32_t>(1 + rng.below(100))};
    for (const auto& atom : c4.atoms) {
      std::uint64_t expect = 1;
      for (std::size_t d = 0; d < plan.vars.size(); ++d) {
        bool in_atom = std::find(atom.vars.begin(), atom.vars.end(), plan.vars[d]) !=
                       atom.vars.end();
        if (!in_atom) expect *= plan.shares[d];
      }
      CHECK(route_tuple(plan, atom, tuple).size() == expect);
    }
  }
}

TEST_CASE("one round equals the oracle") {
  BudgetSpec budget;
  for (auto [family, p] : std::vector<std::pair<Query, std::uint64_t>>{
           {make_path_query(2), 4},
           {make_path_query(3), 4},
           {make_star_query(3), 4},
           {make_cycle_query(3), 8},
           {make_binom_query(3, 2), 8}}) {
    CoverSolution cover = optimal_cover(family);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      MatchingDatabase db = generate(family, 64, seed);
      SharePlan plan = make_share_plan(family, cover, p, seed * 31 + 7);
      RoundResult res = run_one_round(family, db, plan, budget);
      CHECK(res.answers == oracle_eval(family, db));
      CHECK(res.load.answers_found == res.answers.size());
    }
  }
}

TEST_CASE("completeness does not need exact-power server counts") {
  Query c3 = make_cycle_query(3);
  CoverSolution cover = optimal_cover(c3);
  for (std::uint64_t p : {5, 10, 100}) {
    SharePlan plan = make_share_plan(c3, cover, p, 3);
    CHECK(plan.p_used <= p);
    MatchingDatabase db = generate(c3, 64, 7);
    RoundResult res = run_one_round(c3, db, plan, BudgetSpec{});
    CHECK(res.answers == oracle_eval(c3, db));
  }
}

TEST_CASE("single server receives everything and answers exactly") {
  Query c3 = make_cycle_query(3);
  MatchingDatabase db = generate(c3, 128, 11);
  SharePlan plan = make_share_plan(c3, optimal_cover(c3), 1, 2);
  RoundResult res = run_one_round(c3, db, plan, BudgetSpec{});
  CHECK(res.answers == oracle_eval(c3, db));
  CHECK(res.load.per_server.size() == 1);
  CHECK(res.load.per_server[0].tuples == 3 * 128);
}

TEST_CASE("serial and parallel workers agree") {
  Query c4 = make_cycle_query(4);
  MatchingDatabase db = generate(c4, 256, 3);
  SharePlan plan = make_share_plan(c4, optimal_cover(c4), 16, 5);
  RoundResult serial = run_one_round(c4, db, plan, BudgetSpec{}, ExecMode::serial);
  RoundResult parallel = run_one_round(c4, db, plan, BudgetSpec{}, ExecMode::parallel);
  CHECK(serial.answers == parallel.answers);
  REQUIRE(serial.load.per_server.size() == parallel.load.per_server.size());
  for (std::size_t s = 0; s < serial.load.per_server.size(); ++s) {
    CHECK(serial.load.per_server[s].tuples == parallel.load.per_server[s].tuples);
    CHECK(serial.load.per_server[s].bits == parallel.load.per_server[s].bits);
  }
}

TEST_CASE("per-server load stays near the expectation") {
  // two-way join at p=4 on the middle variable: each server expects 2n/4 tuples
  Query l2 = make_path_query(2);
  const std::size_t n = 4096;
  CoverSolution cover = optimal_cover(l2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MatchingDatabase db = generate(l2, n, seed);
    SharePlan plan = make_share_plan(l2, cover, 4, seed);
    RoundResult res = run_one_round(l2, db, plan, BudgetSpec{});
    std::uint64_t total = 0;
    for (const auto& load : res.load.per_server) total += load.tuples;
    CHECK(total == 2 * n);  // each tuple goes to exactly one server
    CHECK(res.load.max_load_tuples <= 2 * (2 * n / 4));
  }
}

TEST_CASE("budget accounting and truncation") {
  Query l2 = make_path_query(2);
  MatchingDatabase db = generate(l2, 64, 1);
  SharePlan plan = make_share_plan(l2, optimal_cover(l2), 4, 1);

  BudgetSpec loose{4.0, Rat(0), false};
  RoundResult full = run_one_round(l2, db, plan, loose);
  CHECK_FALSE(full.load.exceeded);
  CHECK(full.answers.size() == 64);

  // a starvation budget: verdict flips, answers get truncated, and the
  // offered load is still reported in full
  BudgetSpec tight{0.01, Rat(0), true};
  RoundResult cut = run_one_round(l2, db, plan, tight);
  CHECK(cut.load.exceeded);
  CHECK(cut.answers.size() < 64);
  CHECK(cut.answers.subset_of(full.answers));
  std::uint64_t offered_full = 0, offered_cut = 0;
  for (const auto& s : full.load.per_server) offered_full += s.tuples;
  for (const auto& s : cut.load.per_server) offered_cut += s.tuples;
  CHECK(offered_full == offered_cut);

  // with enforcement off the verdict is data, not a change in behavior
  BudgetSpec tight_off{0.01, Rat(0), false};
  RoundResult flagged = run_one_round(l2, db, plan, tight_off);
  CHECK(flagged.load.exceeded);
  CHECK(flagged.answers.size() == 64);
}

TEST_CASE("partial one-round answers are a subset of the oracle") {
  Query l4 = make_path_query(4);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MatchingDatabase db = generate(l4, 64, seed);
    RoundResult res = run_partial_one_round(l4, db, 16, Rat(0), seed);
    AnswerSet oracle = oracle_eval(l4, db);
    CHECK(res.answers.subset_of(oracle));
  }
}

TEST_CASE("partial run with every cell sampled equals the full run") {
  // triangle at eps=0: virtual cube has p^(3/2) cells; choosing p = cells
  // makes the sampling degenerate
  Query c3 = make_cycle_query(3);
  MatchingDatabase db = generate(c3, 64, 5);
  RoundResult res = run_partial_one_round(c3, db, 512, Rat(0), 9);
  CHECK(res.answers == oracle_eval(c3, db));
}

TEST_CASE("partial mode validates epsilon") {
  Query l4 = make_path_query(4);
  MatchingDatabase db = generate(l4, 16, 1);
  CHECK_THROWS_AS(run_partial_one_round(l4, db, 16, Rat(1, 2), 1), std::invalid_argument);
  CHECK_THROWS_AS(run_partial_one_round(l4, db, 16, Rat(2, 3), 1), std::invalid_argument);
}

TEST_CASE("partial sampling rate is near p^(1-tau)") {
  Query l4 = make_path_query(4);
  std::uint64_t found = 0, oracle_total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    MatchingDatabase db = generate(l4, 64, seed);
    RoundResult res = run_partial_one_round(l4, db, 16, Rat(0), seed);
    found += res.answers.size();
    oracle_total += oracle_eval(l4, db).size();
  }
  double fraction = static_cast<double>(found) / static_cast<double>(oracle_total);
  CHECK(fraction > 0.5 / 16);
  CHECK(fraction < 2.0 / 16);
}

TEST_CASE("runs replay bit-identically from the same seeds") {
  Query c3 = make_cycle_query(3);
  MatchingDatabase db = generate(c3, 200, 77);
  SharePlan plan = make_share_plan(c3, optimal_cover(c3), 8, 13);
  RoundResult a = run_one_round(c3, db, plan, BudgetSpec{});
  RoundResult b = run_one_round(c3, db, plan, BudgetSpec{});
  CHECK(a.answers == b.answers);
  CHECK(a.load.max_load_bits == b.load.max_load_bits);

  RoundResult pa = run_partial_one_round(c3, db, 64, Rat(0), 5);
  RoundResult pb = run_partial_one_round(c3, db, 64, Rat(0), 5);
  CHECK(pa.answers == pb.answers);
}
