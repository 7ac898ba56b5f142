#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mpc/families.hpp"
#include "mpc/harness.hpp"
#include "mpc/powmath.hpp"

using namespace mpc;

namespace {

RunConfig basic_config(Query q, RunMode mode) {
  RunConfig cfg;
  cfg.query = std::move(q);
  cfg.n = 64;
  cfg.p = 8;
  cfg.epsilon = Rat(1, 3);
  cfg.mode = mode;
  cfg.seeds = {1, 2, 3};
  return cfg;
}

}  // namespace

TEST_CASE("budget arithmetic recomputed independently") {
  // integral power: 8^(2/3) = 4
  BudgetSpec spec{4.0, Rat(1, 3), false};
  std::uint64_t n_bits = 840000;
  CHECK(budget_bits(spec, n_bits, 8) ==
        static_cast<std::uint64_t>(std::ceil(4.0 * 840000 / 4.0)));

  // p^0 = 1 at epsilon = 1
  BudgetSpec all{2.0, Rat(1), false};
  CHECK(budget_bits(all, 1000, 64) == 2000);

  // irrational power within one bit of the double formula
  BudgetSpec irr{4.0, Rat(1, 2), false};
  double expect = std::ceil(4.0 * 12345 / std::pow(8.0, 0.5));
  double got = static_cast<double>(budget_bits(irr, 12345, 8));
  CHECK(std::abs(got - expect) <= 1.0);

  CHECK(bits_per_value(1) == 0);
  CHECK(bits_per_value(2) == 1);
  CHECK(bits_per_value(8) == 3);
  CHECK(bits_per_value(9) == 4);
  CHECK(bits_per_value(10000) == 14);
}

TEST_CASE("exact rational powers") {
  CHECK(exact_rational_power(8, Rat(1, 3)) == 2);
  CHECK(exact_rational_power(64, Rat(1, 2)) == 8);
  CHECK(exact_rational_power(64, Rat(3, 2)) == 512);
  CHECK_FALSE(exact_rational_power(8, Rat(1, 2)).has_value());
  CHECK(floor_rational_power(8, Rat(1, 2)) == 2);
  CHECK(floor_rational_power(100, Rat(1, 2)) == 10);
  CHECK(floor_rational_power(99, Rat(1, 2)) == 9);
}

TEST_CASE("experiment reports are deterministic") {
  RunConfig cfg = basic_config(make_cycle_query(3), RunMode::one_round);
  ExperimentReport a = run_experiment(cfg);
  ExperimentReport b = run_experiment(cfg);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_json(a) == report_json(b));

  cfg.exec = ExecMode::serial;
  ExperimentReport c = run_experiment(cfg);
  CHECK(report_csv(a) == report_csv(c));
}

TEST_CASE("experiment fraction equals answers over oracle") {
  RunConfig cfg = basic_config(make_path_query(2), RunMode::one_round);
  cfg.epsilon = Rat(0);
  ExperimentReport rep = run_experiment(cfg);
  for (const auto& row : rep.rows) {
    CHECK(row.answers == row.oracle);
    CHECK(row.fraction == doctest::Approx(1.0));
  }
  CHECK(rep.mean_fraction == doctest::Approx(1.0));
  CHECK(rep.total_oracle == 3 * 64);
}

TEST_CASE("mode preconditions are validated") {
  // partial needs headroom below the space exponent
  RunConfig bad = basic_config(make_path_query(2), RunMode::partial);
  bad.epsilon = Rat(0);  // tau* = 1 leaves no room
  CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);

  // one-round with enforcement below the space exponent is rejected
  RunConfig low = basic_config(make_cycle_query(3), RunMode::one_round);
  low.epsilon = Rat(0);
  low.enforce = true;
  CHECK_THROWS_AS(run_experiment(low), std::invalid_argument);

  // same run without enforcement is allowed; the verdict is data
  low.enforce = false;
  ExperimentReport rep = run_experiment(low);
  CHECK(rep.rows.size() == 3);

  RunConfig empty = basic_config(make_cycle_query(3), RunMode::one_round);
  empty.seeds.clear();
  CHECK_THROWS_AS(run_experiment(empty), std::invalid_argument);
}

TEST_CASE("a single server finds everything in one round") {
  RunConfig cfg = basic_config(make_cycle_query(3), RunMode::one_round);
  cfg.p = 1;
  cfg.epsilon = Rat(0);
  ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.mean_fraction == doctest::Approx(1.0));
  for (const auto& row : rep.rows) CHECK(row.answers == row.oracle);
}

TEST_CASE("plan mode reports per-round loads") {
  RunConfig cfg = basic_config(make_path_query(4), RunMode::plan);
  cfg.epsilon = Rat(0);
  cfg.p = 4;
  ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.depth == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.round_max_tuples.size() == 2);
    CHECK(row.round_budget_bits.size() == 2);
    CHECK(row.answers == row.oracle);
  }
}

TEST_CASE("analyze surfaces the structural quantities") {
  AnalyzeReport rep = analyze(make_cycle_query(4));
  CHECK(rep.k == 4);
  CHECK(rep.ell == 4);
  CHECK(rep.cover.value == Rat(2));
  REQUIRE(rep.space_exp.has_value());
  CHECK(*rep.space_exp == Rat(1, 2));
  CHECK_FALSE(rep.tree_like);
  CHECK(rep.eps_rows.size() == 3);
  CHECK(rep.eps_rows[0].k_eps == 2);

  AnalyzeReport b32 = analyze(make_binom_query(3, 2));
  CHECK(b32.cover.value == Rat(3, 2));

  AnalyzeReport t2 = analyze(make_star_query(2));
  REQUIRE(t2.space_exp.has_value());
  CHECK(*t2.space_exp == Rat(0));
  CHECK(t2.eps_rows[0].one_round);

  std::string text = analyze_text(rep);
  CHECK(text.find("tau_star=2") != std::string::npos);
  std::string json_text = analyze_json(rep);
  CHECK(json_text.find("\"tau_star\"") != std::string::npos);
}

TEST_CASE("reference tables have no diffs") {
  TableResult t1 = make_table1();
  for (const auto& diff : t1.diffs) MESSAGE(diff);
  CHECK(t1.diffs.empty());
  CHECK(t1.text.find("C3") != std::string::npos);

  TableResult t2 = make_table2();
  for (const auto& diff : t2.diffs) MESSAGE(diff);
  CHECK(t2.diffs.empty());
  CHECK(t2.text.find("SP4") != std::string::npos);
}

TEST_CASE("family name parsing") {
  REQUIRE(family_query("L_16").has_value());
  CHECK(family_query("L_16")->atom_count() == 16);
  CHECK(family_query("C3")->atom_count() == 3);
  CHECK(family_query("T_4")->atom_count() == 4);
  CHECK(family_query("B_4_2")->atom_count() == 6);
  CHECK(family_query("SP3")->atom_count() == 6);
  CHECK_FALSE(family_query("nope").has_value());
  CHECK_FALSE(family_query("L").has_value());
  CHECK_FALSE(family_query("C1").has_value());
}

TEST_CASE("seed splitter streams are distinct") {
  CHECK(db_seed(1) != routing_seed(1));
  CHECK(db_seed(1) != db_seed(2));
}
