#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpc/budget.hpp"
#include "mpc/cover_lp.hpp"
#include "mpc/hc_engine.hpp"
#include "mpc/planner.hpp"
#include "mpc/query_model.hpp"
#include "mpc/rational.hpp"

namespace mpc {

// Each experiment master seed expands into independent streams for database
// generation, routing hashes, and cell sampling.
std::uint64_t db_seed(std::uint64_t master);
std::uint64_t routing_seed(std::uint64_t master);

enum class RunMode { one_round, partial, plan };

struct RunConfig {
  Query query;
  std::size_t n = 0;
  std::uint64_t p = 1;
  Rat epsilon = Rat(0);
  double c = 4.0;
  bool enforce = false;
  RunMode mode = RunMode::one_round;
  std::vector<std::uint64_t> seeds;
  ExecMode exec = ExecMode::parallel;
};

struct SeedRow {
  std::uint64_t seed = 0;
  std::size_t depth = 1;
  std::vector<std::uint64_t> round_max_tuples;
  std::vector<std::uint64_t> round_max_bits;
  std::vector<std::uint64_t> round_budget_bits;
  std::vector<std::uint8_t> round_exceeded;
  std::uint64_t answers = 0;
  std::uint64_t oracle = 0;
  double fraction = 1.0;  // answers / oracle when oracle > 0
  double wall_ms = 0;
  bool aborted = false;
};

struct ExperimentReport {
  std::string query_name;
  std::string mode;
  std::size_t n = 0;
  std::uint64_t p = 1;
  Rat epsilon = Rat(0);
  double c = 4.0;
  bool enforce = false;
  std::size_t depth = 1;
  std::vector<SeedRow> rows;

  // aggregates over seeds
  std::uint64_t total_answers = 0;
  std::uint64_t total_oracle = 0;
  double mean_fraction = 1.0;  // ratio of sums
  std::uint64_t max_load_tuples = 0;
  std::uint64_t max_load_bits = 0;
  bool any_exceeded = false;
  double wall_ms_total = 0;
};

// Runs one experiment per seed (seeds may execute in parallel, rows merge in
// seed order) and fills the aggregate fields. Deterministic given the seed
// list, up to wall-clock timings.
ExperimentReport run_experiment(const RunConfig& config);

// wall-clock columns are excluded by default so identical invocations produce
// byte-identical output
std::string report_csv(const ExperimentReport& report, bool with_timing = false);
std::string report_json(const ExperimentReport& report, bool with_timing = false);

struct EpsilonAnalysis {
  Rat epsilon;
  std::size_t k_eps = 0;
  bool one_round = false;
  std::optional<RoundBound> lower_bound;
  std::optional<std::size_t> plan_depth;
};

struct AnalyzeReport {
  Query query;
  std::size_t k = 0, ell = 0, total_arity = 0, components = 0;
  std::int64_t chi = 0;
  bool tree_like = false;
  bool connected = false;
  bool has_unary = false;
  std::size_t radius = 0, diameter = 0;
  CoverSolution cover;
  PackingSolution packing;
  std::optional<Rat> space_exp;  // absent for disconnected / unary queries
  bool universal_variable = false;
  std::vector<EpsilonAnalysis> eps_rows;  // epsilon in {0, 1/2, 2/3}
};

AnalyzeReport analyze(const Query& q);
std::string analyze_text(const AnalyzeReport& report);
std::string analyze_json(const AnalyzeReport& report);

struct TableResult {
  std::string text;
  std::vector<std::string> diffs;  // empty when everything matches
};

// Reference tables for the standard families, recomputed from the LP and the
// planner and diffed against the embedded closed forms.
TableResult make_table1();
TableResult make_table2();

}  // namespace mpc
