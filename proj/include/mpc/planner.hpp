#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpc/hc_engine.hpp"
#include "mpc/query_model.hpp"
#include "mpc/rational.hpp"

namespace mpc {

// Depth-r tree of one-round blocks. Each block is itself a query whose atoms
// name either base relations or views produced by earlier rounds; the block's
// name is the view it outputs and its head is the view schema. Every block
// satisfies tau* <= 1/(1-epsilon) over its inputs, and composing all blocks
// reproduces the source query.
struct RoundPlan {
  Query query;
  std::size_t depth = 0;
  std::vector<std::vector<Query>> rounds;
  std::string final_view;
};

struct GoodSet {
  std::vector<std::string> atoms;
  bool verified = false;
};

// Connected and tau*(q) <= 1/(1-epsilon), by exact rational comparison.
bool in_gamma1(const Query& q, const Rat& epsilon);

// 2 * floor(1/(1-epsilon)), the longest path query computable in one round.
std::size_t k_epsilon(const Rat& epsilon);

// One-round plan when the query qualifies; otherwise path queries chunk the
// chain into k_epsilon-atom blocks per round, and general queries decompose
// into radius-bounded paths from a central variable, reduce each path in
// parallel, and join all path views on the center in a final round.
RoundPlan build_plan(const Query& q, const Rat& epsilon);

// Stable human-readable listing of rounds, blocks, and view schemas.
std::string to_string(const RoundPlan& plan);

struct PlanExecution {
  AnswerSet answers;
  std::vector<LoadReport> round_loads;
  bool aborted = false;  // enforcement stopped the run before the last round
};

inline constexpr std::size_t kDefaultViewCellCap = std::size_t(1) << 27;

// Rounds execute in order under a strict barrier; views materialize between
// rounds and count toward the next round's input size N. Materialized view
// cells are capped; exceeding the cap aborts the run with an error.
PlanExecution execute_plan(const RoundPlan& plan, const MatchingDatabase& db,
                           std::uint64_t p, const BudgetSpec& budget,
                           std::uint64_t master_seed, ExecMode mode = ExecMode::parallel,
                           std::size_t view_cell_cap = kDefaultViewCellCap);

enum class BoundKind { path, tree_like, cycle, heuristic };

struct RoundBound {
  std::size_t rounds = 0;
  BoundKind kind = BoundKind::heuristic;
};

// Paths: ceil(log_k_eps(#atoms)). Tree-like: ceil(log_k_eps(diameter)).
// Cycles C_k: ceil(log_k_eps(k / (m_eps + 1))) + 1 with
// m_eps = floor(2/(1-epsilon)). Anything else falls back to the tree-like
// formula on the longest induced path and is flagged heuristic.
RoundBound round_lower_bound(const Query& q, const Rat& epsilon);

// Both conditions of goodness: no one-round-computable connected subquery
// holds two atoms of m, and the complement of m has characteristic zero.
bool is_eps_good(const Query& q, const std::vector<std::string>& m, const Rat& epsilon);

// Nested good sets M_1 > M_2 > ... for path and cycle queries, built by the
// every-k_epsilon-th-atom spacing. Every returned set passes is_eps_good on
// the appropriate contraction and the final contraction is not one-round
// computable. nullopt when the query itself is one-round computable (no such
// sequence exists); an empty list is the r = 0 plan.
std::optional<std::vector<GoodSet>> build_eps_r_plan(const Query& q, const Rat& epsilon);

// Checks a caller-supplied candidate sequence against the same conditions.
std::optional<std::vector<GoodSet>> build_eps_r_plan(
    const Query& q, const Rat& epsilon,
    const std::vector<std::vector<std::string>>& candidate_sets);

// Shape tests used by the bound calculators: a simple chain / simple cycle of
// binary atoms.
bool is_path_query(const Query& q);
bool is_cycle_query(const Query& q);

// Longest induced path (in edges) of the variable co-occurrence graph.
std::size_t longest_induced_path(const Query& q);

}  // namespace mpc
