#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mpc/budget.hpp"
#include "mpc/cover_lp.hpp"
#include "mpc/matchdb.hpp"
#include "mpc/query_model.hpp"

namespace mpc {

// Worker-local joins run under OpenMP by default; serial is the reference
// implementation the tests compare against. Results are identical either way.
enum class ExecMode { serial, parallel };

// Server grid [p_1] x ... x [p_k] with one dimension per variable. Shares
// multiply to p_used <= p; exponents e_i = v_i / tau sum to 1 for a full
// one-round plan. Server ids are row-major flat indices into the grid.
struct SharePlan {
  std::vector<std::string> vars;          // dimension order = head order
  std::vector<std::uint32_t> shares;      // p_i >= 1
  std::vector<Rat> exponents;             // e_i
  std::vector<std::uint64_t> hash_seeds;  // per-variable routing seeds
  std::uint64_t p_requested = 1;
  std::uint64_t p_used = 1;               // product of shares

  std::size_t dim_of(const std::string& var) const;  // throws on unknown
};

struct ServerInbox {
  std::uint64_t server = 0;
  std::map<std::string, Relation> fragments;  // per-relation received tuples
  std::uint64_t received_tuples = 0;          // after budget truncation
  std::uint64_t received_bits = 0;
};

struct ServerLoad {
  std::uint64_t tuples = 0;
  std::uint64_t bits = 0;
};

// per_server records the routed (offered) load even when enforcement
// truncates what workers actually see, so the exceeded verdict reflects the
// full communication demand.
struct LoadReport {
  std::vector<ServerLoad> per_server;
  std::uint64_t max_load_tuples = 0;
  std::uint64_t max_load_bits = 0;
  std::uint64_t budget_bits = 0;
  bool exceeded = false;
  std::uint64_t answers_found = 0;
};

// Exponents e_i = v_i / sum(v). Integer shares: the exact power p^(e_i) when
// it is integral, otherwise floor(p^(e_i)) clamped to >= 1 followed by greedy
// increments of the largest fractional deficit while the product stays <= p.
// Hash seeds derive from master_seed by variable index.
SharePlan make_share_plan(const Query& q, const CoverSolution& cover, std::uint64_t p,
                          std::uint64_t master_seed);

// All servers whose coordinates agree with the tuple's hashed values on the
// atom's variables; free dimensions range over their full extent. A tuple
// whose repeated-variable positions disagree matches nothing and routes
// nowhere.
std::vector<std::uint64_t> route_tuple(const SharePlan& plan, const Atom& atom,
                                       std::span<const std::uint32_t> tuple);

struct RoundResult {
  AnswerSet answers;
  LoadReport load;
};

// One communication round: every relation's tuples are routed to their
// sub-grids, then each server joins its received fragments locally and the
// per-server answers merge in server order. With enforcement on, each server
// stops receiving once the budget is reached (in routing order) and the run
// is reported exceeded.
RoundResult run_one_round(const Query& q, const MatchingDatabase& db, const SharePlan& plan,
                          const BudgetSpec& budget, ExecMode mode = ExecMode::parallel);

// Below-threshold variant for epsilon < 1 - 1/tau*: builds the virtual cube
// with shares p^((1-epsilon)*v_i), samples min(p, cells) distinct cells, and
// routes only tuples destined to sampled cells. Returns a subset of the
// oracle answers.
RoundResult run_partial_one_round(const Query& q, const MatchingDatabase& db,
                                  std::uint64_t p, const Rat& epsilon,
                                  std::uint64_t master_seed,
                                  const BudgetSpec& budget = BudgetSpec{},
                                  ExecMode mode = ExecMode::parallel);

// Routing + local joins against an arbitrary relation store, accumulating
// offered load and delivered bits into caller-provided per-server vectors
// (sized >= plan.p_used). Plan execution shares one budget across the blocks
// of a round through these accumulators.
AnswerSet run_round_on_store(const Query& q, const std::map<std::string, Relation>& store,
                             std::size_t n, const SharePlan& plan, std::uint64_t budget_bits,
                             bool enforce, ExecMode mode, std::vector<ServerLoad>& offered,
                             std::vector<std::uint64_t>& delivered_bits);

}  // namespace mpc
