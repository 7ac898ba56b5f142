#include "mpc/hc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "mpc/powmath.hpp"
#include "mpc/rng.hpp"

namespace mpc {

namespace {

std::uint32_t hash_to_bucket(std::uint64_t seed, std::uint32_t value, std::uint32_t buckets) {
  if (buckets <= 1) return 0;
  return static_cast<std::uint32_t>(mix64(seed ^ mix64(value)) % buckets);
}

std::vector<std::uint64_t> strides_of(const std::vector<std::uint32_t>& shares) {
  std::vector<std::uint64_t> strides(shares.size(), 1);
  for (std::size_t i = shares.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * shares[i];
  }
  return strides;
}

// floor(p^e) clamped to >= 1, exact when the power is integral
std::vector<std::uint32_t> initial_shares(std::uint64_t p, const std::vector<Rat>& exponents) {
  std::vector<std::uint32_t> shares(exponents.size(), 1);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    std::uint64_t s = floor_rational_power(p, exponents[i]);
    shares[i] = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, s));
  }
  return shares;
}

// greedy rounding: repeatedly bump the coordinate with the largest fractional
// deficit while the grid still fits in the cap
void greedy_fill(std::vector<std::uint32_t>& shares, const std::vector<Rat>& exponents,
                 std::uint64_t p, std::uint64_t cap) {
  for (;;) {
    std::uint64_t prod = 1;
    for (auto s : shares) prod *= s;
    std::size_t best = shares.size();
    double best_deficit = 1e-9;
    for (std::size_t i = 0; i < shares.size(); ++i) {
      double target = rational_power(p, exponents[i]);
      double deficit = target - static_cast<double>(shares[i]);
      if (deficit <= best_deficit) continue;
      if (prod / shares[i] * (std::uint64_t(shares[i]) + 1) > cap) continue;
      best = i;
      best_deficit = deficit;
    }
    if (best == shares.size()) return;
    ++shares[best];
  }
}

struct RoutingTarget {
  // maps a virtual-grid cell to the worker that owns it; identity for the
  // full hypercube, sampled-cell lookup for the partial algorithm
  const std::vector<std::uint64_t>* sampled = nullptr;  // sorted cells, or null

  std::int64_t worker_of(std::uint64_t cell) const {
    if (!sampled) return static_cast<std::int64_t>(cell);
    auto it = std::lower_bound(sampled->begin(), sampled->end(), cell);
    if (it == sampled->end() || *it != cell) return -1;
    return static_cast<std::int64_t>(it - sampled->begin());
  }
};

AnswerSet route_and_join(const Query& q, const std::map<std::string, Relation>& store,
                         std::size_t n, const SharePlan& plan, const RoutingTarget& target,
                         std::size_t worker_count, std::uint64_t budget_bits, bool enforce,
                         ExecMode mode, std::vector<ServerLoad>& offered,
                         std::vector<std::uint64_t>& delivered_bits) {
  if (offered.size() < worker_count || delivered_bits.size() < worker_count) {
    throw std::invalid_argument("load accumulators smaller than worker count");
  }
  std::vector<ServerInbox> inboxes(worker_count);
  for (std::size_t s = 0; s < worker_count; ++s) {
    inboxes[s].server = s;
    for (const auto& atom : q.atoms) {
      Relation frag;
      frag.schema = atom.vars;
      frag.arity = atom.arity();
      inboxes[s].fragments.emplace(atom.name, std::move(frag));
    }
  }

  for (const auto& atom : q.atoms) {
    auto it = store.find(atom.name);
    if (it == store.end()) throw std::invalid_argument("missing relation: " + atom.name);
    const Relation& rel = it->second;
    if (rel.arity != atom.arity()) throw std::invalid_argument("arity mismatch for " + atom.name);
    const std::uint64_t cost = rel.arity * bits_per_value(n);
    const std::size_t rows = rel.size();
    for (std::size_t r = 0; r < rows; ++r) {
      std::span<const std::uint32_t> tuple(rel.tuples.data() + r * rel.arity, rel.arity);
      for (std::uint64_t cell : route_tuple(plan, atom, tuple)) {
        std::int64_t w = target.worker_of(cell);
        if (w < 0) continue;
        auto widx = static_cast<std::size_t>(w);
        offered[widx].tuples += 1;
        offered[widx].bits += cost;
        if (enforce && delivered_bits[widx] + cost > budget_bits) continue;
        delivered_bits[widx] += cost;
        ServerInbox& box = inboxes[widx];
        Relation& frag = box.fragments.at(atom.name);
        frag.tuples.insert(frag.tuples.end(), tuple.begin(), tuple.end());
        box.received_tuples += 1;
        box.received_bits += cost;
      }
    }
  }

  std::vector<AnswerSet> per_server(worker_count);
  const bool parallel = mode == ExecMode::parallel;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(worker_count); ++s) {
    per_server[s] = join_atoms(q, inboxes[s].fragments);
  }
  (void)parallel;

  AnswerSet merged;
  merged.width = q.var_count();
  for (std::size_t s = 0; s < worker_count; ++s) {
    merged.flat.insert(merged.flat.end(), per_server[s].flat.begin(),
                       per_server[s].flat.end());
  }
  merged.finalize();
  return merged;
}

LoadReport summarize(std::vector<ServerLoad> offered, std::uint64_t budget,
                     std::uint64_t answers) {
  LoadReport report;
  report.per_server = std::move(offered);
  report.budget_bits = budget;
  report.answers_found = answers;
  for (const auto& load : report.per_server) {
    report.max_load_tuples = std::max(report.max_load_tuples, load.tuples);
    report.max_load_bits = std::max(report.max_load_bits, load.bits);
    if (load.bits > budget) report.exceeded = true;
  }
  return report;
}

}  // namespace

std::size_t SharePlan::dim_of(const std::string& var) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == var) return i;
  }
  throw std::invalid_argument("variable not in share plan: " + var);
}

SharePlan make_share_plan(const Query& q, const CoverSolution& cover, std::uint64_t p,
                          std::uint64_t master_seed) {
  if (p == 0) throw std::invalid_argument("p must be positive");
  if (!cover_feasible(q, cover.weights)) {
    throw std::invalid_argument("weights are not a feasible cover for the query");
  }
  SharePlan plan;
  plan.vars = q.head_vars;
  plan.p_requested = p;

  Rat tau(0);
  for (const auto& var : plan.vars) {
    auto it = cover.weights.find(var);
    if (it != cover.weights.end()) tau += it->second;
  }
  if (tau.is_zero() || tau.is_negative()) {
    throw std::invalid_argument("cover weights must have positive total");
  }
  for (const auto& var : plan.vars) {
    auto it = cover.weights.find(var);
    Rat v = it == cover.weights.end() ? Rat(0) : it->second;
    plan.exponents.push_back(v / tau);
  }

  plan.shares = initial_shares(p, plan.exponents);
  greedy_fill(plan.shares, plan.exponents, p, p);

  plan.p_used = 1;
  for (auto s : plan.shares) plan.p_used *= s;
  for (std::size_t i = 0; i < plan.vars.size(); ++i) {
    plan.hash_seeds.push_back(mix64(master_seed ^ mix64(0x5EEDBA5Eull + i)));
  }
  return plan;
}

std::vector<std::uint64_t> route_tuple(const SharePlan& plan, const Atom& atom,
                                       std::span<const std::uint32_t> tuple) {
  if (tuple.size() != atom.arity()) {
    throw std::invalid_argument("tuple arity mismatch for " + atom.name);
  }
  const std::size_t k = plan.vars.size();
  std::vector<std::int64_t> fixed(k, -1);
  for (std::size_t pos = 0; pos < atom.vars.size(); ++pos) {
    std::size_t dim = plan.dim_of(atom.vars[pos]);
    std::uint32_t coord = hash_to_bucket(plan.hash_seeds[dim], tuple[pos], plan.shares[dim]);
    if (fixed[dim] >= 0 && fixed[dim] != coord) return {};  // repeated variable mismatch
    fixed[dim] = coord;
  }

  std::vector<std::uint64_t> strides = strides_of(plan.shares);
  std::uint64_t base = 0;
  std::vector<std::size_t> free_dims;
  std::uint64_t count = 1;
  for (std::size_t d = 0; d < k; ++d) {
    if (fixed[d] >= 0) {
      base += static_cast<std::uint64_t>(fixed[d]) * strides[d];
    } else {
      free_dims.push_back(d);
      count *= plan.shares[d];
    }
  }

  std::vector<std::uint64_t> dests;
  dests.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    std::uint64_t server = base;
    for (std::size_t fi = free_dims.size(); fi-- > 0;) {
      std::size_t d = free_dims[fi];
      server += (rest % plan.shares[d]) * strides[d];
      rest /= plan.shares[d];
    }
    dests.push_back(server);
  }
  return dests;
}

AnswerSet run_round_on_store(const Query& q, const std::map<std::string, Relation>& store,
                             std::size_t n, const SharePlan& plan, std::uint64_t budget_bits,
                             bool enforce, ExecMode mode, std::vector<ServerLoad>& offered,
                             std::vector<std::uint64_t>& delivered_bits) {
  RoutingTarget target;  // full grid
  return route_and_join(q, store, n, plan, target, plan.p_used, budget_bits, enforce, mode,
                        offered, delivered_bits);
}

RoundResult run_one_round(const Query& q, const MatchingDatabase& db, const SharePlan& plan,
                          const BudgetSpec& budget, ExecMode mode) {
  std::vector<std::string> names;
  for (const auto& atom : q.atoms) names.push_back(atom.name);
  std::uint64_t total_bits = input_bits(names, db.relations, db.n);
  std::uint64_t bb = budget_bits(budget, total_bits, plan.p_requested);

  std::vector<ServerLoad> offered(plan.p_used);
  std::vector<std::uint64_t> delivered(plan.p_used, 0);
  AnswerSet answers = run_round_on_store(q, db.relations, db.n, plan, bb, budget.enforce,
                                         mode, offered, delivered);
  RoundResult result;
  result.answers = std::move(answers);
  result.load = summarize(std::move(offered), bb, result.answers.size());
  return result;
}

RoundResult run_partial_one_round(const Query& q, const MatchingDatabase& db,
                                  std::uint64_t p, const Rat& epsilon,
                                  std::uint64_t master_seed, const BudgetSpec& budget,
                                  ExecMode mode) {
  if (p == 0) throw std::invalid_argument("p must be positive");
  CoverSolution cover = optimal_cover(q);
  Rat threshold = Rat(1) - Rat(1) / cover.value;
  if (!(epsilon < threshold)) {
    throw std::invalid_argument("epsilon out of range: partial answers need epsilon < " +
                                threshold.str());
  }

  SharePlan plan;
  plan.vars = q.head_vars;
  plan.p_requested = p;
  Rat scale = Rat(1) - epsilon;
  for (const auto& var : plan.vars) {
    plan.exponents.push_back(scale * cover.weights.at(var));
  }
  Rat cap_exp = scale * cover.value;  // virtual cube has p^((1-eps)*tau) cells
  std::uint64_t cap;
  if (auto exact = exact_rational_power(p, cap_exp)) {
    cap = *exact;
  } else {
    cap = static_cast<std::uint64_t>(
        std::floor(std::pow(static_cast<double>(p), cap_exp.to_double())));
  }
  plan.shares = initial_shares(p, plan.exponents);
  greedy_fill(plan.shares, plan.exponents, p, cap);
  plan.p_used = 1;
  for (auto s : plan.shares) plan.p_used *= s;
  for (std::size_t i = 0; i < plan.vars.size(); ++i) {
    plan.hash_seeds.push_back(mix64(master_seed ^ mix64(0xAB1Eull + i)));
  }

  const std::uint64_t cells = plan.p_used;
  if (cells > (1ull << 30)) throw std::invalid_argument("virtual cube too large to sample");
  const std::uint64_t sample_count = std::min<std::uint64_t>(p, cells);

  // distinct cells, uniform without replacement, sorted so cell -> worker is
  // the rank in sorted order
  std::vector<std::uint64_t> sampled;
  SplitMix rng(mix64(master_seed ^ 0x5A3717E5ull));
  if (cells <= (1ull << 22)) {
    std::vector<std::uint64_t> ids(cells);
    for (std::uint64_t i = 0; i < cells; ++i) ids[i] = i;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
      std::uint64_t j = i + rng.below(cells - i);
      std::swap(ids[i], ids[j]);
    }
    sampled.assign(ids.begin(), ids.begin() + sample_count);
  } else {
    std::unordered_set<std::uint64_t> chosen;
    while (chosen.size() < sample_count) chosen.insert(rng.below(cells));
    sampled.assign(chosen.begin(), chosen.end());
  }
  std::sort(sampled.begin(), sampled.end());

  std::vector<std::string> names;
  for (const auto& atom : q.atoms) names.push_back(atom.name);
  std::uint64_t total_bits = input_bits(names, db.relations, db.n);
  std::uint64_t bb = budget_bits(budget, total_bits, p);

  RoutingTarget target;
  target.sampled = &sampled;
  std::vector<ServerLoad> offered(sample_count);
  std::vector<std::uint64_t> delivered(sample_count, 0);
  AnswerSet answers = route_and_join(q, db.relations, db.n, plan, target, sample_count, bb,
                                     budget.enforce, mode, offered, delivered);
  RoundResult result;
  result.answers = std::move(answers);
  result.load = summarize(std::move(offered), bb, result.answers.size());
  return result;
}

}  // namespace mpc
