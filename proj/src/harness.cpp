#include "mpc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mpc/families.hpp"
#include "mpc/matchdb.hpp"
#include "mpc/rng.hpp"

namespace mpc {

namespace {

using json = nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string join_u64(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_flags(const std::vector<std::uint8_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += '|';
    out += values[i] ? '1' : '0';
  }
  return out;
}

const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::one_round: return "one-round";
    case RunMode::partial: return "partial";
    case RunMode::plan: return "plan";
  }
  return "?";
}

struct SharedSetup {
  std::optional<CoverSolution> cover;
  std::optional<RoundPlan> plan;
};

SeedRow run_seed(const RunConfig& cfg, const SharedSetup& setup, std::uint64_t seed,
                 ExecMode exec) {
  SeedRow row;
  row.seed = seed;
  auto t0 = std::chrono::steady_clock::now();

  MatchingDatabase db = generate(cfg.query, cfg.n, db_seed(seed));
  AnswerSet oracle = oracle_eval(cfg.query, db);
  row.oracle = oracle.size();

  BudgetSpec budget{cfg.c, cfg.epsilon, cfg.enforce};
  auto record_round = [&row](const LoadReport& load) {
    row.round_max_tuples.push_back(load.max_load_tuples);
    row.round_max_bits.push_back(load.max_load_bits);
    row.round_budget_bits.push_back(load.budget_bits);
    row.round_exceeded.push_back(load.exceeded ? 1 : 0);
  };

  switch (cfg.mode) {
    case RunMode::one_round: {
      SharePlan plan = make_share_plan(cfg.query, *setup.cover, cfg.p, routing_seed(seed));
      RoundResult res = run_one_round(cfg.query, db, plan, budget, exec);
      row.depth = 1;
      record_round(res.load);
      row.answers = res.answers.size();
      break;
    }
    case RunMode::partial: {
      RoundResult res =
          run_partial_one_round(cfg.query, db, cfg.p, cfg.epsilon, routing_seed(seed),
                                budget, exec);
      row.depth = 1;
      record_round(res.load);
      row.answers = res.answers.size();
      break;
    }
    case RunMode::plan: {
      PlanExecution res = execute_plan(*setup.plan, db, cfg.p, budget, routing_seed(seed),
                                       exec);
      row.depth = setup.plan->depth;
      for (const auto& load : res.round_loads) record_round(load);
      row.answers = res.answers.size();
      row.aborted = res.aborted;
      break;
    }
  }

  row.fraction = row.oracle > 0
                     ? static_cast<double>(row.answers) / static_cast<double>(row.oracle)
                     : 1.0;
  auto t1 = std::chrono::steady_clock::now();
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

}  // namespace

std::uint64_t db_seed(std::uint64_t master) { return mix64(master ^ 0x7DB5ED1BC6D0F0AAull); }
std::uint64_t routing_seed(std::uint64_t master) {
  return mix64(master ^ 0x41C64E6DA3A9A0E5ull);
}

ExperimentReport run_experiment(const RunConfig& cfg) {
  if (cfg.n == 0) throw std::invalid_argument("n must be positive");
  if (cfg.p == 0) throw std::invalid_argument("p must be positive");
  if (cfg.seeds.empty()) throw std::invalid_argument("seed list must not be empty");

  SharedSetup setup;
  switch (cfg.mode) {
    case RunMode::one_round: {
      if (cfg.enforce && is_connected(cfg.query) && !cfg.query.has_unary_atom()) {
        Rat needed = space_exponent(cfg.query);
        if (cfg.epsilon < needed) {
          throw std::invalid_argument(
              "one-round mode with enforcement needs epsilon >= " + needed.str());
        }
      }
      setup.cover = optimal_cover(cfg.query);
      break;
    }
    case RunMode::partial: {
      Rat needed = Rat(1) - Rat(1) / tau_star(cfg.query);
      if (!(cfg.epsilon < needed)) {
        throw std::invalid_argument("partial mode needs epsilon < " + needed.str());
      }
      break;
    }
    case RunMode::plan: {
      setup.plan = build_plan(cfg.query, cfg.epsilon);
      break;
    }
  }

  // when seeds run in parallel, the per-run workers stay serial
  const bool parallel_seeds = cfg.exec == ExecMode::parallel && cfg.seeds.size() > 1;
  const ExecMode inner = parallel_seeds ? ExecMode::serial : cfg.exec;

  std::vector<SeedRow> rows(cfg.seeds.size());
  std::vector<std::string> errors(cfg.seeds.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel_seeds)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(cfg.seeds.size()); ++i) {
    try {
      rows[i] = run_seed(cfg, setup, cfg.seeds[i], inner);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& err : errors) {
    if (!err.empty()) throw std::runtime_error(err);
  }

  ExperimentReport report;
  report.query_name = cfg.query.name;
  report.mode = mode_name(cfg.mode);
  report.n = cfg.n;
  report.p = cfg.p;
  report.epsilon = cfg.epsilon;
  report.c = cfg.c;
  report.enforce = cfg.enforce;
  report.depth = cfg.mode == RunMode::plan ? setup.plan->depth : 1;
  report.rows = std::move(rows);
  for (const auto& row : report.rows) {
    report.total_answers += row.answers;
    report.total_oracle += row.oracle;
    for (auto v : row.round_max_tuples) {
      report.max_load_tuples = std::max(report.max_load_tuples, v);
    }
    for (auto v : row.round_max_bits) {
      report.max_load_bits = std::max(report.max_load_bits, v);
    }
    for (auto f : row.round_exceeded) {
      if (f) report.any_exceeded = true;
    }
    report.wall_ms_total += row.wall_ms;
  }
  report.mean_fraction =
      report.total_oracle > 0
          ? static_cast<double>(report.total_answers) / static_cast<double>(report.total_oracle)
          : 1.0;
  return report;
}

std::string report_csv(const ExperimentReport& r, bool with_timing) {
  std::ostringstream os;
  os << "query,mode,n,p,epsilon,c,seed,depth,answers,oracle,fraction,"
        "max_load_tuples,max_load_bits,budget_bits,exceeded,aborted";
  if (with_timing) os << ",wall_ms";
  os << '\n';
  auto prefix = [&](std::ostream& out) {
    out << r.query_name << ',' << r.mode << ',' << r.n << ',' << r.p << ','
        << r.epsilon.str() << ',' << fmt_double(r.c) << ',';
  };
  for (const auto& row : r.rows) {
    prefix(os);
    os << row.seed << ',' << row.depth << ',' << row.answers << ',' << row.oracle << ','
       << fmt_double(row.fraction) << ',' << join_u64(row.round_max_tuples) << ','
       << join_u64(row.round_max_bits) << ',' << join_u64(row.round_budget_bits) << ','
       << join_flags(row.round_exceeded) << ',' << (row.aborted ? 1 : 0);
    if (with_timing) os << ',' << fmt_double(row.wall_ms);
    os << '\n';
  }
  prefix(os);
  os << "all," << r.depth << ',' << r.total_answers << ',' << r.total_oracle << ','
     << fmt_double(r.mean_fraction) << ',' << r.max_load_tuples << ',' << r.max_load_bits
     << ",," << (r.any_exceeded ? 1 : 0) << ",0";
  if (with_timing) os << ',' << fmt_double(r.wall_ms_total);
  os << '\n';
  return os.str();
}

std::string report_json(const ExperimentReport& r, bool with_timing) {
  json j;
  j["query"] = r.query_name;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["p"] = r.p;
  j["epsilon"] = r.epsilon.str();
  j["c"] = r.c;
  j["enforce"] = r.enforce;
  j["depth"] = r.depth;
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["seed"] = row.seed;
    rj["depth"] = row.depth;
    rj["answers"] = row.answers;
    rj["oracle"] = row.oracle;
    rj["fraction"] = row.fraction;
    rj["max_load_tuples"] = row.round_max_tuples;
    rj["max_load_bits"] = row.round_max_bits;
    rj["budget_bits"] = row.round_budget_bits;
    rj["exceeded"] = row.round_exceeded;
    rj["aborted"] = row.aborted;
    if (with_timing) rj["wall_ms"] = row.wall_ms;
    j["rows"].push_back(std::move(rj));
  }
  j["total_answers"] = r.total_answers;
  j["total_oracle"] = r.total_oracle;
  j["mean_fraction"] = r.mean_fraction;
  j["max_load_tuples"] = r.max_load_tuples;
  j["max_load_bits"] = r.max_load_bits;
  j["any_exceeded"] = r.any_exceeded;
  if (with_timing) j["wall_ms_total"] = r.wall_ms_total;
  return j.dump(2);
}

AnalyzeReport analyze(const Query& q) {
  AnalyzeReport rep;
  rep.query = q;
  QueryStats st = stats(q);
  rep.k = q.var_count();
  rep.ell = q.atom_count();
  rep.total_arity = q.total_arity();
  rep.components = st.component_count;
  rep.chi = st.chi;
  rep.tree_like = st.tree_like;
  rep.connected = st.component_count == 1;
  rep.has_unary = q.has_unary_atom();
  rep.radius = st.radius;
  rep.diameter = st.diameter;
  rep.cover = optimal_cover(q);
  rep.packing = optimal_packing(q);
  rep.universal_variable = has_universal_variable(q);
  if (rep.connected && !rep.has_unary) rep.space_exp = space_exponent(q);

  for (const Rat& eps : {Rat(0), Rat(1, 2), Rat(2, 3)}) {
    EpsilonAnalysis ea;
    ea.epsilon = eps;
    ea.k_eps = k_epsilon(eps);
    ea.one_round = in_gamma1(q, eps);
    if (rep.connected) {
      ea.lower_bound = round_lower_bound(q, eps);
      try {
        ea.plan_depth = build_plan(q, eps).depth;
      } catch (const std::exception&) {
        ea.plan_depth = std::nullopt;
      }
    }
    rep.eps_rows.push_back(std::move(ea));
  }
  return rep;
}

namespace {

std::string weights_str(const std::vector<std::string>& order,
                        const std::map<std::string, Rat>& weights) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += " ";
    auto it = weights.find(order[i]);
    out += order[i] + "=" + (it == weights.end() ? "0" : it->second.str());
  }
  return out;
}

const char* bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::path: return "path";
    case BoundKind::tree_like: return "tree-like";
    case BoundKind::cycle: return "cycle";
    case BoundKind::heuristic: return "heuristic";
  }
  return "?";
}

}  // namespace

std::string analyze_text(const AnalyzeReport& r) {
  std::ostringstream os;
  os << "query " << r.query.name << ": " << render(r.query) << "\n";
  os << "  k=" << r.k << " ell=" << r.ell << " a=" << r.total_arity << " c=" << r.components
     << " chi=" << r.chi << "\n";
  os << "  tree_like=" << (r.tree_like ? "yes" : "no");
  if (r.connected) {
    os << " radius=" << r.radius << " diameter=" << r.diameter;
  } else {
    os << " (disconnected)";
  }
  os << "\n";
  os << "  tau_star=" << r.cover.value.str();
  if (r.space_exp) {
    os << " space_exponent=" << r.space_exp->str();
  } else {
    os << " space_exponent=n/a" << (r.has_unary ? " (unary atoms)" : " (disconnected)");
  }
  os << " universal_variable=" << (r.universal_variable ? "yes" : "no") << "\n";
  os << "  cover: " << weights_str(r.query.head_vars, r.cover.weights)
     << (r.cover.tight ? " (tight)" : "") << "\n";
  std::vector<std::string> atom_order;
  for (const auto& atom : r.query.atoms) atom_order.push_back(atom.name);
  os << "  packing: " << weights_str(atom_order, r.packing.weights)
     << (r.packing.tight ? " (tight)" : "") << "\n";
  for (const auto& ea : r.eps_rows) {
    os << "  eps=" << ea.epsilon.str() << ": k_eps=" << ea.k_eps
       << " one_round=" << (ea.one_round ? "yes" : "no");
    if (ea.lower_bound) {
      os << " round_lower_bound=" << ea.lower_bound->rounds << " ("
         << bound_kind_name(ea.lower_bound->kind) << ")";
    }
    if (ea.plan_depth) os << " plan_depth=" << *ea.plan_depth;
    os << "\n";
  }
  return os.str();
}

std::string analyze_json(const AnalyzeReport& r) {
  json j;
  j["query"] = r.query.name;
  j["text"] = render(r.query);
  j["k"] = r.k;
  j["ell"] = r.ell;
  j["total_arity"] = r.total_arity;
  j["components"] = r.components;
  j["chi"] = r.chi;
  j["tree_like"] = r.tree_like;
  j["connected"] = r.connected;
  if (r.connected) {
    j["radius"] = r.radius;
    j["diameter"] = r.diameter;
  }
  j["tau_star"] = r.cover.value.str();
  if (r.space_exp) j["space_exponent"] = r.space_exp->str();
  j["universal_variable"] = r.universal_variable;
  json cover = json::object();
  for (const auto& [k, v] : r.cover.weights) cover[k] = v.str();
  j["cover"] = cover;
  j["cover_tight"] = r.cover.tight;
  json packing = json::object();
  for (const auto& [k, v] : r.packing.weights) packing[k] = v.str();
  j["packing"] = packing;
  j["packing_tight"] = r.packing.tight;
  j["epsilon_rows"] = json::array();
  for (const auto& ea : r.eps_rows) {
    json e;
    e["epsilon"] = ea.epsilon.str();
    e["k_eps"] = ea.k_eps;
    e["one_round"] = ea.one_round;
    if (ea.lower_bound) {
      e["round_lower_bound"] = ea.lower_bound->rounds;
      e["bound_kind"] = bound_kind_name(ea.lower_bound->kind);
    }
    if (ea.plan_depth) e["plan_depth"] = *ea.plan_depth;
    j["epsilon_rows"].push_back(std::move(e));
  }
  return j.dump(2);
}

// ----- reference tables ----------------------------------------------------

namespace {

struct Table1Expect {
  Query query;
  std::int64_t answer_exp;        // answer size is n^answer_exp
  std::vector<Rat> share_exps;    // aligned with head_vars
  Rat tau;
  Rat space;
};

std::int64_t binom(std::int64_t k, std::int64_t m) {
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= m; ++i) r = r * (k - m + i) / i;
  return r;
}

std::vector<Table1Expect> table1_families() {
  std::vector<Table1Expect> rows;
  for (std::size_t k = 3; k <= 6; ++k) {  // cycles
    Table1Expect e;
    e.query = make_cycle_query(k);
    e.answer_exp = 0;
    e.share_exps.assign(k, Rat(1, static_cast<std::int64_t>(k)));
    e.tau = Rat(static_cast<std::int64_t>(k), 2);
    e.space = Rat(1) - Rat(2, static_cast<std::int64_t>(k));
    rows.push_back(std::move(e));
  }
  for (std::size_t k = 2; k <= 8; ++k) {  // paths
    Table1Expect e;
    e.query = make_path_query(k);
    e.answer_exp = 1;
    std::int64_t half = static_cast<std::int64_t>((k + 1) / 2);  // ceil(k/2)
    for (std::size_t i = 0; i <= k; ++i) {
      e.share_exps.push_back(i % 2 == 1 ? Rat(1, half) : Rat(0));
    }
    e.tau = Rat(half);
    e.space = Rat(1) - Rat(1, half);
    rows.push_back(std::move(e));
  }
  for (std::size_t k = 2; k <= 5; ++k) {  // stars
    Table1Expect e;
    e.query = make_star_query(k);
    e.answer_exp = 1;
    e.share_exps.assign(k + 1, Rat(0));
    e.share_exps[0] = Rat(1);
    e.tau = Rat(1);
    e.space = Rat(0);
    rows.push_back(std::move(e));
  }
  for (auto [k, m] : {std::pair<std::int64_t, std::int64_t>{3, 2}, {4, 2}, {4, 3}}) {
    Table1Expect e;
    e.query = make_binom_query(k, m);
    e.answer_exp = k - (m - 1) * binom(k, m);
    e.share_exps.assign(k, Rat(1, k));
    e.tau = Rat(k, m);
    e.space = Rat(1) - Rat(m, k);
    rows.push_back(std::move(e));
  }
  return rows;
}

}  // namespace

TableResult make_table1() {
  TableResult result;
  std::ostringstream os;
  os << "query      answer_exp  tau*   space_exp  share_exponents\n";
  for (const auto& expect : table1_families()) {
    const Query& q = expect.query;
    CoverSolution cover = optimal_cover(q);
    Rat space = space_exponent(q);
    QueryStats st = stats(q);
    std::int64_t answer_exp = 1 + st.chi;

    if (cover.value != expect.tau) {
      result.diffs.push_back(q.name + ": tau* " + cover.value.str() + " != " +
                             expect.tau.str());
    }
    if (space != expect.space) {
      result.diffs.push_back(q.name + ": space exponent " + space.str() + " != " +
                             expect.space.str());
    }
    if (answer_exp != expect.answer_exp) {
      result.diffs.push_back(q.name + ": answer exponent " + std::to_string(answer_exp) +
                             " != " + std::to_string(expect.answer_exp));
    }
    // the reference share exponents must come from an optimal cover:
    // w_i = e_i * tau* has to be feasible with value exactly tau*
    std::map<std::string, Rat> scaled;
    Rat total(0);
    for (std::size_t i = 0; i < q.head_vars.size(); ++i) {
      scaled[q.head_vars[i]] = expect.share_exps[i] * expect.tau;
      total += scaled[q.head_vars[i]];
    }
    if (total != expect.tau || !cover_feasible(q, scaled)) {
      result.diffs.push_back(q.name + ": share exponents are not optimal-cover derived");
    }

    os << q.name;
    for (std::size_t pad = q.name.size(); pad < 11; ++pad) os << ' ';
    os << "n^" << answer_exp << "         " << cover.value.str() << "    " << space.str()
       << "       ";
    for (std::size_t i = 0; i < expect.share_exps.size(); ++i) {
      if (i) os << ',';
      os << expect.share_exps[i].str();
    }
    os << "\n";
  }
  result.text = os.str();
  return result;
}

TableResult make_table2() {
  TableResult result;
  std::ostringstream os;
  os << "query      space_exp  rounds_eps0  depth_eps1/2  depth_eps2/3\n";

  struct Row {
    Query query;
    Rat space;
    std::size_t rounds0;
  };
  std::vector<Row> rows;
  auto log2_ceil = [](std::size_t k) {
    std::size_t r = 0, v = 1;
    while (v < k) {
      v *= 2;
      ++r;
    }
    return r;
  };
  for (std::size_t k = 3; k <= 6; ++k) {
    rows.push_back({make_cycle_query(k), Rat(1) - Rat(2, static_cast<std::int64_t>(k)),
                    log2_ceil(k)});
  }
  for (std::size_t k = 2; k <= 8; ++k) {
    rows.push_back({make_path_query(k),
                    Rat(1) - Rat(1, static_cast<std::int64_t>((k + 1) / 2)), log2_ceil(k)});
  }
  for (std::size_t k = 2; k <= 5; ++k) {
    rows.push_back({make_star_query(k), Rat(0), 1});
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    rows.push_back({make_spider_query(k), Rat(1) - Rat(1, static_cast<std::int64_t>(k)), 2});
  }

  for (const auto& row : rows) {
    const Query& q = row.query;
    Rat space = space_exponent(q);
    std::size_t depth0 = build_plan(q, Rat(0)).depth;
    std::size_t depth_half = build_plan(q, Rat(1, 2)).depth;
    std::size_t depth_two_thirds = build_plan(q, Rat(2, 3)).depth;

    if (space != row.space) {
      result.diffs.push_back(q.name + ": space exponent " + space.str() + " != " +
                             row.space.str());
    }
    if (depth0 != row.rounds0) {
      result.diffs.push_back(q.name + ": rounds at eps=0 " + std::to_string(depth0) +
                             " != " + std::to_string(row.rounds0));
    }

    os << q.name;
    for (std::size_t pad = q.name.size(); pad < 11; ++pad) os << ' ';
    os << space.str() << "        " << depth0 << "            " << depth_half
       << "             " << depth_two_thirds << "\n";
  }
  result.text = os.str();
  return result;
}

}  // namespace mpc
