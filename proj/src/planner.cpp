#include "mpc/planner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mpc/cover_lp.hpp"
#include "mpc/rng.hpp"

namespace mpc {

namespace {

std::size_t ceil_log(std::size_t base, std::size_t x) {
  std::size_t r = 0;
  std::size_t v = 1;
  while (v < x) {
    v *= base;
    ++r;
  }
  return r;
}

Rat one_round_threshold(const Rat& epsilon) {
  return Rat(1) / (Rat(1) - epsilon);
}

// variable adjacency of the clique expansion
std::vector<std::vector<std::size_t>> var_adjacency(const Query& q) {
  const std::size_t k = q.var_count();
  std::vector<std::vector<bool>> seen(k, std::vector<bool>(k, false));
  std::vector<std::vector<std::size_t>> adj(k);
  for (const auto& atom : q.atoms) {
    for (std::size_t i = 0; i < atom.vars.size(); ++i) {
      for (std::size_t j = i + 1; j < atom.vars.size(); ++j) {
        std::size_t u = q.var_index(atom.vars[i]);
        std::size_t v = q.var_index(atom.vars[j]);
        if (u == v || seen[u][v]) continue;
        seen[u][v] = seen[v][u] = true;
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
  }
  return adj;
}

// Walks a chain of binary atoms. Returns atom indices in walk order, or
// nothing when the query is not a simple path / cycle.
struct ShapeInfo {
  std::vector<std::size_t> chain;  // atom indices
};

bool all_binary_simple(const Query& q) {
  for (const auto& atom : q.atoms) {
    if (atom.arity() != 2 || atom.vars[0] == atom.vars[1]) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> var_atom_incidence(const Query& q) {
  std::vector<std::vector<std::size_t>> inc(q.var_count());
  for (std::size_t j = 0; j < q.atoms.size(); ++j) {
    std::set<std::size_t> slots;
    for (const auto& v : q.atoms[j].vars) slots.insert(q.var_index(v));
    for (std::size_t s : slots) inc[s].push_back(j);
  }
  return inc;
}

std::optional<ShapeInfo> path_chain(const Query& q) {
  if (q.atoms.empty() || !all_binary_simple(q)) return std::nullopt;
  if (q.var_count() != q.atom_count() + 1) return std::nullopt;
  auto inc = var_atom_incidence(q);
  std::vector<std::size_t> endpoints;
  for (std::size_t s = 0; s < inc.size(); ++s) {
    if (inc[s].size() == 1) {
      endpoints.push_back(s);
    } else if (inc[s].size() != 2) {
      return std::nullopt;
    }
  }
  if (endpoints.size() != 2) return std::nullopt;

  ShapeInfo info;
  std::size_t cur = endpoints[0];  // first endpoint in head order
  std::size_t prev_atom = q.atom_count();
  for (std::size_t step = 0; step < q.atom_count(); ++step) {
    std::size_t next_atom = q.atom_count();
    for (std::size_t j : inc[cur]) {
      if (j != prev_atom) {
        next_atom = j;
        break;
      }
    }
    if (next_atom == q.atom_count()) return std::nullopt;
    info.chain.push_back(next_atom);
    const Atom& a = q.atoms[next_atom];
    std::size_t u = q.var_index(a.vars[0]);
    std::size_t v = q.var_index(a.vars[1]);
    cur = (u == cur) ? v : u;
    prev_atom = next_atom;
  }
  if (cur != endpoints[1] || info.chain.size() != q.atom_count()) return std::nullopt;
  return info;
}

std::optional<ShapeInfo> cycle_chain(const Query& q) {
  if (q.atom_count() < 2 || !all_binary_simple(q)) return std::nullopt;
  if (q.var_count() != q.atom_count()) return std::nullopt;
  auto inc = var_atom_incidence(q);
  for (const auto& atoms : inc) {
    if (atoms.size() != 2) return std::nullopt;
  }
  ShapeInfo info;
  std::size_t start = 0;
  std::size_t cur = start;
  std::size_t prev_atom = q.atom_count();
  for (std::size_t step = 0; step < q.atom_count(); ++step) {
    std::size_t next_atom;
    if (prev_atom == q.atom_count()) {
      next_atom = std::min(inc[cur][0], inc[cur][1]);  // deterministic direction
    } else {
      next_atom = inc[cur][0] == prev_atom ? inc[cur][1] : inc[cur][0];
    }
    info.chain.push_back(next_atom);
    const Atom& a = q.atoms[next_atom];
    std::size_t u = q.var_index(a.vars[0]);
    std::size_t v = q.var_index(a.vars[1]);
    cur = (u == cur) ? v : u;
    prev_atom = next_atom;
  }
  if (cur != start) return std::nullopt;
  std::set<std::size_t> distinct(info.chain.begin(), info.chain.end());
  if (distinct.size() != q.atom_count()) return std::nullopt;
  return info;
}

// ----- plan construction -------------------------------------------------

// A segment is a relation reference (base atom or view) spanning an interval
// of a path. Consecutive segments share their junction variable.
struct Seg {
  std::string rel;
  std::vector<std::string> vars;
};

Query block_from_segs(const std::string& view_name, const std::vector<Seg>& segs,
                      std::size_t from, std::size_t count) {
  Query block;
  block.name = view_name;
  for (std::size_t i = from; i < from + count; ++i) {
    Atom atom;
    atom.name = segs[i].rel;
    atom.vars = segs[i].vars;
    block.atoms.push_back(std::move(atom));
    for (const auto& v : segs[i].vars) {
      if (!block.has_var(v)) block.head_vars.push_back(v);
    }
  }
  return block;
}

// One chunking round over a segment chain: groups of up to k_eps consecutive
// segments become blocks, a trailing singleton passes through untouched.
std::vector<Seg> chunk_round(const std::vector<Seg>& segs, std::size_t k_eps,
                             std::size_t round_no, std::size_t& view_counter,
                             std::vector<Query>& blocks_out, bool name_final_out) {
  std::vector<Seg> next;
  std::size_t i = 0;
  while (i < segs.size()) {
    std::size_t take = std::min(k_eps, segs.size() - i);
    if (take == 1) {
      next.push_back(segs[i]);
      ++i;
      continue;
    }
    bool is_whole = (i == 0 && take == segs.size());
    std::string name;
    if (name_final_out && is_whole) {
      name = "out";
    } else {
      name = "v" + std::to_string(round_no) + "_" + std::to_string(view_counter++);
    }
    Query block = block_from_segs(name, segs, i, take);
    next.push_back(Seg{name, block.head_vars});
    blocks_out.push_back(std::move(block));
    i += take;
  }
  return next;
}

void assert_blocks_computable(const RoundPlan& plan, const Rat& epsilon) {
  for (const auto& round : plan.rounds) {
    for (const auto& block : round) {
      if (!in_gamma1(block, epsilon)) {
        throw std::logic_error("plan block " + block.name + " is not one-round computable");
      }
    }
  }
}

void assert_plan_covers_query(const RoundPlan& plan) {
  std::set<std::string> base;
  for (const auto& atom : plan.query.atoms) base.insert(atom.name);
  std::set<std::string> used;
  for (const auto& round : plan.rounds) {
    for (const auto& block : round) {
      if (base.count(block.name)) {
        throw std::invalid_argument("relation name collides with view name " + block.name +
                                    "; rename the relation");
      }
      for (const auto& atom : block.atoms) {
        if (base.count(atom.name)) used.insert(atom.name);
      }
    }
  }
  if (used != base) throw std::logic_error("plan does not cover every base atom");
}

RoundPlan single_block_plan(const Query& q) {
  RoundPlan plan;
  plan.query = q;
  plan.depth = 1;
  Query block = q;
  block.name = "out";
  plan.rounds.push_back({std::move(block)});
  plan.final_view = "out";
  return plan;
}

RoundPlan path_query_plan(const Query& q, const ShapeInfo& shape, std::size_t k_eps) {
  std::vector<Seg> segs;
  for (std::size_t idx : shape.chain) {
    segs.push_back(Seg{q.atoms[idx].name, q.atoms[idx].vars});
  }
  RoundPlan plan;
  plan.query = q;
  std::size_t round_no = 1;
  while (segs.size() > 1) {
    std::vector<Query> blocks;
    std::size_t ctr = 1;
    segs = chunk_round(segs, k_eps, round_no, ctr, blocks, true);
    plan.rounds.push_back(std::move(blocks));
    ++round_no;
  }
  plan.depth = plan.rounds.size();
  plan.final_view = "out";
  return plan;
}

struct BfsTree {
  std::vector<std::size_t> dist;
  std::vector<std::size_t> parent_var;
  std::vector<std::size_t> parent_atom;
};

BfsTree bfs_with_witness(const Query& q, std::size_t center) {
  const std::size_t k = q.var_count();
  BfsTree tree;
  tree.dist.assign(k, kUnreachable);
  tree.parent_var.assign(k, k);
  tree.parent_atom.assign(k, q.atom_count());

  // edges labeled by the first atom (in text order) witnessing them
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(k);
  std::vector<std::vector<bool>> seen(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < q.atoms.size(); ++a) {
    const auto& vars = q.atoms[a].vars;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        std::size_t u = q.var_index(vars[i]);
        std::size_t v = q.var_index(vars[j]);
        if (u == v || seen[u][v]) continue;
        seen[u][v] = seen[v][u] = true;
        adj[u].emplace_back(v, a);
        adj[v].emplace_back(u, a);
      }
    }
  }
  std::vector<std::size_t> queue{center};
  tree.dist[center] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (auto [v, a] : adj[u]) {
      if (tree.dist[v] != kUnreachable) continue;
      tree.dist[v] = tree.dist[u] + 1;
      tree.parent_var[v] = u;
      tree.parent_atom[v] = a;
      queue.push_back(v);
    }
  }
  return tree;
}

RoundPlan radius_plan(const Query& q, const Rat& epsilon, std::size_t k_eps) {
  const std::size_t k = q.var_count();

  // center: lexicographically smallest radius attainer
  std::size_t center = k;
  std::size_t radius = kUnreachable;
  for (std::size_t s = 0; s < k; ++s) {
    BfsTree t = bfs_with_witness(q, s);
    std::size_t ecc = *std::max_element(t.dist.begin(), t.dist.end());
    if (center == k || ecc < radius ||
        (ecc == radius && q.head_vars[s] < q.head_vars[center])) {
      radius = ecc;
      center = s;
    }
  }
  BfsTree tree = bfs_with_witness(q, center);

  // one path of atoms per atom: the witness chain to its closest variable,
  // then the atom itself
  std::vector<std::vector<std::size_t>> paths;
  for (std::size_t a = 0; a < q.atoms.size(); ++a) {
    std::size_t best_var = k;
    for (const auto& v : q.atoms[a].vars) {
      std::size_t s = q.var_index(v);
      if (best_var == k || tree.dist[s] < tree.dist[best_var]) best_var = s;
    }
    std::vector<std::size_t> chain;
    for (std::size_t u = best_var; u != center; u = tree.parent_var[u]) {
      chain.push_back(tree.parent_atom[u]);
    }
    std::reverse(chain.begin(), chain.end());
    if (std::find(chain.begin(), chain.end(), a) == chain.end()) chain.push_back(a);
    paths.push_back(std::move(chain));
  }

  // drop paths dominated by another path's atom set
  std::vector<std::set<std::size_t>> atom_sets;
  for (const auto& p : paths) atom_sets.emplace_back(p.begin(), p.end());
  std::vector<std::vector<std::size_t>> kept;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < paths.size() && !dominated; ++j) {
      if (i == j) continue;
      if (atom_sets[i] == atom_sets[j]) {
        dominated = j < i;
      } else {
        dominated = std::includes(atom_sets[j].begin(), atom_sets[j].end(),
                                  atom_sets[i].begin(), atom_sets[i].end());
      }
    }
    if (!dominated) kept.push_back(paths[i]);
  }

  std::vector<std::vector<Seg>> path_segs;
  for (const auto& p : kept) {
    std::vector<Seg> segs;
    for (std::size_t idx : p) segs.push_back(Seg{q.atoms[idx].name, q.atoms[idx].vars});
    path_segs.push_back(std::move(segs));
  }

  RoundPlan plan;
  plan.query = q;
  std::size_t round_no = 1;
  for (;;) {
    bool pending = false;
    for (const auto& segs : path_segs) {
      if (segs.size() > 1) pending = true;
    }
    if (!pending) break;
    std::vector<Query> blocks;
    std::size_t ctr = 1;
    for (auto& segs : path_segs) {
      if (segs.size() > 1) {
        segs = chunk_round(segs, k_eps, round_no, ctr, blocks, false);
      }
    }
    plan.rounds.push_back(std::move(blocks));
    ++round_no;
  }

  // final round: join every path view on the center variable
  std::vector<Seg> final_segs;
  for (const auto& segs : path_segs) final_segs.push_back(segs[0]);
  Query out = block_from_segs("out", final_segs, 0, final_segs.size());
  out.head_vars = q.head_vars;
  plan.rounds.push_back({std::move(out)});
  plan.depth = plan.rounds.size();
  plan.final_view = "out";
  (void)epsilon;
  return plan;
}

}  // namespace

bool in_gamma1(const Query& q, const Rat& epsilon) {
  if (!is_connected(q)) return false;
  if (epsilon >= Rat(1)) return true;  // degenerate: every server sees everything
  return tau_star(q) <= one_round_threshold(epsilon);
}

std::size_t k_epsilon(const Rat& epsilon) {
  if (epsilon.is_negative() || epsilon >= Rat(1)) {
    throw std::domain_error("epsilon must lie in [0, 1)");
  }
  return 2 * static_cast<std::size_t>(one_round_threshold(epsilon).floor());
}

RoundPlan build_plan(const Query& q, const Rat& epsilon) {
  if (!is_connected(q)) throw std::invalid_argument("plans need a connected query");
  if (in_gamma1(q, epsilon)) return single_block_plan(q);
  const std::size_t k_eps = k_epsilon(epsilon);

  RoundPlan plan;
  if (auto shape = path_chain(q)) {
    plan = path_query_plan(q, *shape, k_eps);
  } else {
    plan = radius_plan(q, epsilon, k_eps);
  }
  assert_blocks_computable(plan, epsilon);
  assert_plan_covers_query(plan);
  return plan;
}

std::string to_string(const RoundPlan& plan) {
  std::ostringstream os;
  os << "plan " << plan.query.name << " depth " << plan.depth << "\n";
  for (std::size_t t = 0; t < plan.rounds.size(); ++t) {
    os << "round " << (t + 1) << ":\n";
    for (const auto& block : plan.rounds[t]) {
      os << "  " << block.name << "(";
      for (std::size_t i = 0; i < block.head_vars.size(); ++i) {
        if (i) os << ",";
        os << block.head_vars[i];
      }
      os << ") := ";
      for (std::size_t j = 0; j < block.atoms.size(); ++j) {
        if (j) os << ", ";
        os << block.atoms[j].name << "(";
        for (std::size_t i = 0; i < block.atoms[j].vars.size(); ++i) {
          if (i) os << ",";
          os << block.atoms[j].vars[i];
        }
        os << ")";
      }
      os << "\n";
    }
  }
  os << "output " << plan.final_view << "\n";
  return os.str();
}

PlanExecution execute_plan(const RoundPlan& plan, const MatchingDatabase& db,
                           std::uint64_t p, const BudgetSpec& budget,
                           std::uint64_t master_seed, ExecMode mode,
                           std::size_t view_cell_cap) {
  if (p == 0) throw std::invalid_argument("p must be positive");
  std::map<std::string, Relation> store = db.relations;
  const std::size_t n = db.n;

  PlanExecution exec;
  std::size_t view_cells = 0;
  for (std::size_t t = 0; t < plan.rounds.size(); ++t) {
    std::vector<std::string> inputs;
    {
      std::set<std::string> names;
      for (const auto& block : plan.rounds[t]) {
        for (const auto& atom : block.atoms) names.insert(atom.name);
      }
      inputs.assign(names.begin(), names.end());
    }
    std::uint64_t round_n_bits = input_bits(inputs, store, n);
    std::uint64_t bb = budget_bits(budget, round_n_bits, p);

    std::vector<ServerLoad> offered(p);
    std::vector<std::uint64_t> delivered(p, 0);
    std::uint64_t produced = 0;
    for (std::size_t b = 0; b < plan.rounds[t].size(); ++b) {
      const Query& block = plan.rounds[t][b];
      CoverSolution cover = optimal_cover(block);
      SharePlan splan = make_share_plan(
          block, cover, p, mix64(master_seed ^ mix64((std::uint64_t(t) << 16) | b)));
      AnswerSet view = run_round_on_store(block, store, n, splan, bb, budget.enforce, mode,
                                          offered, delivered);
      produced += view.size();
      view_cells += view.flat.size();
      if (view_cells > view_cell_cap) {
        throw std::runtime_error("materialized views exceed the simulator memory cap");
      }
      Relation rel;
      rel.schema = block.head_vars;
      rel.arity = block.head_vars.size();
      rel.tuples = std::move(view.flat);
      store[block.name] = std::move(rel);
    }

    LoadReport report;
    report.per_server = std::move(offered);
    report.budget_bits = bb;
    report.answers_found = produced;
    for (const auto& load : report.per_server) {
      report.max_load_tuples = std::max(report.max_load_tuples, load.tuples);
      report.max_load_bits = std::max(report.max_load_bits, load.bits);
      if (load.bits > bb) report.exceeded = true;
    }
    bool exceeded = report.exceeded;
    exec.round_loads.push_back(std::move(report));
    if (budget.enforce && exceeded && t + 1 < plan.rounds.size()) {
      exec.aborted = true;
      break;
    }
  }

  if (!exec.aborted) {
    const Relation& rel = store.at(plan.final_view);
    exec.answers.width = rel.arity;
    exec.answers.flat = rel.tuples;
  } else {
    exec.answers.width = plan.query.var_count();
  }
  return exec;
}

RoundBound round_lower_bound(const Query& q, const Rat& epsilon) {
  if (!is_connected(q)) throw std::invalid_argument("round bounds need a connected query");
  const std::size_t k_eps = k_epsilon(epsilon);

  if (path_chain(q)) {
    return RoundBound{ceil_log(k_eps, q.atom_count()), BoundKind::path};
  }
  QueryStats st = stats(q);
  if (st.tree_like) {
    return RoundBound{ceil_log(k_eps, st.diameter), BoundKind::tree_like};
  }
  if (cycle_chain(q)) {
    const std::size_t k = q.atom_count();
    const std::size_t m_eps =
        static_cast<std::size_t>((Rat(2) / (Rat(1) - epsilon)).floor());
    // smallest r with k_eps^r * (m_eps + 1) >= k
    std::size_t r = 0;
    std::size_t v = m_eps + 1;
    while (v < k) {
      v *= k_eps;
      ++r;
    }
    return RoundBound{r + 1, BoundKind::cycle};
  }
  return RoundBound{ceil_log(k_eps, longest_induced_path(q)), BoundKind::heuristic};
}

std::size_t longest_induced_path(const Query& q) {
  const std::size_t k = q.var_count();
  if (k > 24) throw QueryError(QueryError::Kind::too_large, "induced-path search capped at 24 variables");
  auto adj_list = var_adjacency(q);
  std::vector<std::vector<bool>> adj(k, std::vector<bool>(k, false));
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v : adj_list[u]) adj[u][v] = true;
  }

  std::size_t best = 0;
  std::vector<std::size_t> path;
  std::vector<bool> in_path(k, false);
  auto dfs = [&](auto&& self, std::size_t last) -> void {
    best = std::max(best, path.size() - 1);
    for (std::size_t v = 0; v < k; ++v) {
      if (in_path[v] || !adj[last][v]) continue;
      bool induced = true;
      for (std::size_t i = 0; i + 1 < path.size() && induced; ++i) {
        if (adj[path[i]][v]) induced = false;
      }
      if (!induced) continue;
      path.push_back(v);
      in_path[v] = true;
      self(self, v);
      in_path[v] = false;
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < k; ++s) {
    path = {s};
    std::fill(in_path.begin(), in_path.end(), false);
    in_path[s] = true;
    dfs(dfs, s);
  }
  return best;
}

bool is_eps_good(const Query& q, const std::vector<std::string>& m, const Rat& epsilon) {
  std::set<std::string> mset;
  for (const auto& name : m) {
    if (!q.has_atom(name)) throw QueryError(QueryError::Kind::unknown_atom, name);
    mset.insert(name);
  }

  // complement must have characteristic zero
  std::vector<std::string> complement;
  for (const auto& atom : q.atoms) {
    if (!mset.count(atom.name)) complement.push_back(atom.name);
  }
  if (!complement.empty() && stats(subquery(q, complement)).chi != 0) return false;

  // no one-round-computable connected subquery may hold two atoms of m
  for (const auto& sub : connected_subqueries(q, q.atom_count())) {
    std::size_t hits = 0;
    for (const auto& atom : sub.atoms) {
      if (mset.count(atom.name)) ++hits;
    }
    if (hits >= 2 && in_gamma1(sub, epsilon)) return false;
  }
  return true;
}

namespace {

std::vector<std::string> chain_names(const Query& q, const std::vector<std::size_t>& chain) {
  std::vector<std::string> names;
  for (std::size_t idx : chain) names.push_back(q.atoms[idx].name);
  return names;
}

std::optional<std::vector<GoodSet>> spaced_plan(const Query& q, const Rat& epsilon,
                                                std::vector<std::string> chain, bool cyclic) {
  const std::size_t k_eps = k_epsilon(epsilon);
  const std::size_t minimum =
      cyclic ? static_cast<std::size_t>((Rat(2) / (Rat(1) - epsilon)).floor()) + 1
             : k_eps + 1;

  std::vector<GoodSet> seq;
  Query current = q;
  for (;;) {
    const std::size_t m = chain.size();
    std::size_t next_len = cyclic ? m / k_eps : (m + k_eps - 1) / k_eps;
    if (next_len < minimum) break;

    std::vector<std::string> selected;
    for (std::size_t i = 0; i * k_eps < m && selected.size() < next_len; ++i) {
      selected.push_back(chain[i * k_eps]);
    }
    GoodSet gs;
    gs.atoms = selected;
    gs.verified = is_eps_good(current, selected, epsilon);
    if (!gs.verified) throw std::logic_error("spaced atom set failed the goodness check");
    seq.push_back(gs);

    std::vector<std::string> complement;
    std::set<std::string> sel(selected.begin(), selected.end());
    for (const auto& name : chain) {
      if (!sel.count(name)) complement.push_back(name);
    }
    current = contract(current, complement);
    chain = selected;
  }
  if (in_gamma1(current, epsilon)) {
    throw std::logic_error("final contraction is one-round computable");
  }
  return seq;
}

}  // namespace

std::optional<std::vector<GoodSet>> build_eps_r_plan(const Query& q, const Rat& epsilon) {
  if (in_gamma1(q, epsilon)) return std::nullopt;
  if (auto shape = path_chain(q)) {
    return spaced_plan(q, epsilon, chain_names(q, shape->chain), false);
  }
  if (auto shape = cycle_chain(q)) {
    return spaced_plan(q, epsilon, chain_names(q, shape->chain), true);
  }
  throw std::invalid_argument(
      "no spacing construction for this query shape; supply candidate sets");
}

std::optional<std::vector<GoodSet>> build_eps_r_plan(
    const Query& q, const Rat& epsilon,
    const std::vector<std::vector<std::string>>& candidate_sets) {
  if (in_gamma1(q, epsilon)) return std::nullopt;
  std::vector<GoodSet> seq;
  Query current = q;
  std::set<std::string> previous;
  for (const auto& atom : q.atoms) previous.insert(atom.name);

  for (const auto& candidate : candidate_sets) {
    std::set<std::string> cset(candidate.begin(), candidate.end());
    if (cset.size() != candidate.size() || cset.empty()) return std::nullopt;
    if (cset == previous ||
        !std::includes(previous.begin(), previous.end(), cset.begin(), cset.end())) {
      return std::nullopt;  // must be a strictly shrinking chain
    }
    GoodSet gs;
    gs.atoms = candidate;
    gs.verified = is_eps_good(current, candidate, epsilon);
    if (!gs.verified) return std::nullopt;
    seq.push_back(gs);

    std::vector<std::string> complement;
    for (const auto& atom : current.atoms) {
      if (!cset.count(atom.name)) complement.push_back(atom.name);
    }
    current = contract(current, complement);
    previous = std::move(cset);
  }
  if (in_gamma1(current, epsilon)) return std::nullopt;
  return seq;
}

bool is_path_query(const Query& q) { return path_chain(q).has_value(); }
bool is_cycle_query(const Query& q) { return cycle_chain(q).has_value(); }

}  // namespace mpc
