#include "mpc/cover_lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mpc {

namespace {

struct LpRow {
  std::vector<Rat> coef;
  char rel;  // '<', '>' or '='
  Rat rhs;
};

// Two-phase dense simplex over exact rationals with Bland's rule. The LPs
// here have at most ~25 rows and columns, so no effort is spent on speed.
class Simplex {
 public:
  Simplex(std::size_t nvars, const std::vector<LpRow>& rows, std::vector<Rat> objective)
      : n_(nvars), m_(rows.size()), obj_(std::move(objective)) {
    std::size_t nslack = 0;
    for (const auto& r : rows) {
      if (r.rel != '=') ++nslack;
    }
    art0_ = n_ + nslack;
    ncols_ = art0_ + m_;
    tab_.assign(m_, std::vector<Rat>(ncols_ + 1, Rat(0)));
    basis_.assign(m_, 0);

    std::size_t snext = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      const LpRow& r = rows[i];
      for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = r.coef[j];
      if (r.rel != '=') {
        tab_[i][snext++] = (r.rel == '<') ? Rat(1) : Rat(-1);
      }
      tab_[i][ncols_] = r.rhs;
      if (tab_[i][ncols_] < Rat(0)) {
        for (auto& v : tab_[i]) v = -v;
      }
      tab_[i][art0_ + i] = Rat(1);
      basis_[i] = art0_ + i;
    }
  }

  Rat minimize(std::vector<Rat>& x) {
    {
      std::vector<Rat> phase1(ncols_, Rat(0));
      for (std::size_t j = art0_; j < ncols_; ++j) phase1[j] = Rat(1);
      run(phase1, ncols_);
      if (!(objective_value(phase1) == Rat(0))) {
        throw std::logic_error("LP infeasible");
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < art0_) continue;
        for (std::size_t j = 0; j < art0_; ++j) {
          if (!tab_[i][j].is_zero()) {
            pivot(i, j);
            break;
          }
        }
      }
    }
    std::vector<Rat> cost(ncols_, Rat(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = obj_[j];
    run(cost, art0_);
    x.assign(n_, Rat(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = tab_[i][ncols_];
    }
    return objective_value(cost);
  }

 private:
  Rat objective_value(const std::vector<Rat>& cost) const {
    Rat v(0);
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * tab_[i][ncols_];
    return v;
  }

  void run(const std::vector<Rat>& cost, std::size_t usable_cols) {
    for (;;) {
      std::size_t enter = ncols_;
      for (std::size_t j = 0; j < usable_cols; ++j) {
        Rat reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
          if (!tab_[i][j].is_zero()) reduced -= cost[basis_[i]] * tab_[i][j];
        }
        if (reduced < Rat(0)) {
          enter = j;  // Bland: smallest improving index
          break;
        }
      }
      if (enter == ncols_) return;

      std::size_t leave = m_;
      Rat best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] > Rat(0)) {
          Rat ratio = tab_[i][ncols_] / tab_[i][enter];
          if (leave == m_ || ratio < best ||
              (ratio == best && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == m_) throw std::logic_error("LP unbounded");
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rat pv = tab_[row][col];
    for (auto& v : tab_[row]) v = v / pv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || tab_[i][col].is_zero()) continue;
      Rat f = tab_[i][col];
      for (std::size_t j = 0; j <= ncols_; ++j) {
        tab_[i][j] -= f * tab_[row][j];
      }
    }
    basis_[row] = col;
  }

  std::size_t n_, m_, art0_, ncols_;
  std::vector<Rat> obj_;
  std::vector<std::vector<Rat>> tab_;
  std::vector<std::size_t> basis_;
};

std::vector<LpRow> cover_rows(const Query& q) {
  const std::size_t k = q.var_count();
  std::vector<LpRow> rows;
  rows.reserve(q.atom_count());
  for (const auto& atom : q.atoms) {
    LpRow row{std::vector<Rat>(k, Rat(0)), '>', Rat(1)};
    for (const auto& v : atom.vars) row.coef[q.var_index(v)] = Rat(1);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LpRow> packing_rows(const Query& q) {
  const std::size_t ell = q.atom_count();
  std::vector<LpRow> rows;
  for (const auto& var : q.head_vars) {
    LpRow row{std::vector<Rat>(ell, Rat(0)), '<', Rat(1)};
    for (std::size_t j = 0; j < ell; ++j) {
      if (std::find(q.atoms[j].vars.begin(), q.atoms[j].vars.end(), var) !=
          q.atoms[j].vars.end()) {
        row.coef[j] = Rat(1);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LpRow unit_eq(std::size_t n, std::size_t idx, const Rat& value) {
  LpRow row{std::vector<Rat>(n, Rat(0)), '=', value};
  row.coef[idx] = Rat(1);
  return row;
}

// Lexicographically minimal point of the optimal face: pin the objective
// value, then minimize each coordinate in order.
std::vector<Rat> lex_min_optimum(std::size_t n, const std::vector<LpRow>& base,
                                 const std::vector<Rat>& objective, const Rat& optimum) {
  std::vector<Rat> fixed;
  std::vector<LpRow> rows = base;
  rows.push_back(LpRow{objective, '=', optimum});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> unit(n, Rat(0));
    unit[i] = Rat(1);
    std::vector<Rat> x;
    Rat vi = Simplex(n, rows, unit).minimize(x);
    fixed.push_back(vi);
    rows.push_back(unit_eq(n, i, vi));
  }
  return fixed;
}

}  // namespace

Rat tau_star(const Query& q) {
  if (q.atoms.empty()) throw std::invalid_argument("query has no atoms");
  const std::size_t k = q.var_count();
  std::vector<Rat> ones(k, Rat(1));
  std::vector<Rat> x;
  return Simplex(k, cover_rows(q), ones).minimize(x);
}

CoverSolution optimal_cover(const Query& q) {
  if (q.atoms.empty()) throw std::invalid_argument("query has no atoms");
  const std::size_t k = q.var_count();
  std::vector<Rat> ones(k, Rat(1));
  auto rows = cover_rows(q);
  std::vector<Rat> x;
  Rat tau = Simplex(k, rows, ones).minimize(x);
  std::vector<Rat> weights = lex_min_optimum(k, rows, ones, tau);

  CoverSolution sol;
  sol.value = tau;
  sol.tight = true;
  for (std::size_t i = 0; i < k; ++i) sol.weights[q.head_vars[i]] = weights[i];
  for (const auto& atom : q.atoms) {
    Rat sum(0);
    std::set<std::string> seen;
    for (const auto& v : atom.vars) {
      if (seen.insert(v).second) sum += weights[q.var_index(v)];
    }
    if (sum != Rat(1)) sol.tight = false;
  }
  return sol;
}

PackingSolution optimal_packing(const Query& q) {
  if (q.atoms.empty()) throw std::invalid_argument("query has no atoms");
  const std::size_t ell = q.atom_count();
  std::vector<Rat> neg_ones(ell, Rat(-1));
  auto rows = packing_rows(q);
  std::vector<Rat> x;
  Rat neg_value = Simplex(ell, rows, neg_ones).minimize(x);
  std::vector<Rat> weights = lex_min_optimum(ell, rows, neg_ones, neg_value);

  PackingSolution sol;
  sol.value = -neg_value;
  sol.tight = true;
  for (std::size_t j = 0; j < ell; ++j) sol.weights[q.atoms[j].name] = weights[j];
  for (const auto& var : q.head_vars) {
    Rat sum(0);
    for (std::size_t j = 0; j < ell; ++j) {
      if (std::find(q.atoms[j].vars.begin(), q.atoms[j].vars.end(), var) !=
          q.atoms[j].vars.end()) {
        sum += weights[j];
      }
    }
    if (sum != Rat(1)) sol.tight = false;
  }
  return sol;
}

bool cover_feasible(const Query& q, const std::map<std::string, Rat>& weights) {
  for (const auto& [var, w] : weights) {
    if (w.is_negative()) return false;
    (void)var;
  }
  for (const auto& atom : q.atoms) {
    Rat sum(0);
    std::set<std::string> seen;
    for (const auto& v : atom.vars) {
      if (!seen.insert(v).second) continue;
      auto it = weights.find(v);
      if (it != weights.end()) sum += it->second;
    }
    if (sum < Rat(1)) return false;
  }
  return true;
}

bool packing_feasible(const Query& q, const std::map<std::string, Rat>& weights) {
  for (const auto& [atom, w] : weights) {
    if (w.is_negative()) return false;
    (void)atom;
  }
  for (const auto& var : q.head_vars) {
    Rat sum(0);
    for (const auto& atom : q.atoms) {
      if (std::find(atom.vars.begin(), atom.vars.end(), var) == atom.vars.end()) continue;
      auto it = weights.find(atom.name);
      if (it != weights.end()) sum += it->second;
    }
    if (sum > Rat(1)) return false;
  }
  return true;
}

Rat space_exponent(const Query& q) {
  if (!is_connected(q)) throw std::invalid_argument("space exponent needs a connected query");
  if (q.has_unary_atom()) {
    throw std::invalid_argument("space exponent is undefined with unary atoms");
  }
  return Rat(1) - Rat(1) / tau_star(q);
}

bool has_universal_variable(const Query& q) {
  for (const auto& var : q.head_vars) {
    bool everywhere = true;
    for (const auto& atom : q.atoms) {
      if (std::find(atom.vars.begin(), atom.vars.end(), var) == atom.vars.end()) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) return true;
  }
  return false;
}

namespace {

// edge cover: every variable's incident u_j sum to at least 1
void validate_edge_cover(const Query& q, const std::map<std::string, Rat>& u) {
  for (const auto& [atom, w] : u) {
    if (w.is_negative()) throw std::invalid_argument("negative cover weight on " + atom);
  }
  for (const auto& var : q.head_vars) {
    Rat sum(0);
    for (const auto& atom : q.atoms) {
      if (std::find(atom.vars.begin(), atom.vars.end(), var) == atom.vars.end()) continue;
      auto it = u.find(atom.name);
      if (it != u.end()) sum += it->second;
    }
    if (sum < Rat(1)) {
      throw std::invalid_argument("weights are not a fractional edge cover (variable " +
                                  var + ")");
    }
  }
}

}  // namespace

FriedgutSides evaluate_friedgut(const Query& q, const std::map<std::string, Rat>& edge_cover,
                                const FriedgutInput& input) {
  const std::size_t n = input.n;
  if (n == 0 || n > 32) throw std::invalid_argument("domain size must be in 1..32");
  validate_edge_cover(q, edge_cover);

  const std::size_t k = q.var_count();
  const std::size_t ell = q.atom_count();
  double cells = 1;
  for (std::size_t i = 0; i < k; ++i) cells *= static_cast<double>(n);
  if (cells > 1e8) throw std::invalid_argument("assignment space too large");

  std::vector<const std::vector<double>*> w(ell);
  for (std::size_t j = 0; j < ell; ++j) {
    auto it = input.weights.find(q.atoms[j].name);
    if (it == input.weights.end()) {
      throw std::invalid_argument("missing weight tensor for " + q.atoms[j].name);
    }
    std::size_t expect = 1;
    for (std::size_t i = 0; i < q.atoms[j].arity(); ++i) expect *= n;
    if (it->second.size() != expect) {
      throw std::invalid_argument("weight tensor size mismatch for " + q.atoms[j].name);
    }
    for (double x : it->second) {
      if (x < 0) throw std::invalid_argument("negative weight entry in " + q.atoms[j].name);
    }
    w[j] = &it->second;
  }

  // RHS: product over atoms of (sum w^(1/u))^u, accumulated in log space;
  // u == 0 contributes the max entry.
  bool rhs_zero = false;
  double log_rhs = 0;
  for (std::size_t j = 0; j < ell; ++j) {
    const auto& t = *w[j];
    double m = *std::max_element(t.begin(), t.end());
    if (m == 0) {
      rhs_zero = true;
      break;
    }
    auto it = edge_cover.find(q.atoms[j].name);
    Rat uj = it == edge_cover.end() ? Rat(0) : it->second;
    if (uj.is_zero()) {
      log_rhs += std::log(m);
    } else {
      double inv = 1.0 / uj.to_double();
      double s = 0;
      for (double x : t) {
        if (x > 0) s += std::exp(inv * (std::log(x) - std::log(m)));
      }
      log_rhs += std::log(m) + uj.to_double() * std::log(s);
    }
  }

  // LHS: sum over all assignments of the product of atom weights. Each atom
  // is folded in at the depth where its last variable gets a value.
  std::vector<std::vector<std::size_t>> complete_at(k);
  std::vector<std::vector<std::size_t>> slot_of(ell);
  for (std::size_t j = 0; j < ell; ++j) {
    std::size_t last = 0;
    for (const auto& v : q.atoms[j].vars) {
      std::size_t s = q.var_index(v);
      slot_of[j].push_back(s);
      last = std::max(last, s);
    }
    complete_at[last].push_back(j);
  }
  std::vector<std::uint32_t> assign(k, 0);
  double lhs = 0;
  auto index_of = [&](std::size_t j) {
    std::size_t idx = 0;
    for (std::size_t s : slot_of[j]) idx = idx * n + (assign[s] - 1);
    return idx;
  };
  auto recurse = [&](auto&& self, std::size_t depth, double prod) -> void {
    if (depth == k) {
      lhs += prod;
      return;
    }
    for (std::uint32_t val = 1; val <= n; ++val) {
      assign[depth] = val;
      double p = prod;
      for (std::size_t j : complete_at[depth]) {
        p *= (*w[j])[index_of(j)];
        if (p == 0) break;
      }
      if (p != 0) self(self, depth + 1, p);
    }
  };
  recurse(recurse, 0, 1.0);

  FriedgutSides sides;
  sides.lhs = lhs;
  sides.rhs = rhs_zero ? 0.0 : std::exp(log_rhs);
  return sides;
}

bool check_friedgut(const Query& q, const std::map<std::string, Rat>& edge_cover,
                    const FriedgutInput& input) {
  FriedgutSides s = evaluate_friedgut(q, edge_cover, input);
  if (s.lhs == 0) return true;
  if (s.rhs == 0) return false;
  return std::log(s.lhs) <= std::log(s.rhs) + std::log1p(1e-9);
}

}  // namespace mpc
