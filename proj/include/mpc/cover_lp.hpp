#pragma once

#include <map>
#include <vector>

#include "mpc/query_model.hpp"
#include "mpc/rational.hpp"

namespace mpc {

struct CoverSolution {
  std::map<std::string, Rat> weights;  // variable -> v_i >= 0
  Rat value;                           // sum of weights
  bool tight = false;                  // every atom inequality holds with equality
};

struct PackingSolution {
  std::map<std::string, Rat> weights;  // atom -> u_j >= 0
  Rat value;
  bool tight = false;  // every variable inequality holds with equality
};

// Optimal value of the fractional vertex-cover LP (equals the optimal edge
// packing by duality). Exact.
Rat tau_star(const Query& q);

// Canonical optimal cover: the lexicographically smallest optimal weight
// vector in head-variable order, computed by exact rational simplex.
CoverSolution optimal_cover(const Query& q);

// Canonical optimal packing, lexicographically smallest in atom order.
PackingSolution optimal_packing(const Query& q);

bool cover_feasible(const Query& q, const std::map<std::string, Rat>& weights);
bool packing_feasible(const Query& q, const std::map<std::string, Rat>& weights);

// 1 - 1/tau*. Rejects disconnected queries and queries with unary atoms.
Rat space_exponent(const Query& q);

// True iff some variable occurs in every atom; for connected queries this is
// equivalent to tau* == 1.
bool has_universal_variable(const Query& q);

struct FriedgutInput {
  std::size_t n = 0;
  // atom name -> row-major tensor over [n]^arity, 1-based values
  std::map<std::string, std::vector<double>> weights;
};

struct FriedgutSides {
  double lhs = 0;
  double rhs = 0;
};

// Evaluates both sides of the hypergraph weight inequality for a fractional
// edge cover u: sum over assignments of the product of atom weights on the
// left, the product of (sum w^(1/u_j))^(u_j) terms on the right, with
// u_j == 0 contributing the max entry. RHS accumulates in log space.
FriedgutSides evaluate_friedgut(const Query& q, const std::map<std::string, Rat>& edge_cover,
                                const FriedgutInput& input);

// LHS <= RHS * (1 + 1e-9)
bool check_friedgut(const Query& q, const std::map<std::string, Rat>& edge_cover,
                    const FriedgutInput& input);

}  // namespace mpc
