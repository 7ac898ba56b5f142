#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpc {

struct Atom {
  std::string name;
  std::vector<std::string> vars;  // ordered, repeats allowed

  std::size_t arity() const { return vars.size(); }
  bool operator==(const Atom&) const = default;
};

class QueryError : public std::runtime_error {
 public:
  enum class Kind {
    syntax,
    non_full,
    self_join,
    duplicate_head,
    unbound_head,
    unknown_atom,
    too_large,
  };

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  QueryError(Kind kind, const std::string& message, std::size_t position = npos);

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

// A full conjunctive query without self-joins: variables are the hypergraph
// nodes, atoms the hyperedges. head_vars lists the distinct variables in
// head order; every atom variable appears in the head and vice versa for
// parsed queries (contractions may leave isolated head variables).
struct Query {
  std::string name;
  std::vector<std::string> head_vars;
  std::vector<Atom> atoms;

  std::size_t var_count() const { return head_vars.size(); }    // k
  std::size_t atom_count() const { return atoms.size(); }       // ell
  std::size_t total_arity() const;                              // a

  std::size_t var_index(const std::string& var) const;  // throws on unknown
  bool has_var(const std::string& var) const;
  const Atom& atom(const std::string& name) const;  // throws on unknown
  bool has_atom(const std::string& name) const;
  bool has_unary_atom() const;
  bool has_repeated_atom_var() const;

  bool operator==(const Query&) const = default;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

struct ComponentInfo {
  std::vector<std::string> vars;
  std::vector<std::string> atoms;
};

struct QueryStats {
  std::vector<ComponentInfo> components;
  std::size_t component_count = 0;  // c
  std::int64_t chi = 0;             // k + ell - a - c
  bool tree_like = false;           // connected and chi == 0
  std::size_t radius = 0;           // kUnreachable when disconnected
  std::size_t diameter = 0;         // radius <= diameter <= 2*radius
};

// Grammar: Head ":-" Atom ("," Atom)* with Head/Atom = Ident "(" VarList ")".
// Identifiers are [A-Za-z_][A-Za-z0-9_]*, whitespace is insignificant.
Query parse_query(const std::string& text);

// parse_query(render(q)) == q
std::string render(const Query& q);

QueryStats stats(const Query& q);
bool is_connected(const Query& q);

// Collapses each connected component of the sub-hypergraph induced by
// merged_atoms into a single variable, named after the lexicographically
// smallest member. Remaining atoms keep their names and arities.
Query contract(const Query& q, const std::vector<std::string>& merged_atoms);

// The query induced by the given atoms (head order inherited from q).
Query subquery(const Query& q, const std::vector<std::string>& atom_names);

// All connected subqueries with at most max_atoms atoms, no duplicates.
// Exponential in the atom count; refuses queries with more than 20 atoms.
std::vector<Query> connected_subqueries(const Query& q, std::size_t max_atoms);

}  // namespace mpc
