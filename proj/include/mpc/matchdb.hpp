#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mpc/query_model.hpp"

namespace mpc {

struct Relation {
  std::vector<std::string> schema;    // column variable names
  std::size_t arity = 0;
  std::vector<std::uint32_t> tuples;  // row-major, stride = arity, values in [1, n]

  std::size_t size() const { return arity == 0 ? 0 : tuples.size() / arity; }
};

// One matching instance per atom: every relation has exactly n tuples and
// each column is a permutation of 1..n.
struct MatchingDatabase {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::map<std::string, Relation> relations;
};

struct AnswerSet {
  std::size_t width = 0;
  std::vector<std::uint32_t> flat;  // sorted lexicographically, deduplicated

  std::size_t size() const { return width == 0 ? 0 : flat.size() / width; }
  void finalize();  // sort + dedupe
  bool subset_of(const AnswerSet& other) const;
  bool operator==(const AnswerSet&) const = default;
};

// Column 1 is the identity order 1..n, the remaining columns are independent
// uniform permutations from the seeded generator. Same (query, n, seed)
// always yields identical relations. Atoms with a repeated variable are
// rejected: a matching cannot have duplicate columns.
MatchingDatabase generate(const Query& q, std::size_t n, std::uint64_t seed);

// Exact answer set by atom-at-a-time join with hash lookups on the bound
// variables; no budgets, no parallelism. The independent correctness oracle.
AnswerSet oracle_eval(const Query& q, const MatchingDatabase& db);

// The same join over an arbitrary relation store; shared by the oracle and
// by the simulated workers joining their received fragments.
AnswerSet join_atoms(const Query& q, const std::map<std::string, Relation>& relations);

// n^(1 + chi); rejects disconnected queries.
double expected_answer_size(const Query& q, std::size_t n);

// One CSV file per relation: header = variable names, rows = 1-based tuples.
void dump_csv(const MatchingDatabase& db, const std::string& directory);

}  // namespace mpc
