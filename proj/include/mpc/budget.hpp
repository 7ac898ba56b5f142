#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mpc/matchdb.hpp"
#include "mpc/rational.hpp"

namespace mpc {

// Per-round, per-server communication budget: ceil(c * N / p^(1-epsilon))
// bits, where N is the round's total input size in bits.
struct BudgetSpec {
  double c = 4.0;
  Rat epsilon = Rat(0);
  bool enforce = false;
};

// ceil(log2 n) bits per value; a tuple of arity a costs a * bits_per_value(n).
std::size_t bits_per_value(std::size_t n);

std::uint64_t relation_bits(const Relation& rel, std::size_t n);

// Total bits of the named relations in the store.
std::uint64_t input_bits(const std::vector<std::string>& names,
                         const std::map<std::string, Relation>& store, std::size_t n);

std::uint64_t budget_bits(const BudgetSpec& spec, std::uint64_t total_input_bits,
                          std::uint64_t p);

}  // namespace mpc
