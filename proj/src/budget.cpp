#include "mpc/budget.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "mpc/powmath.hpp"

namespace mpc {

std::size_t bits_per_value(std::size_t n) {
  if (n <= 1) return 0;
  return std::bit_width(n - 1);
}

std::uint64_t relation_bits(const Relation& rel, std::size_t n) {
  return std::uint64_t(rel.size()) * rel.arity * bits_per_value(n);
}

std::uint64_t input_bits(const std::vector<std::string>& names,
                         const std::map<std::string, Relation>& store, std::size_t n) {
  std::uint64_t total = 0;
  for (const auto& name : names) {
    auto it = store.find(name);
    if (it == store.end()) throw std::invalid_argument("missing relation: " + name);
    total += relation_bits(it->second, n);
  }
  return total;
}

std::uint64_t budget_bits(const BudgetSpec& spec, std::uint64_t total_input_bits,
                          std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("p must be positive");
  if (spec.c <= 0) throw std::invalid_argument("budget constant must be positive");
  Rat exponent = Rat(1) - spec.epsilon;
  if (exponent.is_negative()) exponent = Rat(0);
  double denom = rational_power(p, exponent);
  long double raw = static_cast<long double>(spec.c) * total_input_bits / denom;
  return static_cast<std::uint64_t>(std::ceil(raw));
}

}  // namespace mpc
