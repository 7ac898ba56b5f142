#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mpc/rational.hpp"

namespace mpc {

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t v);

// p^e when e = a/b >= 0 yields an exact integer, nullopt otherwise.
std::optional<std::uint64_t> exact_rational_power(std::uint64_t p, const Rat& e);

// Largest integer m with m <= p^e.
std::uint64_t floor_rational_power(std::uint64_t p, const Rat& e);

// p^e as double; uses the exact integer value when there is one.
double rational_power(std::uint64_t p, const Rat& e);

}  // namespace mpc
