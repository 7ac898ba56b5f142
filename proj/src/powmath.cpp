#include "mpc/powmath.hpp"

#include <cmath>
#include <stdexcept>

namespace mpc {

namespace {

using u128 = unsigned __int128;

// v^e, or nullopt when the result exceeds 64 bits
std::optional<std::uint64_t> checked_pow(std::uint64_t v, std::uint64_t e) {
  u128 r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    r *= v;
    if (r > u128(UINT64_MAX)) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

// sign of m^b - p^a; falls back to long-double logs when both sides overflow
int compare_pow(std::uint64_t m, std::uint64_t b, std::uint64_t p, std::uint64_t a) {
  auto lhs = checked_pow(m, b);
  auto rhs = checked_pow(p, a);
  if (lhs && rhs) {
    if (*lhs < *rhs) return -1;
    if (*lhs > *rhs) return 1;
    return 0;
  }
  if (lhs && !rhs) return -1;
  if (!lhs && rhs) return 1;
  long double l = static_cast<long double>(b) * std::log(static_cast<long double>(m));
  long double r = static_cast<long double>(a) * std::log(static_cast<long double>(p));
  if (l < r - 1e-12L) return -1;
  if (l > r + 1e-12L) return 1;
  return 0;
}

}  // namespace

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t v) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      unsigned m = 0;
      while (v % d == 0) {
        v /= d;
        ++m;
      }
      out.emplace_back(d, m);
    }
  }
  if (v > 1) out.emplace_back(v, 1);
  return out;
}

std::optional<std::uint64_t> exact_rational_power(std::uint64_t p, const Rat& e) {
  if (p == 0) throw std::domain_error("power of zero base");
  if (e.is_negative()) throw std::domain_error("negative exponent");
  if (e.is_zero() || p == 1) return 1;
  const std::uint64_t a = static_cast<std::uint64_t>(e.num());
  const std::uint64_t b = static_cast<std::uint64_t>(e.den());
  u128 result = 1;
  for (auto [prime, mult] : factorize(p)) {
    std::uint64_t total = static_cast<std::uint64_t>(mult) * a;
    if (total % b != 0) return std::nullopt;
    auto part = checked_pow(prime, total / b);
    if (!part) throw std::overflow_error("rational power overflow");
    result *= u128(*part);
    if (result > u128(UINT64_MAX)) throw std::overflow_error("rational power overflow");
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t floor_rational_power(std::uint64_t p, const Rat& e) {
  if (auto exact = exact_rational_power(p, e)) return *exact;
  const std::uint64_t a = static_cast<std::uint64_t>(e.num());
  const std::uint64_t b = static_cast<std::uint64_t>(e.den());
  long double guess = std::pow(static_cast<long double>(p), e.to_double());
  std::uint64_t m = guess < 1.0L ? 1 : static_cast<std::uint64_t>(guess);
  while (compare_pow(m + 1, b, p, a) <= 0) ++m;
  while (m > 1 && compare_pow(m, b, p, a) > 0) --m;
  return m;
}

double rational_power(std::uint64_t p, const Rat& e) {
  if (auto exact = exact_rational_power(p, e)) return static_cast<double>(*exact);
  return std::pow(static_cast<double>(p), e.to_double());
}

}  // namespace mpc
