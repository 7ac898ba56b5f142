#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace mpc {

// Exact rational arithmetic on 64-bit numerator/denominator. Intermediates
// run through 128-bit integers; a result that cannot be reduced back into
// 64 bits throws std::overflow_error. The denominator is always positive
// and the fraction is kept in lowest terms.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit
  Rat(std::int64_t num, std::int64_t den);

  // Accepts "a", "-a", "a/b" and plain decimals like "0.5".
  static Rat from_string(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rat operator-() const;
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }
  std::int64_t floor() const;  // rounds toward minus infinity

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

 private:
  static Rat make(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace mpc
