#include "mpc/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mpc {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v) {
  if (v > i128(std::numeric_limits<std::int64_t>::max()) ||
      v < i128(std::numeric_limits<std::int64_t>::min())) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rat Rat::make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Rat r;
  if (num == 0) return r;
  u128 g = gcd128(abs128(num), u128(den));
  r.num_ = narrow(num / i128(g));
  r.den_ = narrow(den / i128(g));
  return r;
}

Rat::Rat(std::int64_t num, std::int64_t den) { *this = make(num, den); }

Rat Rat::operator-() const { return make(-i128(num_), den_); }

Rat Rat::operator+(const Rat& o) const {
  return make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
  return make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
}

Rat Rat::operator*(const Rat& o) const {
  return make(i128(num_) * o.num_, i128(den_) * o.den_);
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return make(i128(num_) * o.den_, i128(den_) * o.num_);
}

bool Rat::operator<(const Rat& o) const {
  return i128(num_) * o.den_ < i128(o.num_) * den_;
}

std::int64_t Rat::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::string Rat::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rat Rat::from_string(const std::string& text) {
  std::size_t i = 0;
  auto fail = [&]() { throw std::invalid_argument("cannot parse rational: " + text); };
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t digits = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == digits) fail();
  std::int64_t intpart = std::stoll(text.substr(start, i - start));
  bool negative = text[start] == '-';

  if (i < text.size() && text[i] == '/') {
    ++i;
    std::size_t dstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == dstart) fail();
    std::int64_t den = std::stoll(text.substr(dstart, i - dstart));
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) fail();
    return Rat(intpart, den);
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t fstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == fstart) fail();
    std::string frac = text.substr(fstart, i - fstart);
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) fail();
    if (frac.size() > 18) frac.resize(18);
    std::int64_t fnum = std::stoll(frac);
    std::int64_t fden = 1;
    for (std::size_t d = 0; d < frac.size(); ++d) fden *= 10;
    Rat mag = Rat(std::llabs(intpart)) + Rat(fnum, fden);
    return negative ? -mag : mag;
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) fail();
  return Rat(intpart);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace mpc
