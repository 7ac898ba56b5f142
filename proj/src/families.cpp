#include "mpc/families.hpp"

#include <cctype>
#include <stdexcept>

namespace mpc {

namespace {

std::string xvar(std::size_t i) { return "x" + std::to_string(i); }

}  // namespace

Query make_path_query(std::size_t k) {
  if (k == 0) throw std::invalid_argument("path query needs k >= 1");
  Query q;
  q.name = "L" + std::to_string(k);
  for (std::size_t i = 0; i <= k; ++i) q.head_vars.push_back(xvar(i));
  for (std::size_t j = 1; j <= k; ++j) {
    q.atoms.push_back(Atom{"S" + std::to_string(j), {xvar(j - 1), xvar(j)}});
  }
  return q;
}

Query make_cycle_query(std::size_t k) {
  if (k < 2) throw std::invalid_argument("cycle query needs k >= 2");
  Query q;
  q.name = "C" + std::to_string(k);
  for (std::size_t i = 1; i <= k; ++i) q.head_vars.push_back(xvar(i));
  for (std::size_t j = 1; j <= k; ++j) {
    q.atoms.push_back(Atom{"S" + std::to_string(j), {xvar(j), xvar(j % k + 1)}});
  }
  return q;
}

Query make_star_query(std::size_t k) {
  if (k == 0) throw std::invalid_argument("star query needs k >= 1");
  Query q;
  q.name = "T" + std::to_string(k);
  q.head_vars.push_back("z");
  for (std::size_t i = 1; i <= k; ++i) q.head_vars.push_back(xvar(i));
  for (std::size_t j = 1; j <= k; ++j) {
    q.atoms.push_back(Atom{"S" + std::to_string(j), {"z", xvar(j)}});
  }
  return q;
}

Query make_binom_query(std::size_t k, std::size_t m) {
  if (m == 0 || m > k) throw std::invalid_argument("binom query needs 1 <= m <= k");
  Query q;
  q.name = "B" + std::to_string(k) + "_" + std::to_string(m);
  for (std::size_t i = 1; i <= k; ++i) q.head_vars.push_back(xvar(i));
  // m-subsets of {1..k} in lexicographic order
  std::vector<std::size_t> subset(m);
  for (std::size_t i = 0; i < m; ++i) subset[i] = i + 1;
  for (;;) {
    Atom atom;
    atom.name = "S";
    for (std::size_t i : subset) {
      atom.name += std::to_string(i);
      atom.vars.push_back(xvar(i));
    }
    q.atoms.push_back(std::move(atom));

    std::size_t pos = m;
    while (pos > 0 && subset[pos - 1] == k - (m - pos)) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < m; ++i) subset[i] = subset[i - 1] + 1;
  }
  return q;
}

Query make_spider_query(std::size_t k) {
  if (k == 0) throw std::invalid_argument("spider query needs k >= 1");
  Query q;
  q.name = "SP" + std::to_string(k);
  q.head_vars.push_back("z");
  for (std::size_t i = 1; i <= k; ++i) {
    q.head_vars.push_back(xvar(i));
    q.head_vars.push_back("y" + std::to_string(i));
  }
  for (std::size_t i = 1; i <= k; ++i) {
    q.atoms.push_back(Atom{"R" + std::to_string(i), {"z", xvar(i)}});
    q.atoms.push_back(Atom{"S" + std::to_string(i), {xvar(i), "y" + std::to_string(i)}});
  }
  return q;
}

std::optional<Query> family_query(const std::string& name) {
  auto is_digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  auto strip_sep = [](std::string s) {
    if (!s.empty() && (s[0] == '_' || s[0] == '-')) s.erase(0, 1);
    return s;
  };

  try {
    if (name.size() >= 2 && (name[0] == 'L' || name[0] == 'C' || name[0] == 'T')) {
      std::string rest = strip_sep(name.substr(1));
      if (is_digits(rest)) {
        std::size_t k = std::stoul(rest);
        if (name[0] == 'L') return make_path_query(k);
        if (name[0] == 'C') return make_cycle_query(k);
        return make_star_query(k);
      }
    }
    if (name.size() >= 3 && name.substr(0, 2) == "SP") {
      std::string rest = strip_sep(name.substr(2));
      if (is_digits(rest)) return make_spider_query(std::stoul(rest));
    }
    if (name.size() >= 2 && name[0] == 'B') {
      std::string rest = strip_sep(name.substr(1));
      auto sep = rest.find_first_of("_-x");
      if (sep != std::string::npos) {
        std::string a = rest.substr(0, sep);
        std::string b = strip_sep(rest.substr(sep));
        if (is_digits(a) && is_digits(b)) {
          return make_binom_query(std::stoul(a), std::stoul(b));
        }
      }
    }
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace mpc
