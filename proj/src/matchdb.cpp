#include "mpc/matchdb.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "mpc/rng.hpp"

namespace mpc {

void AnswerSet::finalize() {
  if (width == 0) {
    flat.clear();
    return;
  }
  const std::size_t rows = flat.size() / width;
  std::vector<std::uint32_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0u);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t* pa = flat.data() + std::size_t(a) * width;
    const std::uint32_t* pb = flat.data() + std::size_t(b) * width;
    return std::lexicographical_compare(pa, pa + width, pb, pb + width);
  };
  std::sort(idx.begin(), idx.end(), less);
  std::vector<std::uint32_t> out;
  out.reserve(flat.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint32_t* p = flat.data() + std::size_t(idx[r]) * width;
    if (!out.empty() &&
        std::equal(p, p + width, out.data() + out.size() - width)) {
      continue;
    }
    out.insert(out.end(), p, p + width);
  }
  flat = std::move(out);
}

bool AnswerSet::subset_of(const AnswerSet& other) const {
  if (width != other.width) return false;
  const std::size_t mine = size();
  const std::size_t theirs = other.size();
  std::size_t j = 0;
  for (std::size_t i = 0; i < mine; ++i) {
    const std::uint32_t* row = flat.data() + i * width;
    for (;;) {
      if (j == theirs) return false;
      const std::uint32_t* cand = other.flat.data() + j * width;
      if (std::lexicographical_compare(cand, cand + width, row, row + width)) {
        ++j;
        continue;
      }
      if (std::equal(cand, cand + width, row)) break;
      return false;
    }
  }
  return true;
}

MatchingDatabase generate(const Query& q, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("domain size must be positive");
  MatchingDatabase db;
  db.n = n;
  db.seed = seed;
  for (std::size_t j = 0; j < q.atoms.size(); ++j) {
    const Atom& atom = q.atoms[j];
    for (std::size_t a = 0; a < atom.vars.size(); ++a) {
      for (std::size_t b = a + 1; b < atom.vars.size(); ++b) {
        if (atom.vars[a] == atom.vars[b]) {
          throw std::invalid_argument("matching relations need distinct columns: " +
                                      atom.name);
        }
      }
    }
    Relation rel;
    rel.schema = atom.vars;
    rel.arity = atom.arity();
    rel.tuples.assign(n * rel.arity, 0);
    for (std::size_t row = 0; row < n; ++row) {
      rel.tuples[row * rel.arity] = static_cast<std::uint32_t>(row + 1);
    }
    for (std::size_t col = 1; col < rel.arity; ++col) {
      SplitMix rng(mix64(seed ^ mix64((std::uint64_t(j) << 20) | col)));
      std::vector<std::uint32_t> perm = random_permutation(n, rng);
      for (std::size_t row = 0; row < n; ++row) {
        rel.tuples[row * rel.arity + col] = perm[row];
      }
    }
    db.relations.emplace(atom.name, std::move(rel));
  }
  return db;
}

namespace {

struct U32VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto x : v) h = mix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

AnswerSet join_atoms(const Query& q, const std::map<std::string, Relation>& relations) {
  if (q.atoms.empty()) throw std::invalid_argument("query has no atoms");
  const std::size_t k = q.var_count();
  for (const auto& atom : q.atoms) {
    auto it = relations.find(atom.name);
    if (it == relations.end()) throw std::invalid_argument("missing relation: " + atom.name);
    if (it->second.arity != atom.arity()) {
      throw std::invalid_argument("arity mismatch for " + atom.name);
    }
  }

  std::vector<std::uint32_t> cur(k, 0);  // one all-unset partial row
  std::size_t nrows = 1;
  std::vector<bool> bound(k, false);

  enum class Role { key, bind, dup };
  for (const auto& atom : q.atoms) {
    const Relation& rel = relations.at(atom.name);
    const std::size_t a = rel.arity;

    std::vector<std::size_t> slot(a);
    std::vector<Role> role(a);
    std::vector<int> first_pos(k, -1);
    std::vector<std::size_t> key_pos, bind_pos;
    for (std::size_t pos = 0; pos < a; ++pos) {
      std::size_t s = q.var_index(atom.vars[pos]);
      slot[pos] = s;
      if (bound[s]) {
        role[pos] = Role::key;
        key_pos.push_back(pos);
      } else if (first_pos[s] >= 0) {
        role[pos] = Role::dup;
      } else {
        role[pos] = Role::bind;
        bind_pos.push_back(pos);
        first_pos[s] = static_cast<int>(pos);
      }
    }

    // index rows by the bound-variable projection; rows whose repeated
    // unbound positions disagree can never match
    std::unordered_map<std::vector<std::uint32_t>, std::vector<std::uint32_t>, U32VecHash>
        index;
    std::vector<std::uint32_t> key(key_pos.size());
    const std::size_t rcount = rel.size();
    for (std::size_t r = 0; r < rcount; ++r) {
      const std::uint32_t* t = rel.tuples.data() + r * a;
      bool ok = true;
      for (std::size_t pos = 0; pos < a && ok; ++pos) {
        if (role[pos] == Role::dup) ok = t[pos] == t[first_pos[slot[pos]]];
      }
      if (!ok) continue;
      for (std::size_t i = 0; i < key_pos.size(); ++i) key[i] = t[key_pos[i]];
      index[key].push_back(static_cast<std::uint32_t>(r));
    }

    std::vector<std::uint32_t> next;
    std::vector<std::uint32_t> probe(key_pos.size());
    for (std::size_t row = 0; row < nrows; ++row) {
      const std::uint32_t* p = cur.data() + row * k;
      for (std::size_t i = 0; i < key_pos.size(); ++i) probe[i] = p[slot[key_pos[i]]];
      auto hit = index.find(probe);
      if (hit == index.end()) continue;
      for (std::uint32_t r : hit->second) {
        const std::uint32_t* t = rel.tuples.data() + std::size_t(r) * a;
        std::size_t base = next.size();
        next.insert(next.end(), p, p + k);
        for (std::size_t pos : bind_pos) next[base + slot[pos]] = t[pos];
      }
    }
    cur = std::move(next);
    nrows = k == 0 ? 0 : cur.size() / k;
    for (std::size_t pos = 0; pos < a; ++pos) bound[slot[pos]] = true;
    if (nrows == 0) break;
  }

  AnswerSet out;
  out.width = k;
  out.flat = std::move(cur);
  out.finalize();
  return out;
}

AnswerSet oracle_eval(const Query& q, const MatchingDatabase& db) {
  return join_atoms(q, db.relations);
}

double expected_answer_size(const Query& q, std::size_t n) {
  QueryStats st = stats(q);
  if (st.component_count != 1) {
    throw std::invalid_argument("expected answer size needs a connected query");
  }
  return std::pow(static_cast<double>(n), 1.0 + static_cast<double>(st.chi));
}

void dump_csv(const MatchingDatabase& db, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  for (const auto& [name, rel] : db.relations) {
    std::ofstream out(fs::path(directory) / (name + ".csv"));
    if (!out) throw std::runtime_error("cannot write relation dump for " + name);
    for (std::size_t i = 0; i < rel.schema.size(); ++i) {
      if (i) out << ',';
      out << rel.schema[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < rel.size(); ++r) {
      for (std::size_t c = 0; c < rel.arity; ++c) {
        if (c) out << ',';
        out << rel.tuples[r * rel.arity + c];
      }
      out << '\n';
    }
  }
}

}  // namespace mpc
