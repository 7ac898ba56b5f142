#include "mpc/query_model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace mpc {

namespace {

std::string kind_prefix(QueryError::Kind kind) {
  switch (kind) {
    case QueryError::Kind::syntax: return "syntax error";
    case QueryError::Kind::non_full: return "non-full query";
    case QueryError::Kind::self_join: return "self-join";
    case QueryError::Kind::duplicate_head: return "duplicate head variable";
    case QueryError::Kind::unbound_head: return "unbound head variable";
    case QueryError::Kind::unknown_atom: return "unknown atom";
    case QueryError::Kind::too_large: return "query too large";
  }
  return "query error";
}

std::string format_message(QueryError::Kind kind, const std::string& message,
                           std::size_t position) {
  std::ostringstream os;
  os << kind_prefix(kind);
  if (position != QueryError::npos) os << " at offset " << position;
  os << ": " << message;
  return os.str();
}

// Union-find over variable slots.
struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  void expect(char c, const char* what) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) {
      throw QueryError(QueryError::Kind::syntax, std::string("expected ") + what, pos);
    }
    ++pos;
  }
  bool try_consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::pair<std::string, std::size_t> ident() {
    skip_ws();
    std::size_t start = pos;
    auto head_ok = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto tail_ok = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos >= s.size() || !head_ok(s[pos])) {
      throw QueryError(QueryError::Kind::syntax, "expected identifier", pos);
    }
    ++pos;
    while (pos < s.size() && tail_ok(s[pos])) ++pos;
    return {s.substr(start, pos - start), start};
  }
};

}  // namespace

QueryError::QueryError(Kind kind, const std::string& message, std::size_t position)
    : std::runtime_error(format_message(kind, message, position)),
      kind_(kind),
      position_(position) {}

std::size_t Query::total_arity() const {
  std::size_t a = 0;
  for (const auto& atom : atoms) a += atom.arity();
  return a;
}

std::size_t Query::var_index(const std::string& var) const {
  for (std::size_t i = 0; i < head_vars.size(); ++i) {
    if (head_vars[i] == var) return i;
  }
  throw std::invalid_argument("unknown variable: " + var);
}

bool Query::has_var(const std::string& var) const {
  return std::find(head_vars.begin(), head_vars.end(), var) != head_vars.end();
}

const Atom& Query::atom(const std::string& name) const {
  for (const auto& a : atoms) {
    if (a.name == name) return a;
  }
  throw QueryError(QueryError::Kind::unknown_atom, name);
}

bool Query::has_atom(const std::string& name) const {
  for (const auto& a : atoms) {
    if (a.name == name) return true;
  }
  return false;
}

bool Query::has_unary_atom() const {
  for (const auto& a : atoms) {
    if (a.arity() == 1) return true;
  }
  return false;
}

bool Query::has_repeated_atom_var() const {
  for (const auto& a : atoms) {
    for (std::size_t i = 0; i < a.vars.size(); ++i) {
      for (std::size_t j = i + 1; j < a.vars.size(); ++j) {
        if (a.vars[i] == a.vars[j]) return true;
      }
    }
  }
  return false;
}

Query parse_query(const std::string& text) {
  Cursor c{text};
  Query q;
  auto [name, name_pos] = c.ident();
  (void)name_pos;
  q.name = name;

  c.expect('(', "'('");
  std::vector<std::size_t> head_positions;
  for (;;) {
    auto [var, pos] = c.ident();
    for (const auto& existing : q.head_vars) {
      if (existing == var) {
        throw QueryError(QueryError::Kind::duplicate_head, var, pos);
      }
    }
    q.head_vars.push_back(var);
    head_positions.push_back(pos);
    if (!c.try_consume(',')) break;
  }
  c.expect(')', "')'");
  c.skip_ws();
  if (c.pos + 1 >= text.size() || text[c.pos] != ':' || text[c.pos + 1] != '-') {
    throw QueryError(QueryError::Kind::syntax, "expected ':-'", c.pos);
  }
  c.pos += 2;

  std::vector<std::size_t> atom_positions;
  do {
    auto [aname, apos] = c.ident();
    for (const auto& existing : q.atoms) {
      if (existing.name == aname) {
        throw QueryError(QueryError::Kind::self_join,
                         "relation " + aname + " appears twice", apos);
      }
    }
    Atom atom;
    atom.name = aname;
    c.expect('(', "'('");
    for (;;) {
      auto [var, vpos] = c.ident();
      if (!q.has_var(var)) {
        throw QueryError(QueryError::Kind::non_full,
                         "body variable " + var + " missing from the head", vpos);
      }
      atom.vars.push_back(var);
      if (!c.try_consume(',')) break;
    }
    c.expect(')', "')'");
    q.atoms.push_back(std::move(atom));
    atom_positions.push_back(apos);
  } while (c.try_consume(','));

  c.skip_ws();
  if (c.pos != text.size()) {
    throw QueryError(QueryError::Kind::syntax, "unexpected trailing input", c.pos);
  }

  for (std::size_t i = 0; i < q.head_vars.size(); ++i) {
    bool used = false;
    for (const auto& atom : q.atoms) {
      if (std::find(atom.vars.begin(), atom.vars.end(), q.head_vars[i]) !=
          atom.vars.end()) {
        used = true;
        break;
      }
    }
    if (!used) {
      throw QueryError(QueryError::Kind::unbound_head,
                       "head variable " + q.head_vars[i] + " occurs in no atom",
                       head_positions[i]);
    }
  }
  return q;
}

std::string render(const Query& q) {
  std::ostringstream os;
  os << q.name << '(';
  for (std::size_t i = 0; i < q.head_vars.size(); ++i) {
    if (i) os << ',';
    os << q.head_vars[i];
  }
  os << ") :- ";
  for (std::size_t j = 0; j < q.atoms.size(); ++j) {
    if (j) os << ", ";
    os << q.atoms[j].name << '(';
    for (std::size_t i = 0; i < q.atoms[j].vars.size(); ++i) {
      if (i) os << ',';
      os << q.atoms[j].vars[i];
    }
    os << ')';
  }
  return os.str();
}

QueryStats stats(const Query& q) {
  QueryStats st;
  const std::size_t k = q.var_count();

  UnionFind uf(k);
  for (const auto& atom : q.atoms) {
    if (atom.vars.empty()) continue;
    std::size_t first = q.var_index(atom.vars[0]);
    for (std::size_t i = 1; i < atom.vars.size(); ++i) {
      uf.merge(first, q.var_index(atom.vars[i]));
    }
  }

  std::map<std::size_t, std::size_t> root_to_comp;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t root = uf.find(i);
    auto [it, fresh] = root_to_comp.try_emplace(root, st.components.size());
    if (fresh) st.components.emplace_back();
    st.components[it->second].vars.push_back(q.head_vars[i]);
  }
  for (const auto& atom : q.atoms) {
    std::size_t root = uf.find(q.var_index(atom.vars[0]));
    st.components[root_to_comp[root]].atoms.push_back(atom.name);
  }
  st.component_count = st.components.size();

  st.chi = static_cast<std::int64_t>(k) + static_cast<std::int64_t>(q.atom_count()) -
           static_cast<std::int64_t>(q.total_arity()) -
           static_cast<std::int64_t>(st.component_count);
  st.tree_like = st.component_count == 1 && st.chi == 0;

  if (st.component_count > 1) {
    st.radius = kUnreachable;
    st.diameter = kUnreachable;
    return st;
  }
  if (k <= 1) {
    st.radius = 0;
    st.diameter = 0;
    return st;
  }

  // shortest paths in the clique expansion: variables sharing an atom are
  // at distance 1
  std::vector<std::vector<std::size_t>> adj(k);
  {
    std::vector<std::vector<bool>> seen(k, std::vector<bool>(k, false));
    for (const auto& atom : q.atoms) {
      for (std::size_t i = 0; i < atom.vars.size(); ++i) {
        for (std::size_t j = i + 1; j < atom.vars.size(); ++j) {
          std::size_t u = q.var_index(atom.vars[i]);
          std::size_t v = q.var_index(atom.vars[j]);
          if (u == v || seen[u][v]) continue;
          seen[u][v] = seen[v][u] = true;
          adj[u].push_back(v);
          adj[v].push_back(u);
        }
      }
    }
  }
  std::size_t radius = kUnreachable;
  std::size_t diameter = 0;
  std::vector<std::size_t> dist(k);
  for (std::size_t src = 0; src < k; ++src) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    dist[src] = 0;
    std::deque<std::size_t> queue{src};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (dist[v] == kUnreachable) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    std::size_t ecc = *std::max_element(dist.begin(), dist.end());
    radius = std::min(radius, ecc);
    diameter = std::max(diameter, ecc);
  }
  st.radius = radius;
  st.diameter = diameter;
  return st;
}

bool is_connected(const Query& q) { return stats(q).component_count == 1; }

Query contract(const Query& q, const std::vector<std::string>& merged_atoms) {
  std::set<std::string> merged;
  for (const auto& name : merged_atoms) {
    if (!q.has_atom(name)) throw QueryError(QueryError::Kind::unknown_atom, name);
    merged.insert(name);
  }
  if (merged.empty()) return q;

  const std::size_t k = q.var_count();
  UnionFind uf(k);
  for (const auto& atom : q.atoms) {
    if (!merged.count(atom.name)) continue;
    std::size_t first = q.var_index(atom.vars[0]);
    for (std::size_t i = 1; i < atom.vars.size(); ++i) {
      uf.merge(first, q.var_index(atom.vars[i]));
    }
  }

  // representative = lexicographically smallest variable of the class
  std::vector<std::string> rep(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t root = uf.find(i);
    if (rep[root].empty() || q.head_vars[i] < rep[root]) rep[root] = q.head_vars[i];
  }

  Query out;
  out.name = q.name;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string& r = rep[uf.find(i)];
    if (!out.has_var(r)) out.head_vars.push_back(r);
  }
  for (const auto& atom : q.atoms) {
    if (merged.count(atom.name)) continue;
    Atom mapped;
    mapped.name = atom.name;
    for (const auto& v : atom.vars) {
      mapped.vars.push_back(rep[uf.find(q.var_index(v))]);
    }
    out.atoms.push_back(std::move(mapped));
  }
  return out;
}

Query subquery(const Query& q, const std::vector<std::string>& atom_names) {
  std::set<std::string> keep;
  for (const auto& name : atom_names) {
    if (!q.has_atom(name)) throw QueryError(QueryError::Kind::unknown_atom, name);
    keep.insert(name);
  }
  Query out;
  out.name = q.name;
  std::set<std::string> vars;
  for (const auto& atom : q.atoms) {
    if (!keep.count(atom.name)) continue;
    out.atoms.push_back(atom);
    for (const auto& v : atom.vars) vars.insert(v);
  }
  for (const auto& v : q.head_vars) {
    if (vars.count(v)) out.head_vars.push_back(v);
  }
  return out;
}

std::vector<Query> connected_subqueries(const Query& q, std::size_t max_atoms) {
  if (max_atoms == 0) throw std::invalid_argument("max_atoms must be at least 1");
  const std::size_t ell = q.atom_count();
  if (ell > 20) {
    throw QueryError(QueryError::Kind::too_large,
                     "subquery enumeration capped at 20 atoms");
  }

  // atom adjacency masks (atoms sharing a variable)
  std::vector<std::uint32_t> adj(ell, 0);
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      bool shares = false;
      for (const auto& v : q.atoms[i].vars) {
        if (std::find(q.atoms[j].vars.begin(), q.atoms[j].vars.end(), v) !=
            q.atoms[j].vars.end()) {
          shares = true;
          break;
        }
      }
      if (shares) {
        adj[i] |= 1u << j;
        adj[j] |= 1u << i;
      }
    }
  }

  // Enumerates every connected atom set exactly once: the seed is the set's
  // smallest atom, and each frontier atom is either taken or banned.
  std::vector<std::uint32_t> masks;
  struct Enumerator {
    const std::vector<std::uint32_t>& adj;
    std::size_t max_atoms;
    std::vector<std::uint32_t>& masks;

    void grow(std::uint32_t set, std::uint32_t frontier, std::uint32_t banned,
              std::uint32_t above) {
      masks.push_back(set);
      if (static_cast<std::size_t>(std::popcount(set)) == max_atoms) return;
      std::uint32_t avail = frontier & ~banned;
      while (avail) {
        std::uint32_t fbit = avail & (0u - avail);
        avail &= avail - 1;
        std::size_t f = static_cast<std::size_t>(std::countr_zero(fbit));
        std::uint32_t nfrontier = (frontier | adj[f]) & above & ~(set | fbit);
        grow(set | fbit, nfrontier, banned, above);
        banned |= fbit;
      }
    }
  };
  Enumerator en{adj, max_atoms, masks};
  for (std::size_t seed = 0; seed < ell; ++seed) {
    std::uint32_t above = seed + 1 >= 32 ? 0 : ~((1u << (seed + 1)) - 1);
    en.grow(1u << seed, adj[seed] & above, 0, above);
  }

  std::vector<Query> out;
  out.reserve(masks.size());
  for (std::uint32_t mask : masks) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < ell; ++i) {
      if (mask & (1u << i)) names.push_back(q.atoms[i].name);
    }
    out.push_back(subquery(q, names));
  }
  return out;
}

}  // namespace mpc
