#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "mpc/families.hpp"
#include "mpc/matchdb.hpp"
#include "test_support.hpp"

using namespace mpc;

namespace {

bool columns_are_permutations(const Relation& rel, std::size_t n) {
  for (std::size_t col = 0; col < rel.arity; ++col) {
    std::set<std::uint32_t> values;
    for (std::size_t row = 0; row < rel.size(); ++row) {
      values.insert(rel.tuples[row * rel.arity + col]);
    }
    if (values.size() != n) return false;
    if (*values.begin() != 1 || *values.rbegin() != n) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generated relations are matchings") {
  Query q = parse_query("Q(x,y,z) :- R(x,y), S(x,y,z)");
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    MatchingDatabase db = generate(q, 37, seed);
    for (const auto& [name, rel] : db.relations) {
      CHECK(rel.size() == 37);
      CHECK(columns_are_permutations(rel, 37));
    }
  }
  CHECK_THROWS_AS(generate(q, 0, 1), std::invalid_argument);
}

TEST_CASE("binary matching at n=3 has the identity first column") {
  Query q = parse_query("Q(x,y) :- S(x,y)");
  MatchingDatabase db = generate(q, 3, 5);
  const Relation& rel = db.relations.at("S");
  for (std::size_t row = 0; row < 3; ++row) {
    CHECK(rel.tuples[row * 2] == row + 1);
  }
}

TEST_CASE("exactly n! distinct binary matchings are reachable at n=3") {
  Query q = parse_query("Q(x,y) :- S(x,y)");
  std::set<std::vector<std::uint32_t>> distinct;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    distinct.insert(generate(q, 3, seed).relations.at("S").tuples);
  }
  CHECK(distinct.size() == 6);
}

TEST_CASE("repeated variables in an atom are rejected") {
  Query q = parse_query("Q(x,y) :- S(x,x), R(x,y)");
  CHECK_THROWS_AS(generate(q, 4, 1), std::invalid_argument);
}

TEST_CASE("unary atoms generate the identity column") {
  Query q = parse_query("Q(x,y) :- U(x), S(x,y)");
  MatchingDatabase db = generate(q, 8, 2);
  const Relation& u = db.relations.at("U");
  CHECK(u.arity == 1);
  for (std::size_t row = 0; row < 8; ++row) CHECK(u.tuples[row] == row + 1);
  CHECK(oracle_eval(q, db).size() == 8);
}

TEST_CASE("generation is deterministic") {
  Query q = make_cycle_query(4);
  MatchingDatabase a = generate(q, 50, 1234);
  MatchingDatabase b = generate(q, 50, 1234);
  for (const auto& [name, rel] : a.relations) {
    CHECK(rel.tuples == b.relations.at(name).tuples);
  }
  MatchingDatabase c = generate(q, 50, 1235);
  bool all_equal = true;
  for (const auto& [name, rel] : a.relations) {
    if (rel.tuples != c.relations.at(name).tuples) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("oracle on tree-like queries returns exactly n answers") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Query l2 = make_path_query(2);
    CHECK(oracle_eval(l2, generate(l2, 100, seed)).size() == 100);

    Query t2 = make_star_query(2);
    CHECK(oracle_eval(t2, generate(t2, 64, seed)).size() == 64);

    Query sp2 = make_spider_query(2);
    CHECK(oracle_eval(sp2, generate(sp2, 32, seed)).size() == 32);
  }
}

TEST_CASE("oracle on a single-value domain") {
  Query c3 = make_cycle_query(3);
  AnswerSet ans = oracle_eval(c3, generate(c3, 1, 7));
  CHECK(ans.size() == 1);
  CHECK(ans.flat == std::vector<std::uint32_t>{1, 1, 1});
}

TEST_CASE("oracle answers satisfy every atom") {
  SplitMix rng(61);
  for (int iter = 0; iter < 10; ++iter) {
    Query q = mpc::testsupport::random_tree_query(rng, 2 + rng.below(5));
    MatchingDatabase db = generate(q, 20, iter);
    AnswerSet ans = oracle_eval(q, db);
    const std::size_t k = q.var_count();
    for (std::size_t r = 0; r < ans.size(); ++r) {
      const std::uint32_t* row = ans.flat.data() + r * k;
      for (const auto& atom : q.atoms) {
        const Relation& rel = db.relations.at(atom.name);
        bool found = false;
        for (std::size_t t = 0; t < rel.size() && !found; ++t) {
          bool match = true;
          for (std::size_t pos = 0; pos < atom.arity(); ++pos) {
            if (rel.tuples[t * rel.arity + pos] != row[q.var_index(atom.vars[pos])]) {
              match = false;
              break;
            }
          }
          found = match;
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("oracle determinism and missing relations") {
  Query c4 = make_cycle_query(4);
  MatchingDatabase db = generate(c4, 30, 9);
  CHECK(oracle_eval(c4, db) == oracle_eval(c4, db));

  MatchingDatabase partial = db;
  partial.relations.erase("S2");
  CHECK_THROWS_AS(oracle_eval(c4, partial), std::invalid_argument);
}

TEST_CASE("expected answer size formula") {
  CHECK(expected_answer_size(make_path_query(4), 50) == doctest::Approx(50.0));
  CHECK(expected_answer_size(make_cycle_query(3), 1000) == doctest::Approx(1.0));
  CHECK(expected_answer_size(make_binom_query(4, 2), 10) == doctest::Approx(1e-2));
  CHECK_THROWS_AS(expected_answer_size(parse_query("Q(x,y) :- R(x), S(y)"), 10),
                  std::invalid_argument);
}

TEST_CASE("triangle answer count concentrates around one") {
  Query c3 = make_cycle_query(3);
  double total = 0;
  const int seeds = 200;
  for (int s = 1; s <= seeds; ++s) {
    total += static_cast<double>(oracle_eval(c3, generate(c3, 50, s)).size());
  }
  double mean = total / seeds;
  CHECK(mean > 1.0 - 3.0 / std::sqrt(seeds));
  CHECK(mean < 1.0 + 3.0 / std::sqrt(seeds));
}

TEST_CASE("csv dump round-trips the header and row count") {
  Query q = make_star_query(2);
  MatchingDatabase db = generate(q, 5, 3);
  auto dir = std::filesystem::temp_directory_path() / "mpcsim_dump_test";
  std::filesystem::remove_all(dir);
  dump_csv(db, dir.string());
  std::ifstream in(dir / "S1.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "z,x1");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 5);
  std::filesystem::remove_all(dir);
}

TEST_CASE("answer set subset and dedup behavior") {
  AnswerSet a;
  a.width = 2;
  a.flat = {3, 4, 1, 2, 3, 4};
  a.finalize();
  CHECK(a.size() == 2);
  CHECK(a.flat == std::vector<std::uint32_t>{1, 2, 3, 4});

  AnswerSet b;
  b.width = 2;
  b.flat = {1, 2, 3, 4, 5, 6};
  b.finalize();
  CHECK(a.subset_of(b));
  CHECK_FALSE(b.subset_of(a));
}
