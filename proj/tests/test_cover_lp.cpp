#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpc/cover_lp.hpp"
#include "mpc/families.hpp"
#include "test_support.hpp"

using namespace mpc;
using mpc::testsupport::brute_force_cover;
using mpc::testsupport::random_connected_query;

TEST_CASE("cover of the path family") {
  Query l3 = make_path_query(3);
  CoverSolution cover = optimal_cover(l3);
  CHECK(cover.value == Rat(2));
  CHECK(cover_feasible(l3, cover.weights));
  // canonical lexicographic optimum
  CHECK(cover.weights.at("x0") == Rat(0));
  CHECK(cover.weights.at("x1") == Rat(1));
  CHECK(cover.weights.at("x2") == Rat(0));
  CHECK(cover.weights.at("x3") == Rat(1));
}

TEST_CASE("cover of cycles, stars, and binom queries") {
  CHECK(optimal_cover(make_cycle_query(3)).value == Rat(3, 2));
  CoverSolution c3 = optimal_cover(make_cycle_query(3));
  CHECK(c3.weights.at("x1") == Rat(1, 2));
  CHECK(c3.tight);

  Query single = parse_query("Q(x,y) :- S(x,y)");
  CHECK(optimal_cover(single).value == Rat(1));

  CHECK(optimal_cover(make_binom_query(4, 2)).value == Rat(2));

  CoverSolution t3 = optimal_cover(make_star_query(3));
  CHECK(t3.value == Rat(1));
  CHECK(t3.weights.at("z") == Rat(1));
  CHECK(t3.weights.at("x1") == Rat(0));
}

TEST_CASE("packing of the running examples") {
  Query l3 = make_path_query(3);
  PackingSolution p = optimal_packing(l3);
  CHECK(p.value == Rat(2));
  CHECK(p.weights.at("S1") == Rat(1));
  CHECK(p.weights.at("S2") == Rat(0));
  CHECK(p.weights.at("S3") == Rat(1));
  CHECK(p.tight);

  PackingSolution c3 = optimal_packing(make_cycle_query(3));
  CHECK(c3.value == Rat(3, 2));
  CHECK(c3.weights.at("S1") == Rat(1, 2));

  CHECK(optimal_packing(make_star_query(3)).value == Rat(1));
}

TEST_CASE("strong duality and feasibility on random queries") {
  SplitMix rng(7);
  for (int i = 0; i < 200; ++i) {
    Query q = random_connected_query(rng, 5, 6, 3);
    CoverSolution cover = optimal_cover(q);
    PackingSolution packing = optimal_packing(q);
    CHECK(cover.value == packing.value);
    CHECK(cover_feasible(q, cover.weights));
    CHECK(packing_feasible(q, packing.weights));
    CHECK(cover.value >= Rat(1));
  }
}

TEST_CASE("simplex optimum matches vertex enumeration") {
  SplitMix rng(17);
  for (int i = 0; i < 40; ++i) {
    Query q = random_connected_query(rng, 4, 5, 3);
    auto brute = brute_force_cover(q);
    CoverSolution cover = optimal_cover(q);
    CHECK(cover.value == brute.optimum);

    // the canonical solution is lexicographically no larger than any optimal
    // vertex (it may be an interior point of the optimal face)
    std::vector<Rat> canonical;
    for (const auto& v : q.head_vars) canonical.push_back(cover.weights.at(v));
    for (const auto& vertex : brute.optimal_vertices) {
      bool canonical_not_larger = true;
      for (std::size_t s = 0; s < canonical.size(); ++s) {
        if (canonical[s] < vertex[s]) break;
        if (canonical[s] > vertex[s]) {
          canonical_not_larger = false;
          break;
        }
      }
      CHECK(canonical_not_larger);
    }
  }
}

TEST_CASE("space exponent closed forms") {
  CHECK(space_exponent(make_cycle_query(4)) == Rat(1, 2));
  CHECK(space_exponent(make_star_query(2)) == Rat(0));
  CHECK(space_exponent(make_star_query(5)) == Rat(0));
  CHECK(space_exponent(make_path_query(5)) == Rat(2, 3));
  CHECK_THROWS_AS(space_exponent(parse_query("Q(x,y) :- R(x), S(x,y)")),
                  std::invalid_argument);
  CHECK_THROWS_AS(space_exponent(parse_query("Q(x,y) :- R(x), S(y)")),
                  std::invalid_argument);
}

TEST_CASE("universal variable iff tau* is 1 for connected queries") {
  CHECK(has_universal_variable(make_star_query(3)));
  CHECK_FALSE(has_universal_variable(make_path_query(3)));
  CHECK(has_universal_variable(parse_query("Q(x,y) :- S(x,y)")));

  SplitMix rng(29);
  for (int i = 0; i < 100; ++i) {
    Query q = random_connected_query(rng, 5, 5, 3);
    CHECK(has_universal_variable(q) == (tau_star(q) == Rat(1)));
  }
}

TEST_CASE("friedgut checker on the worked examples") {
  // triangle with 0/1 indicators of matchings: RHS = sqrt(|S1||S2||S3|)
  Query c3 = make_cycle_query(3);
  std::map<std::string, Rat> u{{"S1", Rat(1, 2)}, {"S2", Rat(1, 2)}, {"S3", Rat(1, 2)}};
  const std::size_t n = 5;
  FriedgutInput in;
  in.n = n;
  SplitMix rng(3);
  for (const auto& atom : c3.atoms) {
    std::vector<double> t(n * n, 0.0);
    auto perm = random_permutation(n, rng);
    for (std::size_t i = 0; i < n; ++i) t[i * n + (perm[i] - 1)] = 1.0;
    in.weights[atom.name] = std::move(t);
  }
  FriedgutSides sides = evaluate_friedgut(c3, u, in);
  CHECK(sides.rhs == doctest::Approx(std::sqrt(5.0 * 5.0 * 5.0)));
  CHECK(check_friedgut(c3, u, in));

  // chain with all-ones weights at n=2: both sides equal 16
  Query l3 = make_path_query(3);
  std::map<std::string, Rat> ul{{"S1", Rat(1)}, {"S2", Rat(0)}, {"S3", Rat(1)}};
  FriedgutInput in2;
  in2.n = 2;
  for (const auto& atom : l3.atoms) in2.weights[atom.name] = std::vector<double>(4, 1.0);
  FriedgutSides s2 = evaluate_friedgut(l3, ul, in2);
  CHECK(s2.lhs == doctest::Approx(16.0));
  CHECK(s2.rhs == doctest::Approx(16.0));
  CHECK(check_friedgut(l3, ul, in2));

  // all-zero weights: 0 <= 0
  FriedgutInput zeros;
  zeros.n = 2;
  for (const auto& atom : l3.atoms) zeros.weights[atom.name] = std::vector<double>(4, 0.0);
  CHECK(check_friedgut(l3, ul, zeros));
}

TEST_CASE("friedgut rejects bad inputs") {
  Query c3 = make_cycle_query(3);
  FriedgutInput in;
  in.n = 2;
  for (const auto& atom : c3.atoms) in.weights[atom.name] = std::vector<double>(4, 1.0);

  std::map<std::string, Rat> not_cover{{"S1", Rat(1, 4)}, {"S2", Rat(1, 4)},
                                       {"S3", Rat(1, 4)}};
  CHECK_THROWS_AS(evaluate_friedgut(c3, not_cover, in), std::invalid_argument);

  std::map<std::string, Rat> u{{"S1", Rat(1, 2)}, {"S2", Rat(1, 2)}, {"S3", Rat(1, 2)}};
  in.weights["S1"][0] = -1.0;
  CHECK_THROWS_AS(evaluate_friedgut(c3, u, in), std::invalid_argument);
}

TEST_CASE("friedgut holds on random tensors") {
  Query c3 = make_cycle_query(3);
  std::map<std::string, Rat> uc{{"S1", Rat(1, 2)}, {"S2", Rat(1, 2)}, {"S3", Rat(1, 2)}};
  Query l3 = make_path_query(3);
  std::map<std::string, Rat> ul{{"S1", Rat(1)}, {"S2", Rat(0)}, {"S3", Rat(1)}};

  SplitMix rng(101);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = 2 + rng.below(7);
    FriedgutInput in;
    in.n = n;
    for (const auto& atom : c3.atoms) {
      std::vector<double> t(n * n);
      for (auto& x : t) x = rng.below(10) == 0 ? 0.0 : rng.unit();
      in.weights[atom.name] = std::move(t);
    }
    CHECK(check_friedgut(c3, uc, in));

    FriedgutInput in2;
    in2.n = n;
    for (const auto& atom : l3.atoms) {
      std::vector<double> t(n * n);
      for (auto& x : t) x = rng.below(10) == 0 ? 0.0 : rng.unit();
      in2.weights[atom.name] = std::move(t);
    }
    CHECK(check_friedgut(l3, ul, in2));
  }
}

TEST_CASE("rational arithmetic basics") {
  CHECK(Rat(6, 4) == Rat(3, 2));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(-4, 8).str() == "-1/2");
  CHECK(Rat::from_string("2/3") == Rat(2, 3));
  CHECK(Rat::from_string("0.5") == Rat(1, 2));
  CHECK(Rat::from_string("-7") == Rat(-7));
  CHECK(Rat(7, 2).floor() == 3);
  CHECK(Rat(-7, 2).floor() == -4);
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}
