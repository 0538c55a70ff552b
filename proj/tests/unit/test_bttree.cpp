#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "anticyc/bttree/tree.hpp"
#include "anticyc/error.hpp"
#include "doctest.h"

using namespace anticyc;
using namespace anticyc::bttree;
using exactalg::Integer;
using exactalg::RatMatrix;
using exactalg::Rational;

namespace {

RatMatrix random_matrix(std::mt19937& rng, const Integer& p) {
  std::uniform_int_distribution<int> d(-9, 9);
  for (;;) {
    RatMatrix g{{d(rng), d(rng)}, {d(rng), d(rng)}};
    if (rng() % 3 == 0) g(0, 1) /= Rational(p);
    if (g(0, 0) * g(1, 1) != g(0, 1) * g(1, 0)) return g;
  }
}

// Breadth-first enumeration of the ball through neighbors only.
std::set<TreeVertex> bfs_ball(const Integer& p, unsigned r) {
  std::set<TreeVertex> seen{TreeVertex::root()};
  std::vector<TreeVertex> frontier{TreeVertex::root()};
  for (unsigned s = 0; s < r; ++s) {
    std::vector<TreeVertex> next;
    for (const auto& v : frontier)
      for (const auto& w : neighbors(v, p))
        if (seen.insert(w).second) next.push_back(w);
    frontier = next;
  }
  return seen;
}

}  // namespace

TEST_CASE("neighbors") {
  for (long pl : {2L, 3L, 5L}) {
    Integer p(pl);
    for (const auto& v : ball(p, 2)) {
      auto nb = neighbors(v, p);
      CHECK(nb.size() == static_cast<std::size_t>(pl + 1));
      CHECK(std::set<TreeVertex>(nb.begin(), nb.end()).size() == nb.size());
      for (const auto& w : nb) {
        CHECK(distance(v, w, p) == 1);
        CHECK(parity(w) != parity(v));
        auto back = neighbors(w, p);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
  }
  CHECK(bfs_ball(2, 2).size() == 1 + 3 + 6);
}

TEST_CASE("balls have the regular-tree count") {
  for (long pl : {2L, 3L, 5L})
    for (unsigned r = 0; r <= 3; ++r) {
      Integer p(pl);
      long expect = 1 + (pl + 1) * (static_cast<long>(std::pow(pl, r)) - 1) / (pl - 1);
      CHECK(ball(p, r).size() == static_cast<std::size_t>(expect));
      CHECK(bfs_ball(p, r).size() == static_cast<std::size_t>(expect));
    }
}

TEST_CASE("matrix action") {
  Integer p = 3;
  RatMatrix I{{1, 0}, {0, 1}}, P{{3, 0}, {0, 3}}, D{{3, 0}, {0, 1}};
  auto B = ball(p, 2);
  for (const auto& v : B) {
    CHECK(act(I, v, p) == v);
    CHECK(act(P, v, p) == v);
  }
  CHECK(distance(act(D, TreeVertex::root(), p), TreeVertex::root(), p) == 1);
  CHECK_THROWS_AS(act(RatMatrix{{1, 2}, {2, 4}}, TreeVertex::root(), p), UsageError);

  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    RatMatrix g = random_matrix(rng, p), h = random_matrix(rng, p);
    for (const auto& v : B) {
      CHECK(act(g * h, v, p) == act(g, act(h, v, p), p));
      // distances are preserved by automorphisms
      CHECK(distance(act(g, v, p), act(g, TreeVertex::root(), p), p) == v.depth());
    }
    Rational det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    auto val = exactalg::valuation(det, p);
    for (const auto& v : B)
      CHECK((parity(act(g, v, p)) == parity(v)) == (*val % 2 == 0));
  }
}

TEST_CASE("vertex normal form") {
  Integer p = 5;
  auto v = vertex_from_columns(RatMatrix{{25, 3}, {0, 1}}, p);
  CHECK(v.a == 2);
  CHECK(v.b == 3);
  CHECK(v.d == 0);
  CHECK(vertex_from_columns(RatMatrix{{Rational(1, 5), 0}, {0, Rational(1, 5)}}, p) == TreeVertex::root());
  CHECK(vertex_from_columns(RatMatrix{{1, 7}, {0, 5}}, p) == vertex_from_columns(RatMatrix{{1, 2}, {0, 5}}, p));
  CHECK_THROWS_AS(vertex_from_columns(RatMatrix{{1, 2}, {2, 4}}, p), UsageError);
  CHECK(parity(TreeVertex::root()) == Parity::even);
  for (const auto& w : neighbors(TreeVertex::root(), p)) CHECK(parity(w) == Parity::odd);
}

TEST_CASE("standard edge ray") {
  Integer p = 5;
  LocalTorus T{p, TreeVertex::root(), true};
  for (auto tie : {TieBreak::least, TieBreak::greatest}) {
    auto ray = standard_edge_ray(5, T, tie);
    REQUIRE(ray.size() == 5);
    CHECK(ray[0].source == TreeVertex::root());
    for (std::size_t j = 0; j < ray.size(); ++j) {
      CHECK(distance(ray[j].source, ray[j].target, p) == 1);
      CHECK(ray[j].target.depth() == j + 1);
      if (j + 1 < ray.size()) CHECK(ray[j].target == ray[j + 1].source);
      for (std::size_t k = 0; k < j; ++k) CHECK(distance(ray[k].source, ray[j].source, p) == j - k);
      CHECK(ray[j].reversed().reversed() == ray[j]);
    }
    CHECK(standard_edge_sequence(3, T, tie) == ray[3]);
  }
  CHECK(standard_edge_ray(3, T, TieBreak::least) != standard_edge_ray(3, T, TieBreak::greatest));
  CHECK_THROWS_AS(standard_edge_ray(2, LocalTorus{p, TreeVertex::root(), false}), ConfigurationError);
}
