#include "doctest.h"

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "anticyc/compgraph/graph.hpp"
#include "anticyc/error.hpp"
#include "anticyc/quatarith/order.hpp"

using namespace anticyc;
using namespace anticyc::compgraph;
using exactalg::Integer;

namespace {

LengthGraph two_cycle(long a, long b) { return LengthGraph(2, {{0, 1, a}, {1, 0, b}}); }
LengthGraph theta() { return LengthGraph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}}); }
LengthGraph path3() { return LengthGraph(3, {{0, 1, 2}, {1, 2, 1}}); }

// Connected multigraph: a random spanning tree plus extra edges (loops allowed).
LengthGraph random_graph(std::mt19937& rng, std::size_t n, std::size_t extra, long max_len, bool loops = true) {
  std::vector<LengthEdge> edges;
  std::uniform_int_distribution<long> len(1, max_len);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    std::size_t u = pick(rng);
    edges.push_back(rng() % 2 ? LengthEdge{u, v, len(rng)} : LengthEdge{v, u, len(rng)});
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t s = any(rng), t = any(rng);
    if (s == t && !loops) t = (s + 1) % n;
    edges.push_back({s, t, len(rng)});
  }
  return LengthGraph(n, std::move(edges));
}

// Sum over spanning trees T of the product of lengths of the edges outside T.
Integer spanning_tree_oracle(const LengthGraph& G) {
  std::vector<std::size_t> proper;
  for (std::size_t k = 0; k < G.edge_count(); ++k)
    if (!G.edge(k).is_loop()) proper.push_back(k);
  const std::size_t n = G.vertex_count();
  Integer total = 0;
  for (unsigned long mask = 0; mask < (1ul << proper.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountl(mask)) != n - 1) continue;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    bool forest = true;
    Integer weight = 1;
    for (std::size_t i = 0; i < proper.size(); ++i) {
      const auto& e = G.edge(proper[i]);
      if (mask >> i & 1) {
        auto a = find(e.source), b = find(e.target);
        if (a == b) forest = false;
        parent[a] = b;
      } else {
        weight *= e.length;
      }
    }
    if (forest) total += weight;
  }
  return total;
}

Integer leading_minor(const IntMatrix& M, std::size_t k) {
  IntMatrix A(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) A(i, j) = M(i, j);
  return exactalg::determinant(A);
}

}  // namespace

TEST_CASE("boundary and coboundary") {
  auto G = two_cycle(1, 1);
  CHECK(boundary(G, {1, 0}) == std::vector<Integer>{-1, 1});
  CHECK(boundary(G, {1, 1}) == std::vector<Integer>{0, 0});
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    auto H = random_graph(rng, 5, 4, 3);
    std::vector<Integer> x(H.edge_count()), y(H.vertex_count());
    for (auto& v : x) v = c(rng);
    for (auto& v : y) v = c(rng);
    auto dx = boundary(H, x), dy = coboundary(H, y);
    Integer lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) lhs += dx[i] * y[i];
    for (std::size_t k = 0; k < x.size(); ++k) rhs += x[k] * dy[k];
    CHECK(lhs == rhs);
  }
  CHECK_THROWS_AS(LengthGraph(2, {{0, 2, 1}}), UsageError);
  CHECK_THROWS_AS(LengthGraph(2, {{0, 1, 0}}), UsageError);
}

TEST_CASE("character groups") {
  CHECK(character_group(path3()).rank() == 0);
  auto X = character_group(two_cycle(1, 1));
  REQUIRE(X.rank() == 1);
  CHECK(abs(X.basis(0, 0)) == 1);
  CHECK(X.basis(0, 0) == X.basis(0, 1));
  // Loops are dropped.
  auto L = LengthGraph(2, {{0, 1, 1}, {1, 1, 4}});
  CHECK(character_group(L).rank() == 0);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto G = random_graph(rng, 2 + trial % 6, trial % 5, 4);
    auto C = character_group(G);
    std::size_t proper = 0;
    for (const auto& e : G.edges()) proper += e.is_loop() ? 0 : 1;
    CHECK(C.rank() == proper - G.vertex_count() + 1);
    CHECK(raynaud_exact(G, C));
  }
  // Disconnected graphs: one Betti count per component.
  LengthGraph two(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}});
  CHECK(two.component_count() == 2);
  CHECK(character_group(two).rank() == 1);
  CHECK(raynaud_exact(two, character_group(two)));
}

TEST_CASE("monodromy pairing") {
  auto G = two_cycle(2, 3);
  CHECK(monodromy_map(G, character_group(G)) == IntMatrix{{5}});
  // Theta graph against the explicit basis e1 - e2, e2 - e3.
  auto T = theta();
  auto X = character_group(T);
  auto gram = monodromy_map(T, X);
  IntMatrix oracle_basis{{1, -1, 0}, {0, 1, -1}};
  IntMatrix P(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    auto coords = exactalg::solve_integer(X.basis.transpose(), oracle_basis.row(i));
    REQUIRE(coords);
    for (std::size_t j = 0; j < 2; ++j) P(i, j) = (*coords)[j];
  }
  CHECK(P * gram * P.transpose() == IntMatrix{{2, -1}, {-1, 2}});
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto H = random_graph(rng, 3 + trial % 4, 2 + trial % 3, 5);
    auto M = monodromy_map(H, character_group(H));
    CHECK(M == M.transpose());
    for (std::size_t k = 1; k <= M.rows(); ++k) CHECK(leading_minor(M, k) > 0);
  }
}

TEST_CASE("component groups") {
  CHECK(component_group(two_cycle(1, 1)).shape().to_string() == AbelianGroupShape{{2}, 0}.to_string());
  CHECK(component_group(two_cycle(2, 3)).shape() == AbelianGroupShape{{5}, 0});
  CHECK(component_group(path3()).shape().is_trivial());
  CHECK(component_group(theta()).shape() == AbelianGroupShape{{3}, 0});
  LengthGraph two(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 2}, {3, 2, 2}});
  CHECK_THROWS_AS(component_group(two), UsageError);
  auto parts = component_groups(two);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].shape() == AbelianGroupShape{{2}, 0});
  CHECK(parts[1].shape() == AbelianGroupShape{{4}, 0});
}

TEST_CASE("weighted matrix-tree identity") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 5;
    std::size_t extra = std::min<std::size_t>(8 - (n - 1), 1 + trial % 4);
    auto G = random_graph(rng, n, extra, 4);
    auto M = monodromy_map(G, character_group(G));
    CHECK(exactalg::determinant(M) == spanning_tree_oracle(G));
    auto order = component_group(G).shape().order();
    REQUIRE(order);
    CHECK(*order == spanning_tree_oracle(G));
  }
}

TEST_CASE("omega map") {
  auto G = two_cycle(1, 1);
  auto Phi = component_group(G);
  CHECK(omega_map(G, Phi, {-1, 1}) == std::vector<Integer>{1});
  CHECK(omega_map(G, Phi, {0, 0}) == std::vector<Integer>{0});
  CHECK_THROWS_AS(omega_map(G, Phi, {1, 0}), UsageError);

  // Lengths (2, 3): y = e1, lambda_0 y = 2 e1, paired against the cycle basis.
  auto H = two_cycle(2, 3);
  auto PhiH = component_group(H);
  auto X = character_group(H);
  auto expected = PhiH.class_of({2 * X.basis(0, 0)});
  CHECK(omega_map(H, PhiH, {-1, 1}) == expected);
  CHECK(expected != PhiH.zero());

  // Surjective for unit lengths.
  std::mt19937 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    auto U = random_graph(rng, 3 + trial % 4, 1 + trial % 3, 1);
    auto PhiU = component_group(U);
    std::set<std::vector<Integer>> image{PhiU.zero()};
    std::vector<std::vector<Integer>> gens;
    for (std::size_t v = 1; v < U.vertex_count(); ++v) {
      std::vector<Integer> x(U.vertex_count(), 0);
      x[v] = 1;
      x[0] = -1;
      gens.push_back(omega_map(U, PhiU, x));
    }
    const auto& f = PhiU.shape().factors;
    for (bool grew = true; grew;) {
      grew = false;
      for (auto a : std::vector<std::vector<Integer>>(image.begin(), image.end()))
        for (const auto& g : gens) {
          auto b = a;
          for (std::size_t i = 0; i < b.size(); ++i) b[i] = exactalg::mod(b[i] + g[i], f[i]);
          grew |= image.insert(b).second;
        }
    }
    CHECK(image.size() == PhiU.elements().size());
  }
  // With lengths (2, 2) the image is the subgroup of index 2 in Z/4.
  auto W = two_cycle(2, 2);
  auto PhiW = component_group(W);
  CHECK(PhiW.shape() == AbelianGroupShape{{4}, 0});
  CHECK(omega_map(W, PhiW, {-1, 1}) == std::vector<Integer>{2});
}

TEST_CASE("divisor specialization") {
  auto G = two_cycle(1, 1);
  auto Phi = component_group(G);
  CHECK(specialize_divisor(G, Phi, {{0, std::nullopt, 1}, {0, std::nullopt, -1}}) == Phi.zero());
  CHECK(specialize_divisor(G, Phi, {{1, std::nullopt, 1}, {0, std::nullopt, -1}}) == std::vector<Integer>{1});
  CHECK_THROWS_AS(specialize_divisor(G, Phi, {{1, std::nullopt, 1}}), UsageError);
  CHECK_THROWS_AS(specialize_divisor(G, Phi, {{std::nullopt, 0, 1}, {0, std::nullopt, -1}}), ConfigurationError);
}

TEST_CASE("Edixhoven comparison") {
  for (const auto& G : {two_cycle(1, 1), theta(), path3(), two_cycle(2, 3)}) {
    auto r = edixhoven_check(G);
    CHECK(r.laplacian_square);
    CHECK(r.monodromy_square);
    CHECK(r.agree);
  }
  CHECK(edixhoven_check(two_cycle(1, 1)).from_intersection == AbelianGroupShape{{2}, 0});
  CHECK(edixhoven_check(path3()).from_monodromy.is_trivial());
  std::mt19937 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    auto r = edixhoven_check(random_graph(rng, 3 + trial % 3, 1 + trial % 3, 3));
    CHECK(r.laplacian_square);
    CHECK(r.monodromy_square);
    CHECK(r.agree);
  }
}

TEST_CASE("bipartite orientation") {
  LengthGraph square(4, {{0, 1, 1}, {2, 1, 1}, {2, 3, 2}, {0, 3, 1}});
  auto O = square.bipartite_oriented();
  auto color = *O.bipartition();
  for (const auto& e : O.edges()) CHECK(color[e.source] == 0);
  // Under this orientation cycles have coefficient sum zero.
  auto X = character_group(O);
  for (std::size_t i = 0; i < X.rank(); ++i) {
    Integer s = 0;
    for (std::size_t k = 0; k < O.edge_count(); ++k) s += X.basis(i, k);
    CHECK(s == 0);
  }
  LengthGraph triangle(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  CHECK_FALSE(triangle.bipartition());
  CHECK_THROWS_AS(triangle.bipartite_oriented(), ConfigurationError);
}

TEST_CASE("graph fixtures") {
  auto j = nlohmann::json::parse(R"({"vertices": 2, "edges": [[0, 1, 1], [0, 1], [0, 1, 1]]})");
  auto G = LengthGraph::from_json(j);
  CHECK(component_group(G).shape() == AbelianGroupShape{{3}, 0});
  CHECK(LengthGraph::from_json(G.to_json()).to_json() == G.to_json());
  CHECK_THROWS_AS(LengthGraph::from_json(nlohmann::json::parse(R"({"vertices": 2})")), UsageError);
}

TEST_CASE("dual graph of a quotient graph") {
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  for (long p : {2L, 3L, 5L}) {
    auto Q = brandtforms::quotient_graph(O, p);
    auto G = LengthGraph::from_quotient(Q);
    CHECK(G.connected());
    CHECK(G.bipartition());
    auto X = character_group(G);
    CHECK(X.rank() == brandtforms::degeneracy_and_vnew(Q).vnew_basis.rows());
    CHECK(edixhoven_check(G).agree);
  }
}
