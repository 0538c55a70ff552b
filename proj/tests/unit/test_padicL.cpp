#include "doctest.h"

#include <map>
#include <memory>

#include "anticyc/error.hpp"
#include "anticyc/padicL/lfunction.hpp"

using namespace anticyc;
using namespace anticyc::padicL;
using exactalg::Character;
using exactalg::Integer;

namespace {

// 11a on the disc-11 order containing a cube root of unity, p = 5.
struct Pipeline {
  quatarith::EmbeddedOrder eo;
  brandtforms::QuotientGraph G;
  toruscm::TorusData T;
  std::unique_ptr<toruscm::EdgeClassifier> C;
  std::map<long, EdgeForm> forms;  // by n
};

const Pipeline& pipeline() {
  static const Pipeline* s = [] {
    auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
    auto eo = quatarith::order_with_embedding(quatarith::ideal_class_set(O, 5), -3, 1);
    auto G = brandtforms::quotient_graph(eo.order, 5);
    auto T = toruscm::build_torus(eo.order, eo.embedding, 5, 4);
    auto* p = new Pipeline{eo, G, T, nullptr, {}};
    p->C = std::make_unique<toruscm::EdgeClassifier>(p->T, p->G);
    for (long n : {1L, 2L}) {
      for (const auto& f : brandtforms::eigensystems_mod(p->G.classes(), {2, 3, 5, 7}, 5, n))
        if (!brandtforms::is_exact_eisenstein(f))
          p->forms.emplace(n, from_eigenform(brandtforms::edge_eigenform(p->G, f, n)));
    }
    return p;
  }();
  return *s;
}

// sigma * e computed from the column matrices of the endpoints.
bttree::TreeEdge act_by_columns(const toruscm::TorusData& T, const toruscm::TorusElement& x, const bttree::TreeEdge& e) {
  auto X = T.matrix(x);
  auto move = [&](const bttree::TreeVertex& v) {
    auto M = v.matrix(5);
    exactalg::RatMatrix P{{X[0] * M[0] + X[1] * M[2], X[0] * M[1] + X[1] * M[3]},
                          {X[2] * M[0] + X[3] * M[2], X[2] * M[1] + X[3] * M[3]}};
    return bttree::vertex_from_columns(P, 5);
  };
  return {move(e.source), move(e.target)};
}

}  // namespace

TEST_CASE("11a edge eigenform data") {
  const auto& P = pipeline();
  REQUIRE(P.forms.size() == 2);
  CHECK(P.forms.at(1).alpha == 1);
  CHECK(P.forms.at(2).alpha == 21);
  CHECK(constancy_exponent(P.forms.at(2)) == 0);
}

TEST_CASE("pairing values") {
  const auto& P = pipeline();
  Measure mu(*P.C, P.forms.at(2));
  for (unsigned j = 0; j < 4; ++j) CHECK(mu.pairing_value({1, 0}, j) == mu.form().values[P.C->edge_class(mu.ray()[j])]);

  EdgeForm constant{PrimePowerRing(5, 2), 21, brandtforms::Form(P.G.edge_count(), 7), "constant"};
  Measure flat(*P.C, constant);
  for (const auto& x : P.T.quotient(2))
    for (unsigned j = 0; j < 2; ++j) CHECK(flat.pairing_value(x, j) == 7);

  auto reps = P.T.quotient(3);
  for (std::size_t i = 0; i < reps.size(); i += 13)
    for (unsigned j = 0; j < 3; ++j) {
      auto e = act_by_columns(P.T, reps[i], mu.ray()[j]);
      CHECK(mu.pairing_value(reps[i], j) == mu.form().values[P.C->edge_class(e)]);
    }
}

TEST_CASE("theta is additive across levels") {
  const auto& P = pipeline();
  for (long n : {1L, 2L}) {
    Measure mu(*P.C, P.forms.at(n));
    const auto& R = mu.ring();
    CHECK(mu.theta({1, 0}, 0) == mu.pairing_value({1, 0}, 0));
    for (unsigned j = 0; j <= 2; ++j)
      for (const auto& sigma : P.T.quotient(j + 1)) {
        Integer sum = 0;
        for (const auto& tau : P.T.subquotient(j + 1, j + 2)) sum += mu.theta(P.T.mul(sigma, tau), j + 1);
        CHECK(R.reduce(sum) == mu.theta(sigma, j));
      }
  }
}

TEST_CASE("partial L is compatible across levels") {
  const auto& P = pipeline();
  for (long n : {1L, 2L}) {
    Measure mu(*P.C, P.forms.at(n));
    auto L0 = partial_L(mu, 0);
    CHECK(L0.group_order() == 1);
    for (unsigned m = 0; m < 3; ++m) CHECK(exactalg::project_level(partial_L(mu, m + 1), m) == partial_L(mu, m));
  }
  Measure mu(*P.C, P.forms.at(1));
  CHECK_THROWS_AS(partial_L(mu, 4), UsageError);
}

TEST_CASE("non-unit eigenvalues are rejected") {
  const auto& P = pipeline();
  EdgeForm bad{PrimePowerRing(5, 2), 5, brandtforms::Form(P.G.edge_count(), 1), "eisenstein"};
  CHECK_THROWS_AS(Measure(*P.C, bad), ConfigurationError);
}

TEST_CASE("L_p is symmetric and independent of the ray") {
  const auto& P = pipeline();
  Measure least(*P.C, P.forms.at(2), bttree::TieBreak::least);
  Measure greatest(*P.C, P.forms.at(2), bttree::TieBreak::greatest);
  REQUIRE(least.ray() != greatest.ray());
  for (unsigned m = 0; m <= 3; ++m) {
    auto a = full_Lp(least, m), b = full_Lp(greatest, m);
    CHECK(exactalg::involution(a.L_p) == a.L_p);
    CHECK(a.L_p == b.L_p);
    bool shifted = false;
    for (std::size_t k = 0; k < a.L_phi.group_order(); ++k)
      if (exactalg::GroupRingElement::group_element(a.L_phi.ring(), m, k) * a.L_phi == b.L_phi) shifted = true;
    CHECK(shifted);
  }
  auto R = PrimePowerRing(5, 2);
  auto g = exactalg::GroupRingElement::group_element(R, 2, 7);
  CHECK(g * exactalg::involution(g) == exactalg::GroupRingElement::constant(R, 2, 1));
}

TEST_CASE("characters factor L_p") {
  const auto& P = pipeline();
  Measure mu(*P.C, P.forms.at(2));
  const unsigned m = 2;
  auto L = full_Lp(mu, m);
  for (unsigned k = 0; k <= m; ++k)
    for (long e = 0; e < 25; ++e) {
      Character rho{k, e};
      CHECK(exactalg::specialize(L.L_p, rho) ==
            exactalg::specialize(L.L_phi, rho) * exactalg::specialize(L.L_phi, rho.inverse()));
    }
}

TEST_CASE("scaling by a unit") {
  const auto& P = pipeline();
  auto base = P.forms.at(2);
  auto scaled = base;
  const Integer u = 7;
  for (auto& x : scaled.values) x = base.ring.reduce(u * x);
  Measure a(*P.C, base), b(*P.C, scaled);
  auto La = full_Lp(a, 2), Lb = full_Lp(b, 2);
  CHECK(Lb.L_phi == La.L_phi.scaled(u));
  CHECK(Lb.L_p == La.L_p.scaled(u * u));
  CHECK(exactalg::mu_invariant(Lb.L_p) == exactalg::mu_invariant(La.L_p));
}

TEST_CASE("mu and nu") {
  const auto& P = pipeline();
  Measure mu(*P.C, P.forms.at(2));
  for (unsigned m = 0; m <= 2; ++m) {
    auto L = full_Lp(mu, m);
    auto r = mu_two_nu_check(mu.form(), L);
    CHECK(r.nu == 0);
    CHECK(r.bound_holds);
    CHECK(r.mu_L_p == 0);
    CHECK(r.equality);
  }
  // p * Phi: constant mod p, so nu = 1 and L_p vanishes mod p^2.
  auto tilted = P.forms.at(2);
  for (auto& x : tilted.values) x = tilted.ring.reduce(5 * x);
  Measure t(*P.C, tilted);
  auto r = mu_two_nu_check(tilted, full_Lp(t, 2));
  CHECK(r.nu >= 1);
  CHECK(r.mu_L_p >= 2);
  CHECK(r.bound_holds);
}
