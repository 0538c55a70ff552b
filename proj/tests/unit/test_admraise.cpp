#include "doctest.h"

#include "anticyc/admraise/admissible.hpp"
#include "anticyc/error.hpp"
#include "anticyc/padicL/lfunction.hpp"
#include "oracles.hpp"

using namespace anticyc;
using namespace anticyc::admraise;
using brandtforms::EigenSystem;
using exactalg::Integer;

namespace {

// 11a as an exact fixture built from point counts, l <= 60.
EigenSystem fixture_11a(long n) {
  nlohmann::json a;
  for (long l = 2; l <= 60; ++l)
    if (oracle::is_prime(l) && l != 11) a[std::to_string(l)] = oracle::ap_11a(l);
  return EigenSystem::from_json({{"p", 5}, {"n", n}, {"a", a}, {"eps", {{"11", 1}}}});
}

std::vector<long> samples_to_50() {
  std::vector<long> out;
  for (long l = 2; l <= 50; ++l)
    if (oracle::is_prime(l)) out.push_back(l);
  return out;
}

const CongruencePair& raised() {
  static const CongruencePair pair = [] {
    auto f = fixture_11a(1);
    auto c2 = *is_n_admissible(2, f, -3, 5, 1, 11).cert;
    auto c17 = *is_n_admissible(17, f, -3, 5, 1, 11).cert;
    return raise_level_search(f, c2, c17, 11, samples_to_50());
  }();
  return pair;
}

}  // namespace

TEST_CASE("admissibility of single primes") {
  auto f = fixture_11a(1);
  auto r2 = is_n_admissible(2, f, -3, 5, 1, 11);
  REQUIRE(r2);
  CHECK(r2.cert->epsilon == 1);
  CHECK(r2.cert->a_v == -2);
  CHECK(r2.cert->legendre == -1);
  CHECK(r2.cert->reverify());
  auto r17 = is_n_admissible(17, f, -3, 5, 1, 11);
  REQUIRE(r17);
  CHECK(r17.cert->epsilon == 1);
  auto r3 = is_n_admissible(3, f, -3, 5, 1, 11);
  CHECK_FALSE(r3);
  CHECK(r3.failed_condition == 2);
  CHECK(is_n_admissible(11, f, -3, 5, 1, 11).failed_condition == 1);
  CHECK(is_n_admissible(5, f, -3, 5, 1, 11).failed_condition == 1);
  CHECK(is_n_admissible(7, f, -3, 5, 1, 11).failed_condition == 2);  // 7 splits
  // 2 is not admissible modulo 25: 3 + 2 = 5.
  CHECK(is_n_admissible(2, fixture_11a(2), -3, 5, 2, 11).failed_condition == 4);

  auto tampered = *r2.cert;
  tampered.epsilon = -1;
  CHECK_FALSE(tampered.reverify());

  auto sparse = EigenSystem::from_json(nlohmann::json::parse(R"({"p": 5, "n": 1, "a": {"3": -1}})"));
  CHECK_THROWS_AS(is_n_admissible(2, sparse, -3, 5, 1, 11), DataMissingError);
}

TEST_CASE("admissible search") {
  auto f = fixture_11a(1);
  auto certs = search_admissible(f, -3, 5, 1, 11, 25);
  std::vector<long> vs;
  for (const auto& c : certs) {
    vs.push_back(c.v);
    CHECK(c.epsilon == 1);
    CHECK(c.reverify());
  }
  CHECK(vs == std::vector<long>{2, 17, 23});

  // Exhaustive oracle from point counts and Legendre symbols.
  std::vector<long> oracle_vs;
  for (long v = 2; v <= 25; ++v) {
    if (!oracle::is_prime(v) || v == 5 || v == 11) continue;
    if (oracle::kronecker_prime(-3, v) != -1 || (v * v - 1) % 5 == 0) continue;
    long a = oracle::ap_11a(v);
    if ((v + 1 - a) % 5 == 0 || (v + 1 + a) % 5 == 0) oracle_vs.push_back(v);
  }
  CHECK(vs == oracle_vs);

  CHECK(search_admissible(f, -3, 5, 1, 11, 1).empty());
  auto longer = search_admissible(f, -3, 5, 1, 11, 60);
  REQUIRE(longer.size() >= certs.size());
  for (std::size_t i = 0; i < certs.size(); ++i) CHECK(longer[i].v == certs[i].v);
}

TEST_CASE("Eisenstein test") {
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  auto systems = brandtforms::eigensystems_mod(quatarith::ideal_class_set(O, 2), {2, 3, 7}, 5, 1);
  for (const auto& E : systems)
    if (brandtforms::is_exact_eisenstein(E)) CHECK(eisenstein_test(E, {2, 3, 7}));
  // 11a has a rational 5-torsion point, so it is Eisenstein modulo 5 but not 25.
  CHECK(eisenstein_test(fixture_11a(1), {2, 3, 7}));
  CHECK_FALSE(eisenstein_test(fixture_11a(2), {2, 3, 7}));
  CHECK_THROWS_AS(eisenstein_test(fixture_11a(1), {}), UsageError);
  CHECK_THROWS_AS(eisenstein_test(fixture_11a(1), {61}), DataMissingError);
}

TEST_CASE("level raising gates") {
  auto f = fixture_11a(1);
  auto c2 = *is_n_admissible(2, f, -3, 5, 1, 11).cert;
  CHECK_THROWS_AS(raise_level_search(f, c2, c2, 11, {3, 7}), UsageError);
  auto c17 = *is_n_admissible(17, f, -3, 5, 1, 11).cert;
  auto eis = EigenSystem::from_json(nlohmann::json::parse(R"({"p": 5, "n": 1, "a": {"2": 3, "3": 4, "7": 8}})"));
  CHECK_THROWS_AS(raise_level_search(eis, c2, c17, 11, {3, 7}), ConfigurationError);
  CHECK_THROWS_AS(raise_level_search(f, c2, c17, 11, {}), UsageError);
}

TEST_CASE("level raising at 2 and 17") {
  const auto& r = raised();
  CHECK(r.disc == 374);
  CHECK(r.compared == std::vector<long>{3, 7, 13, 19, 23, 29, 31, 37, 41, 43, 47});
  CHECK(r.excluded == std::vector<long>{2, 5, 11, 17});
  for (long l : r.compared) CHECK(exactalg::mod(r.g.a_at(l) - oracle::ap_11a(l), Integer(5)) == 0);
  CHECK(r.g.eps.at(2) == 1);
  CHECK(r.g.eps.at(17) == 1);
  CHECK_FALSE(brandtforms::is_exact_eisenstein(r.g));
  CHECK(r.to_json()["g"]["p"] == 5);
}

TEST_CASE("the raised form has an L-function") {
  const auto& r = raised();
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(374));
  auto eo = quatarith::order_with_embedding(quatarith::ideal_class_set(O, 3), -3, 1);
  auto G = brandtforms::quotient_graph(eo.order, 5);
  std::vector<long> primes{2, 3, 5, 7, 11, 13, 17};
  auto systems = brandtforms::eigensystems_mod(G.classes(), primes, 5, 1, true);
  const EigenSystem* g = nullptr;
  for (const auto& s : systems) {
    bool same = s.eps.at(2) == r.g.eps.at(2) && s.eps.at(17) == r.g.eps.at(17);
    for (long l : {3L, 7L, 13L}) same = same && s.a_at(l) == r.g.a_at(l);
    if (same) g = &s;
  }
  REQUIRE(g != nullptr);
  auto T = toruscm::build_torus(eo.order, eo.embedding, 5, 3);
  toruscm::EdgeClassifier C(T, G);
  padicL::Measure mu(C, padicL::edge_form_mod(G, *g));
  for (unsigned m = 0; m < 2; ++m) {
    auto L = padicL::full_Lp(mu, m);
    CHECK(exactalg::project_level(padicL::partial_L(mu, m + 1), m) == L.L_phi);
    auto report = padicL::mu_two_nu_check(mu.form(), L);
    CHECK(report.bound_holds);
    for (long e = 0; e < 5; ++e) exactalg::specialize(L.L_p, exactalg::Character{m, e});
  }
}
