#include <functional>
#include <random>

#include "doctest.h"

#include "anticyc/exactalg/fitting.hpp"
#include "anticyc/exactalg/group_ring.hpp"
#include "anticyc/exactalg/linalg.hpp"

using namespace anticyc;
using namespace anticyc::exactalg;

namespace {

// Determinantal divisors: d_k = gcd of all k x k minors.
Integer minors_gcd(const IntMatrix& M, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rows, cols;
  std::function<void(std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t start) {
    if (rows.size() == k) {
      cols.clear();
      pick_cols(0);
      return;
    }
    for (std::size_t i = start; i < M.rows(); ++i) {
      rows.push_back(i);
      pick_rows(i + 1);
      rows.pop_back();
    }
  };
  pick_cols = [&](std::size_t start) {
    if (cols.size() == k) {
      IntMatrix sub(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) sub(a, b) = M(rows[a], cols[b]);
      g = gcd(g, determinant(sub));
      return;
    }
    for (std::size_t j = start; j < M.cols(); ++j) {
      cols.push_back(j);
      pick_cols(j + 1);
      cols.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

std::vector<Integer> invariant_factors_oracle(const IntMatrix& M) {
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(M.rows(), M.cols()); ++k) {
    Integer d = minors_gcd(M, k);
    if (d == 0) break;
    out.push_back(d / prev);
    prev = d;
  }
  return out;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = dist(rng);
  return M;
}

bool is_unimodular(const IntMatrix& M) { return abs(determinant(M)) == 1; }

GroupRingElement random_element(std::mt19937& rng, const PrimePowerRing& R, unsigned m) {
  auto z = GroupRingElement::zero(R, m);
  std::uniform_int_distribution<long> dist(0, R.modulus().get_si() - 1);
  std::vector<Integer> c(z.group_order());
  for (auto& x : c) x = dist(rng);
  return GroupRingElement(R, m, c);
}

}  // namespace

TEST_CASE("smith normal form examples") {
  auto check = [](const IntMatrix& M, const IntMatrix& expected) {
    auto f = smith_normal_form(M);
    CHECK(f.U * M * f.V == f.S);
    CHECK(f.S == expected);
    CHECK(is_unimodular(f.U));
    CHECK(is_unimodular(f.V));
  };
  check(IntMatrix{{2, 0}, {0, 6}}, IntMatrix{{2, 0}, {0, 6}});
  check(IntMatrix{{2, 4}, {6, 8}}, IntMatrix{{2, 0}, {0, 4}});
  check(IntMatrix{{1, 1}, {1, -1}}, IntMatrix{{1, 0}, {0, 2}});

  auto z = smith_normal_form(IntMatrix(2, 3));
  CHECK(z.S.is_zero());
  CHECK(z.U == IntMatrix::identity(2));
  CHECK(z.V == IntMatrix::identity(3));
}

TEST_CASE("smith normal form matches determinantal divisors") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    IntMatrix M = random_matrix(rng, r, c, -6, 6);
    auto f = smith_normal_form(M);
    CHECK(f.U * M * f.V == f.S);
    auto d = f.diagonal();
    CHECK(d == invariant_factors_oracle(M));
    for (std::size_t i = 0; i + 1 < d.size(); ++i) CHECK(d[i + 1] % d[i] == 0);
    CHECK(smith_normal_form(M).S == f.S);
  }
}

TEST_CASE("cokernel shapes") {
  CHECK(cokernel_shape(IntMatrix{{5}}).to_string() == "Z/5");
  CHECK(cokernel_shape(IntMatrix{{1, 1}, {1, -1}}).to_string() == "Z/2");
  CHECK(cokernel_shape(IntMatrix::identity(4)).is_trivial());
  CHECK(cokernel_shape(IntMatrix{{2, 0}}).to_string() == "Z/2");
  CHECK(cokernel_shape(IntMatrix(2, 1)).free_rank == 2);
}

TEST_CASE("kernels, solving and hermite form") {
  IntMatrix A{{1, 2, 3}, {2, 4, 6}};
  auto K = integer_kernel(A);
  CHECK(K.rows() == 2);
  CHECK((A * K.transpose()).is_zero());
  auto x = solve_integer(IntMatrix{{2, 0}, {0, 3}}, {4, 9});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK(!solve_integer(IntMatrix{{2}}, {3}));
  auto H = hermite_normal_form(IntMatrix{{4, 6}, {2, 2}});
  CHECK(H == IntMatrix{{2, 0}, {0, 2}});
  // {x : x1 + x2 == 0 mod 3}
  auto L = congruence_sublattice(IntMatrix{{1, 1}}, {3});
  CHECK(abs(determinant(L)) == 3);
  // Pivots of -1 must not be rescaled in place mid-row.
  CHECK(rank(IntMatrix{{-1, 1}, {1, -1}}) == 1);
  CHECK(rank(IntMatrix{{-1, 1, 0}, {1, -1, 0}, {0, 0, -1}, {0, 0, 1}}) == 2);
  CHECK(rational_kernel(to_rational(IntMatrix{{-2, 2}, {1, -1}})).rows() == 1);
  CHECK(rank_mod_prime(IntMatrix{{4, 1}, {1, 4}}, 5) == 1);
}

TEST_CASE("characteristic polynomial") {
  auto c = characteristic_polynomial(IntMatrix{{0, 3}, {2, 1}});
  CHECK(c == std::vector<Integer>{-6, -1, 1});
}

TEST_CASE("fitting exponents") {
  PrimePowerRing R(5, 3);
  auto f = fitting_exponent(IntMatrix{{5, 0}, {0, 25}}, R);
  REQUIRE(f.exponent);
  CHECK(*f.exponent == 3);
  CHECK(f.vanishes_mod_pn);
  CHECK(*fitting_exponent(IntMatrix::identity(2), R).exponent == 0);
  CHECK(!fitting_exponent(IntMatrix{{0}}, R).exponent);
  CHECK_THROWS_AS(fitting_exponent(IntMatrix(2, 1), R), UsageError);
}

TEST_CASE("fitting exponent agrees with the maximal minors") {
  std::mt19937 rng(11);
  for (long p : {2L, 3L, 5L}) {
    PrimePowerRing R(p, 3);
    for (int trial = 0; trial < 60; ++trial) {
      IntMatrix M = random_matrix(rng, 3, 3, -30, 30);
      auto f = fitting_exponent(M, R);
      Integer g = minors_gcd(M, 3);
      if (g == 0) {
        CHECK(!f.exponent);
      } else {
        REQUIRE(f.exponent);
        CHECK(static_cast<long>(*f.exponent) == *valuation(g, Integer(p)));
        CHECK(f.vanishes_mod_pn == (g % (p * p * p) == 0));
      }
    }
  }
}

TEST_CASE("fitting is multiplicative over direct sums") {
  std::mt19937 rng(13);
  PrimePowerRing R(3, 4);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix A = random_matrix(rng, 2, 2, -9, 9), B = random_matrix(rng, 2, 3, -9, 9);
    IntMatrix S(4, 5);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) S(i, j) = A(i, j);
      for (std::size_t j = 0; j < 3; ++j) S(2 + i, 2 + j) = B(i, j);
    }
    auto fa = fitting_exponent(A, R), fb = fitting_exponent(B, R), fs = fitting_exponent(S, R);
    if (fa.exponent && fb.exponent) {
      REQUIRE(fs.exponent);
      CHECK(*fs.exponent == *fa.exponent + *fb.exponent);
    } else {
      CHECK(!fs.exponent);
    }
  }
}

TEST_CASE("group ring arithmetic") {
  PrimePowerRing R(5, 1);
  auto g = GroupRingElement::group_element(R, 1, 1);
  auto one = GroupRingElement::constant(R, 1, 1);
  CHECK(g * GroupRingElement::group_element(R, 1, 4) == one);
  CHECK(((one + g) * (one - g)) == one - GroupRingElement::group_element(R, 1, 2));
  CHECK((g * GroupRingElement::zero(R, 1)).is_zero());

  auto a = g + GroupRingElement::group_element(R, 1, 2).scaled(2);
  CHECK(involution(a) == GroupRingElement::group_element(R, 1, 4) + GroupRingElement::group_element(R, 1, 3).scaled(2));
  CHECK(involution(one.scaled(3)) == one.scaled(3));
  // (1+g)(1+g^-1) = 2 + g + g^4
  CHECK((one + g) * involution(one + g) ==
        one.scaled(2) + g + GroupRingElement::group_element(R, 1, 4));

  CHECK_THROWS_AS(g * GroupRingElement::group_element(PrimePowerRing(5, 2), 1, 1), UsageError);
  CHECK_THROWS_AS(g * GroupRingElement::group_element(R, 2, 1), UsageError);
}

TEST_CASE("group ring laws on random elements") {
  std::mt19937 rng(17);
  PrimePowerRing R(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_element(rng, R, 2), b = random_element(rng, R, 2), c = random_element(rng, R, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(involution(involution(a)) == a);
    CHECK(involution(a * b) == involution(a) * involution(b));
    CHECK(involution(a + b) == involution(a) + involution(b));
    CHECK(mu_invariant(a * b) >= std::min(2u, mu_invariant(a) + mu_invariant(b)));
    auto unit_times_p = GroupRingElement::group_element(R, 2, trial).scaled(3);
    CHECK(mu_invariant(a * unit_times_p) == std::min(2u, mu_invariant(a) + 1));
  }
}

TEST_CASE("mu invariant") {
  PrimePowerRing R(5, 3);
  CHECK(mu_invariant(GroupRingElement::constant(R, 1, 25)) == 2);
  auto one = GroupRingElement::constant(R, 1, 1), g = GroupRingElement::group_element(R, 1, 1);
  CHECK(mu_invariant(one + g.scaled(5)) == 0);
  PrimePowerRing R2(5, 2);
  CHECK(mu_invariant((GroupRingElement::constant(R2, 1, 1) + GroupRingElement::group_element(R2, 1, 1)).scaled(5)) == 1);
  CHECK(mu_invariant(GroupRingElement::zero(R, 2)) == 3);
}

TEST_CASE("project_level") {
  PrimePowerRing R(3, 2);
  auto c = GroupRingElement::constant(R, 2, 1);
  std::vector<Integer> ones(9, 1);
  // The all-ones element sums to p over each fiber.
  CHECK(project_level(GroupRingElement(R, 2, ones), 1) == GroupRingElement(R, 1, {3, 3, 3}));
  CHECK(project_level(c, 1) == GroupRingElement::constant(R, 1, 1));

  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(rng, R, 2);
    auto b = random_element(rng, R, 2);
    auto pr = project_level(a, 1);
    for (std::size_t h = 0; h < 3; ++h) {
      Integer sum = 0;
      for (std::size_t s = 0; s < 9; ++s)
        if (s % 3 == h) sum += a[s];
      CHECK(pr[h] == mod(sum, Integer(9)));
    }
    // The projection is a ring map.
    CHECK(project_level(a * b, 1) == project_level(a, 1) * project_level(b, 1));
    for (long e = 0; e < 3; ++e) {
      Character rho{1, e};
      CHECK(specialize(project_level(a, 1), rho) == specialize(a, rho));
    }
  }
}

TEST_CASE("specialization") {
  PrimePowerRing R(5, 2);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(rng, R, 1), b = random_element(rng, R, 1);
    Integer aug = 0;
    for (auto& c : a.coeffs()) aug += c;
    CHECK(specialize(a, Character::trivial()) == CyclotomicResidue::constant(R, 0, aug));
    for (long e = 0; e < 5; ++e) {
      Character rho{1, e};
      CHECK(specialize(involution(a), rho) == specialize(a, rho.inverse()));
      CHECK(specialize(a * b, rho) == specialize(a, rho) * specialize(b, rho));
      auto lp = a * involution(a);
      CHECK(specialize(lp, rho) == specialize(a, rho) * specialize(a, rho.inverse()));
    }
  }
  CHECK_THROWS_AS(specialize(GroupRingElement::zero(R, 1), Character{2, 1}), UsageError);
}

TEST_CASE("cyclotomic valuations") {
  PrimePowerRing R(5, 2);
  // 1 - zeta is the uniformizer, and p = unit * (1 - zeta)^4.
  auto pi = CyclotomicResidue::from_polynomial(R, 1, {1, -1});
  CHECK(pi.valuation() == 1);
  CHECK(CyclotomicResidue::constant(R, 1, 5).valuation() == 4);
  CHECK((pi * pi * pi).valuation() == 3);
  CHECK(CyclotomicResidue::constant(R, 1, 0).valuation() == 8);
  CHECK(CyclotomicResidue::constant(R, 0, 10).valuation() == 1);
}

TEST_CASE("group ring json round trip") {
  PrimePowerRing R(5, 2);
  std::vector<Integer> c{1, 2, 3, 4, 24};
  GroupRingElement a(R, 1, c);
  auto j = a.to_json();
  CHECK(j.dump() == R"({"coeffs":[1,2,3,4,24],"m":1,"n":2,"p":5})");
  CHECK(GroupRingElement::from_json(j) == a);
  CHECK_THROWS_AS(GroupRingElement::from_json(nlohmann::json{{"p", 5}}), UsageError);
}

TEST_CASE("inequality check") {
  PrimePowerRing R(5, 3);
  auto L = GroupRingElement::constant(R, 1, 5);
  auto triv = Character::trivial();

  auto r0 = inequality_check(IntMatrix::identity(1), L, triv);
  CHECK(*r0.s == 0);
  CHECK(r0.inequality == CheckStatus::holds);
  CHECK(r0.in_fitting);

  auto r2 = inequality_check(IntMatrix{{25}}, L, triv);
  CHECK(*r2.s == 2);
  CHECK(r2.t == 1);
  CHECK(r2.two_t == 2);
  CHECK(r2.inequality == CheckStatus::holds);
  CHECK(r2.in_fitting);

  auto r3 = inequality_check(IntMatrix{{125}}, L, triv);
  CHECK(*r3.s == 3);
  CHECK(r3.two_t == 2);
  CHECK(r3.inequality == CheckStatus::violated);
  CHECK(!r3.in_fitting);

  // A nontrivial character of order 5: lengths are counted in pi-units.
  auto rc = inequality_check(IntMatrix{{25}}, L, Character{1, 1});
  CHECK(*rc.s == 8);
  CHECK(rc.two_t == 8);
  CHECK(rc.inequality == CheckStatus::holds);
}
