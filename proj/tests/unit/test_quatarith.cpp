#include <random>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"
#include "anticyc/quatarith/embedding.hpp"
#include "anticyc/quatarith/ideals.hpp"
#include "anticyc/quatarith/short_vectors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace anticyc;
using namespace anticyc::quatarith;
using exactalg::Integer;
using exactalg::Rational;

namespace {

// Legendre-symbol formula for odd p, written independently of the library.
int hilbert_odd(long a, long b, long p) {
  int alpha = 0, beta = 0;
  while (a % p == 0) a /= p, ++alpha;
  while (b % p == 0) b /= p, ++beta;
  long sign = ((alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1) ? -1 : 1;
  long u = alpha % 2 ? oracle::legendre(b, p) : 1;
  long v = beta % 2 ? oracle::legendre(a, p) : 1;
  return static_cast<int>(sign * u * v);
}

Rational unit_mass(const ClassSet& cs) {
  Rational s = 0;
  for (const auto& c : cs.classes()) s += Rational(1, c.units.size());
  return s;
}

}  // namespace

TEST_CASE("algebras from discriminants") {
  auto H = algebra_from_discriminant(2);
  CHECK(H.a() == -1);
  CHECK(H.b() == -1);
  for (long D : {2L, 3L, 5L, 7L, 11L, 13L, 30L, 42L, 374L}) {
    auto A = algebra_from_discriminant(D);
    CHECK(A.discriminant() == D);
    CHECK(A.a() < 0);
    CHECK(A.b() < 0);
    int product = hilbert_symbol(A.a(), A.b(), 0);
    CHECK(product == -1);
    for (long p = 2; p <= 400; ++p) {
      if (!oracle::is_prime(p)) continue;
      int s = hilbert_symbol(A.a(), A.b(), p);
      product *= s;
      if (p > 2) CHECK(s == hilbert_odd(A.a().get_si(), A.b().get_si(), p));
      CHECK((s == -1) == (D % p == 0));
    }
    CHECK(product == 1);
  }
  CHECK_THROWS_AS(algebra_from_discriminant(6), ConfigurationError);
  CHECK_THROWS_AS(algebra_from_discriminant(12), ConfigurationError);
}

TEST_CASE("quaternion multiplication") {
  QuaternionAlgebra A(-2, -5);
  Quat i(0, 1, 0, 0), j(0, 0, 1, 0), k(0, 0, 0, 1);
  CHECK(A.mul(i, i) == Quat::scalar(-2));
  CHECK(A.mul(j, j) == Quat::scalar(-5));
  CHECK(A.mul(i, j) == k);
  CHECK(A.mul(j, i) == -k);
  CHECK(A.mul(k, k) == Quat::scalar(-10));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int t = 0; t < 20; ++t) {
    Quat x(d(rng), d(rng), d(rng), d(rng)), y(d(rng), d(rng), exactalg::make_rational(d(rng), 3), d(rng));
    CHECK(A.nrd(A.mul(x, y)) == A.nrd(x) * A.nrd(y));
    CHECK(A.mul(x, A.conj(x)) == Quat::scalar(A.nrd(x)));
    if (!x.is_zero()) CHECK(A.mul(x, A.inverse(x)) == Quat::scalar(1));
  }
}

TEST_CASE("maximal orders") {
  auto H = algebra_from_discriminant(2);
  auto O = maximal_order(H);
  CHECK(reduced_discriminant(H, O.lattice()) == 2);
  CHECK(O.lattice().contains(Quat(Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2))));
  CHECK(O.lattice().covolume() == Rational(1, 2));
  for (long D : {11L, 13L, 374L}) {
    auto A = algebra_from_discriminant(D);
    auto M = maximal_order(A);
    CHECK(reduced_discriminant(A, M.lattice()) == D);
    CHECK(is_order(A, M.lattice()));
    QuaternionOrder again(A, M.lattice(), 1);
    CHECK(again.lattice() == M.lattice());
  }
}

TEST_CASE("local splitting is multiplicative") {
  auto O = maximal_order(algebra_from_discriminant(11));
  const auto& A = O.algebra();
  for (long q : {2L, 3L, 5L}) {
    LocalSplitting S(O, q, 3);
    std::mt19937 rng(q);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int t = 0; t < 10; ++t) {
      std::vector<Integer> cx, cy;
      for (int s = 0; s < 4; ++s) cx.push_back(d(rng)), cy.push_back(d(rng));
      Quat x = O.element(cx), y = O.element(cy);
      auto mx = S.matrix(O, x), my = S.matrix(O, y), mxy = S.matrix(O, A.mul(x, y));
      const Integer& m = S.modulus();
      CHECK(exactalg::mod(mx[0] * my[0] + mx[1] * my[2] - mxy[0], m) == 0);
      CHECK(exactalg::mod(mx[0] * my[1] + mx[1] * my[3] - mxy[1], m) == 0);
      CHECK(exactalg::mod(mx[2] * my[0] + mx[3] * my[2] - mxy[2], m) == 0);
      CHECK(exactalg::mod(mx[2] * my[1] + mx[3] * my[3] - mxy[3], m) == 0);
      CHECK(S.matrix(S.coordinates(mx)) == mx);
    }
    CHECK(S.matrix(O, Quat::scalar(1)) == Mat2{1, 0, 0, 1});
  }
}

TEST_CASE("short vectors agree with a box search") {
  exactalg::RatMatrix G{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
  std::size_t count = 0;
  short_vectors(G, 6, [&](const std::vector<Integer>&, const Rational& q) {
    CHECK(q <= 6);
    ++count;
    return true;
  });
  std::size_t brute = 0;
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b)
      for (int c = -5; c <= 5; ++c) {
        if (!a && !b && !c) continue;
        int q = 2 * a * a + 3 * b * b + 4 * c * c + 2 * a * b + 2 * b * c;
        if (q <= 6) ++brute;
      }
  CHECK(count == brute);
}

TEST_CASE("class sets and masses") {
  auto O2 = maximal_order(algebra_from_discriminant(2));
  auto c2 = ideal_class_set(O2, 3);
  CHECK(c2.size() == 1);
  CHECK(c2[0].units.size() == 24);
  CHECK(c2.mass() == Rational(1, 24));

  auto O11 = maximal_order(algebra_from_discriminant(11));
  auto c11 = ideal_class_set(O11, 2);
  REQUIRE(c11.size() == 2);
  std::vector<std::size_t> units{c11[0].units.size(), c11[1].units.size()};
  std::sort(units.begin(), units.end());
  CHECK(units == std::vector<std::size_t>{4, 6});
  CHECK(unit_mass(c11) == Rational(5, 12));
  CHECK(eichler_mass(11, 1) == Rational(5, 12));
  CHECK(c11[0].theta[1] != c11[1].theta[1]);
  CHECK_FALSE(isometric(O11.algebra(), c11[0].ideal, c11[1].ideal));

  auto O374 = maximal_order(algebra_from_discriminant(374));
  auto c374 = ideal_class_set(O374, 3);
  CHECK(c374.size() == 16);
  CHECK(unit_mass(c374) == Rational(20, 3));
  CHECK(eichler_mass(374, 1) == exactalg::make_rational(1 * 10 * 16, 24));

  CHECK_THROWS_AS(ideal_class_set(O374, 3, 5), SearchExhaustedError);
}

TEST_CASE("isometry of right ideals") {
  auto O = maximal_order(algebra_from_discriminant(11));
  const auto& A = O.algebra();
  auto cs = ideal_class_set(O, 2);
  for (const auto& c : cs.classes()) {
    CHECK(isometric(A, c.ideal, c.ideal));
    Quat x(1, 2, -1, 1);
    RightIdeal J{left_multiply(A, x, c.ideal.lattice), c.ideal.norm * A.nrd(x)};
    auto y = isometry(A, J, c.ideal);
    REQUIRE(y.has_value());
    CHECK(left_multiply(A, *y, c.ideal.lattice) == J.lattice);
    CHECK(cs.find(J).index == static_cast<std::size_t>(&c - &cs.classes()[0]));
  }
}

TEST_CASE("neighbor traversal is (p+1)-regular") {
  auto O = maximal_order(algebra_from_discriminant(11));
  for (long p : {2L, 3L, 5L, 7L}) {
    auto cs = ideal_class_set(O, p);
    CHECK(cs.size() == 2);
    for (const auto& row : cs.links()) CHECK(row.size() == static_cast<std::size_t>(p + 1));
  }
}

TEST_CASE("Eichler orders of level 2 in disc 11") {
  auto O = maximal_order(algebra_from_discriminant(11));
  auto E = eichler_order(O, 2);
  CHECK(reduced_discriminant(O.algebra(), E.lattice()) == 22);
  CHECK(O.lattice().contains(E.lattice()));
  auto cs = ideal_class_set(E, 3);
  CHECK(unit_mass(cs) == Rational(5, 4));
  CHECK(eichler_mass(11, 2) == Rational(5, 4));
  CHECK(cs.size() == 3);
}

TEST_CASE("class set serialization") {
  auto O = maximal_order(algebra_from_discriminant(11));
  auto cs = ideal_class_set(O, 3);
  auto j = cs.to_json();
  auto back = ClassSet::from_json(j);
  CHECK(back.size() == cs.size());
  CHECK(back.to_json() == j);
  auto bad = j;
  bad.erase("classes");
  CHECK_THROWS_AS(ClassSet::from_json(bad), DataMissingError);
}

TEST_CASE("optimal embeddings") {
  auto O11 = maximal_order(algebra_from_discriminant(11));
  const auto& A = O11.algebra();
  auto cs = ideal_class_set(O11, 2);
  auto eo = order_with_embedding(cs, -3, 1);
  const auto& e = eo.embedding;
  CHECK(e.trace == -1);
  CHECK(e.norm == 1);
  CHECK(A.trd(e.image) == -1);
  CHECK(A.nrd(e.image) == 1);
  CHECK(eo.order.lattice().contains(e.image));
  CHECK(optimality_index(eo.order, e.image) == 1);
  CHECK(reduced_discriminant(A, eo.order.lattice()) == 11);
  // the order with only four units cannot contain a cube root of unity
  for (const auto& c : cs.classes())
    if (c.units.size() == 4) CHECK_THROWS_AS(optimal_embedding(-3, 1, QuaternionOrder(A, c.left_order, 1)), SearchExhaustedError);

  auto H = maximal_order(algebra_from_discriminant(2));
  auto ei = optimal_embedding(-4, 1, H);
  CHECK(ei.trace == 0);
  CHECK(ei.norm == 1);
  CHECK(H.algebra().nrd(ei.image) == 1);

  auto g = quadratic_generator(-3, 5);
  CHECK(g.trace == -5);
  CHECK(g.norm == 25);
  auto e5 = optimal_embedding(-3, 5, eo.order);
  CHECK(A.trd(e5.image) == -5);
  CHECK(A.nrd(e5.image) == 25);
  CHECK(optimality_index(eo.order, e5.image) == 1);
  CHECK(optimality_index(eo.order, A.mul(e.image, Quat::scalar(5))) == 5);

  CHECK_THROWS_AS(optimal_embedding(-7, 1, H), ConfigurationError);
  CHECK_THROWS_AS(optimal_embedding(-12, 1, O11), ConfigurationError);
  CHECK_THROWS_AS(optimal_embedding(-8, 1, O11), ConfigurationError);
}
