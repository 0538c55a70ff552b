#include "anticyc/quatarith/embedding.hpp"

#include "anticyc/error.hpp"
#include "anticyc/quatarith/short_vectors.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

bool is_fundamental_discriminant(const Integer& d) {
  if (d >= 0) return false;
  Integer r = mod(d, Integer(4));
  if (r == 1) return is_squarefree(-d);
  if (r != 0) return false;
  Integer m = d / 4;
  Integer rm = mod(m, Integer(4));
  return (rm == 2 || rm == 3) && is_squarefree(-m);
}

QuadraticGenerator quadratic_generator(const Integer& disc_K, const Integer& conductor) {
  if (!is_fundamental_discriminant(disc_K))
    throw ConfigurationError("quatarith", to_string(disc_K) + " is not a negative fundamental discriminant");
  if (conductor < 1) throw ConfigurationError("quatarith", "conductor must be positive");
  if (mod(disc_K, Integer(4)) == 1) return {-conductor, conductor * conductor * (1 - disc_K) / 4};
  return {0, conductor * conductor * (-disc_K / 4)};
}

Integer optimality_index(const QuaternionOrder& O, const Quat& x) {
  auto one = *O.lattice().coordinates(Quat::scalar(1));
  auto cx = O.lattice().coordinates(x);
  if (!cx) return 0;
  Integer g = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) g = gcd(g, Integer(one[i] * (*cx)[j] - one[j] * (*cx)[i]));
  return g;
}

Embedding optimal_embedding(const Integer& disc_K, const Integer& conductor, const QuaternionOrder& O) {
  const auto gen = quadratic_generator(disc_K, conductor);
  for (const auto& q : prime_divisors(O.discriminant()))
    if (kronecker(disc_K, q) == 1)
      throw ConfigurationError("quatarith", "ramified prime " + to_string(q) + " splits in K");
  for (const auto& q : prime_divisors(O.level()))
    if (kronecker(disc_K, q) != 1)
      throw ConfigurationError("quatarith", "level prime " + to_string(q) + " does not split in K");
  const auto& A = O.algebra();
  std::optional<Quat> found;
  short_vectors(norm_gram(A, O.lattice()), Rational(gen.norm), [&](const std::vector<Integer>& c, const Rational& n) {
    if (n != Rational(gen.norm)) return true;
    Quat x = O.element(c);
    if (A.trd(x) == -Rational(gen.trace)) x = -x;  // vectors arrive up to sign
    if (A.trd(x) != Rational(gen.trace) || optimality_index(O, x) != 1) return true;
    found = x;
    return false;
  });
  if (!found)
    throw SearchExhaustedError("quatarith", "no optimal embedding of conductor " + to_string(conductor) +
                                                " found among elements of norm " + to_string(gen.norm));
  return Embedding{disc_K, conductor, gen.trace, gen.norm, *found};
}

EmbeddedOrder order_with_embedding(const ClassSet& classes, const Integer& disc_K, const Integer& conductor) {
  const auto& A = classes.algebra();
  for (const auto& c : classes.classes()) {
    QuaternionOrder O(A, c.left_order, classes.order().level());
    try {
      return EmbeddedOrder{O, optimal_embedding(disc_K, conductor, O)};
    } catch (const SearchExhaustedError&) {
    }
  }
  throw SearchExhaustedError("quatarith", "no left order of the class set admits an optimal embedding of conductor " +
                                              to_string(conductor));
}

}  // namespace anticyc::quatarith
