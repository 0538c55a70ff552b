#pragma once

#include <array>
#include <string>
#include <vector>

#include "anticyc/exactalg/matrix.hpp"

namespace anticyc::quatarith {

using exactalg::Integer;
using exactalg::Rational;

/// Coordinates on the basis 1, i, j, k = ij.
struct Quat {
  std::array<Rational, 4> c{};

  Quat() = default;
  Quat(Rational x0, Rational x1, Rational x2, Rational x3) : c{x0, x1, x2, x3} {}
  static Quat scalar(const Rational& x) { return Quat(x, 0, 0, 0); }

  Rational& operator[](std::size_t k) { return c[k]; }
  const Rational& operator[](std::size_t k) const { return c[k]; }

  Quat operator+(const Quat& o) const;
  Quat operator-(const Quat& o) const;
  Quat operator-() const;
  Quat operator*(const Rational& s) const;
  bool operator==(const Quat& o) const { return c == o.c; }
  bool operator!=(const Quat& o) const { return !(*this == o); }
  bool is_zero() const;
};

using exactalg::to_string;
std::string to_string(const Quat& x);

/// Hilbert symbol (a, b)_p; p = 0 stands for the real place.
int hilbert_symbol(const Integer& a, const Integer& b, const Integer& p);
/// Finite primes at which (a, b)_p = -1, ascending.
std::vector<Integer> ramified_primes(const Integer& a, const Integer& b);

/// The algebra (a, b | Q) with i^2 = a, j^2 = b, ij = -ji. Only definite
/// algebras are constructed.
class QuaternionAlgebra {
 public:
  QuaternionAlgebra(Integer a, Integer b);

  const Integer& a() const noexcept { return a_; }
  const Integer& b() const noexcept { return b_; }
  const std::vector<Integer>& ramified() const noexcept { return ramified_; }
  /// Product of the finite ramified primes.
  const Integer& discriminant() const noexcept { return disc_; }

  Quat mul(const Quat& x, const Quat& y) const;
  Quat conj(const Quat& x) const;
  Rational nrd(const Quat& x) const;
  Rational trd(const Quat& x) const;
  /// Throws UsageError on zero.
  Quat inverse(const Quat& x) const;

  bool operator==(const QuaternionAlgebra& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  Integer a_, b_;
  std::vector<Integer> ramified_;
  Integer disc_;
};

/// Deterministic search for a definite (a, b) ramified exactly at the primes
/// of D. ConfigurationError when D is not squarefree with an odd number of
/// prime factors.
QuaternionAlgebra algebra_from_discriminant(const Integer& D);

}  // namespace anticyc::quatarith
