#pragma once

#include <array>
#include <vector>

#include "anticyc/quatarith/lattice.hpp"

namespace anticyc::quatarith {

/// Square root of |det(trd(b_i b_j))|.
Rational reduced_discriminant(const QuaternionAlgebra& A, const Lattice& L);
bool is_order(const QuaternionAlgebra& A, const Lattice& L);

class QuaternionOrder {
 public:
  /// Validates that the lattice is an order whose reduced discriminant is
  /// level * disc(A); InvariantViolation otherwise.
  QuaternionOrder(QuaternionAlgebra algebra, Lattice lattice, Integer level);

  const QuaternionAlgebra& algebra() const noexcept { return algebra_; }
  const Lattice& lattice() const noexcept { return lattice_; }
  const Integer& level() const noexcept { return level_; }
  const Integer& discriminant() const noexcept { return algebra_.discriminant(); }
  /// Coordinates of b_i b_j in the order's own basis.
  const std::vector<std::vector<std::vector<Integer>>>& structure_constants() const noexcept { return table_; }

  Quat element(const std::vector<Integer>& coords) const { return lattice_.element(coords); }

 private:
  QuaternionAlgebra algebra_;
  Lattice lattice_;
  Integer level_;
  std::vector<std::vector<std::vector<Integer>>> table_;
};

QuaternionOrder maximal_order(const QuaternionAlgebra& A);
/// The order {x in O : iota_q(x) is upper triangular mod q for q | N}, for a
/// maximal O and squarefree N prime to disc(A).
QuaternionOrder eichler_order(const QuaternionOrder& maximal, const Integer& N);

using Mat2 = std::array<Integer, 4>;  // row-major 2x2

/// An isomorphism O/q^r O -> M_2(Z/q^r) for q not dividing disc * level,
/// built from a lifted idempotent. Elements are handled in O-coordinates.
class LocalSplitting {
 public:
  LocalSplitting(const QuaternionOrder& O, Integer q, unsigned precision);

  const Integer& prime() const noexcept { return q_; }
  unsigned precision() const noexcept { return r_; }
  const Integer& modulus() const noexcept { return mod_; }

  /// iota of the element with these O-coordinates, entries in [0, q^r).
  Mat2 matrix(const std::vector<Integer>& coords) const;
  Mat2 matrix(const QuaternionOrder& O, const Quat& x) const;
  /// O-coordinates (mod q^r) of the element with the given matrix.
  std::vector<Integer> coordinates(const Mat2& m) const;
  /// Matrix units E11, E12, E21, E22 in O-coordinates.
  const std::array<std::vector<Integer>, 4>& units() const noexcept { return E_; }

 private:
  Integer q_;
  unsigned r_;
  Integer mod_;
  std::array<std::vector<Integer>, 4> E_;
  std::vector<Mat2> basis_images_;
};

}  // namespace anticyc::quatarith
