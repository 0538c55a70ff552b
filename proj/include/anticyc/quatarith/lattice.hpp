#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anticyc/quatarith/algebra.hpp"

namespace anticyc::quatarith {

using exactalg::IntMatrix;
using exactalg::RatMatrix;

/// Full-rank Z-lattice in the algebra, stored canonically as (1/denom) times
/// the rows of a row Hermite form. Equal lattices have identical storage.
class Lattice {
 public:
  /// UsageError unless the generators span a rank-4 lattice.
  static Lattice from_generators(const std::vector<Quat>& gens);
  /// Rows of `coords` are coordinates in the basis of `ambient`.
  static Lattice from_coordinates(const Lattice& ambient, const IntMatrix& coords);

  const IntMatrix& hnf() const noexcept { return hnf_; }
  const Integer& denominator() const noexcept { return denom_; }
  std::vector<Quat> basis() const;
  Quat element(const std::vector<Integer>& coords) const;

  /// Coordinates of x in the basis, if x lies in the lattice.
  std::optional<std::vector<Integer>> coordinates(const Quat& x) const;
  std::vector<Rational> rational_coordinates(const Quat& x) const;
  bool contains(const Quat& x) const { return coordinates(x).has_value(); }
  bool contains(const Lattice& other) const;
  /// Index-style volume |det| of the basis matrix.
  Rational covolume() const;

  Lattice scaled(const Rational& s) const;
  Lattice conj() const;

  std::string key() const;
  bool operator==(const Lattice& o) const { return denom_ == o.denom_ && hnf_ == o.hnf_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

 private:
  Integer denom_;
  IntMatrix hnf_;
};

/// Z-span of all products x y with x in I, y in J.
Lattice product(const QuaternionAlgebra& A, const Lattice& I, const Lattice& J);
Lattice left_multiply(const QuaternionAlgebra& A, const Quat& x, const Lattice& I);
Lattice right_multiply(const QuaternionAlgebra& A, const Lattice& I, const Quat& x);
/// Sum of two lattices.
Lattice operator+(const Lattice& I, const Lattice& J);

/// Gram matrix of nrd on the basis: nrd(sum c_i b_i) = c^T G c.
RatMatrix norm_gram(const QuaternionAlgebra& A, const Lattice& L);
/// gcd of nrd over the lattice, as a positive rational.
Rational norm_gcd(const QuaternionAlgebra& A, const Lattice& L);

}  // namespace anticyc::quatarith
